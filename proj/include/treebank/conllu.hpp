#pragma once

// In-memory model of CoNLL-U documents: parsing, serialization and the
// FEATS canonical form.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treebank {

/// Thrown by the CoNLL-U reader. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::string content, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what + ": '" + content + "'"
                                : what),
        line_(line),
        content_(std::move(content)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& content() const noexcept { return content_; }

private:
  std::size_t line_;
  std::string content_;
};

/// Malformed FEATS text or a feature name/value that cannot be stored.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Refusal to write a token that would not read back as the same token.
class SerializeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool iless(std::string_view a, std::string_view b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) < std::tolower(static_cast<unsigned char>(y));
  });
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::optional<int> to_int(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  int value = 0;
  for (char c : s)
    if (c < '0' || c > '9') return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline bool has_space_or_sep(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return c == '=' || c == '|' || std::isspace(static_cast<unsigned char>(c));
  });
}

}  // namespace detail

struct FeatureNameLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const {
    if (detail::iless(a, b)) return true;
    if (detail::iless(b, a)) return false;
    return a < b;
  }
};

/// Morphological features. Iteration order is the canonical FEATS order
/// (case-insensitive by name).
class FeatureSet {
public:
  using Map = std::map<std::string, std::string, FeatureNameLess>;

  FeatureSet() = default;
  FeatureSet(std::initializer_list<std::pair<const std::string, std::string>> init) {
    for (const auto& [k, v] : init) set(k, v);
  }

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const Map& entries() const noexcept { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }

  std::optional<std::string> get(std::string_view name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// Inserts or replaces.
  void set(const std::string& name, const std::string& value) {
    if (name.empty() || value.empty() || detail::has_space_or_sep(name) || detail::has_space_or_sep(value))
      throw FormatError("invalid feature '" + name + "=" + value + "'");
    entries_[name] = value;
  }

  bool erase(std::string_view name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) return false;
    entries_.erase(it);
    return true;
  }

  /// Name=Value strings in canonical order.
  std::vector<std::string> pairs() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k + "=" + v);
    return out;
  }

  /// Canonical FEATS column text; "_" when empty.
  std::string str() const {
    if (entries_.empty()) return "_";
    std::string out;
    for (const auto& [k, v] : entries_) {
      if (!out.empty()) out += '|';
      out += k;
      out += '=';
      out += v;
    }
    return out;
  }

  friend bool operator==(const FeatureSet& a, const FeatureSet& b) { return a.entries_ == b.entries_; }

private:
  Map entries_;
};

/// Parses a FEATS column. Throws FormatError naming the offending pair.
inline FeatureSet parse_feats(std::string_view text) {
  FeatureSet out;
  if (text == "_") return out;
  if (text.empty()) throw FormatError("empty FEATS text");
  for (const auto& pair : detail::split(text, '|')) {
    auto eq = pair.find('=');
    if (eq == std::string::npos) throw FormatError("feature without '=': '" + pair + "'");
    std::string name = pair.substr(0, eq);
    std::string value = pair.substr(eq + 1);
    if (name.empty() || value.empty()) throw FormatError("empty feature name or value: '" + pair + "'");
    if (out.contains(name)) throw FormatError("duplicate feature '" + name + "' in '" + pair + "'");
    try {
      out.set(name, value);
    } catch (const FormatError&) {
      throw FormatError("invalid feature pair: '" + pair + "'");
    }
  }
  return out;
}

/// ID column: a word index (first == last) or a multiword range first-last.
struct TokenId {
  int first = 0;
  int last = 0;

  constexpr TokenId() = default;
  constexpr TokenId(int index) : first(index), last(index) {}  // NOLINT: implicit by intent
  constexpr TokenId(int a, int b) : first(a), last(b) {}

  constexpr bool is_range() const noexcept { return last != first; }
  std::string str() const {
    return is_range() ? std::to_string(first) + "-" + std::to_string(last) : std::to_string(first);
  }
  friend constexpr bool operator==(const TokenId&, const TokenId&) = default;
};

/// Parses "3" or "3-4". Returns nullopt for anything else.
inline std::optional<TokenId> parse_token_id(std::string_view s) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) {
    auto v = detail::to_int(s);
    if (!v || *v < 1) return std::nullopt;
    return TokenId(*v);
  }
  auto a = detail::to_int(s.substr(0, dash));
  auto b = detail::to_int(s.substr(dash + 1));
  if (!a || !b || *a < 1 || *b <= *a) return std::nullopt;
  return TokenId(*a, *b);
}

/// FEATS column as stored. A malformed column is kept verbatim so the
/// validator can report it instead of the reader rejecting the file.
struct FeatsField {
  FeatureSet set;
  std::optional<std::string> malformed;

  bool empty() const noexcept { return !malformed && set.empty(); }
  std::string str() const { return malformed ? *malformed : set.str(); }
  friend bool operator==(const FeatsField&, const FeatsField&) = default;
};

inline FeatsField make_feats_field(std::string_view text) {
  FeatsField f;
  try {
    f.set = parse_feats(text);
  } catch (const FormatError&) {
    f.malformed = std::string(text);
  }
  return f;
}

/// One CoNLL-U line. Empty strings stand for the "_" marker.
struct Token {
  TokenId id;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  FeatsField feats;
  std::optional<int> head;
  std::string deprel;
  std::string deps;
  std::vector<std::string> misc;

  bool is_range() const noexcept { return id.is_range(); }
  friend bool operator==(const Token&, const Token&) = default;
};

struct Comment {
  std::string raw;  // verbatim line, including the leading '#'
  std::optional<std::string> key;
  std::string value;
  friend bool operator==(const Comment&, const Comment&) = default;
};

inline Comment make_comment(std::string raw) {
  Comment c{std::move(raw), std::nullopt, {}};
  std::string_view body(c.raw);
  body.remove_prefix(1);
  auto eq = body.find(" = ");
  if (eq != std::string_view::npos) {
    auto key = detail::trim(body.substr(0, eq));
    if (!key.empty() && key.find(' ') == std::string::npos) {
      c.key = key;
      c.value = std::string(body.substr(eq + 3));
    }
  }
  return c;
}

struct Sentence {
  std::vector<Comment> comments;
  std::vector<Token> tokens;
  std::optional<std::string> note;

  /// Value of the first `# key = value` comment with this key.
  std::optional<std::string> meta(std::string_view key) const {
    for (const auto& c : comments)
      if (c.key && *c.key == key) return c.value;
    return std::nullopt;
  }
  std::optional<std::string> sent_id() const { return meta("sent_id"); }
  std::optional<std::string> text() const { return meta("text"); }

  /// Syntactic words (single-index lines) in order.
  std::vector<const Token*> words() const {
    std::vector<const Token*> out;
    for (const auto& t : tokens)
      if (!t.is_range()) out.push_back(&t);
    return out;
  }

  std::size_t word_count() const {
    return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return !t.is_range(); }));
  }

  /// Surface tokens: range lines count once, words they cover are skipped.
  std::size_t token_count() const {
    std::size_t n = 0;
    int covered_until = 0;
    for (const auto& t : tokens) {
      if (t.is_range()) {
        ++n;
        covered_until = std::max(covered_until, t.id.last);
      } else if (t.id.first > covered_until) {
        ++n;
      }
    }
    return n;
  }

  /// Position in `tokens` of word `index`, or npos.
  std::size_t position_of(int index) const {
    for (std::size_t i = 0; i < tokens.size(); ++i)
      if (!tokens[i].is_range() && tokens[i].id.first == index) return i;
    return npos;
  }

  const Token* word(int index) const {
    auto p = position_of(index);
    return p == npos ? nullptr : &tokens[p];
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::vector<Sentence> sentences;
  std::optional<std::string> section;
  std::string source_path;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.token_count();
    return n;
  }
  std::size_t word_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.word_count();
    return n;
  }
};

namespace detail {

inline std::string field_in(std::string_view s) { return s == "_" ? std::string() : std::string(s); }

class SentenceBuilder {
public:
  void add_comment(std::string line) { current_.comments.push_back(make_comment(std::move(line))); }

  void add_token(std::size_t lineno, const std::string& line) {
    auto cols = split(line, '\t');
    if (cols.size() != 10)
      throw ParseError(lineno, line, "expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    if (cols[0].find('.') != std::string::npos) throw ParseError(lineno, line, "empty nodes (decimal IDs) are not supported");
    auto id = parse_token_id(cols[0]);
    if (!id) throw ParseError(lineno, line, "non-numeric or malformed ID '" + cols[0] + "'");

    if (id->is_range()) {
      if (id->first != next_word_) throw ParseError(lineno, line, "range " + id->str() + " out of sequence");
      if (id->first <= open_range_end_) throw ParseError(lineno, line, "range " + id->str() + " overlaps a previous range");
      open_range_end_ = id->last;
      pending_ranges_.push_back({id->last, lineno, line});
    } else if (id->first != next_word_) {
      throw ParseError(lineno, line, "ID " + id->str() + " out of sequence, expected " + std::to_string(next_word_));
    } else {
      ++next_word_;
    }

    Token t;
    t.id = *id;
    t.form = field_in(cols[1]);
    t.lemma = field_in(cols[2]);
    t.upos = field_in(cols[3]);
    t.xpos = field_in(cols[4]);
    t.feats = make_feats_field(cols[5]);
    if (cols[6] != "_") {
      auto h = to_int(cols[6]);
      if (!h) throw ParseError(lineno, line, "non-numeric HEAD '" + cols[6] + "'");
      t.head = *h;
    }
    t.deprel = field_in(cols[7]);
    t.deps = field_in(cols[8]);
    if (cols[9] != "_") t.misc = split(cols[9], '|');
    current_.tokens.push_back(std::move(t));
  }

  bool has_content() const { return !current_.comments.empty() || !current_.tokens.empty(); }

  Sentence finish(std::size_t lineno) {
    if (current_.tokens.empty()) throw ParseError(lineno, current_.comments.front().raw, "comment block without tokens");
    for (const auto& r : pending_ranges_)
      if (r.last >= next_word_) throw ParseError(r.lineno, r.line, "range spans missing words");
    Sentence out = std::move(current_);
    *this = SentenceBuilder();
    return out;
  }

private:
  struct PendingRange {
    int last;
    std::size_t lineno;
    std::string line;
  };
  Sentence current_;
  int next_word_ = 1;
  int open_range_end_ = 0;
  std::vector<PendingRange> pending_ranges_;
};

}  // namespace detail

/// Reads a CoNLL-U document. Accepts LF and CRLF line endings and tolerates
/// runs of blank lines between sentences.
inline Document parse_document(std::istream& in, std::string source_path = {}) {
  Document doc;
  doc.source_path = std::move(source_path);
  detail::SentenceBuilder builder;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (builder.has_content()) doc.sentences.push_back(builder.finish(lineno));
      continue;
    }
    if (line.front() == '#') {
      builder.add_comment(line);
    } else {
      builder.add_token(lineno, line);
    }
  }
  if (builder.has_content()) doc.sentences.push_back(builder.finish(lineno));
  return doc;
}

inline Document parse_document(std::string_view text, std::string source_path = {}) {
  std::istringstream in{std::string(text)};
  return parse_document(in, std::move(source_path));
}

namespace detail {

inline void check_field(const Token& t, std::string_view name, std::string_view value) {
  if (value.find_first_of("\t\r\n") != std::string_view::npos)
    throw SerializeError("token " + t.id.str() + ": " + std::string(name) + " contains a tab or line break");
}

inline std::string field_out(std::string_view s) { return s.empty() ? std::string("_") : std::string(s); }

}  // namespace detail

/// One token line without the trailing newline.
inline std::string serialize_token(const Token& t) {
  using detail::check_field;
  check_field(t, "FORM", t.form);
  check_field(t, "LEMMA", t.lemma);
  check_field(t, "UPOS", t.upos);
  check_field(t, "XPOS", t.xpos);
  check_field(t, "DEPREL", t.deprel);
  check_field(t, "DEPS", t.deps);
  if (t.feats.malformed) throw SerializeError("token " + t.id.str() + ": malformed FEATS '" + *t.feats.malformed + "'");
  if (t.head && *t.head < 0) throw SerializeError("token " + t.id.str() + ": negative HEAD");
  if (t.head && !t.is_range() && *t.head == t.id.first) throw SerializeError("token " + t.id.str() + ": HEAD points at itself");

  std::string misc;
  for (const auto& item : t.misc) {
    if (item.empty() || item.find('|') != std::string::npos)
      throw SerializeError("token " + t.id.str() + ": invalid MISC item '" + item + "'");
    check_field(t, "MISC", item);
    if (!misc.empty()) misc += '|';
    misc += item;
  }

  std::string out = t.id.str();
  for (const auto* f : {&t.form, &t.lemma, &t.upos, &t.xpos}) {
    out += '\t';
    out += detail::field_out(*f);
  }
  out += '\t';
  out += t.feats.set.str();
  out += '\t';
  out += t.head ? std::to_string(*t.head) : "_";
  out += '\t';
  out += detail::field_out(t.deprel);
  out += '\t';
  out += detail::field_out(t.deps);
  out += '\t';
  out += detail::field_out(misc);
  return out;
}

inline void serialize_sentence(std::ostream& out, const Sentence& s) {
  for (const auto& c : s.comments) {
    if (c.raw.empty() || c.raw.front() != '#' || c.raw.find_first_of("\r\n") != std::string::npos)
      throw SerializeError("invalid comment line '" + c.raw + "'");
    out << c.raw << '\n';
  }
  for (const auto& t : s.tokens) out << serialize_token(t) << '\n';
  out << '\n';
}

inline void serialize_document(std::ostream& out, const Document& doc) {
  for (const auto& s : doc.sentences) serialize_sentence(out, s);
}

inline std::string serialize_document(const Document& doc) {
  std::ostringstream out;
  serialize_document(out, doc);
  return out.str();
}

}  // namespace treebank
