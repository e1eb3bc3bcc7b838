#pragma once

// Editing session over one CoNLL-U file: revisioned edits, validation on
// read, per-sentence notes in a sidecar file and atomic saves.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treebank/conllu.hpp"
#include "treebank/editor.hpp"
#include "treebank/validator.hpp"

namespace treebank::service {

class NotFound : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class RevisionConflict : public std::runtime_error {
public:
  RevisionConflict(std::uint64_t expected, std::uint64_t current)
      : std::runtime_error("revision conflict: expected " + std::to_string(expected) + ", current " +
                           std::to_string(current)),
        current_(current) {}
  std::uint64_t current() const noexcept { return current_; }

private:
  std::uint64_t current_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Edit {
  enum class Kind { SetField, Split, Join };
  Kind kind = Kind::SetField;
  TokenId id;
  std::string field;  // SetField
  std::string value;  // SetField
  std::string first, second;  // Split
  bool allow_non_concatenative = false;  // Split

  static Edit set(TokenId id, std::string field, std::string value) {
    Edit e;
    e.kind = Kind::SetField;
    e.id = id;
    e.field = std::move(field);
    e.value = std::move(value);
    return e;
  }
  static Edit split(TokenId id, std::string first, std::string second, bool force = false) {
    Edit e;
    e.kind = Kind::Split;
    e.id = id;
    e.first = std::move(first);
    e.second = std::move(second);
    e.allow_non_concatenative = force;
    return e;
  }
  static Edit join(TokenId id) {
    Edit e;
    e.kind = Kind::Join;
    e.id = id;
    return e;
  }
};

struct DocumentSummary {
  std::string path;
  std::size_t sentence_count = 0;
  std::optional<std::string> section;
  std::uint64_t revision = 0;
  bool dirty = false;
};

struct SentencePayload {
  std::size_t index = 0;
  Sentence sentence;
  std::vector<ValidationIssue> issues;
  std::optional<std::string> note;
  std::uint64_t revision = 0;
};

// Notes sidecar: one "key<TAB>text" record per line; backslash, tab and
// newlines in the text are escaped.
inline std::string escape_note(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string unescape_note(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\' || i + 1 == text.size()) {
      out += text[i];
      continue;
    }
    char c = text[++i];
    out += c == 'n' ? '\n' : c == 'r' ? '\r' : c == 't' ? '\t' : c;
  }
  return out;
}

/// Writes to a temporary sibling and renames it over `path`.
inline std::size_t write_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace '" + path.string() + "': " + ec.message());
  return content.size();
}

class Session {
public:
  /// Loads `path` and its notes sidecar if present. Throws ParseError or IoError.
  explicit Session(std::string path, Schema schema = Schema::defaults())
      : path_(std::move(path)), schema_(std::move(schema)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path_ + "'");
    doc_ = parse_document(in, path_);
    load_notes();
  }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  std::string notes_path() const { return path_ + ".notes"; }
  const Schema& schema() const noexcept { return schema_; }

  DocumentSummary summary() const {
    std::shared_lock lock(mu_);
    return {path_, doc_.sentences.size(), doc_.section, revision_, dirty_};
  }

  std::uint64_t revision() const {
    std::shared_lock lock(mu_);
    return revision_;
  }

  /// `ref` is a sent_id or a 0-based sentence index.
  SentencePayload get_sentence(std::string_view ref) const {
    std::shared_lock lock(mu_);
    return payload(resolve(ref));
  }

  SentencePayload apply_edit(std::string_view ref, const Edit& edit, std::uint64_t expected_revision) {
    std::unique_lock lock(mu_);
    if (expected_revision != revision_) throw RevisionConflict(expected_revision, revision_);
    const std::size_t i = resolve(ref);
    const Sentence& current = doc_.sentences[i];
    Sentence updated;
    switch (edit.kind) {
      case Edit::Kind::SetField: updated = set_field(current, edit.id, edit.field, edit.value); break;
      case Edit::Kind::Split:
        updated = split_token(current, edit.id, edit.first, edit.second, edit.allow_non_concatenative);
        break;
      case Edit::Kind::Join: updated = join_tokens(current, edit.id); break;
    }
    doc_.sentences[i] = std::move(updated);
    ++revision_;
    dirty_ = true;
    return payload(i);
  }

  /// Writes the document in canonical form; returns the byte count.
  std::size_t save() {
    std::unique_lock lock(mu_);
    auto bytes = write_atomically(path_, serialize_document(doc_));
    dirty_ = false;
    return bytes;
  }

  void set_note(std::string_view ref, const std::string& text) {
    std::unique_lock lock(mu_);
    const auto key = note_key(resolve(ref));
    if (text.empty()) {
      notes_.erase(key);
    } else {
      notes_[key] = text;
    }
    std::string content;
    for (const auto& [k, v] : notes_) content += escape_note(k) + '\t' + escape_note(v) + '\n';
    write_atomically(notes_path(), content);
  }

  std::optional<std::string> get_note(std::string_view ref) const {
    std::shared_lock lock(mu_);
    auto it = notes_.find(note_key(resolve(ref)));
    if (it == notes_.end()) return std::nullopt;
    return it->second;
  }

  /// Copy of the document as currently edited.
  Document snapshot() const {
    std::shared_lock lock(mu_);
    return doc_;
  }

private:
  std::size_t resolve(std::string_view ref) const {
    for (std::size_t i = 0; i < doc_.sentences.size(); ++i)
      if (doc_.sentences[i].sent_id() == ref) return i;
    if (auto idx = detail::to_int(ref); idx && static_cast<std::size_t>(*idx) < doc_.sentences.size())
      return static_cast<std::size_t>(*idx);
    throw NotFound("no sentence '" + std::string(ref) + "'");
  }

  std::string note_key(std::size_t i) const {
    auto id = doc_.sentences[i].sent_id();
    return id ? *id : "#" + std::to_string(i);
  }

  SentencePayload payload(std::size_t i) const {
    SentencePayload p;
    p.index = i;
    p.sentence = doc_.sentences[i];
    p.issues = validate_sentence(p.sentence, schema_, i);
    if (auto it = notes_.find(note_key(i)); it != notes_.end()) p.note = it->second;
    p.sentence.note = p.note;
    p.revision = revision_;
    return p;
  }

  void load_notes() {
    std::ifstream in(notes_path(), std::ios::binary);
    if (!in) return;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) throw ParseError(lineno, line, "notes record without a tab");
      notes_[unescape_note(line.substr(0, tab))] = unescape_note(line.substr(tab + 1));
    }
  }

  std::string path_;
  Schema schema_;
  Document doc_;
  std::map<std::string, std::string> notes_;
  std::uint64_t revision_ = 0;
  bool dirty_ = false;
  mutable std::shared_mutex mu_;
};

}  // namespace treebank::service
