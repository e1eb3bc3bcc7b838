#pragma once

// JSON-over-HTTP binding of a service::Session.
//
//   GET  /document                  summary
//   GET  /sentence/{ref}            tokens, comments, note, issues, revision
//   POST /sentence/{ref}/edit       {"expected_revision", "op", ...}
//   POST /save                      {"bytes"}
//   GET  /sentence/{ref}/note       {"note"}
//   PUT  /sentence/{ref}/note       {"note"}
//   GET  /schema                    {"upos", "deprel", "features"}

#include <httplib.h>
#include <json.hpp>

#include <cstdint>
#include <string>

#include "treebank/service.hpp"

namespace treebank::http {

using nlohmann::json;

inline json to_json(const Token& t) {
  std::string misc;
  for (const auto& m : t.misc) misc += (misc.empty() ? "" : "|") + m;
  json feats_map = json::object();
  for (const auto& [k, v] : t.feats.set) feats_map[k] = v;
  auto col = [](const std::string& s) { return s.empty() ? std::string("_") : s; };
  return {{"id", t.id.str()},
          {"range", t.is_range()},
          {"form", col(t.form)},
          {"lemma", col(t.lemma)},
          {"upos", col(t.upos)},
          {"xpos", col(t.xpos)},
          {"feats", t.feats.str()},
          {"feats_map", feats_map},
          {"head", t.head ? std::to_string(*t.head) : "_"},
          {"deprel", col(t.deprel)},
          {"deps", col(t.deps)},
          {"misc", col(misc)}};
}

inline json to_json(const ValidationIssue& i) {
  return {{"sentence", i.sentence_ref()},
          {"token", i.token ? json(i.token->str()) : json(nullptr)},
          {"code", to_string(i.code)},
          {"message", i.message}};
}

inline json to_json(const service::SentencePayload& p) {
  json tokens = json::array();
  for (const auto& t : p.sentence.tokens) tokens.push_back(to_json(t));
  json comments = json::array();
  for (const auto& c : p.sentence.comments) comments.push_back(c.raw);
  json issues = json::array();
  for (const auto& i : p.issues) issues.push_back(to_json(i));
  auto sent_id = p.sentence.sent_id();
  return {{"index", p.index},
          {"sent_id", sent_id ? json(*sent_id) : json(nullptr)},
          {"comments", comments},
          {"tokens", tokens},
          {"note", p.note ? json(*p.note) : json(nullptr)},
          {"issues", issues},
          {"revision", p.revision}};
}

inline json to_json(const service::DocumentSummary& s) {
  return {{"path", s.path},
          {"sentences", s.sentence_count},
          {"section", s.section ? json(*s.section) : json(nullptr)},
          {"revision", s.revision},
          {"dirty", s.dirty}};
}

inline json to_json(const Schema& s) {
  json features = json::object();
  for (const auto& [name, values] : s.features) features[name] = values;
  return {{"upos", s.upos}, {"deprel", s.deprels}, {"features", features}};
}

class BadRequest : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Decodes an edit request body; returns the edit and the expected revision.
inline std::pair<service::Edit, std::uint64_t> parse_edit(const json& body) {
  if (!body.is_object()) throw BadRequest("edit body must be a JSON object");
  if (!body.contains("expected_revision") || !body["expected_revision"].is_number_integer() ||
      body["expected_revision"].get<std::int64_t>() < 0)
    throw BadRequest("missing or invalid 'expected_revision'");
  if (!body.contains("op") || !body["op"].is_string()) throw BadRequest("missing 'op'");
  if (!body.contains("id")) throw BadRequest("missing 'id'");
  const auto& jid = body["id"];
  std::string id_text = jid.is_string() ? jid.get<std::string>() : jid.is_number_integer() ? std::to_string(jid.get<int>()) : "";
  auto id = parse_token_id(id_text);
  if (!id) throw BadRequest("invalid token id '" + id_text + "'");

  const auto op = body["op"].get<std::string>();
  const auto rev = body["expected_revision"].get<std::uint64_t>();
  if (op == "set_field") {
    if (!body.contains("field") || !body["field"].is_string() || !body.contains("value") || !body["value"].is_string())
      throw BadRequest("set_field needs string 'field' and 'value'");
    return {service::Edit::set(*id, body["field"], body["value"]), rev};
  }
  if (op == "split") {
    if (!body.contains("forms") || !body["forms"].is_array() || body["forms"].size() != 2 ||
        !body["forms"][0].is_string() || !body["forms"][1].is_string())
      throw BadRequest("split needs 'forms': [first, second]");
    const bool force = body.value("force", false);
    return {service::Edit::split(*id, body["forms"][0], body["forms"][1], force), rev};
  }
  if (op == "join") return {service::Edit::join(*id), rev};
  throw BadRequest("unknown op '" + op + "'");
}

namespace detail {

inline void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void reply_error(httplib::Response& res, int status, const std::string& kind, const std::string& message) {
  reply(res, status, {{"error", message}, {"kind", kind}});
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const service::RevisionConflict& e) {
    reply(res, 409, {{"error", e.what()}, {"kind", "conflict"}, {"revision", e.current()}});
  } catch (const service::NotFound& e) {
    reply_error(res, 404, "not_found", e.what());
  } catch (const BadRequest& e) {
    reply_error(res, 400, "bad_request", e.what());
  } catch (const json::exception& e) {
    reply_error(res, 400, "bad_request", e.what());
  } catch (const EditError& e) {
    reply_error(res, 422, "edit", e.what());
  } catch (const std::exception& e) {
    reply_error(res, 500, "internal", e.what());
  }
}

}  // namespace detail

inline void register_routes(httplib::Server& server, service::Session& session) {
  using detail::guarded;
  using detail::reply;

  server.Get("/document", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, to_json(session.summary())); });
  });
  server.Get("/schema", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, to_json(session.schema())); });
  });
  server.Get(R"(/sentence/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, to_json(session.get_sentence(req.matches[1].str()))); });
  });
  server.Post(R"(/sentence/([^/]+)/edit)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto [edit, rev] = parse_edit(json::parse(req.body));
      reply(res, 200, to_json(session.apply_edit(req.matches[1].str(), edit, rev)));
    });
  });
  server.Post("/save", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, {{"bytes", session.save()}}); });
  });
  server.Get(R"(/sentence/([^/]+)/note)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto note = session.get_note(req.matches[1].str());
      reply(res, 200, {{"note", note ? json(*note) : json(nullptr)}});
    });
  });
  server.Put(R"(/sentence/([^/]+)/note)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto body = json::parse(req.body);
      if (!body.is_object() || !body.contains("note") || !body["note"].is_string())
        throw BadRequest("body must be {\"note\": string}");
      const auto ref = req.matches[1].str();
      session.set_note(ref, body["note"].get<std::string>());
      auto note = session.get_note(ref);
      reply(res, 200, {{"note", note ? json(*note) : json(nullptr)}});
    });
  });
}

}  // namespace treebank::http
