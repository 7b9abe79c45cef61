#include "lexfreq.h"

#include <cstring>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "core/error.hpp"
#include "core/pipeline.hpp"

using nlohmann::json;

struct lexfreq_session {
  explicit lexfreq_session(lexfreq::RunConfig config) : session(std::move(config)) {}
  lexfreq::Session session;
  bool ran = false;
  std::map<std::string, std::string> answered;  // client_token -> response
  mutable std::shared_mutex mutex;
};

namespace {

thread_local std::string last_error;

lexfreq_status status_of(lexfreq::ErrorCode code) {
  using lexfreq::ErrorCode;
  switch (code) {
    case ErrorCode::io: return LEXFREQ_E_IO;
    case ErrorCode::encoding: return LEXFREQ_E_ENCODING;
    case ErrorCode::syntax: return LEXFREQ_E_SYNTAX;
    case ErrorCode::format: return LEXFREQ_E_FORMAT;
    case ErrorCode::invalid_argument: return LEXFREQ_E_INVALID_ARGUMENT;
    case ErrorCode::not_found: return LEXFREQ_E_NOT_FOUND;
    case ErrorCode::pending: return LEXFREQ_E_PENDING;
    case ErrorCode::empty_corpus: return LEXFREQ_E_EMPTY_CORPUS;
    case ErrorCode::numeric: return LEXFREQ_E_NUMERIC;
    case ErrorCode::convergence: return LEXFREQ_E_CONVERGENCE;
  }
  return LEXFREQ_E_INTERNAL;
}

template <typename F>
lexfreq_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return LEXFREQ_OK;
  } catch (const lexfreq::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    last_error = std::string("malformed JSON: ") + e.what();
    return LEXFREQ_E_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LEXFREQ_E_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return LEXFREQ_E_INTERNAL;
  }
}

char* dup(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void put(char** out, const json& j) {
  if (out) *out = dup(j.dump());
}

void require(bool ok, const char* what) {
  if (!ok) throw lexfreq::Error(lexfreq::ErrorCode::invalid_argument, what);
}

json candidate_json(const lexfreq::Candidate& c) {
  json j = {{"lemma", c.lemma}, {"pos", lexfreq::to_string(c.pos)}, {"label", c.display()}};
  j["disambiguator"] = c.disambiguator ? json(*c.disambiguator) : json(nullptr);
  j["language"] = c.language ? json(*c.language) : json(nullptr);
  return j;
}

json progress_json(const lexfreq::Progress& p) {
  return {{"total", p.total}, {"resolved", p.resolved}, {"pending", p.pending},
          {"queue_items", p.queue_items}};
}

std::optional<std::string> opt_string(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  require(it->is_string(), "field must be a string");
  if (it->get_ref<const std::string&>().empty()) return std::nullopt;
  return it->get<std::string>();
}

std::string req_string(const json& body, const char* key) {
  auto v = opt_string(body, key);
  if (!v) throw lexfreq::Error(lexfreq::ErrorCode::invalid_argument,
                               std::string("missing field '") + key + "'");
  return *v;
}

lexfreq::Decision decision_from_json(const json& body) {
  require(body.is_object(), "decision body must be a JSON object");
  lexfreq::Decision d;
  d.form_key = req_string(body, "form_key");
  d.scope = lexfreq::parse_scope(req_string(body, "scope"));
  if (auto it = body.find("occurrence"); it != body.end() && !it->is_null()) {
    require(it->is_object(), "occurrence must be an object");
    require(it->contains("doc_id") && it->contains("offset"), "occurrence needs doc_id and offset");
    require((*it)["offset"].is_number_unsigned(), "occurrence offset must be a non-negative integer");
    d.occurrence = lexfreq::Occurrence{req_string(*it, "doc_id"), (*it)["offset"].get<std::size_t>()};
  }
  d.chosen.lemma = req_string(body, "lemma");
  d.chosen.pos = lexfreq::parse_pos(req_string(body, "pos"));
  d.chosen.disambiguator = opt_string(body, "disambiguator");
  d.chosen.language = opt_string(body, "language");
  d.annotator = req_string(body, "annotator");
  return d;
}

lexfreq_status bad_handle() {
  last_error = "null session handle";
  return LEXFREQ_E_INVALID_ARGUMENT;
}

// The session must have tokens before queries; callers hold the write lock.
void ensure_ran(lexfreq_session* s) {
  if (!s->ran) {
    s->session.run();
    s->ran = true;
  }
}

}  // namespace

extern "C" {

void lexfreq_options_init(lexfreq_options* o) {
  if (!o) return;
  *o = lexfreq_options{};
  o->out_dir = "out";
  o->K = 10;
  o->kwic_width = 5;
  o->default_variants = 1;
}

const char* lexfreq_last_error(void) { return last_error.c_str(); }

const char* lexfreq_status_name(lexfreq_status status) {
  switch (status) {
    case LEXFREQ_OK: return "ok";
    case LEXFREQ_E_IO: return "io";
    case LEXFREQ_E_ENCODING: return "encoding";
    case LEXFREQ_E_SYNTAX: return "syntax";
    case LEXFREQ_E_FORMAT: return "format";
    case LEXFREQ_E_INVALID_ARGUMENT: return "invalid_argument";
    case LEXFREQ_E_NOT_FOUND: return "not_found";
    case LEXFREQ_E_PENDING: return "pending";
    case LEXFREQ_E_EMPTY_CORPUS: return "empty_corpus";
    case LEXFREQ_E_NUMERIC: return "numeric";
    case LEXFREQ_E_CONVERGENCE: return "convergence";
    case LEXFREQ_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* lexfreq_version(void) { return "1.0.0"; }

void lexfreq_string_free(char* s) { std::free(s); }

lexfreq_status lexfreq_session_open(const lexfreq_options* o, lexfreq_session** out) {
  return guarded([&] {
    require(o && out, "null argument");
    require(o->manifest && *o->manifest, "manifest path is required");
    require(o->lexicon && *o->lexicon, "lexicon path is required");
    lexfreq::RunConfig c;
    c.manifest = std::filesystem::absolute(o->manifest);
    c.lexicon = std::filesystem::absolute(o->lexicon);
    if (o->decision_log && *o->decision_log) c.decision_log = std::filesystem::absolute(o->decision_log);
    if (o->paradigms && *o->paradigms) c.paradigms = std::filesystem::absolute(o->paradigms);
    if (o->profile && *o->profile) c.profile = lexfreq::parse_profile(o->profile);
    if (o->out_dir && *o->out_dir) c.out_dir = std::filesystem::absolute(o->out_dir);
    require(o->K >= 1, "K must be at least 1");
    c.K = o->K;
    c.kwic_width = o->kwic_width;
    c.allow_pending = o->allow_pending != 0;
    c.form_based_indices = o->form_based_indices != 0;
    c.emit_tokens = o->emit_tokens != 0;
    c.default_variants = o->default_variants != 0;
    *out = new lexfreq_session(std::move(c));
  });
}

void lexfreq_session_close(lexfreq_session* s) { delete s; }

lexfreq_status lexfreq_session_build(lexfreq_session* s, char** summary_json) {
  if (!s) return bad_handle();
  return guarded([&] {
    std::unique_lock lock(s->mutex);
    const auto r = s->session.build();
    s->ran = true;
    put(summary_json, {{"N", r.N},
                       {"V_form", r.V_form},
                       {"V_lemma", r.V_lemma},
                       {"pending", r.pending},
                       {"lemma_lists_written", r.lemma_lists_written},
                       {"warnings", r.warnings}});
  });
}

lexfreq_status lexfreq_session_run(lexfreq_session* s) {
  if (!s) return bad_handle();
  return guarded([&] {
    std::unique_lock lock(s->mutex);
    s->session.load();
    s->session.run();
    s->ran = true;
  });
}

lexfreq_status lexfreq_session_export_queue(lexfreq_session* s, const char* path) {
  if (!s) return bad_handle();
  return guarded([&] {
    require(path && *path, "output path is required");
    std::unique_lock lock(s->mutex);
    ensure_ran(s);
    s->session.write_queue(path);
  });
}

lexfreq_status lexfreq_session_import_decisions(lexfreq_session* s, const char* path,
                                                size_t* imported) {
  if (!s) return bad_handle();
  return guarded([&] {
    require(path && *path, "decision file path is required");
    std::unique_lock lock(s->mutex);
    ensure_ran(s);
    const auto n = s->session.import_decisions(path);
    if (imported) *imported = n;
  });
}

lexfreq_status lexfreq_session_queue_json(lexfreq_session* s, size_t offset, size_t limit,
                                          const char* filter_json, char** out) {
  if (!s) return bad_handle();
  return guarded([&] {
    std::optional<std::string> form, script;
    bool unknown_only = false;
    if (filter_json && *filter_json) {
      const auto f = json::parse(filter_json);
      require(f.is_object(), "filter must be a JSON object");
      form = opt_string(f, "form");
      script = opt_string(f, "script");
      if (auto it = f.find("unknown_only"); it != f.end()) {
        require(it->is_boolean(), "unknown_only must be a boolean");
        unknown_only = it->get<bool>();
      }
    }
    {
      std::unique_lock lock(s->mutex);
      ensure_ran(s);
    }
    std::shared_lock lock(s->mutex);
    std::optional<std::string> form_key;
    if (form)
      form_key = s->session.lexicon().canonicalize_variant(lexfreq::normalize_form(*form));
    json items = json::array();
    std::size_t matched = 0;
    for (const auto& item : s->session.queue()) {
      const char* item_script = lexfreq::to_string(lexfreq::classify_script(item.form_key));
      if (form_key && item.form_key != *form_key) continue;
      if (script && *script != item_script) continue;
      if (unknown_only && !item.candidates.empty()) continue;
      const std::size_t index = matched++;
      if (index < offset || items.size() >= limit) continue;
      json candidates = json::array();
      for (const auto& c : item.candidates) candidates.push_back(candidate_json(c));
      items.push_back({{"doc_id", item.occurrence.doc_id},
                       {"offset", item.occurrence.char_offset},
                       {"form_key", item.form_key},
                       {"script", item_script},
                       {"keyword", item.kwic.keyword},
                       {"left", item.kwic.left},
                       {"right", item.kwic.right},
                       {"unknown", item.candidates.empty()},
                       {"candidates", candidates}});
    }
    put(out, {{"total", matched}, {"offset", offset}, {"limit", limit}, {"items", items}});
  });
}

lexfreq_status lexfreq_session_kwic_json(lexfreq_session* s, const char* form, size_t width,
                                         char** out) {
  if (!s) return bad_handle();
  return guarded([&] {
    require(form && *form, "form is required");
    {
      std::unique_lock lock(s->mutex);
      ensure_ran(s);
    }
    std::shared_lock lock(s->mutex);
    json lines = json::array();
    for (const auto& hit : s->session.kwic(form, width))
      lines.push_back({{"doc_id", hit.occurrence.doc_id},
                       {"offset", hit.occurrence.char_offset},
                       {"left", hit.line.left},
                       {"keyword", hit.line.keyword},
                       {"right", hit.line.right}});
    put(out, {{"form", form}, {"width", width}, {"lines", lines}});
  });
}

lexfreq_status lexfreq_session_progress_json(lexfreq_session* s, char** out) {
  if (!s) return bad_handle();
  return guarded([&] {
    {
      std::unique_lock lock(s->mutex);
      ensure_ran(s);
    }
    std::shared_lock lock(s->mutex);
    put(out, progress_json(s->session.progress()));
  });
}

lexfreq_status lexfreq_session_post_decision_json(lexfreq_session* s, const char* body,
                                                  char** out) {
  if (!s) return bad_handle();
  return guarded([&] {
    require(body != nullptr, "body is required");
    const auto j = json::parse(body);
    auto decision = decision_from_json(j);
    const auto token = opt_string(j, "client_token");
    std::unique_lock lock(s->mutex);
    ensure_ran(s);
    if (token) {
      if (auto it = s->answered.find(*token); it != s->answered.end()) {
        if (out) *out = dup(it->second);
        return;
      }
    }
    s->session.post_decision(std::move(decision));
    const auto& logged = s->session.lexicon().decision_log().back();
    json response = {{"recorded", true},
                     {"form_key", logged.form_key},
                     {"scope", lexfreq::to_string(logged.scope)},
                     {"timestamp", logged.timestamp},
                     {"progress", progress_json(s->session.progress())}};
    const auto text = response.dump();
    if (token) s->answered[*token] = text;
    if (out) *out = dup(text);
  });
}

lexfreq_status lexfreq_session_rerun(lexfreq_session* s, char** out) {
  if (!s) return bad_handle();
  return guarded([&] {
    std::unique_lock lock(s->mutex);
    s->session.rerun();
    s->ran = true;
    put(out, progress_json(s->session.progress()));
  });
}

lexfreq_status lexfreq_stats(const char* const* list_dirs, size_t count, const char* out_dir,
                             size_t K, int form_based_indices, char** summary_json) {
  return guarded([&] {
    require(list_dirs || count == 0, "null list directory array");
    require(out_dir && *out_dir, "output directory is required");
    require(K >= 1, "K must be at least 1");
    std::vector<std::filesystem::path> dirs;
    for (size_t i = 0; i < count; ++i) {
      require(list_dirs[i] && *list_dirs[i], "empty list directory");
      dirs.emplace_back(list_dirs[i]);
    }
    const auto r = lexfreq::run_stats(dirs, out_dir, K,
                                      form_based_indices ? lexfreq::IndexBasis::form
                                                         : lexfreq::IndexBasis::lemma);
    json corpora = json::array();
    for (std::size_t i = 0; i < r.names.size(); ++i)
      corpora.push_back({{"name", r.names[i]},
                         {"N", r.profiles[i].N},
                         {"V_lemma", r.profiles[i].V_lemma},
                         {"V_form", r.profiles[i].V_form}});
    put(summary_json, {{"corpora", corpora}, {"warnings", r.warnings}});
  });
}

}  // extern "C"
