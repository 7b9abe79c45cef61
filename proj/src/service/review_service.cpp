#include "service/review_service.hpp"

#include <charconv>
#include <optional>

#include <httplib.h>
#include <json.hpp>

namespace lexfreq::service {

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";
constexpr std::size_t kMaxLimit = 1000;

void reply(httplib::Response& res, lexfreq_status status, char* body) {
  if (status == LEXFREQ_OK) {
    res.status = 200;
    res.set_content(body ? body : "{}", kJson);
  } else {
    res.status = http_status(status);
    nlohmann::json err = {{"error", lexfreq_status_name(status)}, {"message", lexfreq_last_error()}};
    res.set_content(err.dump(), kJson);
  }
  lexfreq_string_free(body);
}

void bad_request(httplib::Response& res, const std::string& message) {
  res.status = 400;
  res.set_content(nlohmann::json{{"error", "invalid_argument"}, {"message", message}}.dump(), kJson);
}

std::optional<std::size_t> size_param(const httplib::Request& req, const char* name,
                                      std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const auto v = req.get_param_value(name);
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) return std::nullopt;
  return out;
}

}  // namespace

int http_status(lexfreq_status status) noexcept {
  switch (status) {
    case LEXFREQ_OK: return 200;
    case LEXFREQ_E_INVALID_ARGUMENT:
    case LEXFREQ_E_SYNTAX:
    case LEXFREQ_E_FORMAT:
    case LEXFREQ_E_ENCODING: return 400;
    case LEXFREQ_E_NOT_FOUND: return 404;
    case LEXFREQ_E_PENDING: return 409;
    default: return 500;
  }
}

void ReviewService::mount(httplib::Server& server) const {
  lexfreq_session* s = session_;
  const std::size_t default_width = default_width_;

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  server.Get("/api/queue", [s](const httplib::Request& req, httplib::Response& res) {
    const auto offset = size_param(req, "offset", 0);
    const auto limit = size_param(req, "limit", 20);
    if (!offset || !limit) return bad_request(res, "offset and limit must be non-negative integers");
    if (*limit > kMaxLimit) return bad_request(res, "limit exceeds " + std::to_string(kMaxLimit));
    nlohmann::json filter = nlohmann::json::object();
    if (req.has_param("form")) filter["form"] = req.get_param_value("form");
    if (req.has_param("script")) filter["script"] = req.get_param_value("script");
    if (req.has_param("unknown_only")) {
      const auto v = req.get_param_value("unknown_only");
      if (v != "true" && v != "false" && v != "1" && v != "0")
        return bad_request(res, "unknown_only must be true or false");
      filter["unknown_only"] = v == "true" || v == "1";
    }
    char* out = nullptr;
    const auto st = lexfreq_session_queue_json(s, *offset, *limit, filter.dump().c_str(), &out);
    reply(res, st, out);
  });

  server.Get("/api/kwic", [s, default_width](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("form") || req.get_param_value("form").empty())
      return bad_request(res, "missing 'form'");
    const auto width = size_param(req, "width", default_width);
    if (!width) return bad_request(res, "width must be a non-negative integer");
    char* out = nullptr;
    const auto st = lexfreq_session_kwic_json(s, req.get_param_value("form").c_str(), *width, &out);
    reply(res, st, out);
  });

  server.Get("/api/progress", [s](const httplib::Request&, httplib::Response& res) {
    char* out = nullptr;
    const auto st = lexfreq_session_progress_json(s, &out);
    reply(res, st, out);
  });

  server.Post("/api/decision", [s](const httplib::Request& req, httplib::Response& res) {
    char* out = nullptr;
    const auto st = lexfreq_session_post_decision_json(s, req.body.c_str(), &out);
    reply(res, st, out);
  });

  server.Post("/api/rerun", [s](const httplib::Request&, httplib::Response& res) {
    char* out = nullptr;
    const auto st = lexfreq_session_rerun(s, &out);
    reply(res, st, out);
  });
}

}  // namespace lexfreq::service
