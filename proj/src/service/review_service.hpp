#pragma once

#include <string>

#include "lexfreq.h"

namespace httplib {
class Server;
}

namespace lexfreq::service {

/// JSON endpoints of the annotation queue over one session:
///   GET  /api/queue?offset=&limit=&form=&script=&unknown_only=
///   GET  /api/kwic?form=&width=
///   GET  /api/progress
///   POST /api/decision
///   POST /api/rerun
class ReviewService {
public:
  explicit ReviewService(lexfreq_session* session, std::size_t default_width = 5)
      : session_(session), default_width_(default_width) {}

  void mount(httplib::Server& server) const;

private:
  lexfreq_session* session_;
  std::size_t default_width_;
};

/// HTTP status for a failed call.
int http_status(lexfreq_status status) noexcept;

}  // namespace lexfreq::service
