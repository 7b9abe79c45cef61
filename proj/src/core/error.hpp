#pragma once

#include <stdexcept>
#include <string>

namespace lexfreq {

enum class ErrorCode {
  io,
  encoding,
  syntax,
  format,
  invalid_argument,
  not_found,
  pending,
  empty_corpus,
  numeric,
  convergence,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace lexfreq
