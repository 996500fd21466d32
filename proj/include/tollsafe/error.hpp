#pragma once

#include <stdexcept>
#include <string>

namespace tollsafe {

// Broad failure categories; they map 1:1 onto C API / CLI exit codes.
enum class ErrorCode {
  Config = 1,
  Data = 2,
  Convergence = 3,
  Internal = 4,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline Error config_error(std::string msg) { return Error(ErrorCode::Config, std::move(msg)); }
inline Error data_error(std::string msg) { return Error(ErrorCode::Data, std::move(msg)); }
inline Error convergence_error(std::string msg) { return Error(ErrorCode::Convergence, std::move(msg)); }
inline Error internal_error(std::string msg) { return Error(ErrorCode::Internal, std::move(msg)); }

}  // namespace tollsafe
