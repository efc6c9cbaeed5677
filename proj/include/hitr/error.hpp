#pragma once

#include <stdexcept>
#include <string>

namespace hitr {

// Broad failure classes; the CLI maps these onto exit codes.
enum class ErrorKind { Config, Data, Internal };

// Every error carries a stable machine-readable code ("EmptyCorpus",
// "ZeroTotalCounts", ...) next to the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error config_error(std::string code, const std::string& message) {
  return Error(ErrorKind::Config, std::move(code), message);
}

inline Error data_error(std::string code, const std::string& message) {
  return Error(ErrorKind::Data, std::move(code), message);
}

}  // namespace hitr
