#pragma once

#include <stdexcept>
#include <string>

namespace gwpt {

// BadInput maps to CLI exit code 2, Internal to 1.
enum class ErrorKind { BadInput, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  static Error bad_input(const std::string& msg) {
    return Error(ErrorKind::BadInput, msg);
  }
  static Error internal(const std::string& msg) {
    return Error(ErrorKind::Internal, msg);
  }

 private:
  ErrorKind kind_;
};

}  // namespace gwpt
