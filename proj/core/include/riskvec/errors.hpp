#pragma once

#include <stdexcept>
#include <string>

namespace riskvec {

// Single exception type for the whole library. The kind separates "your
// input is wrong" from "the run itself broke", which the CLI maps to its
// two nonzero exit codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { validation, runtime };

  Error(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline Error validation_error(std::string message) {
  return Error(Error::Kind::validation, std::move(message));
}

inline Error runtime_error(std::string message) {
  return Error(Error::Kind::runtime, std::move(message));
}

}  // namespace riskvec
