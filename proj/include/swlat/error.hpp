#pragma once

#include <stdexcept>
#include <string>

namespace swlat {

// Values mirror the SWLAT_* status codes of the C interface.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kShapeMismatch = 2,
  kIo = 3,
  kFormat = 4,
  kConfig = 5,
  kSolver = 6,
  kNumeric = 7,
  kInternal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace swlat
