#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlsurr {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  Parameter,      // out-of-range or non-finite model parameter
  Length,         // series too short, empty input, mismatched lengths
  Escape,         // trajectory left the bounded region
  Stiffness,      // adaptive step size underflow
  Numeric,        // non-finite activation / gradient
  Normalization,  // zero-energy reference in a normalized metric
  Parse,          // malformed input file
  Io,             // file could not be opened or written
  Usage,          // unknown selector or bad command-line usage
  Design,         // filter specification not realizable
  Split,          // dataset too small to split
  Training,       // loss diverged during training
  Config,         // run configuration failed validation
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nlsurr
