#pragma once

#include <stdexcept>
#include <string>

namespace substdim {

/// Malformed substitution text or rule document.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its contract (e.g. non-primitive input).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An empirical procedure exhausted its horizon without stabilizing.
struct UndecidedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A constructed object failed its own consistency assertion; the message
/// carries the offending instance.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace substdim
