#pragma once

#include <stdexcept>
#include <string>

namespace hh3 {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic left the exactly-representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// An expression violates the index conventions (e.g. a summation index
/// occurring more or fewer than two times).
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Grounding of a symbolic expression failed (missing binding, free index,
/// dimension mismatch).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Exact linear algebra failure (singular matrix where an inverse is needed).
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// The bracket span of the Lie algebra is a proper subspace: [g,g] != g.
class NotSemisimpleError : public Error {
 public:
  using Error::Error;
};

/// The restriction of the trace form to the given basis is degenerate.
class DegenerateFormError : public Error {
 public:
  using Error::Error;
};

}  // namespace hh3
