#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace pipowers {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An order or size exceeds a configured limit (e.g. k > K_max).
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a singularity: sin(pi x) = 0, g(x) = 0, y = 0.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Too few arguments were supplied to a polynomial or derivative table.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Parameters violate a documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The trigonometric prefactor vanishes at (k, x); the identity cannot be inverted there.
class DegeneratePointError : public Error {
 public:
  using Error::Error;
};

namespace detail {

[[noreturn]] inline void invariant_failure(const char* expr, const char* file, int line,
                                           const std::string& what) {
  std::fprintf(stderr, "pipowers: internal invariant violated: %s (%s) at %s:%d\n", expr,
               what.c_str(), file, line);
  std::abort();
}

}  // namespace detail
}  // namespace pipowers

// Always on, independent of NDEBUG: a failure means a library bug.
#define PIPOWERS_INVARIANT(cond, msg)                                            \
  do {                                                                           \
    if (!(cond)) ::pipowers::detail::invariant_failure(#cond, __FILE__, __LINE__, (msg)); \
  } while (false)
