#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace nonloc {

/// Default tolerance used by every boolean predicate in the library.
inline constexpr double kDefaultTol = 1e-9;

/// Two values indexed by a measurement setting (x or y).
using Pair = std::array<double, 2>;
/// Four values indexed by a setting pair, `grid[x][y]`.
using Grid = std::array<std::array<double, 2>, 2>;

/// The party that guesses (for guessing biases) or the party whose
/// observables span a plane (for inequalities and geometry).
enum class Side { A, B };

inline const char* to_string(Side s) { return s == Side::A ? "A" : "B"; }

// Error hierarchy. Every failure raised by the library derives from Error so
// callers can catch one type; the subclasses let the CLI map failures to
// exit codes and diagnostics.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a value-range or shape contract.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A behavior is not a valid probability assignment.
class InvalidBehavior : public Error {
 public:
  using Error::Error;
};

/// Preconditions of a structural statement (nonlocality, saturation,
/// two-qubit form) do not hold for the input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Input sits on a degenerate stratum where the construction is undefined
/// (coinciding observables, vanishing denominators).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace nonloc
