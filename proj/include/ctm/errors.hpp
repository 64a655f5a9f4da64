#pragma once

#include <stdexcept>
#include <string>

namespace ctm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Element of A_m with singular left-multiplication matrix (zero divisor or 0).
struct NotInvertible : Error {
  NotInvertible() : Error("element is not invertible") {}
};

// Least-squares residual of a gram*c = cross solve exceeded tolerance; the
// inputs were not a consistent Gram / cross-product pair.
struct InconsistentSystem : Error {
  explicit InconsistentSystem(double residual)
      : Error("projection system inconsistent, residual " + std::to_string(residual)),
        residual(residual) {}
  double residual;
};

// Orthogonalization step j produced a remainder with vanishing self inner
// product: input j lies in the span of its predecessors.
struct DegenerateElement : Error {
  explicit DegenerateElement(int index)
      : Error("element " + std::to_string(index) + " is linearly dependent on predecessors"),
        index(index) {}
  int index;
};

// A pole was repeated more often than the supported derivative order allows.
struct UnsupportedMultiplicity : Error {
  UnsupportedMultiplicity(int multiplicity, int max_supported)
      : Error("pole multiplicity " + std::to_string(multiplicity) +
              " exceeds supported maximum " + std::to_string(max_supported)),
        multiplicity(multiplicity),
        max_supported(max_supported) {}
  int multiplicity;
  int max_supported;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Kernel pole not strictly inside its domain (|a| >= 1 for the ball,
// Sc(a) <= 0 for the half space).
struct PoleOutsideDomain : Error {
  PoleOutsideDomain() : Error("kernel pole lies outside its domain") {}
};

// Kernel evaluated where its denominator vanishes (below 1e-14).
struct EvaluationSingularity : Error {
  EvaluationSingularity() : Error("kernel evaluation at a singular point") {}
};

struct DomainMismatch : Error {
  DomainMismatch() : Error("atoms belong to different domains") {}
};

struct UnsupportedDimension : Error {
  explicit UnsupportedDimension(int m)
      : Error("dimension m = " + std::to_string(m) + " outside supported range 1..6") {}
};

struct LengthMismatch : Error {
  LengthMismatch(std::size_t expected, std::size_t got)
      : Error("expected " + std::to_string(expected) + " samples, got " + std::to_string(got)) {}
};

struct DimensionMismatch : Error {
  DimensionMismatch(int lhs, int rhs)
      : Error("algebra dimensions differ: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}
};

// A truncated-domain quadrature would drop more than the allowed fraction of
// the signal's energy; enlarge the grid.
struct TruncationWarning : Error {
  explicit TruncationWarning(double fraction)
      : Error("outer band of the truncated grid holds a fraction " + std::to_string(fraction) +
              " of the signal energy (limit 0.01)"),
        fraction(fraction) {}
  double fraction;
};

}  // namespace ctm
