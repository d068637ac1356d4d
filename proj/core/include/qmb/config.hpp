#pragma once

#include <cstddef>
#include <cstdint>

namespace qmb {

/// Numerical tolerances used across the library. Unless stated otherwise a
/// tolerance is applied relative to the natural scale of the operator it
/// guards (operator norm of the matrix, norm of the right-hand side, ...),
/// so callers can keep the defaults across wildly different channel scales.
struct Tolerances {
  double tp = 1e-10;    // trace preservation / completeness defect
  double psd = 1e-9;    // positive-semidefinite slack (relative to max eig)
  double li = 1e-10;    // Kraus linear independence (Gram eigenvalue cut)
  double herm = 1e-12;  // hermiticity defect, relative to operator norm
  double mu = 1e-8;     // derivative-expansion residual, relative to |D|
  double beta = 1e-9;   // commutation-constraint feasibility on beta
  double res = 1e-8;    // least-squares residual for the beta constraint
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

/// Resource ceilings. The tensor budget counts complex entries of the
/// largest matrix a tensor-power operation may allocate ((d_out^n)^2).
struct Limits {
  std::size_t tensor_budget = std::size_t{1} << 26;
};

inline const Limits& default_limits() {
  static const Limits l{};
  return l;
}

/// Limits with the tensor budget taken from the QMB_BUDGET environment
/// variable when it is set to a positive integer; defaults otherwise.
Limits limits_from_env();

}  // namespace qmb
