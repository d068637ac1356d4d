#pragma once

#include <cstdint>

#include "qmb/channel.hpp"

namespace qmb {

/// Quantum Fisher information of (rho, drho) via the symmetric logarithmic
/// derivative: F = sum 2 |<i|drho|j>|^2 / (l_i + l_j) over eigenpairs of rho
/// with l_i + l_j > 1e-12 * Tr(rho).
double qfi(const DensityMatrix& rho, const CMat& drho,
           const Tolerances& tol = default_tolerances());

/// Cramer-Rao limit on the phase deviation: 1 / sqrt(nu * fisher) for nu
/// independent repetitions. fisher = 0 maps to +infinity.
double crlb(double fisher, double nu = 1.0);

struct OracleOptions {
  int restarts = 32;
  std::uint64_t seed = 12345;
  int max_iters = 300;
  double grad_step = 1e-6;  // central-difference step on the input amplitudes
  double min_step = 1e-10;  // line-search floor that ends a restart
  double f_tol = 1e-12;     // improvement below this does not count
};

struct OracleResult {
  double f = 0.0;        // best output-state QFI found
  CVec input;            // optimizing pure-input amplitudes, dim d_in^n
  int restarts = 0;
  int best_restart = 0;
  long iterations = 0;   // ascent steps summed over restarts
  bool converged = false;  // best restart ended at a stationary point
};

/// Numerical maximization of the n-probe output QFI over pure inputs on the
/// full (d_in^n)-dimensional space: projected gradient ascent on the
/// amplitude sphere from seeded Haar-random starts. Deterministic for a
/// fixed seed; ties between restarts resolve to the lowest restart index.
OracleResult optimize_input(const Channel& ch, int n, const OracleOptions& opts = {},
                            const Tolerances& tol = default_tolerances(),
                            const Limits& limits = default_limits());

}  // namespace qmb
