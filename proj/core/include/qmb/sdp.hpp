#pragma once

#include <vector>

#include "qmb/linalg.hpp"

namespace qmb {

/// F(x) = f0 + sum_i x_i * fi, all blocks Hermitian and of equal size.
struct LinearMatrixInequality {
  CMat f0;
  std::vector<CMat> fi;

  Index dim() const { return f0.rows(); }
  Index vars() const { return static_cast<Index>(fi.size()); }
  CMat eval(const RVec& x) const;
};

struct SdpOptions {
  double gap_tol = 1e-10;    // stop once the certified duality gap n*mu falls below
  double mu0 = 1.0;          // initial barrier weight
  double mu_shrink = 10.0;   // geometric barrier reduction per outer step
  double center_tol = 1e-10; // Newton decrement^2 defining "centered"
  int max_outer = 40;
  int max_newton = 80;       // Newton steps per centering
};

enum class SdpStatus {
  optimal,          // certified gap below gap_tol
  stalled,          // numerical stall; best centered iterate returned
  iteration_limit,
};

struct SdpResult {
  RVec x;
  double objective = 0.0;
  double gap = 0.0;            // certified duality gap at the returned iterate
  double dual_residual = 0.0;  // max_i |c_i - Tr(F^-1 F_i) * mu|
  double min_eigenvalue = 0.0; // of F(x); strictly positive for interior points
  int newton_steps = 0;
  SdpStatus status = SdpStatus::stalled;
};

/// Minimize cost^T x subject to F(x) >= 0 by log-barrier path following.
/// `x0` must be strictly feasible. Each centered iterate carries the dual
/// certificate Z = mu * F(x)^-1 (gap = mu * dim), which is what the returned
/// gap/dual_residual report.
SdpResult sdp_minimize(const RVec& cost, const LinearMatrixInequality& lmi,
                       const RVec& x0, const SdpOptions& opts = {});

}  // namespace qmb
