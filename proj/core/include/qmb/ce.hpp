#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmb/channel.hpp"
#include "qmb/sdp.hpp"

namespace qmb {

/// Hermitian generator of local Kraus-representation rotations
/// u(phi) = exp(-i h (phi - phi0)). Validated Hermitian on construction.
struct KrausGenerator {
  CMat mat;

  KrausGenerator() = default;
  explicit KrausGenerator(const CMat& m, const Tolerances& tol = default_tolerances());
  static KrausGenerator zero(Index k);
  Index dim() const { return mat.rows(); }
};

struct AlphaBeta {
  CMat alpha;  // sum_i Kt_i' Kt_i  with Kt_i = Kdot_i - i sum_j h_ij K_j
  CMat beta;   // i sum_i Kt_i' K_i
};

/// The two Hermitian operators controlling the channel-extension bound for
/// the Kraus representation rotated by h.
AlphaBeta alpha_beta(const Channel& ch, const KrausGenerator& h,
                     const Tolerances& tol = default_tolerances());

/// Affine solution set of the linear constraint beta(h) = 0, i.e.
/// sum_ij h_ij K_i' K_j = i sum_q Kdot_q' K_q, parameterized over Hermitian h
/// (k^2 real unknowns). Returns nullopt when the constraint has no solution.
struct BetaSolution {
  KrausGenerator particular;    // minimum-norm solution h0
  std::vector<CMat> nullspace;  // Hermitian basis of the homogeneous solutions
  double residual = 0.0;        // least-squares residual of the solve
  double rhs_norm = 0.0;        // |i sum Kdot' K|
};

std::optional<BetaSolution> beta_constraint_solve(
    const Channel& ch, const Tolerances& tol = default_tolerances());

/// Block matrix A(t, h) of size d_in + k*d_out: sqrt(t) on the diagonal,
/// the rotated derivatives Kt_i down the first block column. A >= 0 iff
/// alpha(h) <= t * identity (Schur complement), which is the SDP constraint.
CMat assemble_lmi(const Channel& ch, const KrausGenerator& h, double t,
                  const Tolerances& tol = default_tolerances());

struct CESolverDiag {
  std::string status;       // "fixed_generator", "interior_point", ...
  int iterations = 0;       // Newton steps spent in the interior-point solve
  double gap = 0.0;         // certified gap on t
  double dual_residual = 0.0;
  int nullspace_dim = 0;
};

struct CEResult {
  bool feasible = false;               // beta(h) = 0 admits a solution
  std::optional<KrausGenerator> h_opt;
  double t_opt = 0.0;        // SDP optimum of t = |alpha|
  double alpha_norm = 0.0;   // |alpha(h_opt)| recomputed at the returned h
  double beta_norm = 0.0;    // |beta(h_opt)|, should vanish
  double bound_const = 0.0;  // 1/(2 sqrt(alpha_norm)): dphi >= const/sqrt(N)
  CESolverDiag solver;
};

/// Channel-extension bound: minimizes |alpha(h)| over the beta(h) = 0 family
/// by an interior-point SDP on the assemble_lmi block matrix. Infeasible
/// constraint => no bound of this form (result.feasible = false).
CEResult ce_sdp_bound(const Channel& ch, const Tolerances& tol = default_tolerances(),
                      const SdpOptions& opts = {});

/// F_N <= 4 { N |alpha| + N(N-1) |beta|^2 } for any h, also without beta = 0.
double finite_n_bound(const Channel& ch, const KrausGenerator& h, long n,
                      const Tolerances& tol = default_tolerances());

/// Independent route to min |alpha|: projected subgradient descent of
/// lambda_max(alpha(h)) over the beta(h) = 0 affine family. Slower and less
/// accurate than the SDP; used to cross-validate t_opt.
struct SubgradientResult {
  double t = 0.0;
  KrausGenerator h;
  int iterations = 0;
};

SubgradientResult ce_subgradient_bound(const Channel& ch, int iterations = 20000,
                                       const Tolerances& tol = default_tolerances());

}  // namespace qmb
