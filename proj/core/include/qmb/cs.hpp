#pragma once

#include <optional>
#include <string>

#include "qmb/channel.hpp"

namespace qmb {

/// Local classification of the channel family at phi0. A family is
/// phi-nonextremal when it can be moved inside the set of quantum channels
/// along +/- the parameter direction (both pencil margins positive);
/// unitary_like_extremal is the rank-1 Choi (isometric evolution) case.
enum class PhiClass { phi_nonextremal, phi_extremal, unitary_like_extremal };

std::string to_string(PhiClass c);

struct EpsilonMax {
  double value = 0.0;      // largest eps with P + sign*eps*D >= 0 (+inf sentinel)
  bool infeasible = false; // kernel of P not annihilated by D: eps = 0
  bool unbounded = false;  // D vanishes on supp(P): every eps is feasible
};

/// Largest eps >= 0 such that P + sign*eps*D is positive semidefinite,
/// computed on the support of P. sign must be +1 or -1.
EpsilonMax epsilon_max(const ChoiPair& cp, int sign,
                       const Tolerances& tol = default_tolerances());

/// Pencil-based classification, cross-checked against the support-projection
/// residual |D - Pi D Pi| (the derivative-expansion criterion). A
/// disagreement between the two tests throws an internal error.
PhiClass classify_phi_extremality(const ChoiPair& cp,
                                  const Tolerances& tol = default_tolerances());

/// Least-squares solve of D = sum_ij mu_ij |K_i><K_j| over Hermitian mu.
struct MuSolve {
  std::optional<CMat> mu;      // present iff the expansion closes within tol.mu
  double residual = 0.0;       // relative residual of the best fit
  double trace_residual = 0.0; // |sum_ij mu_ij K_i' K_j| (0 for exact fits)
  double gram_condition = 0.0;
  bool well_conditioned = true;
};

MuSolve mu_condition(const Channel& ch, const Tolerances& tol = default_tolerances());

struct CSResult {
  double eps_plus = 0.0;
  double eps_minus = 0.0;
  PhiClass classification = PhiClass::phi_extremal;
  bool applicable = false;    // true iff phi_nonextremal
  double bound_const = 0.0;   // sqrt(eps+ * eps-); uncertainty >= const/sqrt(N)
  double f_cl = 0.0;          // 1/(eps+ * eps-), Fisher information per use
  double residual_mu = 0.0;   // relative mu-expansion residual (diagnostic)
};

/// Classical-simulation lower bound on phase uncertainty:
/// delta phi >= sqrt(eps+ * eps-) / sqrt(N) for phi-nonextremal channels.
CSResult cs_bound(const Channel& ch, const Tolerances& tol = default_tolerances());

/// The two-point classical simulation at phi0: channel mixture
/// p+ L(+) + p- L(-) with Choi matrices P +/- eps(+/-) D. Its classical
/// Fisher information equals 1/(eps+ eps-).
struct TangentSimulation {
  CMat choi_plus;
  CMat choi_minus;
  double p_plus = 0.0;
  double p_minus = 0.0;
  double p_dot_plus = 0.0;   // per radian
  double p_dot_minus = 0.0;
  double eps_plus = 0.0;
  double eps_minus = 0.0;
};

TangentSimulation tangent_simulation(const Channel& ch,
                                     const Tolerances& tol = default_tolerances());

/// F_cl = sum_i pdot_i^2 / p_i. Requires sum p = 1, sum pdot = 0. Entries
/// with p_i ~ 0 but pdot_i != 0 yield the infinite-information sentinel.
double classical_fisher(const RVec& p, const RVec& p_dot);

}  // namespace qmb
