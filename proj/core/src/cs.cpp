#include "qmb/cs.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmb/errors.hpp"

namespace qmb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ChoiEigen {
  Eigen::SelfAdjointEigenSolver<CMat> es;
  double p_max = 0.0;
  double kernel_cut = 0.0;
  Index rank = 0;

  explicit ChoiEigen(const ChoiPair& cp, const Tolerances& tol) : es(cp.p) {
    const auto& ev = es.eigenvalues();
    p_max = ev(ev.size() - 1);
    kernel_cut = tol.psd * p_max;
    for (Index i = 0; i < ev.size(); ++i)
      if (ev(i) >= kernel_cut) ++rank;
  }

  CMat support_vectors() const {
    return es.eigenvectors().rightCols(rank);
  }

  RVec support_values() const {
    return es.eigenvalues().tail(rank);
  }
};

}  // namespace

std::string to_string(PhiClass c) {
  switch (c) {
    case PhiClass::phi_nonextremal: return "phi_nonextremal";
    case PhiClass::phi_extremal: return "phi_extremal";
    case PhiClass::unitary_like_extremal: return "unitary_like_extremal";
  }
  return "unknown";
}

EpsilonMax epsilon_max(const ChoiPair& cp, int sign, const Tolerances& tol) {
  if (sign != 1 && sign != -1) throw Error::input("epsilon_max: sign must be +1 or -1");
  require_valid_choi(cp, tol);

  const ChoiEigen pe(cp, tol);
  const double d_scale = std::max(1.0, hermitian_norm(cp.d));

  // Kernel preservation: any kernel vector of P moved by D makes the pencil
  // infeasible for every eps > 0.
  for (Index i = 0; i < pe.es.eigenvalues().size() - pe.rank; ++i) {
    const CVec v = pe.es.eigenvectors().col(i);
    if ((cp.d * v).norm() > tol.psd * d_scale)
      return EpsilonMax{0.0, true, false};
  }

  // Congruence-reduce on the support: P + eps*s*D >= 0 iff
  // 1 + eps * lambda_min(s * M) >= 0 with M = P~^{-1/2} D~ P~^{-1/2}.
  const CMat vs = pe.support_vectors();
  const RVec lam = pe.support_values();
  const CMat d_tilde = vs.adjoint() * cp.d * vs;
  if (hermitian_norm(d_tilde) <= tol.psd * pe.p_max)
    return EpsilonMax{kInf, false, true};  // derivative vanishes on supp(P)

  RVec inv_sqrt = lam.array().rsqrt();
  const CMat m = inv_sqrt.asDiagonal() * d_tilde * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<CMat> mes(hermitian_part(double(sign) * m),
                                          Eigen::EigenvaluesOnly);
  const double lo = mes.eigenvalues()(0);
  if (!(lo < 0.0)) {
    // Cannot happen for a traceless, nonvanishing D~ (it must be indefinite);
    // reaching this indicates corrupted input or a bug.
    throw Error::internal("epsilon_max: pencil unbounded although D is nonzero on supp(P)");
  }
  return EpsilonMax{-1.0 / lo, false, false};
}

PhiClass classify_phi_extremality(const ChoiPair& cp, const Tolerances& tol) {
  require_valid_choi(cp, tol);
  const EpsilonMax ep = epsilon_max(cp, +1, tol);
  const EpsilonMax em = epsilon_max(cp, -1, tol);
  const bool nonextremal_pencil = !ep.infeasible && !em.infeasible;

  // Independent criterion: D must live on the support of P, i.e. the
  // derivative expands in the |K_i><K_j| products.
  const ChoiEigen pe(cp, tol);
  const CMat vs = pe.support_vectors();
  const CMat pi = vs * vs.adjoint();
  const double d_scale = std::max(1.0, hermitian_norm(cp.d));
  const double support_residual = hermitian_norm(cp.d - pi * cp.d * pi) / d_scale;
  const bool nonextremal_support = support_residual <= tol.mu;

  if (nonextremal_pencil != nonextremal_support) {
    std::ostringstream oss;
    oss << "phi-extremality tests disagree: pencil says "
        << (nonextremal_pencil ? "nonextremal" : "extremal")
        << ", support residual " << support_residual;
    throw Error::internal(oss.str());
  }

  if (nonextremal_pencil) return PhiClass::phi_nonextremal;
  return pe.rank == 1 ? PhiClass::unitary_like_extremal : PhiClass::phi_extremal;
}

MuSolve mu_condition(const Channel& ch, const Tolerances& tol) {
  require_valid(ch, tol);
  const ChoiPair cp = choi(ch, tol);
  const Index k = ch.kraus_count();

  std::vector<CVec> kv(k);
  for (Index i = 0; i < k; ++i) kv[i] = kraus_vec(ch.kraus[i]);

  // Hermitian parameterization of mu over the real basis from
  // hermitian_basis(k); each image direction B_a = sum_ij (H_a)_ij |K_i><K_j|
  // is Hermitian, so the Gram system is real symmetric.
  const std::vector<CMat> hb = hermitian_basis(k);
  std::vector<CMat> basis;
  basis.reserve(hb.size());
  for (const CMat& h : hb) {
    CMat b = CMat::Zero(kv[0].size(), kv[0].size());
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j)
        if (h(i, j) != 0.0) b += h(i, j) * (kv[i] * kv[j].adjoint());
    basis.push_back(std::move(b));
  }

  const Index nb = static_cast<Index>(basis.size());
  RMat gram(nb, nb);
  RVec rhs(nb);
  for (Index a = 0; a < nb; ++a) {
    for (Index b = a; b < nb; ++b) {
      const double g = (basis[a].adjoint() * basis[b]).trace().real();
      gram(a, b) = g;
      gram(b, a) = g;
    }
    rhs(a) = (basis[a].adjoint() * cp.d).trace().real();
  }

  Eigen::SelfAdjointEigenSolver<RMat> ges(gram);
  const RVec gev = ges.eigenvalues();
  const double gmax = gev(gev.size() - 1);
  const double gcut = 1e-14 * std::max(1.0, gmax);
  RVec x = RVec::Zero(nb);
  {
    const RVec proj = ges.eigenvectors().transpose() * rhs;
    RVec scaled = RVec::Zero(nb);
    for (Index a = 0; a < nb; ++a)
      if (gev(a) > gcut) scaled(a) = proj(a) / gev(a);
    x = ges.eigenvectors() * scaled;
  }

  MuSolve out;
  out.gram_condition = gmax / std::max(gev(0), gcut);
  out.well_conditioned = out.gram_condition < 1e12;

  CMat fit = CMat::Zero(cp.d.rows(), cp.d.cols());
  for (Index a = 0; a < nb; ++a) fit += x(a) * basis[a];
  const double d_scale = std::max(1.0, hermitian_norm(cp.d));
  out.residual = hermitian_norm(fit - cp.d) / d_scale;

  CMat mu = CMat::Zero(k, k);
  for (Index a = 0; a < nb; ++a) mu += x(a) * hb[static_cast<std::size_t>(a)];

  CMat traced = CMat::Zero(ch.d_in, ch.d_in);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      traced += mu(i, j) * ch.kraus[i].adjoint() * ch.kraus[j];
  out.trace_residual = hermitian_norm(traced);

  if (out.residual <= tol.mu) out.mu = mu;
  return out;
}

CSResult cs_bound(const Channel& ch, const Tolerances& tol) {
  const ChoiPair cp = choi(ch, tol);
  const EpsilonMax ep = epsilon_max(cp, +1, tol);
  const EpsilonMax em = epsilon_max(cp, -1, tol);

  CSResult res;
  res.eps_plus = ep.value;
  res.eps_minus = em.value;
  res.classification = classify_phi_extremality(cp, tol);
  res.applicable = res.classification == PhiClass::phi_nonextremal;
  if (res.applicable) {
    res.bound_const = std::sqrt(ep.value * em.value);
    res.f_cl = 1.0 / (ep.value * em.value);
  } else {
    res.bound_const = 0.0;
    res.f_cl = kInf;  // extremal families admit no classical simulation
  }
  res.residual_mu = mu_condition(ch, tol).residual;
  return res;
}

TangentSimulation tangent_simulation(const Channel& ch, const Tolerances& tol) {
  const ChoiPair cp = choi(ch, tol);
  const EpsilonMax ep = epsilon_max(cp, +1, tol);
  const EpsilonMax em = epsilon_max(cp, -1, tol);
  if (ep.infeasible || em.infeasible)
    throw Error::input(
        "tangent_simulation: channel is phi-extremal at phi0; the classical "
        "simulation does not exist");
  if (ep.unbounded || em.unbounded)
    throw Error::input("tangent_simulation: derivative vanishes, simulation degenerate");

  TangentSimulation ts;
  ts.eps_plus = ep.value;
  ts.eps_minus = em.value;
  ts.choi_plus = cp.p + ep.value * cp.d;
  ts.choi_minus = cp.p - em.value * cp.d;
  const double span = ep.value + em.value;
  ts.p_plus = em.value / span;
  ts.p_minus = ep.value / span;
  ts.p_dot_plus = 1.0 / span;
  ts.p_dot_minus = -1.0 / span;
  return ts;
}

double classical_fisher(const RVec& p, const RVec& p_dot) {
  if (p.size() != p_dot.size() || p.size() == 0)
    throw Error::input("classical_fisher: size mismatch");
  constexpr double p_floor = 1e-14;
  constexpr double pdot_floor = 1e-12;
  if (p.minCoeff() < -p_floor)
    throw Error::input("classical_fisher: negative probability");
  if (std::abs(p.sum() - 1.0) > 1e-12)
    throw Error::input("classical_fisher: probabilities do not sum to 1");
  if (std::abs(p_dot.sum()) > pdot_floor * std::max(1.0, p_dot.cwiseAbs().maxCoeff()))
    throw Error::input("classical_fisher: derivatives do not sum to 0");

  double f = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) > p_floor) {
      f += p_dot(i) * p_dot(i) / p(i);
    } else if (std::abs(p_dot(i)) > pdot_floor) {
      return kInf;  // support changes with phi: distinguishable at first order
    }
  }
  return f;
}

}  // namespace qmb
