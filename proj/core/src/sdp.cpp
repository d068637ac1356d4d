#include "qmb/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "qmb/errors.hpp"

namespace qmb {

namespace {

struct Factorized {
  Eigen::SelfAdjointEigenSolver<CMat> es;
  double min_eig = 0.0;
  double logdet = 0.0;
  CMat w;  // F^{-1/2} so that F^{-1} = w * w^dag

  bool factor(const CMat& f) {
    es.compute(f);
    if (es.info() != Eigen::Success) return false;
    min_eig = es.eigenvalues()(0);
    if (!(min_eig > 0.0)) return false;
    logdet = es.eigenvalues().array().log().sum();
    w = es.eigenvectors() * es.eigenvalues().array().rsqrt().matrix().asDiagonal();
    return true;
  }
};

}  // namespace

CMat LinearMatrixInequality::eval(const RVec& x) const {
  if (x.size() != vars()) throw Error::input("lmi eval: variable count mismatch");
  CMat f = f0;
  for (Index i = 0; i < vars(); ++i) f += x(i) * fi[i];
  return f;
}

SdpResult sdp_minimize(const RVec& cost, const LinearMatrixInequality& lmi,
                       const RVec& x0, const SdpOptions& opts) {
  const Index n = lmi.dim();
  const Index m = lmi.vars();
  if (cost.size() != m || x0.size() != m)
    throw Error::input("sdp_minimize: cost/start size mismatch");
  if (lmi.f0.rows() != n || lmi.f0.cols() != n)
    throw Error::input("sdp_minimize: LMI blocks must be square");
  for (const CMat& f : lmi.fi)
    if (f.rows() != n || f.cols() != n)
      throw Error::input("sdp_minimize: LMI blocks must share one size");

  RVec x = x0;
  Factorized fac;
  if (!fac.factor(lmi.eval(x)))
    throw Error::solver("sdp_minimize: starting point is not strictly feasible");

  double t = 1.0 / opts.mu0;  // barrier multiplier: minimize t*c'x - logdet F
  SdpResult best;             // last fully centered iterate
  best.x = x;
  best.status = SdpStatus::stalled;
  int total_newton = 0;
  bool have_centered = false;

  std::vector<CMat> gi(m);  // congruence-transformed LMI directions
  RVec grad(m), delta(m);
  RMat hess(m, m);

  const bool trace = std::getenv("QMB_SDP_TRACE") != nullptr;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    bool centered = false;
    double best_dec2 = std::numeric_limits<double>::infinity();
    int stagnant = 0;
    for (int it = 0; it < opts.max_newton; ++it) {
      ++total_newton;
      // gradient and Hessian of t*c'x - logdet F(x)
      for (Index i = 0; i < m; ++i) gi[i] = fac.w.adjoint() * lmi.fi[i] * fac.w;
      for (Index i = 0; i < m; ++i) {
        grad(i) = t * cost(i) - gi[i].trace().real();
        for (Index j = i; j < m; ++j) {
          const double hij = gi[i].cwiseProduct(gi[j].conjugate()).sum().real();
          hess(i, j) = hij;
          hess(j, i) = hij;
        }
      }

      Eigen::LDLT<RMat> ldlt(hess);
      delta = -ldlt.solve(grad);
      if (!delta.allFinite()) {
        // retry with a small ridge before declaring a stall
        RMat ridged = hess;
        ridged.diagonal().array() += 1e-12 * std::max(1.0, hess.trace() / std::max<Index>(m, 1));
        delta = -Eigen::LDLT<RMat>(ridged).solve(grad);
        if (!delta.allFinite()) { centered = false; break; }
      }
      const double dec2 = -grad.dot(delta);  // Newton decrement squared
      if (dec2 < opts.center_tol) { centered = true; break; }

      // Once the barrier weight is large, the center may sit between two
      // representable iterates and the decrement saturates above center_tol
      // while x dithers by one ulp. Three successive iterations without a
      // halving of the best decrement mean we are at that floor: the point
      // is as centered as doubles allow.
      if (dec2 < 0.5 * best_dec2) {
        best_dec2 = dec2;
        stagnant = 0;
      } else if (++stagnant >= 3) {
        centered = dec2 < 1e-4;
        break;
      }

      // Step direction in the metric of the current factor. Its eigenvalues
      // nu give both the feasibility range (1 + a*nu > 0) and the barrier
      // change logdet F(x+a*delta) - logdet F(x) = sum log1p(a*nu_i), which
      // stays accurate to machine precision even when F itself has
      // eigenvalues ~ n/t; differencing logdets directly loses ~eps*t and
      // stalls the final centering rounds.
      CMat df = CMat::Zero(n, n);
      for (Index i = 0; i < m; ++i) df += delta(i) * lmi.fi[i];
      Eigen::SelfAdjointEigenSolver<CMat> des(fac.w.adjoint() * df * fac.w);
      if (des.info() != Eigen::Success) { centered = false; break; }
      const RVec nu = des.eigenvalues();
      double alpha = 1.0;
      if (nu(0) < 0.0) alpha = std::min(1.0, -0.99 / nu(0));

      const double dir_cost = cost.dot(delta);
      bool moved = false;
      while (alpha > 1e-14) {
        double dlog = 0.0;
        bool inside = true;
        for (Index i = 0; i < n; ++i) {
          const double z = alpha * nu(i);
          if (z <= -1.0) { inside = false; break; }
          dlog += std::log1p(z);
        }
        if (inside && t * alpha * dir_cost - dlog <= -0.25 * alpha * dec2) {
          Factorized trial;
          if (trial.factor(lmi.eval(x + alpha * delta))) {
            x += alpha * delta;
            fac = trial;
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (trace)
        std::fprintf(stderr, "sdp outer=%d it=%d t=%.3e dec2=%.3e alpha=%.3e moved=%d\n",
                     outer, it, t, dec2, alpha, int(moved));
      if (!moved) { centered = (dec2 < 1e-4); break; }  // accept mild stalls late on
    }

    if (!centered) {
      // could not center at this barrier weight; return the last certified point
      if (have_centered) return best;
      best.x = x;
      best.objective = cost.dot(x);
      best.gap = static_cast<double>(n) / t;
      best.min_eigenvalue = fac.min_eig;
      best.newton_steps = total_newton;
      best.status = SdpStatus::stalled;
      return best;
    }

    // certified duality gap at the centered iterate: Z = mu F^-1, gap = n*mu
    const double mu = 1.0 / t;
    best.x = x;
    best.objective = cost.dot(x);
    best.gap = static_cast<double>(n) * mu;
    best.min_eigenvalue = fac.min_eig;
    best.newton_steps = total_newton;
    double dres = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double tr = (fac.w.adjoint() * lmi.fi[i] * fac.w).trace().real();
      dres = std::max(dres, std::abs(cost(i) - mu * tr));
    }
    best.dual_residual = dres;
    have_centered = true;

    if (best.gap <= opts.gap_tol) {
      best.status = SdpStatus::optimal;
      return best;
    }
    t *= opts.mu_shrink;
  }

  best.status = SdpStatus::iteration_limit;
  return best;
}

}  // namespace qmb
