#include "qmb/qfi.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "qmb/errors.hpp"

namespace qmb {

namespace {

double qfi_raw(const CMat& rho, const CMat& drho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho);
  if (es.info() != Eigen::Success)
    throw Error::internal("qfi: eigensolver failed to converge");
  const RVec lam = es.eigenvalues();
  const CMat m = es.eigenvectors().adjoint() * drho * es.eigenvectors();
  const double cutoff = 1e-12 * rho.trace().real();

  const Index d = rho.rows();
  double f = 0.0;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const double s = lam(i) + lam(j);
      if (s > cutoff) f += 2.0 * std::norm(m(i, j)) / s;
    }
  return f;
}

}  // namespace

double qfi(const DensityMatrix& rho, const CMat& drho, const Tolerances& tol) {
  if (drho.rows() != rho.dim || drho.cols() != rho.dim)
    throw Error::input("qfi: drho dimension does not match the state");
  if (!has_finite_entries(drho)) throw Error::input("qfi: drho has non-finite entries");
  if (hermiticity_defect(drho) > 10.0 * tol.herm)
    throw Error::input("qfi: drho is not Hermitian");
  return qfi_raw(rho.mat, hermitian_part(drho));
}

double crlb(double fisher, double nu) {
  if (!(nu > 0.0)) throw Error::input("crlb: nu must be positive");
  // No information resolves the phase: infinite-uncertainty sentinel.
  if (!(fisher > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(nu * fisher);
}

namespace {

// Unit-normalized amplitudes from a 2*dim real coordinate vector.
CVec amplitudes(const RVec& x, Index dim) {
  CVec psi(dim);
  for (Index i = 0; i < dim; ++i) psi(i) = std::complex<double>(x(i), x(dim + i));
  const double n = psi.norm();
  if (n == 0.0) throw Error::internal("optimize_input: zero amplitude vector");
  return psi / n;
}

double objective(const NProbePropagator& prop, const RVec& x) {
  const CVec psi = amplitudes(x, prop.dim_in());
  const CMat rho = psi * psi.adjoint();
  const auto [out, dout] = prop.apply_with_derivative(rho);
  return qfi_raw(out, dout);
}

}  // namespace

OracleResult optimize_input(const Channel& ch, int n, const OracleOptions& opts,
                            const Tolerances& tol, const Limits& limits) {
  require_valid(ch, tol);
  if (n < 1) throw Error::input("optimize_input: n must be >= 1");
  if (opts.restarts < 1) throw Error::input("optimize_input: restarts must be >= 1");

  const NProbePropagator prop(ch, n, limits, tol);
  const Index dim = prop.dim_in();
  const Index nr = 2 * dim;

  OracleResult best;
  best.f = -std::numeric_limits<double>::infinity();
  best.restarts = opts.restarts;

  for (int r = 0; r < opts.restarts; ++r) {
    std::seed_seq sseq{static_cast<std::uint32_t>(opts.seed & 0xffffffffu),
                       static_cast<std::uint32_t>(opts.seed >> 32),
                       static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(sseq);
    std::normal_distribution<double> gauss(0.0, 1.0);

    RVec x(nr);
    for (Index i = 0; i < nr; ++i) x(i) = gauss(rng);
    x.normalize();

    double f = objective(prop, x);
    bool stationary = false;

    for (int it = 0; it < opts.max_iters; ++it) {
      ++best.iterations;

      // Central-difference gradient; the objective is normalization
      // invariant, so no explicit tangent projection is needed.
      RVec g(nr);
      for (Index i = 0; i < nr; ++i) {
        RVec xp = x, xm = x;
        xp(i) += opts.grad_step;
        xm(i) -= opts.grad_step;
        g(i) = (objective(prop, xp) - objective(prop, xm)) / (2.0 * opts.grad_step);
      }
      const double gn = g.norm();
      if (gn < 1e-12) {
        stationary = true;
        break;
      }
      g /= gn;

      double step = 0.5;
      bool moved = false;
      while (step >= opts.min_step) {
        RVec xc = x + step * g;
        xc.normalize();
        const double fc = objective(prop, xc);
        if (fc > f + opts.f_tol * std::max(1.0, std::abs(f))) {
          x = xc;
          f = fc;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) {
        stationary = true;
        break;
      }
    }

    if (f > best.f) {
      best.f = f;
      best.input = amplitudes(x, dim);
      best.best_restart = r;
      best.converged = stationary;
    }
  }
  return best;
}

}  // namespace qmb
