#include "qmb/ce.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <utility>

#include "qmb/errors.hpp"

namespace qmb {

namespace {

// Kt_i = Kdot_i - i sum_j h_ij K_j: derivative of the Kraus family rotated by
// u(phi) = exp(-i h (phi - phi0)), evaluated at phi0.
std::vector<CMat> rotated_derivatives(const Channel& ch, const CMat& h) {
  const Index k = ch.kraus_count();
  std::vector<CMat> kt(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    CMat m = ch.kraus_dot[static_cast<std::size_t>(i)];
    for (Index j = 0; j < k; ++j)
      if (h(i, j) != 0.0) m -= ci * h(i, j) * ch.kraus[static_cast<std::size_t>(j)];
    kt[static_cast<std::size_t>(i)] = std::move(m);
  }
  return kt;
}

CMat stack_blocks(const std::vector<CMat>& blocks) {
  const Index k = static_cast<Index>(blocks.size());
  const Index d2 = blocks[0].rows();
  const Index d1 = blocks[0].cols();
  CMat c(k * d2, d1);
  for (Index i = 0; i < k; ++i) c.block(i * d2, 0, d2, d1) = blocks[static_cast<std::size_t>(i)];
  return c;
}

// The beta = 0 family in stacked form: C(x) = c0 + sum_a x_a ca_a, with
// lambda_max(alpha) = |C|^2.
struct AffineFamily {
  CMat c0;
  std::vector<CMat> ca;
};

AffineFamily stacked_family(const Channel& ch, const BetaSolution& bs) {
  const Index k = ch.kraus_count();
  AffineFamily fam;
  fam.c0 = stack_blocks(rotated_derivatives(ch, bs.particular.mat));
  fam.ca.reserve(bs.nullspace.size());
  for (const CMat& dir : bs.nullspace) {
    std::vector<CMat> blocks(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
      CMat m = CMat::Zero(ch.d_out, ch.d_in);
      for (Index j = 0; j < k; ++j)
        if (dir(i, j) != 0.0) m -= ci * dir(i, j) * ch.kraus[static_cast<std::size_t>(j)];
      blocks[static_cast<std::size_t>(i)] = std::move(m);
    }
    fam.ca.push_back(stack_blocks(blocks));
  }
  return fam;
}

// Embed a stacked block column C into the symmetric off-diagonal position of
// an n x n frame, n = d1 + rows(C).
void set_offdiagonal(CMat& f, const CMat& c, Index d1) {
  f.block(d1, 0, c.rows(), d1) = c;
  f.block(0, d1, d1, c.rows()) = c.adjoint();
}

double top_eigpair(const CMat& herm, CVec* vec) {
  Eigen::SelfAdjointEigenSolver<CMat> es(herm);
  if (es.info() != Eigen::Success)
    throw Error::internal("top_eigpair: eigensolver failed to converge");
  const Index last = herm.rows() - 1;
  if (vec) *vec = es.eigenvectors().col(last);
  return es.eigenvalues()(last);
}

}  // namespace

KrausGenerator::KrausGenerator(const CMat& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw Error::input("KrausGenerator: matrix must be square");
  if (!has_finite_entries(m)) throw Error::input("KrausGenerator: non-finite entries");
  if (hermiticity_defect(m) > 10.0 * tol.herm)
    throw Error::input("KrausGenerator: matrix is not Hermitian");
  mat = hermitian_part(m);
}

KrausGenerator KrausGenerator::zero(Index k) {
  KrausGenerator g;
  g.mat = CMat::Zero(k, k);
  return g;
}

AlphaBeta alpha_beta(const Channel& ch, const KrausGenerator& h, const Tolerances& tol) {
  require_valid(ch, tol);
  const Index k = ch.kraus_count();
  if (h.dim() != k)
    throw Error::input("alpha_beta: generator must be k x k for k Kraus operators");

  const auto kt = rotated_derivatives(ch, h.mat);
  CMat alpha = CMat::Zero(ch.d_in, ch.d_in);
  CMat beta = CMat::Zero(ch.d_in, ch.d_in);
  for (Index i = 0; i < k; ++i) {
    alpha += kt[static_cast<std::size_t>(i)].adjoint() * kt[static_cast<std::size_t>(i)];
    beta += ci * (kt[static_cast<std::size_t>(i)].adjoint() * ch.kraus[static_cast<std::size_t>(i)]);
  }
  // alpha is Hermitian by construction; beta up to the derivative defect of
  // the family (d/dphi of the completeness sum).
  return {hermitian_part(alpha), hermitian_part(beta)};
}

std::optional<BetaSolution> beta_constraint_solve(const Channel& ch, const Tolerances& tol) {
  require_valid(ch, tol);
  const Index k = ch.kraus_count();
  const Index d1 = ch.d_in;

  CMat rhs_m = CMat::Zero(d1, d1);
  for (Index q = 0; q < k; ++q)
    rhs_m += ci * (ch.kraus_dot[static_cast<std::size_t>(q)].adjoint() *
                   ch.kraus[static_cast<std::size_t>(q)]);
  rhs_m = hermitian_part(rhs_m);

  // Real least squares over the Hermitian basis of h: column a holds the
  // vectorized image sum_ij (H_a)_ij K_i' K_j.
  const std::vector<CMat> hb = hermitian_basis(k);
  const Index nb = static_cast<Index>(hb.size());
  const Index rows = 2 * d1 * d1;

  const auto vec_real = [d1, rows](const CMat& m) {
    RVec v(rows);
    Index p = 0;
    for (Index c = 0; c < d1; ++c)
      for (Index r = 0; r < d1; ++r) {
        v(p) = m(r, c).real();
        v(p + d1 * d1) = m(r, c).imag();
        ++p;
      }
    return v;
  };

  std::vector<CMat> gram(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      gram[static_cast<std::size_t>(i * k + j)] =
          ch.kraus[static_cast<std::size_t>(i)].adjoint() * ch.kraus[static_cast<std::size_t>(j)];

  RMat a(rows, nb);
  for (Index idx = 0; idx < nb; ++idx) {
    const CMat& h = hb[static_cast<std::size_t>(idx)];
    CMat m = CMat::Zero(d1, d1);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j)
        if (h(i, j) != 0.0) m += h(i, j) * gram[static_cast<std::size_t>(i * k + j)];
    a.col(idx) = vec_real(m);
  }
  const RVec b = vec_real(rhs_m);

  Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec sig = svd.singularValues();
  const double smax = sig.size() > 0 ? sig(0) : 0.0;
  const double cut = std::max(smax, 1.0) * 1e-12;

  Index rank = 0;
  for (Index i = 0; i < sig.size(); ++i)
    if (sig(i) > cut) ++rank;

  RVec x = RVec::Zero(nb);
  const RVec ub = svd.matrixU().transpose() * b;
  for (Index i = 0; i < rank; ++i) x += (ub(i) / sig(i)) * svd.matrixV().col(i);

  BetaSolution out;
  out.residual = (a * x - b).norm();
  out.rhs_norm = hermitian_norm(rhs_m);
  if (out.residual > tol.res * std::max(1.0, out.rhs_norm)) return std::nullopt;

  CMat h0 = CMat::Zero(k, k);
  for (Index idx = 0; idx < nb; ++idx) h0 += x(idx) * hb[static_cast<std::size_t>(idx)];
  out.particular = KrausGenerator(h0, tol);

  out.nullspace.reserve(static_cast<std::size_t>(nb - rank));
  for (Index c = rank; c < nb; ++c) {
    CMat dir = CMat::Zero(k, k);
    for (Index idx = 0; idx < nb; ++idx)
      dir += svd.matrixV()(idx, c) * hb[static_cast<std::size_t>(idx)];
    out.nullspace.push_back(std::move(dir));
  }
  return out;
}

CMat assemble_lmi(const Channel& ch, const KrausGenerator& h, double t, const Tolerances& tol) {
  require_valid(ch, tol);
  const Index k = ch.kraus_count();
  if (h.dim() != k) throw Error::input("assemble_lmi: generator must be k x k");
  if (!(t >= 0.0)) throw Error::input("assemble_lmi: t must be nonnegative");

  const double s = std::sqrt(t);
  const auto kt = rotated_derivatives(ch, h.mat);
  const Index n = ch.d_in + k * ch.d_out;
  CMat a = CMat::Zero(n, n);
  a.topLeftCorner(ch.d_in, ch.d_in) = s * CMat::Identity(ch.d_in, ch.d_in);
  for (Index i = 0; i < k; ++i) {
    const Index r0 = ch.d_in + i * ch.d_out;
    a.block(r0, r0, ch.d_out, ch.d_out) = s * CMat::Identity(ch.d_out, ch.d_out);
    a.block(r0, 0, ch.d_out, ch.d_in) = kt[static_cast<std::size_t>(i)];
    a.block(0, r0, ch.d_in, ch.d_out) = kt[static_cast<std::size_t>(i)].adjoint();
  }
  return a;
}

CEResult ce_sdp_bound(const Channel& ch, const Tolerances& tol, const SdpOptions& opts) {
  const auto bs = beta_constraint_solve(ch, tol);

  CEResult res;
  if (!bs) {
    res.feasible = false;
    res.t_opt = std::numeric_limits<double>::quiet_NaN();
    res.alpha_norm = std::numeric_limits<double>::quiet_NaN();
    res.beta_norm = std::numeric_limits<double>::quiet_NaN();
    res.bound_const = 0.0;
    res.solver.status = "beta_infeasible";
    return res;
  }

  res.feasible = true;
  res.solver.nullspace_dim = static_cast<int>(bs->nullspace.size());
  const Index m = static_cast<Index>(bs->nullspace.size());

  KrausGenerator h = bs->particular;
  if (m == 0) {
    // The constraint pins h completely; t = |alpha(h0)| without optimization.
    res.solver.status = "fixed_generator";
  } else {
    const AffineFamily fam = stacked_family(ch, *bs);
    const Index d1 = ch.d_in;
    const Index n = d1 + ch.kraus_count() * ch.d_out;

    LinearMatrixInequality lmi;
    lmi.f0 = CMat::Zero(n, n);
    set_offdiagonal(lmi.f0, fam.c0, d1);
    lmi.fi.reserve(static_cast<std::size_t>(1 + m));
    lmi.fi.push_back(CMat::Identity(n, n));
    for (const CMat& ca : fam.ca) {
      CMat fa = CMat::Zero(n, n);
      set_offdiagonal(fa, ca, d1);
      lmi.fi.push_back(std::move(fa));
    }

    RVec cost = RVec::Zero(1 + m);
    cost(0) = 1.0;
    RVec x0 = RVec::Zero(1 + m);
    x0(0) = operator_norm(fam.c0) * 1.5 + 1.0;

    const SdpResult sr = sdp_minimize(cost, lmi, x0, opts);
    const double s_opt = sr.x(0);
    res.solver.iterations = sr.newton_steps;
    res.solver.gap = 2.0 * std::abs(s_opt) * sr.gap + sr.gap * sr.gap;  // gap on t = s^2
    res.solver.dual_residual = sr.dual_residual;

    CMat h_ip = bs->particular.mat;
    for (Index a = 0; a < m; ++a) h_ip += sr.x(1 + a) * bs->nullspace[static_cast<std::size_t>(a)];

    if (sr.status == SdpStatus::optimal) {
      res.solver.status = "interior_point";
      h = KrausGenerator(h_ip, tol);
    } else {
      res.solver.status = sr.status == SdpStatus::stalled ? "interior_point_stalled"
                                                          : "interior_point_iteration_limit";
      // Cross-check against the slower subgradient route and keep the better h.
      const SubgradientResult sg = ce_subgradient_bound(ch, 40000, tol);
      const double t_ip = hermitian_norm(alpha_beta(ch, KrausGenerator(h_ip, tol), tol).alpha);
      if (sg.t < t_ip) {
        res.solver.status += "+subgradient";
        h = sg.h;
      } else {
        h = KrausGenerator(h_ip, tol);
      }
    }
  }

  const AlphaBeta ab = alpha_beta(ch, h, tol);
  res.alpha_norm = hermitian_norm(ab.alpha);
  res.beta_norm = hermitian_norm(ab.beta);
  res.t_opt = res.alpha_norm;
  res.h_opt = h;
  res.bound_const = res.alpha_norm > 0.0
                        ? 0.5 / std::sqrt(res.alpha_norm)
                        : std::numeric_limits<double>::infinity();
  return res;
}

double finite_n_bound(const Channel& ch, const KrausGenerator& h, long n, const Tolerances& tol) {
  if (n < 1) throw Error::input("finite_n_bound: n must be >= 1");
  const AlphaBeta ab = alpha_beta(ch, h, tol);
  const double alpha_norm = hermitian_norm(ab.alpha);
  const double beta_norm = hermitian_norm(ab.beta);
  const double nn = static_cast<double>(n);
  return 4.0 * (nn * alpha_norm + nn * (nn - 1.0) * beta_norm * beta_norm);
}

SubgradientResult ce_subgradient_bound(const Channel& ch, int iterations, const Tolerances& tol) {
  if (iterations < 1) throw Error::input("ce_subgradient_bound: iterations must be >= 1");
  const auto bs = beta_constraint_solve(ch, tol);
  if (!bs)
    throw Error::input("ce_subgradient_bound: the beta = 0 constraint is infeasible");

  const AffineFamily fam = stacked_family(ch, *bs);
  const Index m = static_cast<Index>(fam.ca.size());

  SubgradientResult out;
  if (m == 0) {
    out.t = top_eigpair(CMat(fam.c0.adjoint() * fam.c0), nullptr);
    out.h = bs->particular;
    return out;
  }

  RVec x = RVec::Zero(m);
  RVec x_best = x;
  double f_best = std::numeric_limits<double>::infinity();
  double delta0 = 0.0;

  for (int it = 0; it < iterations; ++it) {
    CMat c = fam.c0;
    for (Index a = 0; a < m; ++a) c += x(a) * fam.ca[static_cast<std::size_t>(a)];
    CVec v;
    const double f = top_eigpair(CMat(c.adjoint() * c), &v);
    if (f < f_best) {
      f_best = f;
      x_best = x;
    }
    if (it == 0) delta0 = std::max(0.05 * f, 1e-12);

    const CVec cv = c * v;
    RVec g(m);
    for (Index a = 0; a < m; ++a)
      g(a) = 2.0 * cv.dot(fam.ca[static_cast<std::size_t>(a)] * v).real();
    const double gn2 = g.squaredNorm();
    out.iterations = it + 1;
    if (gn2 < 1e-28) break;

    // Polyak step toward a decaying target below the incumbent.
    const double target = f_best - delta0 / std::sqrt(it + 1.0);
    x -= ((f - target) / gn2) * g;
  }

  out.t = f_best;
  CMat h = bs->particular.mat;
  for (Index a = 0; a < m; ++a) h += x_best(a) * bs->nullspace[static_cast<std::size_t>(a)];
  out.h = KrausGenerator(h, tol);
  return out;
}

}  // namespace qmb
