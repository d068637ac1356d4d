#include "qmb/channel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "qmb/errors.hpp"

namespace qmb {

namespace {

// Gram matrix G_ij = Tr(K_i' K_j) = <K_i|K_j> of a Kraus list.
CMat gram_matrix(const std::vector<CMat>& kraus) {
  const Index k = static_cast<Index>(kraus.size());
  CMat g(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      g(i, j) = (kraus[i].adjoint() * kraus[j]).trace();
  return g;
}

Index checked_pow_dim(Index base, int n, Index cap, const char* what) {
  Index dim = 1;
  for (int m = 0; m < n; ++m) {
    if (dim > cap / base)
      throw Error::resource(std::string(what) + ": dimension overflows the tensor budget");
    dim *= base;
  }
  return dim;
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const CMat& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error::input("density matrix must be square and nonempty");
  if (!has_finite_entries(m))
    throw Error::validation("density matrix has non-finite entries");
  if (hermiticity_defect(m) > tol.herm * 10)
    throw Error::validation("density matrix is not Hermitian");
  if (std::abs(m.trace() - std::complex<double>(1.0, 0.0)) > 1e-12)
    throw Error::validation("density matrix trace differs from 1 by more than 1e-12");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (lo < -tol.psd * std::max(1.0, hi))
    throw Error::validation("density matrix has a negative eigenvalue beyond tolerance");
  return DensityMatrix{m.rows(), hermitian_part(m)};
}

DensityMatrix DensityMatrix::pure(const CVec& psi) {
  const double nrm = psi.norm();
  if (!(nrm > 0.0) || !psi.allFinite())
    throw Error::input("pure state amplitudes must be finite and nonzero");
  CVec u = psi / nrm;
  return DensityMatrix{u.size(), u * u.adjoint()};
}

Channel phase_encode(const std::vector<CMat>& kraus_noise, const CMat& generator,
                     double phi0, const Tolerances& tol) {
  if (kraus_noise.empty()) throw Error::input("phase_encode: empty Kraus list");
  const Index d_out = kraus_noise.front().rows();
  const Index d_in = kraus_noise.front().cols();
  for (const CMat& k : kraus_noise)
    if (k.rows() != d_out || k.cols() != d_in)
      throw Error::input("phase_encode: inconsistent Kraus shapes");
  if (generator.rows() != d_in || generator.cols() != d_in)
    throw Error::input("phase_encode: generator must be d_in x d_in");
  if (hermiticity_defect(generator) > tol.herm)
    throw Error::input("phase_encode: generator is not Hermitian");

  CMat comp = CMat::Zero(d_in, d_in);
  for (const CMat& k : kraus_noise) comp += k.adjoint() * k;
  const double defect = operator_norm(comp - CMat::Identity(d_in, d_in));
  if (defect > tol.tp) {
    std::ostringstream oss;
    oss << "phase_encode: Kraus completeness defect |sum K'K - 1| = " << defect;
    throw Error::validation(oss.str());
  }

  const CMat u = unitary_from_generator(generator, phi0);
  const CMat gu = ci * hermitian_part(generator) * u;  // d/dphi e^{iG phi} at phi0

  Channel ch;
  ch.d_in = d_in;
  ch.d_out = d_out;
  ch.phi0 = phi0;
  ch.kraus.reserve(kraus_noise.size());
  ch.kraus_dot.reserve(kraus_noise.size());
  for (const CMat& k : kraus_noise) {
    ch.kraus.push_back(k * u);
    ch.kraus_dot.push_back(k * gu);
  }
  require_valid(ch, tol);
  return ch;
}

ValidationReport validate(const Channel& ch, const Tolerances& tol) {
  ValidationReport rep;
  rep.shapes_consistent = !ch.kraus.empty() && ch.kraus.size() == ch.kraus_dot.size() &&
                          ch.d_in > 0 && ch.d_out > 0;
  if (rep.shapes_consistent) {
    for (const CMat& k : ch.kraus)
      if (k.rows() != ch.d_out || k.cols() != ch.d_in) rep.shapes_consistent = false;
    for (const CMat& k : ch.kraus_dot)
      if (k.rows() != ch.d_out || k.cols() != ch.d_in) rep.shapes_consistent = false;
  }
  if (!rep.shapes_consistent) {
    rep.valid = false;
    return rep;
  }

  rep.finite_entries = true;
  for (const CMat& k : ch.kraus) rep.finite_entries &= has_finite_entries(k);
  for (const CMat& k : ch.kraus_dot) rep.finite_entries &= has_finite_entries(k);
  if (!rep.finite_entries) {
    rep.valid = false;
    return rep;
  }

  CMat comp = CMat::Zero(ch.d_in, ch.d_in);
  CMat dcomp = CMat::Zero(ch.d_in, ch.d_in);
  for (Index i = 0; i < ch.kraus_count(); ++i) {
    comp += ch.kraus[i].adjoint() * ch.kraus[i];
    dcomp += ch.kraus_dot[i].adjoint() * ch.kraus[i] + ch.kraus[i].adjoint() * ch.kraus_dot[i];
  }
  rep.completeness_defect = operator_norm(comp - CMat::Identity(ch.d_in, ch.d_in));
  rep.derivative_defect = operator_norm(dcomp);

  const CMat g = gram_matrix(ch.kraus);
  Eigen::SelfAdjointEigenSolver<CMat> ges(g, Eigen::EigenvaluesOnly);
  rep.li_margin = ges.eigenvalues()(0);
  rep.li_cutoff = tol.li * std::max(1.0, ges.eigenvalues()(ges.eigenvalues().size() - 1));

  // P >= 0 is automatic for a Kraus-built Choi matrix; recompute as a guard.
  CMat p = CMat::Zero(ch.d_out * ch.d_in, ch.d_out * ch.d_in);
  for (const CMat& k : ch.kraus) {
    const CVec v = kraus_vec(k);
    p += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<CMat> pes(hermitian_part(p), Eigen::EigenvaluesOnly);
  rep.choi_min_eigenvalue = pes.eigenvalues()(0);
  const double pmax = pes.eigenvalues()(pes.eigenvalues().size() - 1);

  rep.valid = rep.completeness_defect <= tol.tp && rep.derivative_defect <= tol.tp &&
              rep.li_margin > rep.li_cutoff &&
              rep.choi_min_eigenvalue >= -tol.psd * std::max(1.0, pmax);
  return rep;
}

std::string ValidationReport::summary() const {
  std::ostringstream oss;
  oss.precision(3);
  oss << std::scientific;
  if (!shapes_consistent) {
    oss << "inconsistent Kraus shapes or empty operator lists";
    return oss.str();
  }
  if (!finite_entries) {
    oss << "non-finite matrix entries";
    return oss.str();
  }
  oss << "completeness defect " << completeness_defect
      << ", derivative defect " << derivative_defect
      << ", linear-independence margin " << li_margin << " (cutoff " << li_cutoff << ")"
      << ", Choi min eigenvalue " << choi_min_eigenvalue;
  return oss.str();
}

void require_valid(const Channel& ch, const Tolerances& tol) {
  const ValidationReport rep = validate(ch, tol);
  if (!rep.valid)
    throw Error::validation("channel failed validation: " + rep.summary());
}

ChoiPair choi(const Channel& ch, const Tolerances& tol) {
  require_valid(ch, tol);
  const Index dim = ch.d_out * ch.d_in;
  CMat p = CMat::Zero(dim, dim);
  CMat d = CMat::Zero(dim, dim);
  for (Index i = 0; i < ch.kraus_count(); ++i) {
    const CVec v = kraus_vec(ch.kraus[i]);
    const CVec w = kraus_vec(ch.kraus_dot[i]);
    p += v * v.adjoint();
    d += w * v.adjoint() + v * w.adjoint();
  }
  return ChoiPair{hermitian_part(p), hermitian_part(d), ch.d_in, ch.d_out};
}

void require_valid_choi(const ChoiPair& cp, const Tolerances& tol) {
  const Index dim = cp.d_out * cp.d_in;
  if (cp.p.rows() != dim || cp.p.cols() != dim || cp.d.rows() != dim || cp.d.cols() != dim)
    throw Error::input("choi pair: dimension mismatch");
  if (hermiticity_defect(cp.p) > tol.herm * 10 || hermiticity_defect(cp.d) > tol.herm * 10)
    throw Error::validation("choi pair: matrices not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(cp.p), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (lo < -tol.psd * std::max(1.0, hi))
    throw Error::validation("choi pair: P has a negative eigenvalue beyond tolerance");
  const double tp_defect =
      operator_norm(partial_trace_out(cp.p, cp.d_out, cp.d_in) - CMat::Identity(cp.d_in, cp.d_in));
  if (tp_defect > tol.tp * 10)
    throw Error::validation("choi pair: Tr_out P differs from identity");
  const double dscale = std::max(1.0, hermitian_norm(cp.d));
  if (std::abs(cp.d.trace()) > tol.tp * dscale)
    throw Error::validation("choi pair: derivative is not traceless");
}

DensityMatrix apply(const Channel& ch, const DensityMatrix& rho, const Tolerances& tol) {
  require_valid(ch, tol);
  if (rho.dim != ch.d_in) throw Error::input("apply: state dimension does not match d_in");
  CMat out = CMat::Zero(ch.d_out, ch.d_out);
  for (const CMat& k : ch.kraus) out += k * rho.mat * k.adjoint();
  return DensityMatrix::from_matrix(hermitian_part(out), tol);
}

std::pair<std::vector<CMat>, std::vector<CMat>> canonicalize_kraus(
    const std::vector<CMat>& kraus, const std::vector<CMat>& kraus_dot,
    const Tolerances& tol) {
  if (kraus.empty() || kraus.size() != kraus_dot.size())
    throw Error::input("canonicalize_kraus: operator lists empty or mismatched");
  const CMat g = gram_matrix(kraus);
  Eigen::SelfAdjointEigenSolver<CMat> es(g);
  const auto& ev = es.eigenvalues();
  const double cutoff = tol.li * std::max(1.0, ev(ev.size() - 1));
  std::vector<CMat> k2, kd2;
  // Column a of the eigenvector matrix mixes the original operators into an
  // orthogonal set; directions below the cutoff carry no weight in the Choi
  // matrix and are dropped.
  for (Index a = 0; a < ev.size(); ++a) {
    if (ev(a) < cutoff) continue;
    CMat kk = CMat::Zero(kraus.front().rows(), kraus.front().cols());
    CMat kd = kk;
    for (Index i = 0; i < static_cast<Index>(kraus.size()); ++i) {
      const std::complex<double> w = es.eigenvectors()(i, a);
      kk += w * kraus[i];
      kd += w * kraus_dot[i];
    }
    k2.push_back(std::move(kk));
    kd2.push_back(std::move(kd));
  }
  if (k2.empty()) throw Error::validation("canonicalize_kraus: all operators below cutoff");
  return {std::move(k2), std::move(kd2)};
}

namespace {

// 1_left (x) k (x) 1_right as a sparse matrix.
SpCMat site_embed(const CMat& k, Index left, Index right) {
  std::vector<Eigen::Triplet<std::complex<double>>> trips;
  trips.reserve(static_cast<std::size_t>(left * right * k.rows() * k.cols()));
  for (Index l = 0; l < left; ++l)
    for (Index i = 0; i < k.rows(); ++i)
      for (Index j = 0; j < k.cols(); ++j) {
        if (k(i, j) == 0.0) continue;
        for (Index r = 0; r < right; ++r)
          trips.emplace_back((l * k.rows() + i) * right + r,
                             (l * k.cols() + j) * right + r, k(i, j));
      }
  SpCMat m(left * k.rows() * right, left * k.cols() * right);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

NProbePropagator::NProbePropagator(const Channel& ch, int n, const Limits& limits,
                                   const Tolerances& tol)
    : n_(n) {
  if (n < 1) throw Error::input("tensor power requires n >= 1");
  require_valid(ch, tol);

  // Budget gate: largest matrix we may allocate is peak_dim^2 complex entries.
  const double root = std::sqrt(static_cast<double>(limits.tensor_budget));
  const Index cap = static_cast<Index>(root);
  const Index base = std::max(ch.d_in, ch.d_out);
  const Index peak = checked_pow_dim(base, n, std::numeric_limits<Index>::max() / 4, "tensor power");
  if (peak > cap) {
    std::ostringstream oss;
    oss << "tensor power " << n << " needs " << peak << "^2 complex entries; "
        << "tensor budget is " << limits.tensor_budget
        << " entries (QMB_BUDGET to override)";
    throw Error::resource(oss.str());
  }
  dim_in_ = checked_pow_dim(ch.d_in, n, cap, "tensor power");
  dim_out_ = checked_pow_dim(ch.d_out, n, cap, "tensor power");

  site_ops_.resize(n);
  site_dops_.resize(n);
  Index left = 1;                       // already-converted sites: d_out each
  Index right = dim_in_ / ch.d_in;      // pending sites: d_in each
  for (int m = 0; m < n; ++m) {
    for (Index i = 0; i < ch.kraus_count(); ++i) {
      site_ops_[m].push_back(site_embed(ch.kraus[i], left, right));
      site_dops_[m].push_back(site_embed(ch.kraus_dot[i], left, right));
    }
    left *= ch.d_out;
    if (m + 1 < n) right /= ch.d_in;
  }
}

std::pair<CMat, CMat> NProbePropagator::apply_with_derivative(const CMat& rho) const {
  if (rho.rows() != dim_in_ || rho.cols() != dim_in_)
    throw Error::input("tensor apply: state dimension mismatch");
  CMat r = rho;
  CMat d = CMat::Zero(rho.rows(), rho.cols());
  for (int m = 0; m < n_; ++m) {
    const Index next = site_ops_[m][0].rows();
    CMat r2 = CMat::Zero(next, next);
    CMat d2 = CMat::Zero(next, next);
    for (size_t i = 0; i < site_ops_[m].size(); ++i) {
      const SpCMat& l = site_ops_[m][i];
      const SpCMat& ld = site_dops_[m][i];
      const CMat lr = l * r;
      const CMat ldn = l * d;
      const CMat ldr = ld * r;
      r2.noalias() += lr * l.adjoint();
      d2.noalias() += ldn * l.adjoint();
      d2.noalias() += ldr * l.adjoint();
      d2.noalias() += lr * ld.adjoint();
    }
    r = std::move(r2);
    d = std::move(d2);
  }
  return {std::move(r), std::move(d)};
}

CMat NProbePropagator::apply(const CMat& rho) const {
  if (rho.rows() != dim_in_ || rho.cols() != dim_in_)
    throw Error::input("tensor apply: state dimension mismatch");
  CMat r = rho;
  for (int m = 0; m < n_; ++m) {
    const Index next = site_ops_[m][0].rows();
    CMat r2 = CMat::Zero(next, next);
    for (const SpCMat& l : site_ops_[m]) {
      const CMat lr = l * r;
      r2.noalias() += lr * l.adjoint();
    }
    r = std::move(r2);
  }
  return r;
}

TensorApplyResult tensor_apply(const Channel& ch, int n, const DensityMatrix& rho,
                               bool want_derivative, const Limits& limits,
                               const Tolerances& tol) {
  NProbePropagator prop(ch, n, limits, tol);
  if (rho.dim != prop.dim_in())
    throw Error::input("tensor_apply: state dimension must be d_in^n");
  TensorApplyResult res;
  if (want_derivative) {
    auto [r, d] = prop.apply_with_derivative(rho.mat);
    res.rho = DensityMatrix::from_matrix(hermitian_part(r), tol);
    res.drho = hermitian_part(d);
  } else {
    res.rho = DensityMatrix::from_matrix(hermitian_part(prop.apply(rho.mat)), tol);
  }
  return res;
}

}  // namespace qmb
