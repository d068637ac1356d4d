#include "qmb/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qmb/errors.hpp"

namespace qmb {

CMat pauli_x() {
  CMat s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

CMat pauli_y() {
  CMat s(2, 2);
  s << 0, -ci, ci, 0;
  return s;
}

CMat pauli_z() {
  CMat s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

bool has_finite_entries(const CMat& m) {
  return m.allFinite();
}

double hermiticity_defect(const CMat& m) {
  if (m.rows() != m.cols()) throw Error::input("hermiticity check on non-square matrix");
  const double scale = std::max(1.0, operator_norm(m));
  return operator_norm(m - m.adjoint()) / scale;
}

bool is_hermitian(const CMat& m, double rel_tol) {
  return hermiticity_defect(m) <= rel_tol;
}

double operator_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

double hermitian_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double min_eigenvalue(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMat hermitian_part(const CMat& m) {
  return 0.5 * (m + m.adjoint());
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat unitary_from_generator(const CMat& g, double phi) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(g));
  CVec phase(g.rows());
  for (Index i = 0; i < g.rows(); ++i)
    phase(i) = std::exp(ci * es.eigenvalues()(i) * phi);
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

CVec kraus_vec(const CMat& k) {
  CVec v(k.rows() * k.cols());
  for (Index a = 0; a < k.rows(); ++a)
    for (Index j = 0; j < k.cols(); ++j)
      v(a * k.cols() + j) = k(a, j);
  return v;
}

CMat kraus_unvec(const CVec& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw Error::input("kraus_unvec: size mismatch");
  CMat k(rows, cols);
  for (Index a = 0; a < rows; ++a)
    for (Index j = 0; j < cols; ++j)
      k(a, j) = v(a * cols + j);
  return k;
}

CMat partial_trace_out(const CMat& m, Index d_out, Index d_in) {
  if (m.rows() != d_out * d_in || m.cols() != d_out * d_in)
    throw Error::input("partial_trace_out: dimension mismatch");
  CMat r = CMat::Zero(d_in, d_in);
  for (Index a = 0; a < d_out; ++a)
    r += m.block(a * d_in, a * d_in, d_in, d_in);
  return r;
}

std::vector<CMat> hermitian_basis(Index k) {
  std::vector<CMat> basis;
  basis.reserve(static_cast<std::size_t>(k * k));
  for (Index i = 0; i < k; ++i) {
    CMat e = CMat::Zero(k, k);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      CMat re = CMat::Zero(k, k);
      re(i, j) = 1.0;
      re(j, i) = 1.0;
      basis.push_back(re);
      CMat im = CMat::Zero(k, k);
      im(i, j) = ci;
      im(j, i) = -ci;
      basis.push_back(im);
    }
  }
  return basis;
}

}  // namespace qmb
