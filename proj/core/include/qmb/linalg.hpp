#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <vector>

namespace qmb {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using SpCMat = Eigen::SparseMatrix<std::complex<double>>;
using Index = Eigen::Index;

inline constexpr std::complex<double> ci{0.0, 1.0};

CMat pauli_x();
CMat pauli_y();
CMat pauli_z();

bool has_finite_entries(const CMat& m);

/// Hermiticity defect |M - M^dag| relative to max(1, |M|), operator norms.
double hermiticity_defect(const CMat& m);
bool is_hermitian(const CMat& m, double rel_tol);

/// Largest singular value.
double operator_norm(const CMat& m);

/// Largest |eigenvalue| of a Hermitian matrix (input is hermitized first).
double hermitian_norm(const CMat& m);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMat& m);

CMat hermitian_part(const CMat& m);

CMat kron(const CMat& a, const CMat& b);

/// exp(i * G * phi) for Hermitian G, via eigendecomposition.
CMat unitary_from_generator(const CMat& g, double phi);

/// Row-major vectorization |K> = (K (x) 1)|I>, |I> = sum_j |j>|j>
/// (unnormalized): component (a*cols + j) = K(a, j). The output space is the
/// first tensor factor, the input space the second.
CVec kraus_vec(const CMat& k);

/// Inverse of kraus_vec: reshape a length rows*cols vector into a matrix.
CMat kraus_unvec(const CVec& v, Index rows, Index cols);

/// Partial trace over the first (output) factor of a (d_out*d_in)-dim square
/// matrix; returns a d_in x d_in matrix.
CMat partial_trace_out(const CMat& m, Index d_out, Index d_in);

/// Real-orthogonal (unnormalized) basis of k x k Hermitian matrices:
/// E_ii, then E_ij + E_ji and i*(E_ij - E_ji) for i < j. Size k^2. Any
/// Hermitian matrix is a unique real combination of these.
std::vector<CMat> hermitian_basis(Index k);

}  // namespace qmb
