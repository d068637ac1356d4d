#include <doctest.h>

#include <limits>

#include "qmb/errors.hpp"
#include "qmb/linalg.hpp"
#include "support.hpp"

using namespace qmb;

TEST_CASE("pauli algebra and kron agree with hand values") {
  CHECK((pauli_x() * pauli_y() - ci * pauli_z()).norm() == doctest::Approx(0.0));
  CHECK((pauli_z() * pauli_z() - CMat::Identity(2, 2)).norm() == doctest::Approx(0.0));

  const CMat k = kron(pauli_x(), pauli_z());
  CHECK(k.rows() == 4);
  CHECK(k(0, 2).real() == doctest::Approx(1.0));
  CHECK(k(1, 3).real() == doctest::Approx(-1.0));
  CHECK(k(0, 0).real() == doctest::Approx(0.0));

  // Mixed-shape blocks: (2x3) (x) (3x2) lands in 6x6.
  std::mt19937_64 rng(7);
  const CMat a = qmb_test::randn_cmat(2, 3, rng);
  const CMat b = qmb_test::randn_cmat(3, 2, rng);
  const CMat ab = kron(a, b);
  CHECK(ab.rows() == 6);
  CHECK(ab.cols() == 6);
  CHECK(std::abs(ab(4, 3) - a(1, 1) * b(1, 1)) < 1e-14);
}

TEST_CASE("unitary_from_generator exponentiates sigma_z/2") {
  const double phi = 0.7;
  const CMat u = unitary_from_generator(0.5 * pauli_z(), phi);
  CHECK(std::abs(u(0, 0) - std::exp(ci * (phi / 2.0))) < 1e-14);
  CHECK(std::abs(u(1, 1) - std::exp(-ci * (phi / 2.0))) < 1e-14);
  CHECK(std::abs(u(0, 1)) < 1e-15);
  CHECK((u * u.adjoint() - CMat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("norms and hermitian helpers") {
  std::mt19937_64 rng(11);
  const CMat m = qmb_test::randn_cmat(4, 4, rng);
  const CMat h = hermitian_part(m);
  CHECK(hermiticity_defect(h) < 1e-15);
  CHECK(is_hermitian(h, 1e-12));
  CHECK_FALSE(is_hermitian(m, 1e-12));

  // For Hermitian arguments both norms agree.
  CHECK(operator_norm(h) == doctest::Approx(hermitian_norm(h)).epsilon(1e-12));

  CMat diag = CMat::Zero(3, 3);
  diag(0, 0) = -2.0;
  diag(1, 1) = 0.5;
  diag(2, 2) = 1.0;
  CHECK(hermitian_norm(diag) == doctest::Approx(2.0));
  CHECK(min_eigenvalue(diag) == doctest::Approx(-2.0));

  CMat inf_mat = CMat::Zero(2, 2);
  inf_mat(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(has_finite_entries(inf_mat));
}

TEST_CASE("kraus_vec round-trips and matches row-major layout") {
  std::mt19937_64 rng(3);
  const CMat k = qmb_test::randn_cmat(3, 2, rng);
  const CVec v = kraus_vec(k);
  REQUIRE(v.size() == 6);
  // Row-major: entry (a, j) at position a * cols + j.
  CHECK(std::abs(v(1 * 2 + 1) - k(1, 1)) < 1e-15);
  CHECK((kraus_unvec(v, 3, 2) - k).norm() < 1e-15);
}

TEST_CASE("partial_trace_out inverts kron structure") {
  std::mt19937_64 rng(5);
  CMat rho_out = qmb_test::randn_hermitian(3, rng);
  CMat rho_in = qmb_test::randn_hermitian(2, rng);
  const CMat joint = kron(rho_out, rho_in);
  const CMat traced = partial_trace_out(joint, 3, 2);
  CHECK((traced - rho_out.trace() * rho_in).norm() < 1e-13);
}

TEST_CASE("hermitian_basis spans Hermitian space with real coefficients") {
  const auto basis = hermitian_basis(3);
  REQUIRE(basis.size() == 9);
  for (const CMat& b : basis) CHECK(hermiticity_defect(b) < 1e-15);

  // Orthogonality in the trace inner product (unnormalized, nonzero).
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a + 1; b < basis.size(); ++b)
      CHECK(std::abs((basis[a].adjoint() * basis[b]).trace()) < 1e-15);
}
