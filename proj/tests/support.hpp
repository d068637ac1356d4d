#pragma once

#include <random>
#include <utility>
#include <vector>

#include "qmb/channel.hpp"
#include "qmb/linalg.hpp"

namespace qmb_test {

using qmb::Channel;
using qmb::CMat;
using qmb::CVec;
using qmb::Index;
using qmb::RVec;

inline CMat randn_cmat(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = std::complex<double>(g(rng), g(rng));
  return m;
}

inline CMat randn_hermitian(Index d, std::mt19937_64& rng) {
  const CMat m = randn_cmat(d, d, rng);
  return 0.5 * (m + m.adjoint());
}

// k Kraus operators (d_out x d_in) of a random CPTP map: orthonormal columns
// of a (k * d_out) x d_in Gaussian give sum K_i' K_i = 1. Requires
// k * d_out >= d_in.
inline std::vector<CMat> random_kraus(Index d_in, Index d_out, Index k,
                                      std::mt19937_64& rng) {
  const CMat big = randn_cmat(k * d_out, d_in, rng);
  Eigen::HouseholderQR<CMat> qr(big);
  const CMat q = qr.householderQ() * CMat::Identity(k * d_out, d_in);
  std::vector<CMat> kraus;
  for (Index i = 0; i < k; ++i) kraus.push_back(q.block(i * d_out, 0, d_out, d_in));
  return kraus;
}

// Random noise set composed with a random Hermitian phase generator.
inline Channel random_phase_channel(Index d_in, Index d_out, Index k,
                                    std::uint64_t seed, double phi0 = 0.0) {
  std::mt19937_64 rng(seed);
  const auto kraus = random_kraus(d_in, d_out, k, rng);
  const CMat gen = randn_hermitian(d_in, rng);
  return qmb::phase_encode(kraus, gen, phi0);
}

inline CVec random_state(Index dim, std::mt19937_64& rng) {
  CVec v = randn_cmat(dim, 1, rng);
  v.normalize();
  return v;
}

// n-fold tensor power applied through explicit Kraus strings: an
// independent (exponential-cost) reference for the site-sweep propagator.
inline std::pair<CMat, CMat> apply_strings(const Channel& ch, int n, const CMat& rho) {
  const Index k = ch.kraus_count();
  long strings = 1;
  for (int i = 0; i < n; ++i) strings *= k;

  Index dim_out = 1;
  for (int i = 0; i < n; ++i) dim_out *= ch.d_out;

  CMat out = CMat::Zero(dim_out, dim_out);
  CMat dout = CMat::Zero(dim_out, dim_out);
  for (long s = 0; s < strings; ++s) {
    long rem = s;
    std::vector<Index> idx(n);
    for (int m = 0; m < n; ++m) {
      idx[m] = static_cast<Index>(rem % k);
      rem /= k;
    }
    CMat op = CMat::Identity(1, 1);
    for (int m = 0; m < n; ++m) op = qmb::kron(op, ch.kraus[idx[m]]);
    CMat dop = CMat::Zero(dim_out, op.cols());
    for (int md = 0; md < n; ++md) {
      CMat term = CMat::Identity(1, 1);
      for (int m = 0; m < n; ++m)
        term = qmb::kron(term, m == md ? ch.kraus_dot[idx[m]] : ch.kraus[idx[m]]);
      dop += term;
    }
    out += op * rho * op.adjoint();
    dout += dop * rho * op.adjoint() + op * rho * dop.adjoint();
  }
  return {out, dout};
}

// Single-qubit QFI from the Bloch vector: F = |rdot|^2 + (r.rdot)^2/(1-r^2),
// with the second term absent for pure states. Independent of the SLD path.
inline double qubit_qfi(const CMat& rho, const CMat& drho) {
  const CMat sig[3] = {qmb::pauli_x(), qmb::pauli_y(), qmb::pauli_z()};
  double r[3], rdot[3];
  for (int i = 0; i < 3; ++i) {
    r[i] = (rho * sig[i]).trace().real();
    rdot[i] = (drho * sig[i]).trace().real();
  }
  const double r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
  const double rr = r[0] * rdot[0] + r[1] * rdot[1] + r[2] * rdot[2];
  double f = rdot[0] * rdot[0] + rdot[1] * rdot[1] + rdot[2] * rdot[2];
  if (r2 < 1.0 - 1e-9) f += rr * rr / (1.0 - r2);
  return f;
}

// Contraction of the Choi matrix against an input state; validates the
// vectorization convention used by the library.
inline CMat apply_from_choi(const CMat& p, Index d_out, Index d_in, const CMat& rho) {
  CMat out = CMat::Zero(d_out, d_out);
  for (Index a = 0; a < d_out; ++a)
    for (Index b = 0; b < d_out; ++b)
      for (Index j = 0; j < d_in; ++j)
        for (Index l = 0; l < d_in; ++l)
          out(a, b) += p(a * d_in + j, b * d_in + l) * rho(j, l);
  return out;
}

}  // namespace qmb_test
