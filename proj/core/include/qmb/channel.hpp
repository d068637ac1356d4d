#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmb/config.hpp"
#include "qmb/linalg.hpp"

namespace qmb {

/// Unit-trace positive-semidefinite state.
struct DensityMatrix {
  Index dim = 0;
  CMat mat;

  /// Validates trace 1, hermiticity and positivity before accepting.
  static DensityMatrix from_matrix(const CMat& m,
                                   const Tolerances& tol = default_tolerances());
  /// |psi><psi| from a (nonzero, will be normalized) amplitude vector.
  static DensityMatrix pure(const CVec& psi);
};

/// A parameter-dependent quantum channel, frozen at one parameter point:
/// the Kraus operators K_i(phi0) together with their derivatives d/dphi
/// K_i(phi)|phi0. Operators are d_out x d_in.
struct Channel {
  Index d_in = 0;
  Index d_out = 0;
  std::vector<CMat> kraus;
  std::vector<CMat> kraus_dot;
  double phi0 = 0.0;

  Index kraus_count() const { return static_cast<Index>(kraus.size()); }
};

/// Defect measurements behind Channel's invariants. `valid` is the AND of
/// every individual check at the supplied tolerances.
struct ValidationReport {
  double completeness_defect = 0.0;   // |sum K_i' K_i - 1|
  double derivative_defect = 0.0;     // |d/dphi sum K_i' K_i|
  double li_margin = 0.0;             // smallest Gram eigenvalue of {K_i}
  double li_cutoff = 0.0;             // threshold the margin is compared to
  double choi_min_eigenvalue = 0.0;
  bool finite_entries = true;
  bool shapes_consistent = true;
  bool valid = false;

  std::string summary() const;
};

/// Choi matrix P = sum_i |K_i><K_i| (unnormalized |I>, so Tr_out P = 1)
/// and its parameter derivative D = sum_i |Kdot_i><K_i| + |K_i><Kdot_i|.
struct ChoiPair {
  CMat p;
  CMat d;
  Index d_in = 0;
  Index d_out = 0;
};

/// Compose a phase-independent Kraus set with the unitary encoding
/// U(phi) = exp(i * generator * phi): K_i(phi) = K_i U(phi), evaluated at
/// phi0. Throws a validation error when `kraus_noise` is not a complete,
/// linearly independent set, and an input error when `generator` is not
/// Hermitian.
Channel phase_encode(const std::vector<CMat>& kraus_noise, const CMat& generator,
                     double phi0, const Tolerances& tol = default_tolerances());

ValidationReport validate(const Channel& ch,
                          const Tolerances& tol = default_tolerances());

/// Throws a validation error carrying the report summary when invalid.
void require_valid(const Channel& ch, const Tolerances& tol = default_tolerances());

ChoiPair choi(const Channel& ch, const Tolerances& tol = default_tolerances());

/// Checks P >= 0, Tr_out P = 1 and Tr D = 0 at the given tolerances.
void require_valid_choi(const ChoiPair& cp,
                        const Tolerances& tol = default_tolerances());

DensityMatrix apply(const Channel& ch, const DensityMatrix& rho,
                    const Tolerances& tol = default_tolerances());

struct TensorApplyResult {
  DensityMatrix rho;
  std::optional<CMat> drho;  // Hermitian, traceless; present when requested
};

/// Applies the n-fold tensor power of the channel to an n-probe state and
/// (optionally) returns the parameter derivative of the output via the
/// product rule. Throws a resource error when (d_out^n)^2 exceeds the
/// tensor budget.
TensorApplyResult tensor_apply(const Channel& ch, int n, const DensityMatrix& rho,
                               bool want_derivative,
                               const Limits& limits = default_limits(),
                               const Tolerances& tol = default_tolerances());

/// Reduces a (possibly linearly dependent) Kraus set to an equivalent
/// independent one by a unitary mix: eigendecompose the Gram matrix
/// G_ij = Tr(K_i' K_j) and drop directions with eigenvalue < tol.li * max.
/// The derivative list is mixed by the same coefficients.
std::pair<std::vector<CMat>, std::vector<CMat>> canonicalize_kraus(
    const std::vector<CMat>& kraus, const std::vector<CMat>& kraus_dot,
    const Tolerances& tol = default_tolerances());

/// Precomputed site-by-site propagator for tensor powers of a channel.
/// Applies the channel to one probe at a time, carrying the parameter
/// derivative along; cheaper than materializing all k^n Kraus strings.
class NProbePropagator {
public:
  NProbePropagator(const Channel& ch, int n,
                   const Limits& limits = default_limits(),
                   const Tolerances& tol = default_tolerances());

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  int probes() const { return n_; }

  /// rho is dim_in x dim_in; returns (output, d output / d phi).
  std::pair<CMat, CMat> apply_with_derivative(const CMat& rho) const;
  CMat apply(const CMat& rho) const;

private:
  int n_ = 0;
  Index dim_in_ = 0;
  Index dim_out_ = 0;
  // site_ops_[m][i]: 1_left (x) K_i (x) 1_right at site m, plus derivative.
  // Held sparse: each has only nnz(K_i) * left * right entries, so the dense
  // state matrices are the only allocations the budget needs to gate.
  std::vector<std::vector<SpCMat>> site_ops_;
  std::vector<std::vector<SpCMat>> site_dops_;
};

}  // namespace qmb
