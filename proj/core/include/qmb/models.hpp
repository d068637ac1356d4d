#pragma once

#include <optional>
#include <string>

#include "qmb/channel.hpp"

namespace qmb {

enum class ModelKind {
  depolarizing,
  dephasing,
  spontaneous_emission,
  lossy_interferometer,
};

std::string to_string(ModelKind kind);
std::optional<ModelKind> model_from_string(const std::string& name);

/// Named noise channel at strength eta, composed with the standard phase
/// encoding U(phi) = exp(i sigma_z phi / 2) on the probe. eta = 1 is the
/// noiseless (unitary or isometric) limit and must be requested explicitly
/// via `unitary_limit`; vanished Kraus directions are then dropped.
Channel build_model(ModelKind kind, double eta, double phi0 = 0.0,
                    bool unitary_limit = false,
                    const Tolerances& tol = default_tolerances());

/// Closed-form asymptotic constants c in dphi >= c / sqrt(N) for eta in
/// [0, 1), where known: nullopt when the method does not apply to the
/// model; +infinity at eta = 0 where no phase information survives.
std::optional<double> reference_cs_bound(ModelKind kind, double eta);
std::optional<double> reference_ce_bound(ModelKind kind, double eta);

/// Kraus-rotation generator h attaining the channel-extension optimum,
/// where a closed form is known; nullopt at eta values where the Kraus
/// count degenerates (eta = 1, and eta = 0 for the lossy interferometer).
std::optional<CMat> reference_h(ModelKind kind, double eta);

}  // namespace qmb
