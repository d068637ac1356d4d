#include "qmb/models.hpp"

#include <cmath>
#include <limits>

#include "qmb/errors.hpp"

namespace qmb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw Error::input("model: eta must lie in [0, 1]");
}

std::vector<CMat> drop_vanished(std::vector<CMat> ops) {
  std::vector<CMat> kept;
  for (auto& op : ops)
    if (op.norm() > 1e-14) kept.push_back(std::move(op));
  return kept;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::depolarizing: return "depolarizing";
    case ModelKind::dephasing: return "dephasing";
    case ModelKind::spontaneous_emission: return "spontaneous_emission";
    case ModelKind::lossy_interferometer: return "lossy_interferometer";
  }
  throw Error::internal("to_string: unknown model kind");
}

std::optional<ModelKind> model_from_string(const std::string& name) {
  if (name == "depolarizing") return ModelKind::depolarizing;
  if (name == "dephasing") return ModelKind::dephasing;
  if (name == "spontaneous_emission") return ModelKind::spontaneous_emission;
  if (name == "lossy_interferometer") return ModelKind::lossy_interferometer;
  return std::nullopt;
}

Channel build_model(ModelKind kind, double eta, double phi0, bool unitary_limit,
                    const Tolerances& tol) {
  check_eta(eta);
  if (eta == 1.0 && !unitary_limit)
    throw Error::input(
        "model: eta = 1 is the noiseless limit; pass the unitary-limit flag to build it");
  const CMat id = CMat::Identity(2, 2);
  const CMat generator = 0.5 * pauli_z();
  std::vector<CMat> noise;

  switch (kind) {
    case ModelKind::depolarizing: {
      noise.push_back(std::sqrt((1.0 + 3.0 * eta) / 4.0) * id);
      noise.push_back(std::sqrt((1.0 - eta) / 4.0) * pauli_x());
      noise.push_back(std::sqrt((1.0 - eta) / 4.0) * pauli_y());
      noise.push_back(std::sqrt((1.0 - eta) / 4.0) * pauli_z());
      break;
    }
    case ModelKind::dephasing: {
      noise.push_back(std::sqrt((1.0 + eta) / 2.0) * id);
      noise.push_back(std::sqrt((1.0 - eta) / 2.0) * pauli_z());
      break;
    }
    case ModelKind::spontaneous_emission: {
      CMat k0 = CMat::Zero(2, 2);
      k0(0, 0) = 1.0;
      k0(1, 1) = std::sqrt(eta);
      CMat k1 = CMat::Zero(2, 2);
      k1(0, 1) = std::sqrt(1.0 - eta);
      noise.push_back(k0);
      noise.push_back(k1);
      break;
    }
    case ModelKind::lossy_interferometer: {
      // Single photon over two arms; a third output level absorbs the loss.
      CMat lose_a = CMat::Zero(3, 2);
      lose_a(2, 0) = std::sqrt(1.0 - eta);
      CMat lose_b = CMat::Zero(3, 2);
      lose_b(2, 1) = std::sqrt(1.0 - eta);
      CMat keep = CMat::Zero(3, 2);
      keep(0, 0) = std::sqrt(eta);
      keep(1, 1) = std::sqrt(eta);
      noise.push_back(lose_a);
      noise.push_back(lose_b);
      noise.push_back(keep);
      break;
    }
  }
  return phase_encode(drop_vanished(std::move(noise)), generator, phi0, tol);
}

namespace {

void check_eta_open(double eta) {
  if (!(eta >= 0.0 && eta < 1.0))
    throw Error::input("model reference: eta must lie in [0, 1)");
}

}  // namespace

std::optional<double> reference_cs_bound(ModelKind kind, double eta) {
  check_eta_open(eta);
  switch (kind) {
    case ModelKind::depolarizing:
      if (eta == 0.0) return kInf;
      return std::sqrt((1.0 - eta) * (1.0 + 3.0 * eta)) / (2.0 * eta);
    case ModelKind::dephasing:
      if (eta == 0.0) return kInf;
      return std::sqrt(1.0 - eta * eta) / eta;
    case ModelKind::spontaneous_emission:
    case ModelKind::lossy_interferometer:
      return std::nullopt;
  }
  throw Error::internal("reference_cs_bound: unknown model kind");
}

std::optional<double> reference_ce_bound(ModelKind kind, double eta) {
  check_eta_open(eta);
  if (eta == 0.0) return kInf;
  switch (kind) {
    case ModelKind::depolarizing:
      return std::sqrt((1.0 + eta - 2.0 * eta * eta) / (2.0 * eta * eta));
    case ModelKind::dephasing:
      return std::sqrt(1.0 - eta * eta) / eta;
    case ModelKind::spontaneous_emission:
      return 0.5 * std::sqrt((1.0 - eta) / eta);
    case ModelKind::lossy_interferometer:
      return std::sqrt((1.0 - eta) / eta);
  }
  throw Error::internal("reference_ce_bound: unknown model kind");
}

std::optional<CMat> reference_h(ModelKind kind, double eta) {
  check_eta_open(eta);
  switch (kind) {
    case ModelKind::depolarizing: {
      const double c = 2.0 * (1.0 - eta) * (1.0 + 2.0 * eta);
      CMat h = CMat::Zero(4, 4);
      h(0, 3) = std::sqrt((1.0 - eta) * (1.0 + 3.0 * eta)) / c;
      h(3, 0) = h(0, 3);
      h(1, 2) = -ci * (1.0 + eta) / c;
      h(2, 1) = ci * (1.0 + eta) / c;
      return h;
    }
    case ModelKind::dephasing: {
      return CMat(pauli_x() / (2.0 * std::sqrt(1.0 - eta * eta)));
    }
    case ModelKind::spontaneous_emission: {
      CMat h = CMat::Zero(2, 2);
      h(0, 0) = 0.5;
      h(1, 1) = -(1.0 + eta) / (2.0 * (1.0 - eta));
      return h;
    }
    case ModelKind::lossy_interferometer: {
      if (eta == 0.0) return std::nullopt;
      CMat h = CMat::Zero(3, 3);
      h(0, 0) = 1.0 / (2.0 * (1.0 - eta));
      h(1, 1) = -1.0 / (2.0 * (1.0 - eta));
      return h;
    }
  }
  throw Error::internal("reference_h: unknown model kind");
}

}  // namespace qmb
