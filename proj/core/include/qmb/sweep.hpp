#pragma once

#include <string>
#include <vector>

#include "qmb/ce.hpp"
#include "qmb/qfi.hpp"

namespace qmb {

struct SweepOptions {
  long n_max = 100;
  int oracle_n_max = 0;   // compute the oracle column for n up to this (0 = off)
  OracleOptions oracle;   // restarts/seed for the oracle and the f1 reference
};

struct SweepRow {
  long n = 0;
  double dphi_ce = 0.0;          // ce bound_const / sqrt(n); nan when infeasible
  double dphi_heisenberg = 0.0;  // 1 / n
  double dphi_classical = 0.0;   // 1 / sqrt(n * f1): best single-probe strategy
  bool has_oracle = false;
  double dphi_oracle = 0.0;      // crlb of the n-probe oracle QFI
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double ce_const = 0.0;  // nan when the extension constraint is infeasible
  double f1 = 0.0;        // single-probe oracle QFI
  std::vector<std::string> notices;  // e.g. oracle rows skipped over budget
};

SweepResult run_sweep(const Channel& ch, const SweepOptions& opts = {},
                      const Tolerances& tol = default_tolerances(),
                      const Limits& limits = default_limits());

/// Fixed-column CSV with a mandatory header; floats at 12 significant
/// digits; the oracle cell is empty on rows where it was not computed.
std::string sweep_csv(const SweepResult& sweep);

/// Smallest n in [1, n_max] where the standard-scaling bound ce_const /
/// sqrt(n) strictly exceeds the Heisenberg line 1/n; 0 when none does.
long heisenberg_crossover(double ce_const, long n_max);

}  // namespace qmb
