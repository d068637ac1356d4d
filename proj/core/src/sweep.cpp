#include "qmb/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "qmb/errors.hpp"

namespace qmb {

SweepResult run_sweep(const Channel& ch, const SweepOptions& opts, const Tolerances& tol,
                      const Limits& limits) {
  if (opts.n_max < 1) throw Error::input("run_sweep: n_max must be >= 1");

  SweepResult out;
  const CEResult ce = ce_sdp_bound(ch, tol);
  out.ce_const = ce.feasible ? ce.bound_const : std::numeric_limits<double>::quiet_NaN();
  if (!ce.feasible)
    out.notices.push_back(
        "extension constraint infeasible: no standard-scaling bound (column is nan)");

  out.f1 = optimize_input(ch, 1, opts.oracle, tol, limits).f;

  bool oracle_alive = opts.oracle_n_max > 0;
  for (long n = 1; n <= opts.n_max; ++n) {
    SweepRow row;
    row.n = n;
    row.dphi_ce = out.ce_const / std::sqrt(static_cast<double>(n));
    row.dphi_heisenberg = 1.0 / static_cast<double>(n);
    row.dphi_classical = crlb(out.f1, static_cast<double>(n));
    if (oracle_alive && n <= opts.oracle_n_max) {
      try {
        row.dphi_oracle =
            crlb(optimize_input(ch, static_cast<int>(n), opts.oracle, tol, limits).f);
        row.has_oracle = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::resource) throw;
        out.notices.push_back("oracle column stops at n = " + std::to_string(n) + ": " +
                              e.what());
        oracle_alive = false;  // the budget only tightens with n
      }
    }
    out.rows.push_back(row);
  }
  return out;
}

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string sweep_csv(const SweepResult& sweep) {
  std::string csv = "n,dphi_ce,dphi_heisenberg,dphi_classical,dphi_oracle\n";
  for (const SweepRow& r : sweep.rows) {
    csv += std::to_string(r.n);
    csv += ',';
    csv += fmt12(r.dphi_ce);
    csv += ',';
    csv += fmt12(r.dphi_heisenberg);
    csv += ',';
    csv += fmt12(r.dphi_classical);
    csv += ',';
    if (r.has_oracle) csv += fmt12(r.dphi_oracle);
    csv += '\n';
  }
  return csv;
}

long heisenberg_crossover(double ce_const, long n_max) {
  if (!(ce_const > 0.0) || !std::isfinite(ce_const)) return 0;
  for (long n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    if (ce_const / std::sqrt(nn) > 1.0 / nn) return n;
  }
  return 0;
}

}  // namespace qmb
