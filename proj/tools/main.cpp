#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmb/errors.hpp"
#include "qmb/models.hpp"
#include "qmb/serialize.hpp"
#include "qmb/sweep.hpp"

namespace {

using nlohmann::json;

int exit_code(qmb::ErrorKind kind) {
  switch (kind) {
    case qmb::ErrorKind::input:
    case qmb::ErrorKind::validation: return 2;
    case qmb::ErrorKind::parse: return 3;
    case qmb::ErrorKind::resource: return 4;
    case qmb::ErrorKind::solver: return 5;
    case qmb::ErrorKind::internal: return 1;
  }
  return 1;
}

// Where the channel under study comes from: a built-in model or a document.
struct Source {
  std::string model;
  double eta = 0.0;
  double phi0 = 0.0;
  bool unitary_limit = false;
  std::string channel_file;
};

void add_source_options(CLI::App* cmd, Source& src) {
  auto* model = cmd->add_option(
      "--model", src.model,
      "Built-in model: depolarizing, dephasing, spontaneous_emission, "
      "lossy_interferometer");
  auto* eta = cmd->add_option("--eta", src.eta, "Noise strength in [0, 1]");
  cmd->add_flag("--unitary-limit", src.unitary_limit,
                "Allow eta = 1 (noiseless limit; bounds degenerate)");
  cmd->add_option("--phi0", src.phi0, "Phase point the channel is frozen at");
  auto* file =
      cmd->add_option("--channel", src.channel_file, "Channel JSON document path");
  model->needs(eta);
  eta->needs(model);
  file->excludes(model);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qmb::Error::input("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

qmb::Channel load_channel(const Source& src) {
  if (!src.channel_file.empty()) return qmb::channel_from_json(slurp(src.channel_file));
  if (src.model.empty())
    throw qmb::Error::input("provide either --model with --eta, or --channel");
  const auto kind = qmb::model_from_string(src.model);
  if (!kind)
    throw qmb::Error::input(
        "unknown model \"" + src.model +
        "\" (expected depolarizing, dephasing, spontaneous_emission or "
        "lossy_interferometer)");
  return qmb::build_model(*kind, src.eta, src.phi0, src.unitary_limit);
}

int cmd_validate(const std::string& path) {
  const qmb::Channel ch = qmb::channel_from_json(slurp(path));
  std::cout << qmb::validate(ch).summary() << "\n";
  return 0;
}

int cmd_bound(const Source& src, const std::string& method, bool as_json) {
  const qmb::Channel ch = load_channel(src);
  const bool do_cs = method == "cs" || method == "both";
  const bool do_ce = method == "ce" || method == "both";
  if (!do_cs && !do_ce)
    throw qmb::Error::input("--method must be one of cs, ce, both");

  json doc;
  doc["method"] = method;
  if (!src.model.empty()) {
    doc["model"] = src.model;
    doc["eta"] = src.eta;
  }

  qmb::CSResult cs;
  qmb::CEResult ce;
  if (do_cs) {
    cs = qmb::cs_bound(ch);
    doc["cs"] = json::parse(qmb::to_json(cs));
  }
  if (do_ce) {
    ce = qmb::ce_sdp_bound(ch);
    doc["ce"] = json::parse(qmb::to_json(ce));
  }

  if (as_json) {
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  char line[160];
  if (do_cs) {
    if (cs.applicable) {
      std::snprintf(line, sizeof(line), "cs: bound_const = %.12g   dphi_N >= %.12g / sqrt(N)",
                    cs.bound_const, cs.bound_const);
      std::cout << line << "\n";
    } else {
      std::cout << "cs: not applicable (" << qmb::to_string(cs.classification)
                << "; no two-point mixture along the tangent)\n";
    }
  }
  if (do_ce) {
    if (ce.feasible) {
      std::snprintf(line, sizeof(line), "ce: bound_const = %.12g   dphi_N >= %.12g / sqrt(N)",
                    ce.bound_const, ce.bound_const);
      std::cout << line << "\n";
      if (src.model == "lossy_interferometer") {
        std::snprintf(line, sizeof(line), "ce: enhancement over classical phase noise = %.4g",
                      ce.bound_const * std::sqrt(src.eta));
        std::cout << line << "\n";
      }
    } else {
      std::cout << "ce: extension constraint infeasible; standard scaling not "
                   "certified (Heisenberg scaling not excluded)\n";
    }
  }
  return 0;
}

int cmd_sweep(const Source& src, long n_max, int oracle_n_max, int restarts,
              std::uint64_t seed, const std::string& out_path) {
  const qmb::Channel ch = load_channel(src);
  qmb::SweepOptions opts;
  opts.n_max = n_max;
  opts.oracle_n_max = oracle_n_max;
  opts.oracle.restarts = restarts;
  opts.oracle.seed = seed;

  const qmb::SweepResult res = qmb::run_sweep(ch, opts, qmb::default_tolerances(),
                                              qmb::limits_from_env());
  for (const std::string& note : res.notices) std::cerr << "note: " << note << "\n";

  const std::string csv = qmb::sweep_csv(res);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path);
    if (!out) throw qmb::Error::input("cannot open output file: " + out_path);
    out << csv;
  }
  return 0;
}

int cmd_oracle(const Source& src, int n, int restarts, std::uint64_t seed) {
  const qmb::Channel ch = load_channel(src);
  qmb::OracleOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;

  const qmb::OracleResult res =
      qmb::optimize_input(ch, n, opts, qmb::default_tolerances(), qmb::limits_from_env());
  std::cout << qmb::to_json(res) << "\n";

  // Certificate sandwich against the bounds, kept off stdout so the JSON
  // stays machine-readable.
  char line[200];
  const qmb::CEResult ce = qmb::ce_sdp_bound(ch);
  if (ce.feasible) {
    std::snprintf(line, sizeof(line), "oracle F_N = %.12g <= 4 N t_opt = %.12g (extension bound)",
                  res.f, 4.0 * n * ce.t_opt);
    std::cerr << line << "\n";
  }
  const qmb::CSResult cs = qmb::cs_bound(ch);
  if (cs.applicable) {
    std::snprintf(line, sizeof(line), "oracle F_N = %.12g <= N F_cl = %.12g (simulation bound)",
                  res.f, n * cs.f_cl);
    std::cerr << line << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on phase-estimation uncertainty for noisy quantum channels"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check a channel JSON document");
  std::string validate_path;
  validate->add_option("path", validate_path, "Channel JSON document")->required();

  auto* bound = app.add_subcommand("bound", "Asymptotic uncertainty bounds dphi >= c/sqrt(N)");
  Source bound_src;
  add_source_options(bound, bound_src);
  std::string method = "both";
  bound->add_option("--method", method, "cs, ce or both (default both)");
  bool bound_json = false;
  bound->add_flag("--json", bound_json, "Emit the full result records as JSON");

  auto* sweep = app.add_subcommand("sweep", "CSV of bounds versus probe count N");
  Source sweep_src;
  add_source_options(sweep, sweep_src);
  long n_max = 100;
  sweep->add_option("--n-max", n_max, "Largest probe count N (default 100)");
  int sweep_oracle_n_max = 0;
  sweep->add_option("--oracle-n-max", sweep_oracle_n_max,
                    "Also run the achievability oracle for n up to this (default off)");
  int sweep_restarts = 8;
  sweep->add_option("--restarts", sweep_restarts, "Oracle restarts (default 8)");
  std::uint64_t sweep_seed = 12345;
  sweep->add_option("--seed", sweep_seed, "Oracle seed (default 12345)");
  std::string out_path;
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "Achievable n-probe QFI certificate (JSON)");
  Source oracle_src;
  add_source_options(oracle, oracle_src);
  int oracle_n = 1;
  oracle->add_option("--n", oracle_n, "Probe count (default 1)");
  int oracle_restarts = 32;
  oracle->add_option("--restarts", oracle_restarts, "Ascent restarts (default 32)");
  std::uint64_t oracle_seed = 12345;
  oracle->add_option("--seed", oracle_seed, "Restart seed (default 12345)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_path);
    if (bound->parsed()) return cmd_bound(bound_src, method, bound_json);
    if (sweep->parsed())
      return cmd_sweep(sweep_src, n_max, sweep_oracle_n_max, sweep_restarts, sweep_seed,
                       out_path);
    if (oracle->parsed()) return cmd_oracle(oracle_src, oracle_n, oracle_restarts, oracle_seed);
  } catch (const qmb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
