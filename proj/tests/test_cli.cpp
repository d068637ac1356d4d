#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "qmb/models.hpp"
#include "qmb/serialize.hpp"

#ifdef _WIN32
#error "the CLI tests drive the binary through a POSIX shell"
#else
#include <sys/wait.h>
#include <unistd.h>
#endif

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("qmb_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

RunResult run(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path out = scratch_dir() / ("out" + std::to_string(counter));
  const fs::path err = scratch_dir() / ("err" + std::to_string(counter));
  ++counter;
  const std::string cmd = env + (env.empty() ? "" : " ") + QMB_CLI_PATH + " " + args +
                          " > " + out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  RunResult res;
  res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  return res;
}

const std::string kExample = std::string(QMB_DATA_DIR) + "/dephasing_eta08.json";

}  // namespace

TEST_CASE("validate: a good document reports its defects and exits 0") {
  const RunResult r = run("validate " + kExample);
  CHECK(r.code == 0);
  CHECK(r.out.find("completeness defect") != std::string::npos);
}

TEST_CASE("validate: broken completeness exits 2 with the defect on stderr") {
  json doc = json::parse(
      qmb::channel_to_json(qmb::build_model(qmb::ModelKind::dephasing, 0.8)));
  for (auto& row : doc["kraus"][0]["re"])
    for (auto& cell : row) cell = cell.get<double>() * 1.2;
  const fs::path p = write_file("broken.json", doc.dump());
  const RunResult r = run("validate " + p.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("defect") != std::string::npos);
}

TEST_CASE("validate: schema violations exit 3") {
  json doc = json::parse(
      qmb::channel_to_json(qmb::build_model(qmb::ModelKind::dephasing, 0.8)));
  doc.erase("kraus_dot");
  const fs::path p = write_file("noderiv.json", doc.dump());
  CHECK(run("validate " + p.string()).code == 3);

  const fs::path q = write_file("garbage.json", "{ not json");
  CHECK(run("validate " + q.string()).code == 3);
}

TEST_CASE("validate: a missing file exits 2") {
  const RunResult r = run("validate /nonexistent/channel.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("bound: text mode prints both constants") {
  const RunResult r = run("bound --model dephasing --eta 0.8");
  CHECK(r.code == 0);
  CHECK(r.out.find("cs: bound_const = 0.75") != std::string::npos);
  CHECK(r.out.find("ce: bound_const = 0.75") != std::string::npos);
}

TEST_CASE("bound: inapplicable simulation bound is reported, not an error") {
  const RunResult r = run("bound --model spontaneous_emission --eta 0.5");
  CHECK(r.code == 0);
  CHECK(r.out.find("cs: not applicable") != std::string::npos);
  CHECK(r.out.find("ce: bound_const = 0.5") != std::string::npos);
}

TEST_CASE("bound: the lossy model reports its enhancement factor") {
  const RunResult r = run("bound --model lossy_interferometer --eta 0.62 --method ce");
  CHECK(r.code == 0);
  CHECK(r.out.find("enhancement over classical phase noise = 0.6164") !=
        std::string::npos);
}

TEST_CASE("bound: --json emits one machine-readable record") {
  const RunResult r = run("bound --model dephasing --eta 0.8 --json");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("method") == "both");
  CHECK(j.at("model") == "dephasing");
  CHECK(j.at("eta") == 0.8);
  CHECK(j.at("cs").at("bound_const").get<double>() ==
        doctest::Approx(0.75).epsilon(1e-8));
  CHECK(j.at("ce").at("bound_const").get<double>() ==
        doctest::Approx(0.75).epsilon(1e-8));
}

TEST_CASE("bound: a channel document is accepted in place of a model") {
  const RunResult r = run("bound --channel " + kExample + " --method cs");
  CHECK(r.code == 0);
  CHECK(r.out.find("cs: bound_const = 0.75") != std::string::npos);
}

TEST_CASE("bound: the noiseless limit reports infeasibility, not failure") {
  const RunResult r =
      run("bound --model dephasing --eta 1 --unitary-limit --method ce");
  CHECK(r.code == 0);
  CHECK(r.out.find("extension constraint infeasible") != std::string::npos);
  CHECK(r.out.find("Heisenberg scaling not excluded") != std::string::npos);
}

TEST_CASE("bound: argument errors") {
  CHECK(run("bound --model nosuchmodel --eta 0.5").code == 2);
  CHECK(run("bound --model dephasing --eta 1.0").code == 2);   // needs the flag
  CHECK(run("bound --model dephasing --eta 0.5 --method qq").code == 2);
  CHECK(run("bound --model dephasing").code == 3);             // --eta required
  CHECK(run("bound --frobnicate").code == 3);
  CHECK(run("bound --channel " + kExample + " --model dephasing --eta 0.5").code == 3);
}

TEST_CASE("help exits 0") {
  const RunResult top = run("--help");
  CHECK(top.code == 0);
  CHECK(top.out.find("bound") != std::string::npos);
  CHECK(run("sweep --help").code == 0);
}

TEST_CASE("sweep: csv on stdout and via --out") {
  const RunResult r = run("sweep --model dephasing --eta 0.8 --n-max 6");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,dphi_ce,dphi_heisenberg,dphi_classical,dphi_oracle", 0) == 0);

  const fs::path p = scratch_dir() / "sweep.csv";
  const RunResult w =
      run("sweep --model dephasing --eta 0.8 --n-max 6 --out " + p.string());
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  CHECK(slurp(p) == r.out);

  std::istringstream ss(r.out);
  std::string line;
  int lines = 0;
  while (std::getline(ss, line)) ++lines;
  CHECK(lines == 7);
}

TEST_CASE("oracle: json record, certificate sandwich, determinism") {
  const std::string args =
      "oracle --model dephasing --eta 0.8 --n 1 --restarts 4 --seed 7";
  const RunResult a = run(args);
  CHECK(a.code == 0);
  const json j = json::parse(a.out);
  CHECK(j.at("best_qfi").get<double>() == doctest::Approx(0.64).epsilon(1e-6));
  CHECK(a.err.find("extension bound") != std::string::npos);
  CHECK(a.err.find("simulation bound") != std::string::npos);

  const RunResult b = run(args);
  CHECK(b.out == a.out);
}

TEST_CASE("a tiny tensor budget turns into exit 4") {
  const RunResult r = run("oracle --model dephasing --eta 0.8 --n 2 --restarts 1",
                          "QMB_BUDGET=10");
  CHECK(r.code == 4);
  CHECK(r.err.find("budget") != std::string::npos);
}
