#include <benchmark/benchmark.h>

#include "qmb/ce.hpp"
#include "qmb/cs.hpp"
#include "qmb/models.hpp"
#include "qmb/qfi.hpp"

namespace {

void bm_cs_bound(benchmark::State& state) {
  const qmb::Channel ch = qmb::build_model(qmb::ModelKind::depolarizing, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(qmb::cs_bound(ch));
}
BENCHMARK(bm_cs_bound);

void bm_ce_sdp_bound(benchmark::State& state) {
  const qmb::Channel ch = qmb::build_model(qmb::ModelKind::depolarizing, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(qmb::ce_sdp_bound(ch));
}
BENCHMARK(bm_ce_sdp_bound);

void bm_qfi(benchmark::State& state) {
  const qmb::Channel ch = qmb::build_model(qmb::ModelKind::dephasing, 0.8);
  const int n = static_cast<int>(state.range(0));
  const qmb::NProbePropagator prop(ch, n);
  qmb::CVec psi = qmb::CVec::Ones(prop.dim_in());
  psi.normalize();
  const qmb::CMat rho = psi * psi.adjoint();
  for (auto _ : state) {
    const auto [out, dout] = prop.apply_with_derivative(rho);
    benchmark::DoNotOptimize(qmb::qfi(qmb::DensityMatrix::from_matrix(out), dout));
  }
}
BENCHMARK(bm_qfi)->Arg(1)->Arg(2)->Arg(3);

void bm_tensor_apply(benchmark::State& state) {
  const qmb::Channel ch = qmb::build_model(qmb::ModelKind::lossy_interferometer, 0.62);
  const int n = static_cast<int>(state.range(0));
  qmb::CMat psi = qmb::CMat::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    qmb::CMat plus(2, 1);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    psi = qmb::kron(psi, plus);
  }
  const qmb::DensityMatrix rho = qmb::DensityMatrix::pure(psi);
  for (auto _ : state)
    benchmark::DoNotOptimize(qmb::tensor_apply(ch, n, rho, true));
}
BENCHMARK(bm_tensor_apply)->Arg(1)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
