#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dppmix/certificates.hpp"
#include "dppmix/families.hpp"
#include "dppmix/oracle.hpp"
#include "dppmix/rng.hpp"
#include "dppmix/sampler.hpp"

namespace {

using namespace dppmix;

std::shared_ptr<const SetFunction> make_function(const std::string& family, int n) {
  std::mt19937_64 gen(18121);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (family == "modular") {
    std::vector<double> w(n);
    for (auto& v : w) v = 2.0 * unit(gen) - 1.0;
    return std::make_shared<ModularFunction>(std::move(w));
  }
  if (family == "facility") {
    Eigen::MatrixXd values(2 * n, n);
    for (int k = 0; k < 2 * n; ++k)
      for (int i = 0; i < n; ++i) values(k, i) = unit(gen) < 0.5 ? 0.0 : unit(gen);
    return std::make_shared<FacilityLocation>(std::move(values), 0.1);
  }
  if (family == "graph_cut") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unit(gen) < 0.5) w(i, j) = w(j, i) = unit(gen);
    return std::make_shared<GraphCutFunction>(std::move(w), 0.5, 1.0, 0.4);
  }
  if (family == "log_det") {
    Eigen::MatrixXd a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = 2.0 * unit(gen) - 1.0;
    Eigen::MatrixXd kernel =
        a * a.transpose() / static_cast<double>(n) + Eigen::MatrixXd::Identity(n, n);
    return std::make_shared<LogDetFunction>(std::move(kernel));
  }
  if (family == "ising")
    return std::make_shared<DecomposableFunction>(DecomposableFunction::mean_field_ising(n, 0.5));
  throw std::invalid_argument("unknown benchmark family " + family);
}

void sweep_benchmark(benchmark::State& state, const std::string& family, KernelKind kernel) {
  const int n = static_cast<int>(state.range(0));
  const PointProcess p(make_function(family, n), 0.5);
  CounterRng rng(42);
  Subset s;
  for (auto _ : state) {
    s = sweep_systematic(p, kernel, s, rng);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * n);  // single-site updates
}

void BM_SweepGibbsModular(benchmark::State& state) { sweep_benchmark(state, "modular", KernelKind::Gibbs); }
void BM_SweepGibbsFacility(benchmark::State& state) { sweep_benchmark(state, "facility", KernelKind::Gibbs); }
void BM_SweepGibbsGraphCut(benchmark::State& state) { sweep_benchmark(state, "graph_cut", KernelKind::Gibbs); }
void BM_SweepGibbsLogDet(benchmark::State& state) { sweep_benchmark(state, "log_det", KernelKind::Gibbs); }
void BM_SweepGibbsIsing(benchmark::State& state) { sweep_benchmark(state, "ising", KernelKind::Gibbs); }
void BM_SweepMHModular(benchmark::State& state) { sweep_benchmark(state, "modular", KernelKind::MetropolisHastings); }
void BM_SweepMHLogDet(benchmark::State& state) { sweep_benchmark(state, "log_det", KernelKind::MetropolisHastings); }

BENCHMARK(BM_SweepGibbsModular)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_SweepGibbsFacility)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_SweepGibbsGraphCut)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_SweepGibbsLogDet)->Arg(8)->Arg(16)->Arg(24);
BENCHMARK(BM_SweepGibbsIsing)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_SweepMHModular)->Arg(8)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_SweepMHLogDet)->Arg(8)->Arg(16)->Arg(24);

void BM_RunReplicas(benchmark::State& state) {
  const PointProcess p(make_function("graph_cut", 16), 0.5);
  ChainConfig cfg;
  cfg.sweeps = 4;
  cfg.initial = InitialDistribution::uniform();
  const auto replicas = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_replicas(p, cfg, replicas));
  }
  state.SetItemsProcessed(state.iterations() * replicas);
}
BENCHMARK(BM_RunReplicas)->Arg(16)->Arg(256);

void BM_ExactDistribution(benchmark::State& state) {
  const PointProcess p(make_function("graph_cut", static_cast<int>(state.range(0))), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_distribution(p));
  }
}
BENCHMARK(BM_ExactDistribution)->Arg(8)->Arg(12)->Arg(16);

void BM_DobrushinGibbsExact(benchmark::State& state) {
  const PointProcess p(make_function("facility", static_cast<int>(state.range(0))), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dobrushin_gibbs_exact(p));
  }
}
BENCHMARK(BM_DobrushinGibbsExact)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_CertifyClosedFormFacility(benchmark::State& state) {
  const PointProcess p(make_function("facility", static_cast<int>(state.range(0))), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_family(p));
  }
}
BENCHMARK(BM_CertifyClosedFormFacility)->Arg(16)->Arg(32)->Arg(64);

void BM_PhiloxNextU64(benchmark::State& state) {
  CounterRng rng(7);
  std::uint64_t acc = 0;
  for (auto _ : state) acc ^= rng.next_u64();
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxNextU64);

}  // namespace

BENCHMARK_MAIN();
