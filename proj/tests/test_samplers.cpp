#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dppmix/families.hpp"
#include "dppmix/oracle.hpp"
#include "dppmix/rng.hpp"
#include "dppmix/sampler.hpp"

using namespace dppmix;

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

PointProcess modular_process() {
  return PointProcess(
      std::make_shared<ModularFunction>(std::vector<double>{0.8, -0.3, 0.0, -1.1}), 1.0);
}

}  // namespace

TEST_CASE("gibbs inclusion probability is the sigmoid of the scaled gain") {
  const PointProcess p = modular_process();
  for_each_subset(4, [&](Subset s) {
    for (int i = 0; i < 4; ++i) {
      const double w = static_cast<const ModularFunction&>(*p.f).weights()[i];
      // The site's own occupancy must not matter: the state is read off-i.
      CHECK(gibbs_include_prob(p, i, s) == doctest::Approx(sigmoid(w)).epsilon(1e-15));
    }
  });
  CHECK_THROWS_AS(gibbs_include_prob(p, 4, Subset{}), std::invalid_argument);
}

TEST_CASE("metropolis acceptance is capped at one") {
  const PointProcess p = modular_process();
  const Subset empty{};
  // Uphill flips always accepted, downhill flips carry the exponential factor.
  CHECK(mh_accept_prob(p, 0, false, empty) == 1.0);
  CHECK(mh_accept_prob(p, 0, true, empty.with(0)) == doctest::Approx(std::exp(-0.8)));
  CHECK(mh_accept_prob(p, 1, false, empty) == doctest::Approx(std::exp(-0.3)));
  CHECK(mh_accept_prob(p, 1, true, empty.with(1)) == 1.0);
}

TEST_CASE("extreme gains saturate without overflow") {
  const PointProcess p(
      std::make_shared<ModularFunction>(std::vector<double>{1e6, -1e6}), 1e3);
  CHECK(gibbs_include_prob(p, 0, Subset{}) == 1.0);
  CHECK(gibbs_include_prob(p, 1, Subset{}) == 0.0);
  CHECK(mh_accept_prob(p, 0, false, Subset{}) == 1.0);
  CHECK(mh_accept_prob(p, 0, true, Subset{}.with(0)) == 0.0);
}

TEST_CASE("single site updates are deterministic and consume one draw") {
  const PointProcess p = modular_process();
  CounterRng a(123, 5), b(123, 5);
  const Subset s = Subset::from_bits(0b1010);
  CHECK(update_site(p, KernelKind::Gibbs, 2, s, a) ==
        update_site(p, KernelKind::Gibbs, 2, s, b));
  // Both copies consumed the same single draw, so they stay aligned.
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("initial distributions") {
  CounterRng rng(7);
  const InitialDistribution point = InitialDistribution::point_mass(Subset::from_bits(0b011));
  CHECK(point.sample(4, rng).bits() == 0b011);
  // Point masses consume no draws.
  CounterRng fresh(7);
  CHECK(rng.next_u64() == fresh.next_u64());

  const InitialDistribution sure = InitialDistribution::product_bernoulli({1.0, 0.0, 1.0});
  for (int k = 0; k < 8; ++k) CHECK(sure.sample(3, rng).bits() == 0b101);

  const InitialDistribution half = InitialDistribution::uniform();
  int hits = 0;
  const int trials = 4000;
  for (int k = 0; k < trials; ++k) hits += half.sample(8, rng).cardinality();
  CHECK(hits > trials * 8 * 0.45);
  CHECK(hits < trials * 8 * 0.55);

  CHECK_THROWS_AS(InitialDistribution::product_bernoulli({0.5, 1.2}), std::invalid_argument);
  CHECK_THROWS_AS(sure.sample(2, rng), std::invalid_argument);
  CHECK_THROWS_AS(point.sample(1, rng), std::invalid_argument);
}

TEST_CASE("run_chain is a pure function of seed and replica") {
  const PointProcess p = modular_process();
  ChainConfig cfg;
  cfg.kernel = KernelKind::MetropolisHastings;
  cfg.scan = ScanOrder::Random;
  cfg.sweeps = 7;
  cfg.seed = 99;
  cfg.initial = InitialDistribution::uniform();

  CHECK(run_chain(p, cfg, 3) == run_chain(p, cfg, 3));

  bool any_different = false;
  const Subset base = run_chain(p, cfg, 0);
  for (std::uint64_t r = 1; r < 12; ++r) any_different = any_different || !(run_chain(p, cfg, r) == base);
  CHECK(any_different);

  ChainConfig other = cfg;
  other.seed = 100;
  bool seed_matters = false;
  for (std::uint64_t r = 0; r < 12; ++r)
    seed_matters = seed_matters || !(run_chain(p, other, r) == run_chain(p, cfg, r));
  CHECK(seed_matters);

  ChainConfig negative = cfg;
  negative.sweeps = -1;
  CHECK_THROWS_AS(run_chain(p, negative), std::invalid_argument);
}

TEST_CASE("run_chain reproduces the manual sweep sequence") {
  const PointProcess p = modular_process();
  ChainConfig cfg;
  cfg.kernel = KernelKind::Gibbs;
  cfg.scan = ScanOrder::Systematic;
  cfg.sweeps = 3;
  cfg.seed = 42;
  cfg.initial = InitialDistribution::point_mass(Subset{});

  CounterRng rng(42, 6);
  Subset state;
  for (int sweep = 0; sweep < 3; ++sweep)
    state = sweep_systematic(p, KernelKind::Gibbs, state, rng);
  CHECK(run_chain(p, cfg, 6) == state);

  cfg.scan = ScanOrder::Random;
  CounterRng rng2(42, 6);
  Subset state2;
  for (int sweep = 0; sweep < 3; ++sweep)
    state2 = sweep_random(p, KernelKind::Gibbs, state2, rng2);
  CHECK(run_chain(p, cfg, 6) == state2);
}

TEST_CASE("replica batches match the serial chain") {
  const PointProcess p = modular_process();
  ChainConfig cfg;
  cfg.sweeps = 4;
  cfg.seed = 17;
  cfg.initial = InitialDistribution::uniform();
  const std::vector<Subset> batch = run_replicas(p, cfg, 64);
  REQUIRE(batch.size() == 64);
  for (std::int64_t r = 0; r < 64; ++r)
    CHECK(batch[static_cast<std::size_t>(r)] ==
          run_chain(p, cfg, static_cast<std::uint64_t>(r)));
  CHECK_THROWS_AS(run_replicas(p, cfg, -1), std::invalid_argument);
}

TEST_CASE("one systematic gibbs sweep samples a modular process exactly") {
  // Modular gains are state independent, so after sweeping every site once the
  // occupancies are independent with inclusion probability sigmoid(beta w_i).
  const PointProcess p = modular_process();
  ChainConfig cfg;
  cfg.sweeps = 1;
  cfg.seed = 2024;
  cfg.initial = InitialDistribution::point_mass(Subset{});

  const int replicas = 20000;
  std::vector<int> hits(4, 0);
  for (const Subset s : run_replicas(p, cfg, replicas))
    for (int i = 0; i < 4; ++i) hits[static_cast<std::size_t>(i)] += s.contains(i) ? 1 : 0;

  const double weights[] = {0.8, -0.3, 0.0, -1.1};
  for (int i = 0; i < 4; ++i) {
    const double expected = sigmoid(weights[i]);
    const double observed = hits[static_cast<std::size_t>(i)] / static_cast<double>(replicas);
    CHECK(std::abs(observed - expected) < 0.015);  // > 4 binomial sigmas
  }
}

TEST_CASE("long metropolis random-scan chains match the exact law") {
  const auto f = PairTweakFunction::unit_preset(4, 1, 2);
  const PointProcess p(std::make_shared<PairTweakFunction>(f), 0.5);
  const ExactDistribution mu = exact_distribution(p);

  ChainConfig cfg;
  cfg.kernel = KernelKind::MetropolisHastings;
  cfg.scan = ScanOrder::Random;
  cfg.sweeps = 40;
  cfg.seed = 7;
  cfg.initial = InitialDistribution::uniform();

  const int replicas = 20000;
  std::vector<int> counts(16, 0);
  for (const Subset s : run_replicas(p, cfg, replicas)) ++counts[s.index()];

  for (int i = 0; i < 4; ++i) {
    const double expected = exact_marginal(p, Subset{}.with(i));
    double observed = 0.0;
    for (std::uint64_t x = 0; x < 16; ++x)
      if (Subset::from_bits(x).contains(i)) observed += counts[x];
    observed /= replicas;
    CHECK(std::abs(observed - expected) < 0.015);  // > 4 binomial sigmas
  }

  double tv = 0.0;
  for (std::uint64_t x = 0; x < 16; ++x)
    tv += std::abs(counts[x] / static_cast<double>(replicas) - mu.probs[static_cast<Eigen::Index>(x)]);
  CHECK(tv / 2.0 < 0.03);  // about twice the expected empirical-TV level
}
