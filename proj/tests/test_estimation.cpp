#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dppmix/certificates.hpp"
#include "dppmix/estimation.hpp"
#include "dppmix/families.hpp"
#include "dppmix/oracle.hpp"

using namespace dppmix;

TEST_CASE("sweep count selection is minimal for the bias target") {
  CHECK(choose_m(0.5, 2, 0.01) == 8);
  CHECK(2.0 * std::pow(0.5, 8) <= 0.01);
  CHECK(2.0 * std::pow(0.5, 7) > 0.01);

  CHECK(choose_m(0.0, 3, 0.5) == 1);   // one sweep suffices at gamma = 0
  CHECK(choose_m(0.7, 0, 0.1) == 0);   // empty target: nothing to estimate
  CHECK(choose_m(0.7, 1, 1.5) == 0);   // bound already met with no sweeps
  CHECK(choose_m(0.9999, 1, 0.5) > 6000);

  // Minimality on a sample of parameter combinations.
  for (const double gamma : {0.05, 0.3, 0.6, 0.95}) {
    for (const int card : {1, 2, 5}) {
      for (const double target : {0.2, 0.01, 1e-6}) {
        const int m = choose_m(gamma, card, target);
        CHECK(card * std::pow(gamma, m) <= target);
        if (m > 0) CHECK(card * std::pow(gamma, m - 1) > target);
      }
    }
  }

  CHECK_THROWS_AS(choose_m(1.0, 1, 0.1), std::domain_error);
  CHECK_THROWS_AS(choose_m(-0.1, 1, 0.1), std::domain_error);
  CHECK_THROWS_AS(choose_m(0.5, -1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(choose_m(0.5, 1, 0.0), std::invalid_argument);
}

TEST_CASE("marginal estimates converge on the exact value") {
  const PointProcess p(
      std::make_shared<PairTweakFunction>(PairTweakFunction::unit_preset(4, 1, 2)), 0.5);
  const Certificate cert = certify(p, ConditionKind::Submodular);
  REQUIRE(cert.satisfied);

  const Subset target = Subset{}.with(1);
  ChainConfig cfg;
  cfg.sweeps = choose_m(cert.gamma, target.cardinality(), 0.01);
  cfg.seed = 31;
  cfg.initial = InitialDistribution::point_mass(Subset{});

  const EstimateReport report = estimate_marginal(p, target, cfg, 5000, &cert);
  CHECK(report.sweeps == cfg.sweeps);
  CHECK(report.replicas == 5000);
  CHECK(report.bounded);
  CHECK(report.bias_bound == doctest::Approx(cert.bias_bound(cfg.sweeps, 1)));
  CHECK(report.mse_bound == doctest::Approx(cert.mse_bound(cfg.sweeps, 5000, 1)));
  CHECK(report.bias_bound <= 0.01);

  const double truth = exact_marginal(p, target);
  // Bias bound plus a generous Monte Carlo allowance (sigma ~ 0.007).
  CHECK(std::abs(report.estimate - truth) < report.bias_bound + 0.035);

  // Same configuration, same estimate; the estimator is fully seeded.
  const EstimateReport again = estimate_marginal(p, target, cfg, 5000, &cert);
  CHECK(again.estimate == report.estimate);
}

TEST_CASE("estimates without a certificate carry no bounds") {
  const PointProcess p(
      std::make_shared<ModularFunction>(std::vector<double>{0.7}), 1.0);
  ChainConfig cfg;
  cfg.sweeps = 1;
  cfg.seed = 5;
  const EstimateReport plain = estimate_marginal(p, Subset{}.with(0), cfg, 2000, nullptr);
  CHECK_FALSE(plain.bounded);
  const double truth = 1.0 / (1.0 + std::exp(-0.7));
  CHECK(std::abs(plain.estimate - truth) < 0.05);

  // An unsatisfied certificate is ignored the same way.
  const PointProcess hot(
      std::make_shared<DecomposableFunction>(DecomposableFunction::mean_field_ising(4, 0.9)),
      2.0);
  const Certificate unsat = certify(hot, ConditionKind::General);
  REQUIRE_FALSE(unsat.satisfied);
  ChainConfig hot_cfg;
  hot_cfg.sweeps = 3;
  const EstimateReport unbounded =
      estimate_marginal(hot, Subset{}.with(0), hot_cfg, 100, &unsat);
  CHECK_FALSE(unbounded.bounded);
}

TEST_CASE("estimator input validation") {
  const PointProcess p(
      std::make_shared<ModularFunction>(std::vector<double>{0.1, 0.2}), 1.0);
  ChainConfig cfg;
  cfg.sweeps = 1;
  CHECK_THROWS_AS(estimate_marginal(p, Subset{}.with(5), cfg, 10, nullptr),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_marginal(p, Subset{}.with(0), cfg, 0, nullptr),
                  std::invalid_argument);
}
