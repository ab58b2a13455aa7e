#pragma once

#include <cstdint>

#include "dppmix/certificates.hpp"
#include "dppmix/sampler.hpp"

namespace dppmix {

/// Replicated estimate of the containment marginal P(target subset of X).
struct EstimateReport {
  Subset target{};
  int sweeps = 0;
  std::int64_t replicas = 0;
  double estimate = 0.0;    // fraction of replicas whose final state covers target
  bool bounded = false;     // a satisfied certificate informed the bounds below
  double bias_bound = 0.0;  // |target| * gamma^m
  double mse_bound = 0.0;   // bias_bound^2 + 1/N
};

/// Smallest sweep count m with |target| * gamma^m <= target_bias. Requires
/// gamma in [0, 1); throws std::domain_error otherwise.
int choose_m(double gamma, int cardinality, double target_bias);

/// Runs `replicas` independent chains (cfg.sweeps sweeps each, streams
/// (cfg.seed, r)) and reports the fraction whose final state contains
/// `target`. A satisfied certificate attaches the bias / MSE bounds; a null
/// or unsatisfied one leaves them at zero with bounded = false.
EstimateReport estimate_marginal(const PointProcess& p, Subset target, const ChainConfig& cfg,
                                 std::int64_t replicas, const Certificate* cert = nullptr);

}  // namespace dppmix
