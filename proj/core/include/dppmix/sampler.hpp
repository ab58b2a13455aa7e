#pragma once

#include <cstdint>
#include <vector>

#include "dppmix/rng.hpp"
#include "dppmix/set_function.hpp"

namespace dppmix {

enum class KernelKind { Gibbs, MetropolisHastings };
enum class ScanOrder { Systematic, Random };

/// Law of the chain's starting state. Sampling consumes one uniform per site
/// for Uniform and ProductBernoulli (sites in ascending order) and none for
/// PointMass, so replica streams stay aligned across kinds.
struct InitialDistribution {
  enum class Kind { PointMass, Uniform, ProductBernoulli };

  static InitialDistribution point_mass(Subset point);
  static InitialDistribution uniform();
  static InitialDistribution product_bernoulli(std::vector<double> inclusion);

  Subset sample(int n, CounterRng& rng) const;

  Kind kind = Kind::PointMass;
  Subset point{};
  std::vector<double> inclusion;  // ProductBernoulli only
};

struct ChainConfig {
  KernelKind kernel = KernelKind::Gibbs;
  ScanOrder scan = ScanOrder::Systematic;
  int sweeps = 0;
  std::uint64_t seed = 0;
  InitialDistribution initial;
};

/// Heat-bath inclusion probability for site i. The state is read off-i (i is
/// removed first):  P(i in next state) = sigmoid(beta * Delta_i f(S \ {i})).
/// Evaluated in logistic form, stable for any magnitude of beta * Delta.
double gibbs_include_prob(const PointProcess& p, int i, Subset state);

/// Metropolis flip-acceptance for site i given its current occupancy:
///   present:  min(1, exp(-beta * Delta)),  absent: min(1, exp(+beta * Delta))
/// with Delta = Delta_i f(S \ {i}).
double mh_accept_prob(const PointProcess& p, int i, bool present, Subset state);

/// One single-site update at site i; consumes exactly one uniform draw.
Subset update_site(const PointProcess& p, KernelKind kernel, int i, Subset state,
                   CounterRng& rng);

/// One systematic sweep: sites 0, 1, ..., n-1 in order.
Subset sweep_systematic(const PointProcess& p, KernelKind kernel, Subset state,
                        CounterRng& rng);

/// One random-scan sweep: n single-site updates at sites drawn uniformly with
/// replacement (each update consumes a site draw, then a uniform).
Subset sweep_random(const PointProcess& p, KernelKind kernel, Subset state, CounterRng& rng);

/// Runs one chain for cfg.sweeps sweeps on the stream (cfg.seed, replica).
Subset run_chain(const PointProcess& p, const ChainConfig& cfg, std::uint64_t replica = 0);

/// N independent replicas; replica r restarts from the initial distribution
/// on stream (cfg.seed, r). Replicas may execute in parallel (bounded by
/// DPPMIX_THREADS); results are ordered by replica index and bit-identical to
/// the serial run.
std::vector<Subset> run_replicas(const PointProcess& p, const ChainConfig& cfg,
                                 std::int64_t replicas);

}  // namespace dppmix
