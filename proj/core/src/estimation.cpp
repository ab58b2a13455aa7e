#include "dppmix/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dppmix {

int choose_m(double gamma, int cardinality, double target_bias) {
  if (cardinality < 0) throw std::invalid_argument("choose_m: negative cardinality");
  if (!(target_bias > 0.0)) throw std::invalid_argument("choose_m: target bias must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw std::domain_error("choose_m: needs a contraction coefficient in [0, 1)");
  if (cardinality == 0 || static_cast<double>(cardinality) <= target_bias) return 0;
  if (gamma == 0.0) return 1;
  const double card = cardinality;
  int m = std::max(0, static_cast<int>(std::ceil(std::log(target_bias / card) / std::log(gamma))));
  // log/ceil can land one off in either direction at representability edges.
  while (card * std::pow(gamma, m) > target_bias) ++m;
  while (m > 0 && card * std::pow(gamma, m - 1) <= target_bias) --m;
  return m;
}

EstimateReport estimate_marginal(const PointProcess& p, Subset target, const ChainConfig& cfg,
                                 std::int64_t replicas, const Certificate* cert) {
  if (target.bits() & ~full_mask(p.size()))
    throw std::invalid_argument("estimate_marginal: target outside the ground set");
  if (replicas <= 0) throw std::invalid_argument("estimate_marginal: need at least one replica");

  const std::vector<Subset> finals = run_replicas(p, cfg, replicas);
  std::int64_t hits = 0;
  for (const Subset s : finals)
    if (target.is_subset_of(s)) ++hits;

  EstimateReport report;
  report.target = target;
  report.sweeps = cfg.sweeps;
  report.replicas = replicas;
  report.estimate = static_cast<double>(hits) / static_cast<double>(replicas);
  if (cert != nullptr && cert->satisfied) {
    report.bounded = true;
    report.bias_bound = cert->bias_bound(cfg.sweeps, target.cardinality());
    report.mse_bound = cert->mse_bound(cfg.sweeps, replicas, target.cardinality());
  }
  return report;
}

}  // namespace dppmix
