#include "dppmix/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "dppmix/parallel.hpp"

namespace dppmix {

namespace {

// sigmoid(t) = e^t / (1 + e^t), evaluated on the side that cannot overflow.
double stable_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// min(1, e^t) without overflow for large t.
double capped_exp(double t) { return t >= 0.0 ? 1.0 : std::exp(t); }

void check_site(const PointProcess& p, int i) {
  if (i < 0 || i >= p.size())
    throw std::invalid_argument("sampler: site index out of range");
}

}  // namespace

InitialDistribution InitialDistribution::point_mass(Subset point) {
  InitialDistribution d;
  d.kind = Kind::PointMass;
  d.point = point;
  return d;
}

InitialDistribution InitialDistribution::uniform() {
  InitialDistribution d;
  d.kind = Kind::Uniform;
  return d;
}

InitialDistribution InitialDistribution::product_bernoulli(std::vector<double> inclusion) {
  for (double q : inclusion)
    if (!(q >= 0.0 && q <= 1.0))
      throw std::invalid_argument("InitialDistribution: inclusion probabilities must be in [0,1]");
  InitialDistribution d;
  d.kind = Kind::ProductBernoulli;
  d.inclusion = std::move(inclusion);
  return d;
}

Subset InitialDistribution::sample(int n, CounterRng& rng) const {
  switch (kind) {
    case Kind::PointMass:
      if (point.bits() & ~full_mask(n))
        throw std::invalid_argument("InitialDistribution: point outside the ground set");
      return point;
    case Kind::Uniform: {
      Subset s;
      for (int i = 0; i < n; ++i)
        if (rng.next_double() < 0.5) s = s.with(i);
      return s;
    }
    case Kind::ProductBernoulli: {
      if (inclusion.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("InitialDistribution: inclusion vector size mismatch");
      Subset s;
      for (int i = 0; i < n; ++i)
        if (rng.next_double() < inclusion[static_cast<std::size_t>(i)]) s = s.with(i);
      return s;
    }
  }
  throw std::logic_error("InitialDistribution::sample: unreachable");
}

double gibbs_include_prob(const PointProcess& p, int i, Subset state) {
  check_site(p, i);
  const double delta = p.f->marginal_gain(i, state.without(i));
  return stable_sigmoid(p.beta * delta);
}

double mh_accept_prob(const PointProcess& p, int i, bool present, Subset state) {
  check_site(p, i);
  const double delta = p.f->marginal_gain(i, state.without(i));
  return present ? capped_exp(-p.beta * delta) : capped_exp(p.beta * delta);
}

Subset update_site(const PointProcess& p, KernelKind kernel, int i, Subset state,
                   CounterRng& rng) {
  const double u = rng.next_double();
  switch (kernel) {
    case KernelKind::Gibbs:
      return u < gibbs_include_prob(p, i, state) ? state.with(i) : state.without(i);
    case KernelKind::MetropolisHastings:
      return u < mh_accept_prob(p, i, state.contains(i), state) ? state.flipped(i) : state;
  }
  throw std::logic_error("update_site: unreachable");
}

Subset sweep_systematic(const PointProcess& p, KernelKind kernel, Subset state,
                        CounterRng& rng) {
  for (int i = 0; i < p.size(); ++i) state = update_site(p, kernel, i, state, rng);
  return state;
}

Subset sweep_random(const PointProcess& p, KernelKind kernel, Subset state, CounterRng& rng) {
  const auto n = static_cast<std::uint64_t>(p.size());
  for (int step = 0; step < p.size(); ++step) {
    const int i = static_cast<int>(rng.next_below(n));
    state = update_site(p, kernel, i, state, rng);
  }
  return state;
}

Subset run_chain(const PointProcess& p, const ChainConfig& cfg, std::uint64_t replica) {
  if (cfg.sweeps < 0) throw std::invalid_argument("run_chain: sweeps must be nonnegative");
  CounterRng rng(cfg.seed, replica);
  Subset state = cfg.initial.sample(p.size(), rng);
  for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
    state = cfg.scan == ScanOrder::Systematic
                ? sweep_systematic(p, cfg.kernel, state, rng)
                : sweep_random(p, cfg.kernel, state, rng);
  }
  return state;
}

std::vector<Subset> run_replicas(const PointProcess& p, const ChainConfig& cfg,
                                 std::int64_t replicas) {
  if (replicas < 0) throw std::invalid_argument("run_replicas: negative replica count");
  std::vector<Subset> out(static_cast<std::size_t>(replicas));
  parallel_for(0, replicas, [&](std::int64_t r) {
    out[static_cast<std::size_t>(r)] = run_chain(p, cfg, static_cast<std::uint64_t>(r));
  });
  return out;
}

}  // namespace dppmix
