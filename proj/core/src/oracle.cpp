#include "dppmix/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dppmix {

namespace {

constexpr double kSlack = 1e-10;

void require_size(const PointProcess& p, int cap, const char* who) {
  if (p.size() > cap)
    throw std::domain_error(std::string(who) + ": ground set too large for enumeration");
}

std::uint64_t state_count(int n) { return std::uint64_t{1} << n; }

double stable_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double capped_exp(double t) { return t >= 0.0 ? 1.0 : std::exp(t); }

void check_distribution(const Eigen::VectorXd& rho, int n, const char* who) {
  if (rho.size() != static_cast<Eigen::Index>(state_count(n)))
    throw std::invalid_argument(std::string(who) + ": distribution size must be 2^n");
  if ((rho.array() < 0.0).any())
    throw std::invalid_argument(std::string(who) + ": negative mass");
  if (std::abs(rho.sum() - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(who) + ": mass does not sum to one");
}

}  // namespace

ExactDistribution exact_distribution(const PointProcess& p) {
  require_size(p, 20, "exact_distribution");
  const std::uint64_t states = state_count(p.size());
  Eigen::VectorXd logw(static_cast<Eigen::Index>(states));
  for (std::uint64_t x = 0; x < states; ++x)
    logw[static_cast<Eigen::Index>(x)] = p.beta * p.f->eval(Subset::from_bits(x));
  const double shift = logw.maxCoeff();
  const double log_partition = shift + std::log((logw.array() - shift).exp().sum());
  Eigen::VectorXd probs = (logw.array() - log_partition).exp();
  probs /= probs.sum();  // absorb the last ulps of the normalization
  return ExactDistribution{std::move(probs), log_partition};
}

double exact_marginal(const PointProcess& p, Subset target) {
  if (target.bits() & ~full_mask(p.size()))
    throw std::invalid_argument("exact_marginal: target outside the ground set");
  const ExactDistribution mu = exact_distribution(p);
  double total = 0.0;
  for (Eigen::Index x = 0; x < mu.probs.size(); ++x)
    if (target.is_subset_of(Subset::from_bits(static_cast<std::uint64_t>(x))))
      total += mu.probs[x];
  return total;
}

double kernel_prob_zero(const PointProcess& p, KernelKind kernel, int i, Subset x) {
  if (i < 0 || i >= p.size())
    throw std::invalid_argument("kernel_prob_zero: site out of range");
  const double delta = p.f->marginal_gain(i, x.without(i));
  switch (kernel) {
    case KernelKind::Gibbs:
      return 1.0 - stable_sigmoid(p.beta * delta);
    case KernelKind::MetropolisHastings:
      return x.contains(i) ? capped_exp(-p.beta * delta) : 1.0 - capped_exp(p.beta * delta);
  }
  throw std::logic_error("kernel_prob_zero: unreachable");
}

void apply_single_site(const PointProcess& p, KernelKind kernel, int i, Eigen::VectorXd& rho) {
  check_distribution(rho, p.size(), "apply_single_site");
  const std::uint64_t states = state_count(p.size());
  Eigen::VectorXd next = Eigen::VectorXd::Zero(rho.size());
  for (std::uint64_t x = 0; x < states; ++x) {
    const double mass = rho[static_cast<Eigen::Index>(x)];
    if (mass == 0.0) continue;
    const Subset sx = Subset::from_bits(x);
    const double p0 = kernel_prob_zero(p, kernel, i, sx);
    next[static_cast<Eigen::Index>(sx.without(i).index())] += mass * p0;
    next[static_cast<Eigen::Index>(sx.with(i).index())] += mass * (1.0 - p0);
  }
  rho = std::move(next);
}

void apply_systematic_sweep(const PointProcess& p, KernelKind kernel, Eigen::VectorXd& rho) {
  for (int i = 0; i < p.size(); ++i) apply_single_site(p, kernel, i, rho);
}

void apply_random_sweep(const PointProcess& p, KernelKind kernel, Eigen::VectorXd& rho) {
  const int n = p.size();
  for (int step = 0; step < n; ++step) {
    Eigen::VectorXd mix = Eigen::VectorXd::Zero(rho.size());
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd part = rho;
      apply_single_site(p, kernel, i, part);
      mix += part;
    }
    rho = mix / static_cast<double>(n);
  }
}

TransitionMatrix build_transition(const PointProcess& p, ChainKind chain, KernelKind kernel,
                                  int site) {
  require_size(p, 12, "build_transition");
  const int n = p.size();
  const auto states = static_cast<Eigen::Index>(state_count(n));

  const auto site_matrix = [&](int i) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(states, states);
    for (Eigen::Index x = 0; x < states; ++x) {
      const Subset sx = Subset::from_bits(static_cast<std::uint64_t>(x));
      const double p0 = kernel_prob_zero(p, kernel, i, sx);
      t(x, static_cast<Eigen::Index>(sx.without(i).index())) += p0;
      t(x, static_cast<Eigen::Index>(sx.with(i).index())) += 1.0 - p0;
    }
    return t;
  };

  switch (chain) {
    case ChainKind::SingleSite: {
      if (site < 0 || site >= n)
        throw std::invalid_argument("build_transition: single-site chain needs a valid site");
      return TransitionMatrix{chain, kernel, site, site_matrix(site)};
    }
    case ChainKind::SystematicScan: {
      Eigen::MatrixXd t = site_matrix(0);
      for (int i = 1; i < n; ++i) t = t * site_matrix(i);
      return TransitionMatrix{chain, kernel, -1, std::move(t)};
    }
    case ChainKind::RandomScan: {
      Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(states, states);
      for (int i = 0; i < n; ++i) avg += site_matrix(i);
      avg /= static_cast<double>(n);
      Eigen::MatrixXd t = avg;
      for (int step = 1; step < n; ++step) t = t * avg;
      return TransitionMatrix{chain, kernel, -1, std::move(t)};
    }
  }
  throw std::logic_error("build_transition: unreachable");
}

TestFunction TestFunction::indicator_all_ones(Subset target, int n) {
  if (target.bits() & ~full_mask(n))
    throw std::invalid_argument("indicator_all_ones: target outside the ground set");
  TestFunction h;
  h.n = n;
  h.table.assign(state_count(n), 0.0);
  for (std::uint64_t x = 0; x < state_count(n); ++x)
    if (target.is_subset_of(Subset::from_bits(x))) h.table[x] = 1.0;
  return h;
}

TestFunction TestFunction::from_table(std::vector<double> values, int n) {
  if (values.size() != state_count(n))
    throw std::invalid_argument("TestFunction: table must have 2^n entries");
  TestFunction h;
  h.n = n;
  h.table = std::move(values);
  return h;
}

double oscillation(const TestFunction& h, int i) {
  if (i < 0 || i >= h.n) throw std::invalid_argument("oscillation: site out of range");
  double worst = 0.0;
  for (std::uint64_t x = 0; x < state_count(h.n); ++x) {
    if ((x >> i) & 1u) continue;
    const std::uint64_t with = x | (std::uint64_t{1} << i);
    worst = std::max(worst, std::abs(h.table[x] - h.table[with]));
  }
  return worst;
}

double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: size mismatch");
  return 0.5 * (p - q).lpNorm<1>();
}

DobrushinMatrix dobrushin_from_kernel(const PointProcess& p, KernelKind kernel) {
  require_size(p, 16, "dobrushin_from_kernel");
  const int n = p.size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double worst = 0.0;
      for (std::uint64_t x = 0; x < state_count(n); ++x) {
        const Subset sx = Subset::from_bits(x);
        const double a = kernel_prob_zero(p, kernel, i, sx.without(j));
        const double b = kernel_prob_zero(p, kernel, i, sx.with(j));
        worst = std::max(worst, std::abs(a - b));
      }
      c(i, j) = worst;
    }
  return DobrushinMatrix{
      kernel == KernelKind::Gibbs ? DobrushinKind::GibbsExact : DobrushinKind::MHExact,
      Provenance::Enumerated, std::move(c)};
}

Theorem1Report theorem1_check(const PointProcess& p, const TestFunction& h,
                              const Eigen::VectorXd& rho0, int max_sweeps,
                              const Certificate& cert, double epsilon) {
  Theorem1Report report;
  report.gamma = cert.gamma;
  report.lambda = cert.lambda;
  report.epsilon = epsilon;
  if (!cert.satisfied) {
    report.skipped = true;
    report.reason = "certificate unsatisfied (gamma >= 1), contraction bound not applicable";
    return report;
  }
  require_size(p, 20, "theorem1_check");
  const int n = p.size();
  if (h.n != n) throw std::invalid_argument("theorem1_check: test function size mismatch");
  check_distribution(rho0, n, "theorem1_check");

  const ExactDistribution mu = exact_distribution(p);
  const Eigen::Map<const Eigen::VectorXd> h_vec(h.table.data(),
                                                static_cast<Eigen::Index>(h.table.size()));
  report.mu_h = mu.probs.dot(h_vec);
  for (int i = 0; i < n; ++i) report.oscillation_sum += oscillation(h, i);

  Eigen::VectorXd rho_s = rho0;
  Eigen::VectorXd rho_r = rho0;
  bool all_ok = true;
  for (int m = 0; m <= max_sweeps; ++m) {
    if (m > 0) {
      apply_systematic_sweep(p, KernelKind::Gibbs, rho_s);
      apply_random_sweep(p, KernelKind::Gibbs, rho_r);
    }
    Theorem1Row row;
    row.sweeps = m;
    row.lhs_systematic = std::abs(rho_s.dot(h_vec) - report.mu_h);
    row.rhs_systematic = std::pow(cert.gamma, m) * report.oscillation_sum;
    row.lhs_random = std::abs(rho_r.dot(h_vec) - report.mu_h);
    row.rhs_random = std::pow(cert.lambda, m) * report.oscillation_sum;
    row.tv_systematic = tv_distance(rho_s, mu.probs);
    row.tv_bound = n * std::pow(cert.gamma, m);
    row.ok = row.lhs_systematic <= row.rhs_systematic + kSlack &&
             row.lhs_random <= row.rhs_random + kSlack &&
             row.tv_systematic <= row.tv_bound + kSlack;
    all_ok = all_ok && row.ok;
    report.rows.push_back(row);
  }

  report.tau_systematic = cert.tau_systematic(epsilon);
  report.tau_random = cert.tau_random(epsilon);

  Eigen::VectorXd rho_tau = rho0;
  for (int m = 0; m < report.tau_systematic; ++m)
    apply_systematic_sweep(p, KernelKind::Gibbs, rho_tau);
  report.tv_at_tau_systematic = tv_distance(rho_tau, mu.probs);

  rho_tau = rho0;
  for (int m = 0; m < report.tau_random; ++m) apply_random_sweep(p, KernelKind::Gibbs, rho_tau);
  report.tv_at_tau_random = tv_distance(rho_tau, mu.probs);

  report.mixing_time_ok = report.tv_at_tau_systematic <= epsilon + kSlack &&
                          report.tv_at_tau_random <= epsilon + kSlack;
  report.ok = all_ok && report.mixing_time_ok;
  return report;
}

}  // namespace dppmix
