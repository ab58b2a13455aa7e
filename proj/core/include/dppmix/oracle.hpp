#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dppmix/certificates.hpp"
#include "dppmix/sampler.hpp"
#include "dppmix/set_function.hpp"

namespace dppmix {

/// Brute-force reference machinery: exact laws, exact kernels as matrices and
/// exact checks of the contraction bounds. Everything here enumerates the
/// state space and is meant for small n.

struct ExactDistribution {
  Eigen::VectorXd probs;  // indexed by subset index, size 2^n
  double log_partition;
};

/// mu(S) = exp(beta f(S) - log Z) via a log-sum-exp partition (n <= 20).
ExactDistribution exact_distribution(const PointProcess& p);

/// P(X contains target) under mu.
double exact_marginal(const PointProcess& p, Subset target);

/// K^{[i]}(x, z_i = 0): probability the single-site kernel at i leaves site i
/// empty when the current configuration is x.
double kernel_prob_zero(const PointProcess& p, KernelKind kernel, int i, Subset x);

enum class ChainKind { SingleSite, SystematicScan, RandomScan };

struct TransitionMatrix {
  ChainKind chain;
  KernelKind kernel;
  int site;  // SingleSite only, else -1
  Eigen::MatrixXd entries;  // row x: law of the next state
};

/// Exact transition matrix (n <= 12). SystematicScan multiplies the site
/// kernels in ascending order; RandomScan is the n-th power of their average.
TransitionMatrix build_transition(const PointProcess& p, ChainKind chain, KernelKind kernel,
                                  int site = -1);

/// In-place distribution actions, cheaper than materializing matrices.
void apply_single_site(const PointProcess& p, KernelKind kernel, int i, Eigen::VectorXd& rho);
void apply_systematic_sweep(const PointProcess& p, KernelKind kernel, Eigen::VectorXd& rho);
void apply_random_sweep(const PointProcess& p, KernelKind kernel, Eigen::VectorXd& rho);

/// Bounded test function h given by its value table over subset indices.
struct TestFunction {
  static TestFunction indicator_all_ones(Subset target, int n);
  static TestFunction from_table(std::vector<double> values, int n);

  double operator()(Subset s) const { return table[s.index()]; }

  int n = 0;
  std::vector<double> table;
};

/// delta_i(h) = max_x |h(x with i off) - h(x with i on)|.
double oscillation(const TestFunction& h, int i);

/// Total variation distance between two laws on subset indices.
double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Influence matrix evaluated directly on kernel probabilities, the
/// definition-level path cross-checking the formula-level builders (n <= 16).
DobrushinMatrix dobrushin_from_kernel(const PointProcess& p, KernelKind kernel);

/// Exact verification of the certificate's contraction claims.
struct Theorem1Row {
  int sweeps;
  double lhs_systematic, rhs_systematic;
  double lhs_random, rhs_random;
  double tv_systematic, tv_bound;  // tv_bound = n * gamma^m
  bool ok;
};

struct Theorem1Report {
  bool skipped = false;
  std::string reason;
  double gamma = 0.0, lambda = 0.0;
  double mu_h = 0.0, oscillation_sum = 0.0;
  std::vector<Theorem1Row> rows;
  double epsilon = 0.0;
  int tau_systematic = 0, tau_random = 0;
  double tv_at_tau_systematic = 0.0, tv_at_tau_random = 0.0;
  bool mixing_time_ok = false;
  bool ok = false;
};

/// Checks, for m = 0..max_sweeps and slack 1e-10, that
///   |rho T_s^m h - mu h| <= gamma^m sum_i delta_i(h)
///   |rho T_r^m h - mu h| <= lambda^m sum_i delta_i(h)
///   TV(rho T_s^m, mu)    <= n gamma^m
/// and that TV at the certified mixing times tau(eps) is below eps. Requires
/// a satisfied certificate; otherwise returns a skipped report.
Theorem1Report theorem1_check(const PointProcess& p, const TestFunction& h,
                              const Eigen::VectorXd& rho0, int max_sweeps,
                              const Certificate& cert, double epsilon = 0.01);

}  // namespace dppmix
