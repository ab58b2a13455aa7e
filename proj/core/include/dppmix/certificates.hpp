#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "dppmix/set_function.hpp"

namespace dppmix {

enum class DobrushinKind {
  GibbsExact,    // C: influence of the heat-bath kernel, zero diagonal
  MHExact,       // C~: influence of the Metropolis kernel, diagonal may be positive
  UpperBound,    // R: alpha(beta) * max_S |1 - exp(beta * Hessian)|, zero diagonal
  HessianBound,  // M: max_S |Delta_j Delta_i f(S)|, zero diagonal
};

enum class Provenance { Enumerated, ClosedForm };

struct DobrushinMatrix {
  DobrushinKind kind;
  Provenance provenance;
  Eigen::MatrixXd entries;

  double inf_norm() const;  // max row sum of |entries|
};

enum class ConditionKind { General, Submodular, Simplified, ClosedForm };

/// Fast-mixing certificate: gamma bounds the influence norm, lambda =
/// exp(gamma - 1) is the random-scan rate. Raw values are reported even when
/// gamma >= 1; `satisfied` records the verdict.
struct Certificate {
  ConditionKind condition;
  std::string family;
  int n = 0;
  double beta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double alpha_beta = 0.0;
  double m_inf_norm = 0.0;
  bool satisfied = false;

  /// ceil(log(n / eps) / (1 - gamma)); requires gamma < 1 and eps in (0, 1).
  int tau_systematic(double eps) const;
  /// Same with 1 - lambda in the denominator.
  int tau_random(double eps) const;

  /// Bias of the inclusion estimator after m sweeps: |S| * gamma^m.
  double bias_bound(int sweeps, int marginal_cardinality) const;
  /// (|S| gamma^m)^2 + 1/N.
  double mse_bound(int sweeps, std::int64_t replicas, int marginal_cardinality) const;
};

/// Influence matrix of the single-site heat-bath kernels by exhaustive
/// maximization over configurations (n <= 20):
///   C(i,j) = max_{S avoiding i,j} |sigma(beta Delta_i f(S)) - sigma(beta Delta_i f(S+j))|.
DobrushinMatrix dobrushin_gibbs_exact(const PointProcess& p);

/// Influence matrix of the Metropolis kernels (n <= 20). Off-diagonal entries
/// maximize the acceptance gap over both occupancies of site i; the diagonal
/// is max_S exp(-beta |Delta_i f(S)|).
DobrushinMatrix dobrushin_mh_exact(const PointProcess& p);

/// R(i,j) = alpha(beta) * max_S |1 - exp(beta * Delta_j Delta_i f(S))|, the
/// entrywise bound with C <= R; zero diagonal (n <= 20).
DobrushinMatrix dobrushin_upper_bound_matrix(const PointProcess& p);

/// M(i,j) = max_S |Delta_j Delta_i f(S)|. Closed form for facility location
/// (minimum at the empty set), graph cut (constant Hessian) and decomposable
/// shapes whose second-difference magnitude is maximal at zero; enumeration
/// otherwise (n <= 20).
DobrushinMatrix hessian_bound_matrix(const PointProcess& p);

enum class AlphaMode { General, Submodular, Supermodular };

/// alpha(beta) = max_i max_S exp(-beta * Delta_i f(S)). The General mode
/// enumerates (n <= 20); Submodular evaluates at S = V \ {i}; Supermodular at
/// S = empty.
double alpha_beta(const PointProcess& p, AlphaMode mode);

/// Looks for a positive Hessian entry: exhaustively for n <= 10, by seeded
/// sampling beyond. Returns false when a violation is found.
bool submodularity_holds(const SetFunction& f, double tol = 1e-12);

/// Certificate via the requested condition:
///   General:    alpha_gen * max_i sum_j max_S |1 - e^{beta H}|
///   Submodular: alpha_sub * max_i sum_j (1 - e^{-beta M(i,j)}), rejects f
///               with a detected positive Hessian entry
///   Simplified: alpha * beta * ||M||_inf
///   ClosedForm: dispatches to certify_family.
Certificate certify(const PointProcess& p, ConditionKind condition);

/// Family-specific closed forms (facility location, graph cut, log-det with
/// enumerated inner maximum for n <= 16, smooth decomposable with every pair
/// covered at most once). Throws for families without a closed form.
Certificate certify_family(const PointProcess& p);

/// Curvature c(f) = 1 - min_{i: f({i}) != 0} Delta_i f(V-i) / f({i}) for
/// monotone submodular f with f(empty) >= 0. Monotonicity is verified by
/// enumeration for n <= 12 and trusted from the family flag beyond.
double curvature(const SetFunction& f);

enum class DecayMode { Exponential, FiniteRange };

/// Structured decay of M against a metric d on V.
struct DecayReport {
  DecayMode mode;
  double bound = 0.0;       // resulting bound on ||M||_inf
  double alpha = 0.0;       // exponential: least alpha with M <= alpha e^{-alpha' d}
  double alpha_prime = 0.0; // exponential: the user-supplied rate
  double range = 0.0;       // finite range: least r with M(i,j) = 0 beyond r
  double strength = 0.0;    // finite range: c = max M(i,j)
  int neighborhood = 0;     // finite range: N = max_i |{j : d(i,j) <= r}|
};

/// Exponential mode fits the least alpha for the given alpha' and reports
/// max_i sum_j alpha e^{-alpha' d(i,j)}. Finite-range mode reports the least
/// radius covering all nonzero entries (the metric diameter if nothing
/// smaller works), c = max entry, N the largest neighborhood, bound c * N.
DecayReport decay_check(const DobrushinMatrix& m, const Eigen::MatrixXd& metric,
                        DecayMode mode, double alpha_prime = 0.0);

}  // namespace dppmix
