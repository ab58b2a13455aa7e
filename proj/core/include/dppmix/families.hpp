#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dppmix/set_function.hpp"

namespace dppmix {

/// Modular (linear) function f(S) = sum_{i in S} w_i.
class ModularFunction final : public SetFunction {
 public:
  explicit ModularFunction(std::vector<double> weights);

  double eval(Subset s) const override;
  double marginal_gain(int i, Subset s) const override;  // w_i
  double hessian_entry(int i, int j, Subset s) const override;  // exactly 0

  bool claims_submodular() const override { return true; }
  bool claims_monotone() const override { return monotone_; }
  std::string family() const override { return "modular"; }

  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
  bool monotone_;
};

/// Modular function plus a coverage bonus on one distinguished pair {k, k'}:
///   f(S) = sum_{i in S} w_i + g(S),  g(S) = 1 if S intersects {k, k'} else 0.
/// The discrete Hessian is -1 exactly on the pair and 0 elsewhere.
class PairTweakFunction final : public SetFunction {
 public:
  PairTweakFunction(std::vector<double> weights, int k, int k_prime);

  /// The curvature-1 instance: w_i = 1 off the pair, w_k = w_{k'} = 0.
  static PairTweakFunction unit_preset(int n, int k, int k_prime);

  double eval(Subset s) const override;
  double marginal_gain(int i, Subset s) const override;
  double hessian_entry(int i, int j, Subset s) const override;

  bool claims_submodular() const override { return true; }
  bool claims_monotone() const override { return monotone_; }
  std::string family() const override { return "pair_tweak"; }

  int pair_k() const { return k_; }
  int pair_k_prime() const { return k_prime_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  bool pair_hit(Subset s) const { return s.contains(k_) || s.contains(k_prime_); }
  std::vector<double> weights_;
  int k_, k_prime_;
  bool monotone_;
};

/// Facility location with a per-facility cost:
///   f(S) = sum_k max_{l in S} L(k, l) - lambda * |S|,   max over empty S := 0.
/// L is customers x facilities, entries >= 0.
class FacilityLocation final : public SetFunction {
 public:
  FacilityLocation(Eigen::MatrixXd values, double lambda);

  double eval(Subset s) const override;
  double marginal_gain(int i, Subset s) const override;
  double hessian_entry(int i, int j, Subset s) const override;

  /// Hessian minimum over S, attained at S = empty:
  ///   -sum_k min(L(k,i), L(k,j)).
  double hessian_floor(int i, int j) const;

  bool claims_submodular() const override { return true; }
  bool claims_monotone() const override { return lambda_ == 0.0; }
  std::string family() const override { return "facility_location"; }

  const Eigen::MatrixXd& values() const { return values_; }
  double lambda() const { return lambda_; }
  int customers() const { return static_cast<int>(values_.rows()); }

 private:
  double best_value(int customer, Subset s) const;
  Eigen::MatrixXd values_;  // customers x facilities
  double lambda_;
};

/// Weighted graph-cut style function on a symmetric nonnegative matrix L with
/// zero diagonal:
///   f(S) = a + b * sum_{k in S} sum_l L(k,l) - c * sum_{k in S} sum_{l in S} L(k,l).
/// With a = 0, b = c = 1 this is the usual cut capacity. The Hessian is the
/// constant -2c * L(i,j).
class GraphCutFunction final : public SetFunction {
 public:
  GraphCutFunction(Eigen::MatrixXd weights, double a, double b, double c);

  double eval(Subset s) const override;
  double marginal_gain(int i, Subset s) const override;  // b*rowsum_i - 2c*sum_{l in S} L(i,l)
  double hessian_entry(int i, int j, Subset s) const override;  // -2c*L(i,j)

  bool claims_submodular() const override { return true; }
  bool claims_monotone() const override { return monotone_; }
  std::string family() const override { return "graph_cut"; }

  const Eigen::MatrixXd& weights() const { return weights_; }
  double coeff_a() const { return a_; }
  double coeff_b() const { return b_; }
  double coeff_c() const { return c_; }
  double row_sum(int i) const { return row_sums_[static_cast<std::size_t>(i)]; }

 private:
  Eigen::MatrixXd weights_;
  double a_, b_, c_;
  std::vector<double> row_sums_;
  bool monotone_;
};

/// Log-determinant of a positive definite kernel:  f(S) = log det L_S, f({}) = 0.
/// Marginal quantities are Gaussian conditionals:
///   Delta_i f(S)         = log Var(X_i | X_S)
///   Delta_j Delta_i f(S) = log(1 - rho(i,j|S)^2) = -2 I(X_i; X_j | X_S).
class LogDetFunction final : public SetFunction {
 public:
  explicit LogDetFunction(Eigen::MatrixXd kernel);

  double eval(Subset s) const override;
  double marginal_gain(int i, Subset s) const override;
  double hessian_entry(int i, int j, Subset s) const override;

  bool claims_submodular() const override { return true; }
  std::string family() const override { return "log_det"; }

  const Eigen::MatrixXd& kernel() const { return kernel_; }

 private:
  Eigen::MatrixXd kernel_;
};

/// Concave scalar shape phi applied to cover-set intersections by
/// DecomposableFunction. Named builtins carry analytic bounds
///   c  <= min over [0, n] of phi'      (c > 0)
///   c' <= min over [0, n] of phi''     (c' <= 0)
/// used by the decomposable mixing certificate. Table shapes have no such
/// bounds and are usable for evaluation and sampling only.
class ConcavePhi {
 public:
  enum class Kind { SqrtShift, Log1p, LinearCapped, QuadraticConcave, Table };

  static constexpr double kSqrtShiftEpsilon = 1e-6;

  static ConcavePhi sqrt_shift();                  // phi(x) = sqrt(x + 1e-6)
  static ConcavePhi log1p();                       // phi(x) = log(1 + x)
  static ConcavePhi linear_capped(double theta);   // phi(x) = min(x, theta)
  static ConcavePhi quadratic(double p, double q); // phi(x) = p*x - q*x^2
  static ConcavePhi table(std::vector<double> values);

  Kind kind() const { return kind_; }
  bool smooth() const { return kind_ != Kind::Table; }

  double value(int x) const;

  /// Analytic c, c' over [0, n]; throws for Table shapes.
  double min_first_derivative(int n) const;
  double min_second_derivative(int n) const;

  /// Validates the shape for a ground set of size n (c > 0 for smooth shapes;
  /// table long enough for max_card + 1 entries).
  void validate(int n, int max_card) const;

  /// Discrete second difference phi(x+2) - 2 phi(x+1) + phi(x).
  double second_difference(int x) const;
  /// True when |second difference| is nonincreasing in x on [0, max_card-2];
  /// analytic for smooth shapes, checked numerically for tables.
  bool second_difference_magnitude_nonincreasing(int max_card) const;
  bool discretely_concave(int max_card) const;
  bool discretely_nondecreasing(int max_card) const;

  const std::vector<double>& table_values() const { return table_; }
  double theta() const { return theta_; }
  double coeff_p() const { return p_; }
  double coeff_q() const { return q_; }

 private:
  ConcavePhi(Kind kind) : kind_(kind) {}
  Kind kind_;
  double theta_ = 0.0;
  double p_ = 0.0, q_ = 0.0;
  std::vector<double> table_;
};

/// Sum of concave shapes over a cover:  f(S) = sum_A phi_A(|A intersect S|),
/// the cover's union must be the whole ground set.
class DecomposableFunction final : public SetFunction {
 public:
  DecomposableFunction(int n, std::vector<Subset> cover, std::vector<ConcavePhi> phis);

  /// Mean-field antiferromagnet on all pairs: phi_A = table(-J/n, J/n, -J/n)
  /// for every pair A = {i, j}, J > 0. Table-valued, so it samples and
  /// evaluates but is excluded from the closed-form certificate.
  static DecomposableFunction mean_field_ising(int n, double coupling);

  double eval(Subset s) const override;
  double marginal_gain(int i, Subset s) const override;
  double hessian_entry(int i, int j, Subset s) const override;

  bool claims_submodular() const override { return submodular_; }
  bool claims_monotone() const override { return monotone_; }
  std::string family() const override { return "decomposable"; }

  const std::vector<Subset>& cover() const { return cover_; }
  const std::vector<ConcavePhi>& phis() const { return phis_; }

  bool all_smooth() const;
  /// min_A c_A and min_A c'_A over smooth shapes; throw if any table present.
  double derivative_floor() const;
  double second_derivative_floor() const;
  /// min_i #{A : A contains i} and max_i |union of A containing i|.
  int min_membership() const;
  int max_union_size() const;
  /// Largest number of cover sets containing a common pair {i, j}.
  int max_pair_multiplicity() const;

 private:
  std::vector<Subset> cover_;
  std::vector<ConcavePhi> phis_;
  std::vector<std::vector<int>> member_sets_;  // per element: indices of A containing it
  bool submodular_;
  bool monotone_;
};

}  // namespace dppmix
