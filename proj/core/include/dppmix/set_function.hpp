#pragma once

#include <memory>
#include <string>

#include "dppmix/subset.hpp"

namespace dppmix {

/// Real-valued set function f : 2^V -> R on a ground set of size n.
///
/// Families may override marginal_gain / hessian_entry with closed forms; the
/// defaults fall back to finite differences of eval. Implementations must be
/// const and thread-safe per instance.
class SetFunction {
 public:
  explicit SetFunction(int n);
  virtual ~SetFunction() = default;

  int ground_size() const { return n_; }

  /// f(S). Throws if S has bits outside the ground set.
  virtual double eval(Subset s) const = 0;

  /// Delta_i f(S) = f(S u {i}) - f(S). Requires i notin S.
  virtual double marginal_gain(int i, Subset s) const;

  /// Delta_j Delta_i f(S) = f(S u {i,j}) - f(S u {i}) - f(S u {j}) + f(S).
  /// Requires i != j and i,j notin S. Symmetric in (i, j).
  virtual double hessian_entry(int i, int j, Subset s) const;

  /// Structural flags used to pick certificate routes; conservative defaults.
  virtual bool claims_submodular() const { return false; }
  virtual bool claims_monotone() const { return false; }
  virtual std::string family() const { return "custom"; }

 protected:
  void check_subset(Subset s) const;
  void check_gain_args(int i, Subset s) const;
  void check_hessian_args(int i, int j, Subset s) const;

 private:
  int n_;
};

/// Four-evaluation finite differences; the reference path closed forms are
/// checked against.
double finite_difference_gain(const SetFunction& f, int i, Subset s);
double finite_difference_hessian(const SetFunction& f, int i, int j, Subset s);

/// Discrete point process mu(S) proportional to exp(beta * f(S)), beta > 0.
struct PointProcess {
  PointProcess(std::shared_ptr<const SetFunction> f, double beta, GroundSet ground);
  PointProcess(std::shared_ptr<const SetFunction> f, double beta);

  int size() const { return ground.size(); }

  std::shared_ptr<const SetFunction> f;
  double beta;
  GroundSet ground;
};

}  // namespace dppmix
