#include "dppmix/set_function.hpp"

#include <stdexcept>
#include <utility>

namespace dppmix {

SetFunction::SetFunction(int n) : n_(n) {
  if (n < 1 || n > 64)
    throw std::invalid_argument("SetFunction: ground set size must be in [1, 64]");
}

void SetFunction::check_subset(Subset s) const {
  if (s.bits() & ~full_mask(n_))
    throw std::invalid_argument("SetFunction: subset has elements outside the ground set");
}

void SetFunction::check_gain_args(int i, Subset s) const {
  if (i < 0 || i >= n_)
    throw std::invalid_argument("marginal_gain: element out of range");
  check_subset(s);
  if (s.contains(i))
    throw std::invalid_argument("marginal_gain: element already in subset");
}

void SetFunction::check_hessian_args(int i, int j, Subset s) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::invalid_argument("hessian_entry: element out of range");
  if (i == j)
    throw std::invalid_argument("hessian_entry: requires distinct elements");
  check_subset(s);
  if (s.contains(i) || s.contains(j))
    throw std::invalid_argument("hessian_entry: elements must not be in subset");
}

double SetFunction::marginal_gain(int i, Subset s) const {
  check_gain_args(i, s);
  return eval(s.with(i)) - eval(s);
}

double SetFunction::hessian_entry(int i, int j, Subset s) const {
  check_hessian_args(i, j, s);
  return eval(s.with(i).with(j)) - eval(s.with(i)) - eval(s.with(j)) + eval(s);
}

double finite_difference_gain(const SetFunction& f, int i, Subset s) {
  if (s.contains(i))
    throw std::invalid_argument("finite_difference_gain: element already in subset");
  return f.eval(s.with(i)) - f.eval(s);
}

double finite_difference_hessian(const SetFunction& f, int i, int j, Subset s) {
  if (i == j || s.contains(i) || s.contains(j))
    throw std::invalid_argument("finite_difference_hessian: bad arguments");
  return f.eval(s.with(i).with(j)) - f.eval(s.with(i)) - f.eval(s.with(j)) + f.eval(s);
}

PointProcess::PointProcess(std::shared_ptr<const SetFunction> f_in, double beta_in,
                           GroundSet ground_in)
    : f(std::move(f_in)), beta(beta_in), ground(std::move(ground_in)) {
  if (!f) throw std::invalid_argument("PointProcess: null set function");
  if (!(beta > 0.0)) throw std::invalid_argument("PointProcess: beta must be positive");
  if (ground.size() != f->ground_size())
    throw std::invalid_argument("PointProcess: ground set size does not match the set function");
}

PointProcess::PointProcess(std::shared_ptr<const SetFunction> f_in, double beta_in)
    : PointProcess(f_in, beta_in, GroundSet(f_in ? f_in->ground_size() : 1)) {}

}  // namespace dppmix
