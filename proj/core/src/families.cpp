#include "dppmix/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "dppmix/gaussian.hpp"

namespace dppmix {

namespace {

bool all_nonnegative(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
}

void require_symmetric(const Eigen::MatrixXd& L, const char* who) {
  for (Eigen::Index i = 0; i < L.rows(); ++i)
    for (Eigen::Index j = i + 1; j < L.cols(); ++j)
      if (L(i, j) != L(j, i))
        throw std::invalid_argument(std::string(who) + ": matrix must be symmetric");
}

}  // namespace

// ---------------------------------------------------------------------------
// Modular

ModularFunction::ModularFunction(std::vector<double> weights)
    : SetFunction(static_cast<int>(weights.size())),
      weights_(std::move(weights)),
      monotone_(all_nonnegative(weights_)) {}

double ModularFunction::eval(Subset s) const {
  check_subset(s);
  double total = 0.0;
  for (std::uint64_t m = s.bits(); m != 0; m &= m - 1)
    total += weights_[static_cast<std::size_t>(std::countr_zero(m))];
  return total;
}

double ModularFunction::marginal_gain(int i, Subset s) const {
  check_gain_args(i, s);
  return weights_[static_cast<std::size_t>(i)];
}

double ModularFunction::hessian_entry(int i, int j, Subset s) const {
  check_hessian_args(i, j, s);
  return 0.0;
}

// ---------------------------------------------------------------------------
// Pair tweak

PairTweakFunction::PairTweakFunction(std::vector<double> weights, int k, int k_prime)
    : SetFunction(static_cast<int>(weights.size())),
      weights_(std::move(weights)),
      k_(k),
      k_prime_(k_prime),
      monotone_(all_nonnegative(weights_)) {
  const int n = ground_size();
  if (k < 0 || k >= n || k_prime < 0 || k_prime >= n)
    throw std::invalid_argument("PairTweakFunction: pair element out of range");
  if (k == k_prime)
    throw std::invalid_argument("PairTweakFunction: pair elements must be distinct");
}

PairTweakFunction PairTweakFunction::unit_preset(int n, int k, int k_prime) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (k >= 0 && k < n) w[static_cast<std::size_t>(k)] = 0.0;
  if (k_prime >= 0 && k_prime < n) w[static_cast<std::size_t>(k_prime)] = 0.0;
  return PairTweakFunction(std::move(w), k, k_prime);
}

double PairTweakFunction::eval(Subset s) const {
  check_subset(s);
  double total = pair_hit(s) ? 1.0 : 0.0;
  for (std::uint64_t m = s.bits(); m != 0; m &= m - 1)
    total += weights_[static_cast<std::size_t>(std::countr_zero(m))];
  return total;
}

double PairTweakFunction::marginal_gain(int i, Subset s) const {
  check_gain_args(i, s);
  double gain = weights_[static_cast<std::size_t>(i)];
  if ((i == k_ || i == k_prime_) && !pair_hit(s)) gain += 1.0;
  return gain;
}

double PairTweakFunction::hessian_entry(int i, int j, Subset s) const {
  check_hessian_args(i, j, s);
  const bool is_pair = (i == k_ && j == k_prime_) || (i == k_prime_ && j == k_);
  return is_pair ? -1.0 : 0.0;
}

// ---------------------------------------------------------------------------
// Facility location

FacilityLocation::FacilityLocation(Eigen::MatrixXd values, double lambda)
    : SetFunction(static_cast<int>(values.cols())),
      values_(std::move(values)),
      lambda_(lambda) {
  if (values_.rows() < 1)
    throw std::invalid_argument("FacilityLocation: need at least one customer row");
  if ((values_.array() < 0.0).any())
    throw std::invalid_argument("FacilityLocation: values must be nonnegative");
  if (lambda_ < 0.0)
    throw std::invalid_argument("FacilityLocation: lambda must be nonnegative");
}

double FacilityLocation::best_value(int customer, Subset s) const {
  double best = 0.0;  // max over the empty set is 0 by convention
  for (std::uint64_t m = s.bits(); m != 0; m &= m - 1)
    best = std::max(best, values_(customer, std::countr_zero(m)));
  return best;
}

double FacilityLocation::eval(Subset s) const {
  check_subset(s);
  double total = -lambda_ * s.cardinality();
  for (int k = 0; k < customers(); ++k) total += best_value(k, s);
  return total;
}

double FacilityLocation::marginal_gain(int i, Subset s) const {
  check_gain_args(i, s);
  double gain = -lambda_;
  for (int k = 0; k < customers(); ++k)
    gain += std::max(values_(k, i) - best_value(k, s), 0.0);
  return gain;
}

double FacilityLocation::hessian_entry(int i, int j, Subset s) const {
  check_hessian_args(i, j, s);
  const int a = std::min(i, j);
  const int b = std::max(i, j);
  double total = 0.0;
  for (int k = 0; k < customers(); ++k) {
    const double m = best_value(k, s);
    const double va = values_(k, a);
    const double vb = values_(k, b);
    total += std::min(va, m) - std::min(va, std::max(vb, m));
  }
  return total;
}

double FacilityLocation::hessian_floor(int i, int j) const {
  if (i < 0 || i >= ground_size() || j < 0 || j >= ground_size() || i == j)
    throw std::invalid_argument("hessian_floor: bad facility pair");
  double total = 0.0;
  for (int k = 0; k < customers(); ++k)
    total -= std::min(values_(k, i), values_(k, j));
  return total;
}

// ---------------------------------------------------------------------------
// Graph cut

GraphCutFunction::GraphCutFunction(Eigen::MatrixXd weights, double a, double b, double c)
    : SetFunction(static_cast<int>(weights.rows())),
      weights_(std::move(weights)),
      a_(a),
      b_(b),
      c_(c) {
  if (weights_.rows() != weights_.cols())
    throw std::invalid_argument("GraphCutFunction: weight matrix must be square");
  require_symmetric(weights_, "GraphCutFunction");
  if ((weights_.array() < 0.0).any())
    throw std::invalid_argument("GraphCutFunction: weights must be nonnegative");
  for (Eigen::Index i = 0; i < weights_.rows(); ++i)
    if (weights_(i, i) != 0.0)
      throw std::invalid_argument("GraphCutFunction: diagonal must be zero");
  if (a_ < 0.0 || b_ < 0.0 || c_ < 0.0)
    throw std::invalid_argument("GraphCutFunction: coefficients must be nonnegative");
  row_sums_.resize(static_cast<std::size_t>(ground_size()));
  for (int i = 0; i < ground_size(); ++i)
    row_sums_[static_cast<std::size_t>(i)] = weights_.row(i).sum();
  monotone_ = b_ >= 2.0 * c_;
}

double GraphCutFunction::eval(Subset s) const {
  check_subset(s);
  double linear = 0.0;
  double quad = 0.0;
  const std::vector<int> el = s.elements();
  for (int k : el) {
    linear += row_sums_[static_cast<std::size_t>(k)];
    for (int l : el) quad += weights_(k, l);
  }
  return a_ + b_ * linear - c_ * quad;
}

double GraphCutFunction::marginal_gain(int i, Subset s) const {
  check_gain_args(i, s);
  double inside = 0.0;
  for (std::uint64_t m = s.bits(); m != 0; m &= m - 1)
    inside += weights_(i, std::countr_zero(m));
  return b_ * row_sums_[static_cast<std::size_t>(i)] - 2.0 * c_ * inside;
}

double GraphCutFunction::hessian_entry(int i, int j, Subset s) const {
  check_hessian_args(i, j, s);
  return -2.0 * c_ * weights_(std::min(i, j), std::max(i, j));
}

// ---------------------------------------------------------------------------
// Log determinant

LogDetFunction::LogDetFunction(Eigen::MatrixXd kernel)
    : SetFunction(static_cast<int>(kernel.rows())), kernel_(std::move(kernel)) {
  if (kernel_.rows() != kernel_.cols())
    throw std::invalid_argument("LogDetFunction: kernel must be square");
  require_symmetric(kernel_, "LogDetFunction");
  Eigen::LLT<Eigen::MatrixXd> llt(kernel_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("LogDetFunction: kernel must be positive definite");
}

double LogDetFunction::eval(Subset s) const {
  check_subset(s);
  const std::vector<int> idx = s.elements();
  const int m = static_cast<int>(idx.size());
  if (m == 0) return 0.0;
  Eigen::MatrixXd block(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) block(r, c) = kernel_(idx[r], idx[c]);
  Eigen::LLT<Eigen::MatrixXd> llt(block);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("LogDetFunction::eval: principal minor not positive definite");
  double logdet = 0.0;
  const auto& factor = llt.matrixLLT();
  for (int r = 0; r < m; ++r) logdet += std::log(factor(r, r));
  return 2.0 * logdet;
}

double LogDetFunction::marginal_gain(int i, Subset s) const {
  check_gain_args(i, s);
  return std::log(conditional_variance(kernel_, i, s));
}

double LogDetFunction::hessian_entry(int i, int j, Subset s) const {
  check_hessian_args(i, j, s);
  const ConditionalPairStats st = conditional_pair_stats(kernel_, i, j, s);
  const double neg_rho_sq = -st.rho * st.rho;
  if (neg_rho_sq <= -1.0)
    throw std::domain_error("LogDetFunction::hessian_entry: |rho| >= 1");
  return std::log1p(neg_rho_sq);
}

// ---------------------------------------------------------------------------
// Concave shapes

ConcavePhi ConcavePhi::sqrt_shift() { return ConcavePhi(Kind::SqrtShift); }
ConcavePhi ConcavePhi::log1p() { return ConcavePhi(Kind::Log1p); }

ConcavePhi ConcavePhi::linear_capped(double theta) {
  ConcavePhi phi(Kind::LinearCapped);
  phi.theta_ = theta;
  return phi;
}

ConcavePhi ConcavePhi::quadratic(double p, double q) {
  ConcavePhi phi(Kind::QuadraticConcave);
  phi.p_ = p;
  phi.q_ = q;
  return phi;
}

ConcavePhi ConcavePhi::table(std::vector<double> values) {
  ConcavePhi phi(Kind::Table);
  phi.table_ = std::move(values);
  return phi;
}

double ConcavePhi::value(int x) const {
  if (x < 0) throw std::invalid_argument("ConcavePhi::value: negative argument");
  const double xd = static_cast<double>(x);
  switch (kind_) {
    case Kind::SqrtShift:
      return std::sqrt(xd + kSqrtShiftEpsilon);
    case Kind::Log1p:
      return std::log1p(xd);
    case Kind::LinearCapped:
      return std::min(xd, theta_);
    case Kind::QuadraticConcave:
      return p_ * xd - q_ * xd * xd;
    case Kind::Table:
      if (static_cast<std::size_t>(x) >= table_.size())
        throw std::out_of_range("ConcavePhi::value: table too short");
      return table_[static_cast<std::size_t>(x)];
  }
  throw std::logic_error("ConcavePhi::value: unreachable");
}

double ConcavePhi::min_first_derivative(int n) const {
  switch (kind_) {
    case Kind::SqrtShift:
      return 0.5 / std::sqrt(static_cast<double>(n) + kSqrtShiftEpsilon);
    case Kind::Log1p:
      return 1.0 / (1.0 + static_cast<double>(n));
    case Kind::LinearCapped:
      return theta_ >= static_cast<double>(n) ? 1.0 : 0.0;
    case Kind::QuadraticConcave:
      return p_ - 2.0 * q_ * static_cast<double>(n);
    case Kind::Table:
      break;
  }
  throw std::domain_error("ConcavePhi: table shapes carry no derivative bounds");
}

double ConcavePhi::min_second_derivative(int n) const {
  switch (kind_) {
    case Kind::SqrtShift:
      // phi'' is most negative at x = 0.
      return -0.25 * std::pow(kSqrtShiftEpsilon, -1.5);
    case Kind::Log1p:
      return -1.0;
    case Kind::LinearCapped:
      return 0.0;
    case Kind::QuadraticConcave:
      return -2.0 * q_;
    case Kind::Table:
      break;
  }
  (void)n;
  throw std::domain_error("ConcavePhi: table shapes carry no derivative bounds");
}

void ConcavePhi::validate(int n, int max_card) const {
  switch (kind_) {
    case Kind::SqrtShift:
    case Kind::Log1p:
      return;
    case Kind::LinearCapped:
      if (theta_ < static_cast<double>(n))
        throw std::invalid_argument(
            "ConcavePhi::linear_capped: cap must be >= n to keep the slope positive");
      return;
    case Kind::QuadraticConcave:
      if (q_ < 0.0)
        throw std::invalid_argument("ConcavePhi::quadratic: q must be nonnegative");
      if (p_ - 2.0 * q_ * static_cast<double>(n) <= 0.0)
        throw std::invalid_argument(
            "ConcavePhi::quadratic: requires p - 2*q*n > 0 for a positive slope");
      return;
    case Kind::Table:
      if (table_.size() < static_cast<std::size_t>(max_card) + 1)
        throw std::invalid_argument("ConcavePhi::table: needs max_card + 1 values");
      return;
  }
}

double ConcavePhi::second_difference(int x) const {
  return value(x + 2) - 2.0 * value(x + 1) + value(x);
}

bool ConcavePhi::second_difference_magnitude_nonincreasing(int max_card) const {
  if (smooth()) return true;  // analytic for the named shapes
  for (int x = 0; x + 3 <= max_card; ++x)
    if (std::abs(second_difference(x + 1)) > std::abs(second_difference(x)))
      return false;
  return true;
}

bool ConcavePhi::discretely_concave(int max_card) const {
  if (smooth()) return true;
  for (int x = 0; x + 2 <= max_card; ++x)
    if (second_difference(x) > 0.0) return false;
  return true;
}

bool ConcavePhi::discretely_nondecreasing(int max_card) const {
  if (smooth()) return true;
  for (int x = 0; x + 1 <= max_card; ++x)
    if (value(x + 1) < value(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Decomposable

DecomposableFunction::DecomposableFunction(int n, std::vector<Subset> cover,
                                           std::vector<ConcavePhi> phis)
    : SetFunction(n), cover_(std::move(cover)), phis_(std::move(phis)) {
  if (cover_.empty())
    throw std::invalid_argument("DecomposableFunction: cover must be nonempty");
  if (phis_.size() != cover_.size())
    throw std::invalid_argument("DecomposableFunction: one shape per cover set required");

  std::uint64_t covered = 0;
  for (std::size_t a = 0; a < cover_.size(); ++a) {
    const Subset A = cover_[a];
    if (A.bits() == 0)
      throw std::invalid_argument("DecomposableFunction: cover sets must be nonempty");
    if (A.bits() & ~full_mask(n))
      throw std::invalid_argument("DecomposableFunction: cover set outside the ground set");
    covered |= A.bits();
    phis_[a].validate(n, A.cardinality());
  }
  if (covered != full_mask(n))
    throw std::invalid_argument("DecomposableFunction: cover must span the ground set");

  member_sets_.assign(static_cast<std::size_t>(n), {});
  for (std::size_t a = 0; a < cover_.size(); ++a)
    for (int i : cover_[a].elements())
      member_sets_[static_cast<std::size_t>(i)].push_back(static_cast<int>(a));

  submodular_ = true;
  monotone_ = true;
  for (std::size_t a = 0; a < cover_.size(); ++a) {
    const int card = cover_[a].cardinality();
    submodular_ = submodular_ && phis_[a].discretely_concave(card);
    monotone_ = monotone_ && phis_[a].discretely_nondecreasing(card);
  }
}

DecomposableFunction DecomposableFunction::mean_field_ising(int n, double coupling) {
  if (n < 2)
    throw std::invalid_argument("mean_field_ising: needs at least two sites");
  if (!(coupling > 0.0))
    throw std::invalid_argument("mean_field_ising: coupling must be positive");
  const double j_over_n = coupling / static_cast<double>(n);
  std::vector<Subset> cover;
  std::vector<ConcavePhi> phis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      cover.push_back(Subset{}.with(i).with(j));
      phis.push_back(ConcavePhi::table({-j_over_n, j_over_n, -j_over_n}));
    }
  return DecomposableFunction(n, std::move(cover), std::move(phis));
}

double DecomposableFunction::eval(Subset s) const {
  check_subset(s);
  double total = 0.0;
  for (std::size_t a = 0; a < cover_.size(); ++a)
    total += phis_[a].value(cover_[a].intersect(s).cardinality());
  return total;
}

double DecomposableFunction::marginal_gain(int i, Subset s) const {
  check_gain_args(i, s);
  double gain = 0.0;
  for (int a : member_sets_[static_cast<std::size_t>(i)]) {
    const int card = cover_[static_cast<std::size_t>(a)].intersect(s).cardinality();
    gain += phis_[static_cast<std::size_t>(a)].value(card + 1) -
            phis_[static_cast<std::size_t>(a)].value(card);
  }
  return gain;
}

double DecomposableFunction::hessian_entry(int i, int j, Subset s) const {
  check_hessian_args(i, j, s);
  double total = 0.0;
  for (int a : member_sets_[static_cast<std::size_t>(std::min(i, j))]) {
    const Subset A = cover_[static_cast<std::size_t>(a)];
    if (!A.contains(std::max(i, j))) continue;
    total += phis_[static_cast<std::size_t>(a)].second_difference(A.intersect(s).cardinality());
  }
  return total;
}

bool DecomposableFunction::all_smooth() const {
  return std::all_of(phis_.begin(), phis_.end(),
                     [](const ConcavePhi& phi) { return phi.smooth(); });
}

double DecomposableFunction::derivative_floor() const {
  double c = std::numeric_limits<double>::infinity();
  for (const ConcavePhi& phi : phis_)
    c = std::min(c, phi.min_first_derivative(ground_size()));
  return c;
}

double DecomposableFunction::second_derivative_floor() const {
  double cp = 0.0;
  for (const ConcavePhi& phi : phis_)
    cp = std::min(cp, phi.min_second_derivative(ground_size()));
  return cp;
}

int DecomposableFunction::min_membership() const {
  int lo = static_cast<int>(cover_.size());
  for (const auto& sets : member_sets_)
    lo = std::min(lo, static_cast<int>(sets.size()));
  return lo;
}

int DecomposableFunction::max_union_size() const {
  int hi = 0;
  for (int i = 0; i < ground_size(); ++i) {
    Subset u;
    for (int a : member_sets_[static_cast<std::size_t>(i)])
      u = u.unite(cover_[static_cast<std::size_t>(a)]);
    hi = std::max(hi, u.cardinality());
  }
  return hi;
}

int DecomposableFunction::max_pair_multiplicity() const {
  int hi = 0;
  for (int i = 0; i < ground_size(); ++i)
    for (int j = i + 1; j < ground_size(); ++j) {
      int count = 0;
      for (int a : member_sets_[static_cast<std::size_t>(i)])
        if (cover_[static_cast<std::size_t>(a)].contains(j)) ++count;
      hi = std::max(hi, count);
    }
  return hi;
}

}  // namespace dppmix
