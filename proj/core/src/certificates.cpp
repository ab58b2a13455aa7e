#include "dppmix/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dppmix/families.hpp"
#include "dppmix/gaussian.hpp"
#include "dppmix/rng.hpp"

namespace dppmix {

namespace {

constexpr int kEnumerationCap = 20;
constexpr int kLogDetEnumerationCap = 16;

void require_enumerable(const PointProcess& p, int cap, const char* who) {
  if (p.size() > cap)
    throw std::domain_error(std::string(who) + ": ground set too large for enumeration");
}

double stable_sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double capped_exp(double t) { return t >= 0.0 ? 1.0 : std::exp(t); }

// Tracks min/max of the Hessian over configurations avoiding {i, j}.
struct HessianRange {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
};

HessianRange hessian_range(const SetFunction& f, int i, int j) {
  HessianRange r;
  for_each_subset_excluding(f.ground_size(), Subset{}.with(i).with(j), [&](Subset s) {
    const double h = f.hessian_entry(i, j, s);
    r.lo = std::min(r.lo, h);
    r.hi = std::max(r.hi, h);
  });
  return r;
}

Certificate make_certificate(const PointProcess& p, ConditionKind condition, double gamma,
                             double alpha, double m_inf) {
  Certificate cert;
  cert.condition = condition;
  cert.family = p.f->family();
  cert.n = p.size();
  cert.beta = p.beta;
  cert.gamma = gamma;
  cert.lambda = std::exp(gamma - 1.0);
  cert.alpha_beta = alpha;
  cert.m_inf_norm = m_inf;
  cert.satisfied = gamma < 1.0;
  return cert;
}

int ceil_mixing_time(int n, double eps, double rate_gap) {
  if (!(eps > 0.0)) throw std::invalid_argument("mixing time: eps must be positive");
  const double t = std::log(static_cast<double>(n) / eps) / rate_gap;
  return std::max(0, static_cast<int>(std::ceil(t)));
}

}  // namespace

double DobrushinMatrix::inf_norm() const {
  return entries.cwiseAbs().rowwise().sum().maxCoeff();
}

int Certificate::tau_systematic(double eps) const {
  if (!satisfied)
    throw std::domain_error("tau_systematic: certificate unsatisfied (gamma >= 1)");
  return ceil_mixing_time(n, eps, 1.0 - gamma);
}

int Certificate::tau_random(double eps) const {
  if (!satisfied)
    throw std::domain_error("tau_random: certificate unsatisfied (lambda >= 1)");
  return ceil_mixing_time(n, eps, 1.0 - lambda);
}

double Certificate::bias_bound(int sweeps, int marginal_cardinality) const {
  if (sweeps < 0 || marginal_cardinality < 0)
    throw std::invalid_argument("bias_bound: negative arguments");
  return marginal_cardinality * std::pow(gamma, sweeps);
}

double Certificate::mse_bound(int sweeps, std::int64_t replicas,
                              int marginal_cardinality) const {
  if (replicas < 1) throw std::invalid_argument("mse_bound: needs at least one replica");
  const double bias = bias_bound(sweeps, marginal_cardinality);
  return bias * bias + 1.0 / static_cast<double>(replicas);
}

DobrushinMatrix dobrushin_gibbs_exact(const PointProcess& p) {
  require_enumerable(p, kEnumerationCap, "dobrushin_gibbs_exact");
  const int n = p.size();
  const SetFunction& f = *p.f;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double worst = 0.0;
      for_each_subset_excluding(n, Subset{}.with(i).with(j), [&](Subset s) {
        const double a = stable_sigmoid(p.beta * f.marginal_gain(i, s));
        const double b = stable_sigmoid(p.beta * f.marginal_gain(i, s.with(j)));
        worst = std::max(worst, std::abs(a - b));
      });
      c(i, j) = worst;
    }
  }
  return DobrushinMatrix{DobrushinKind::GibbsExact, Provenance::Enumerated, std::move(c)};
}

DobrushinMatrix dobrushin_mh_exact(const PointProcess& p) {
  require_enumerable(p, kEnumerationCap, "dobrushin_mh_exact");
  const int n = p.size();
  const SetFunction& f = *p.f;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    // Diagonal: worst-case rejection mass, max_S exp(-beta |Delta_i f(S)|).
    double diag = 0.0;
    for_each_subset_excluding(n, Subset{}.with(i), [&](Subset s) {
      diag = std::max(diag, std::exp(-p.beta * std::abs(f.marginal_gain(i, s))));
    });
    c(i, i) = diag;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double worst = 0.0;
      for_each_subset_excluding(n, Subset{}.with(i).with(j), [&](Subset s) {
        const double a = p.beta * f.marginal_gain(i, s);
        const double b = p.beta * f.marginal_gain(i, s.with(j));
        const double gap_on = std::abs(capped_exp(-a) - capped_exp(-b));
        const double gap_off = std::abs(capped_exp(a) - capped_exp(b));
        worst = std::max(worst, std::max(gap_on, gap_off));
      });
      c(i, j) = worst;
    }
  }
  return DobrushinMatrix{DobrushinKind::MHExact, Provenance::Enumerated, std::move(c)};
}

DobrushinMatrix dobrushin_upper_bound_matrix(const PointProcess& p) {
  require_enumerable(p, kEnumerationCap, "dobrushin_upper_bound_matrix");
  const int n = p.size();
  const double alpha = alpha_beta(p, AlphaMode::General);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const HessianRange range = hessian_range(*p.f, i, j);
      const double worst = std::max(std::abs(1.0 - std::exp(p.beta * range.lo)),
                                    std::abs(1.0 - std::exp(p.beta * range.hi)));
      r(i, j) = r(j, i) = alpha * worst;
    }
  return DobrushinMatrix{DobrushinKind::UpperBound, Provenance::Enumerated, std::move(r)};
}

DobrushinMatrix hessian_bound_matrix(const PointProcess& p) {
  const int n = p.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);

  if (const auto* fac = dynamic_cast<const FacilityLocation*>(p.f.get())) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = -fac->hessian_floor(i, j);
    return DobrushinMatrix{DobrushinKind::HessianBound, Provenance::ClosedForm, std::move(m)};
  }
  if (const auto* cut = dynamic_cast<const GraphCutFunction*>(p.f.get())) {
    m = 2.0 * cut->coeff_c() * cut->weights();
    return DobrushinMatrix{DobrushinKind::HessianBound, Provenance::ClosedForm, std::move(m)};
  }
  if (const auto* dec = dynamic_cast<const DecomposableFunction*>(p.f.get())) {
    bool closed_form_ok = true;
    for (std::size_t a = 0; a < dec->cover().size(); ++a) {
      const int card = dec->cover()[a].cardinality();
      closed_form_ok = closed_form_ok && dec->phis()[a].discretely_concave(card) &&
                       dec->phis()[a].second_difference_magnitude_nonincreasing(card);
    }
    if (closed_form_ok) {
      // Every per-shape |second difference| peaks at intersection count 0, so
      // the joint maximizer is the empty configuration.
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          m(i, j) = m(j, i) = std::abs(dec->hessian_entry(i, j, Subset{}));
      return DobrushinMatrix{DobrushinKind::HessianBound, Provenance::ClosedForm,
                             std::move(m)};
    }
  }

  require_enumerable(p, kEnumerationCap, "hessian_bound_matrix");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const HessianRange range = hessian_range(*p.f, i, j);
      m(i, j) = m(j, i) = std::max(std::abs(range.lo), std::abs(range.hi));
    }
  return DobrushinMatrix{DobrushinKind::HessianBound, Provenance::Enumerated, std::move(m)};
}

double alpha_beta(const PointProcess& p, AlphaMode mode) {
  const int n = p.size();
  const SetFunction& f = *p.f;
  double min_gain = std::numeric_limits<double>::infinity();
  switch (mode) {
    case AlphaMode::General:
      require_enumerable(p, kEnumerationCap, "alpha_beta");
      for (int i = 0; i < n; ++i)
        for_each_subset_excluding(n, Subset{}.with(i), [&](Subset s) {
          min_gain = std::min(min_gain, f.marginal_gain(i, s));
        });
      break;
    case AlphaMode::Submodular:
      for (int i = 0; i < n; ++i)
        min_gain = std::min(min_gain, f.marginal_gain(i, Subset::from_bits(full_mask(n)).without(i)));
      break;
    case AlphaMode::Supermodular:
      for (int i = 0; i < n; ++i)
        min_gain = std::min(min_gain, f.marginal_gain(i, Subset{}));
      break;
  }
  return std::exp(-p.beta * min_gain);
}

bool submodularity_holds(const SetFunction& f, double tol) {
  const int n = f.ground_size();
  if (n <= 10) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        bool ok = true;
        for_each_subset_excluding(n, Subset{}.with(i).with(j), [&](Subset s) {
          if (f.hessian_entry(i, j, s) > tol) ok = false;
        });
        if (!ok) return false;
      }
    return true;
  }
  // Seeded spot check on larger ground sets.
  CounterRng rng(0x5e7f0bd5u);
  for (int trial = 0; trial < 4096; ++trial) {
    const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
    if (j >= i) ++j;
    const Subset s =
        Subset::from_bits(rng.next_u64() & full_mask(n)).without(i).without(j);
    if (f.hessian_entry(i, j, s) > tol) return false;
  }
  return true;
}

Certificate certify(const PointProcess& p, ConditionKind condition) {
  const int n = p.size();
  switch (condition) {
    case ConditionKind::General: {
      require_enumerable(p, kEnumerationCap, "certify(general)");
      const double alpha = alpha_beta(p, AlphaMode::General);
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
      Eigen::MatrixXd influence = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const HessianRange range = hessian_range(*p.f, i, j);
          m(i, j) = m(j, i) = std::max(std::abs(range.lo), std::abs(range.hi));
          const double worst = std::max(std::abs(1.0 - std::exp(p.beta * range.lo)),
                                        std::abs(1.0 - std::exp(p.beta * range.hi)));
          influence(i, j) = influence(j, i) = worst;
        }
      const double gamma = alpha * influence.rowwise().sum().maxCoeff();
      return make_certificate(p, condition, gamma, alpha,
                              m.rowwise().sum().maxCoeff());
    }
    case ConditionKind::Submodular: {
      if (!submodularity_holds(*p.f))
        throw std::invalid_argument(
            "certify(submodular): positive Hessian entry detected; the function is not "
            "submodular");
      const DobrushinMatrix m = hessian_bound_matrix(p);
      const double alpha = alpha_beta(p, AlphaMode::Submodular);
      const Eigen::ArrayXXd terms = 1.0 - (-p.beta * m.entries.array()).exp();
      const double gamma = alpha * terms.rowwise().sum().maxCoeff();
      return make_certificate(p, condition, gamma, alpha, m.inf_norm());
    }
    case ConditionKind::Simplified: {
      // 1 - e^{beta H} <= beta |H| needs H <= 0: the linearized envelope is
      // only an upper bound of the influence terms for submodular f.
      if (!submodularity_holds(*p.f))
        throw std::invalid_argument(
            "certify(simplified): positive Hessian entry detected; the linearized bound "
            "beta * ||M||_inf only dominates the influence terms for submodular "
            "functions, use the general condition");
      const DobrushinMatrix m = hessian_bound_matrix(p);
      const double alpha = alpha_beta(p, AlphaMode::Submodular);
      const double gamma = alpha * p.beta * m.inf_norm();
      return make_certificate(p, condition, gamma, alpha, m.inf_norm());
    }
    case ConditionKind::ClosedForm:
      return certify_family(p);
  }
  throw std::logic_error("certify: unreachable");
}

namespace {

Certificate certify_facility(const PointProcess& p, const FacilityLocation& fac) {
  const int n = p.size();
  const double alpha = std::exp(fac.lambda() * p.beta);
  double worst_row = 0.0;
  double m_inf = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    double m_row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double overlap = -fac.hessian_floor(i, j);  // sum_k min(L_ki, L_kj)
      row += 1.0 - std::exp(-p.beta * overlap);
      m_row += overlap;
    }
    worst_row = std::max(worst_row, row);
    m_inf = std::max(m_inf, m_row);
  }
  return make_certificate(p, ConditionKind::ClosedForm, alpha * worst_row, alpha, m_inf);
}

Certificate certify_graph_cut(const PointProcess& p, const GraphCutFunction& cut) {
  const int n = p.size();
  // alpha = exp(-beta min_i Delta_i f(V \ {i})) with Delta_i f(V \ {i}) =
  // (b - 2c) row_i: which row attains the minimum flips with the sign of
  // b - 2c, so minimize the product rather than the row sum alone.
  double min_gain = std::numeric_limits<double>::infinity();
  const double slope = cut.coeff_b() - 2.0 * cut.coeff_c();
  for (int i = 0; i < n; ++i) min_gain = std::min(min_gain, slope * cut.row_sum(i));
  const double alpha = std::exp(-p.beta * min_gain);
  const Eigen::ArrayXXd m = 2.0 * cut.coeff_c() * cut.weights().array();
  // Diagonal terms vanish since L(i,i) = 0.
  const double worst_row = (1.0 - (-p.beta * m).exp()).rowwise().sum().maxCoeff();
  const double m_inf = m.abs().rowwise().sum().maxCoeff();
  return make_certificate(p, ConditionKind::ClosedForm, alpha * worst_row, alpha, m_inf);
}

Certificate certify_log_det(const PointProcess& p, const LogDetFunction& f) {
  require_enumerable(p, kLogDetEnumerationCap, "certify_family(log_det)");
  const int n = p.size();
  const Eigen::MatrixXd& L = f.kernel();

  double alpha = 0.0;
  const Subset full = Subset::from_bits(full_mask(n));
  for (int i = 0; i < n; ++i)
    alpha = std::max(alpha, std::pow(conditional_variance(L, i, full.without(i)), -p.beta));

  double worst_row = 0.0;
  double m_inf = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    double m_row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double rho2_max = 0.0;
      for_each_subset_excluding(n, Subset{}.with(i).with(j), [&](Subset s) {
        const double rho = conditional_pair_stats(L, i, j, s).rho;
        rho2_max = std::max(rho2_max, rho * rho);
      });
      // 1 - e^{-2 beta I_max} = 1 - (1 - rho^2_max)^beta; at beta = 1 this is
      // rho^2_max itself.
      row += p.beta == 1.0 ? rho2_max : 1.0 - std::pow(1.0 - rho2_max, p.beta);
      m_row += std::abs(std::log1p(-rho2_max));
    }
    worst_row = std::max(worst_row, row);
    m_inf = std::max(m_inf, m_row);
  }
  return make_certificate(p, ConditionKind::ClosedForm, alpha * worst_row, alpha, m_inf);
}

Certificate certify_decomposable(const PointProcess& p, const DecomposableFunction& dec) {
  if (!dec.all_smooth())
    throw std::invalid_argument(
        "certify_family(decomposable): table shapes carry no derivative bounds; use an "
        "enumerated condition");
  if (dec.max_pair_multiplicity() > 1)
    throw std::invalid_argument(
        "certify_family(decomposable): the closed form requires each pair to be covered "
        "by at most one set; use an enumerated condition");
  const double c = dec.derivative_floor();
  const double cp = dec.second_derivative_floor();
  const double alpha = std::exp(-c * p.beta * dec.min_membership());
  const double gamma = (1.0 - std::exp(cp * p.beta)) * alpha * dec.max_union_size();
  const DobrushinMatrix m = hessian_bound_matrix(p);
  return make_certificate(p, ConditionKind::ClosedForm, gamma, alpha, m.inf_norm());
}

}  // namespace

Certificate certify_family(const PointProcess& p) {
  if (const auto* fac = dynamic_cast<const FacilityLocation*>(p.f.get()))
    return certify_facility(p, *fac);
  if (const auto* cut = dynamic_cast<const GraphCutFunction*>(p.f.get()))
    return certify_graph_cut(p, *cut);
  if (const auto* ld = dynamic_cast<const LogDetFunction*>(p.f.get()))
    return certify_log_det(p, *ld);
  if (const auto* dec = dynamic_cast<const DecomposableFunction*>(p.f.get()))
    return certify_decomposable(p, *dec);
  throw std::invalid_argument("certify_family: no closed-form certificate for family '" +
                              p.f->family() + "'");
}

double curvature(const SetFunction& f) {
  const int n = f.ground_size();
  if (f.eval(Subset{}) < 0.0)
    throw std::invalid_argument("curvature: requires f(empty) >= 0");

  if (n <= 12) {
    for (int i = 0; i < n; ++i) {
      bool ok = true;
      for_each_subset_excluding(n, Subset{}.with(i), [&](Subset s) {
        if (f.marginal_gain(i, s) < -1e-12) ok = false;
      });
      if (!ok) throw std::invalid_argument("curvature: f is not monotone");
    }
  } else if (!f.claims_monotone()) {
    throw std::invalid_argument(
        "curvature: cannot verify monotonicity (n > 12 and the family does not claim it)");
  }

  const Subset full = Subset::from_bits(full_mask(n));
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double singleton = f.eval(Subset{}.with(i)) - f.eval(Subset{});
    if (singleton == 0.0) continue;
    min_ratio = std::min(min_ratio, f.marginal_gain(i, full.without(i)) / singleton);
  }
  if (!std::isfinite(min_ratio))
    throw std::invalid_argument("curvature: undefined, f vanishes on every singleton");
  return 1.0 - min_ratio;
}

DecayReport decay_check(const DobrushinMatrix& m, const Eigen::MatrixXd& metric,
                        DecayMode mode, double alpha_prime) {
  const Eigen::Index n = m.entries.rows();
  if (metric.rows() != n || metric.cols() != n)
    throw std::invalid_argument("decay_check: metric size mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (metric(i, i) != 0.0)
      throw std::invalid_argument("decay_check: metric diagonal must be zero");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (metric(i, j) < 0.0 || metric(i, j) != metric(j, i))
        throw std::invalid_argument("decay_check: metric must be symmetric and nonnegative");
    }
  }

  DecayReport report;
  report.mode = mode;
  if (mode == DecayMode::Exponential) {
    if (!(alpha_prime >= 0.0))
      throw std::invalid_argument("decay_check: alpha' must be nonnegative");
    report.alpha_prime = alpha_prime;
    double alpha = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        alpha = std::max(alpha, m.entries(i, j) * std::exp(alpha_prime * metric(i, j)));
      }
    report.alpha = alpha;
    double bound = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        row += alpha * std::exp(-alpha_prime * metric(i, j));
      bound = std::max(bound, row);
    }
    report.bound = bound;
    return report;
  }

  double radius = 0.0;
  double strength = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j || m.entries(i, j) == 0.0) continue;
      radius = std::max(radius, metric(i, j));
      strength = std::max(strength, m.entries(i, j));
    }
  int neighborhood = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    int count = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (metric(i, j) <= radius) ++count;
    neighborhood = std::max(neighborhood, count);
  }
  report.range = radius;
  report.strength = strength;
  report.neighborhood = neighborhood;
  report.bound = strength * neighborhood;
  return report;
}

}  // namespace dppmix
