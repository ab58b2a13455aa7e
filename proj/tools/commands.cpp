#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dppmix/estimation.hpp"
#include "dppmix/model_spec.hpp"
#include "dppmix/oracle.hpp"
#include "dppmix/rng.hpp"
#include "report.hpp"

namespace dppmix::cli {

namespace {

Subset parse_marginal(const std::string& text, int n) {
  std::uint64_t bits = 0;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    int site = -1;
    try {
      site = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw std::runtime_error("--marginal: '" + token + "' is not a site index");
    }
    if (used != token.size())
      throw std::runtime_error("--marginal: '" + token + "' is not a site index");
    if (site < 0 || site >= n)
      throw std::runtime_error("--marginal: site " + std::to_string(site) +
                               " outside the ground set");
    const std::uint64_t bit = std::uint64_t{1} << site;
    if (bits & bit)
      throw std::runtime_error("--marginal: site " + std::to_string(site) + " listed twice");
    bits |= bit;
  }
  if (bits == 0) throw std::runtime_error("--marginal: no sites given");
  return Subset::from_bits(bits);
}

InitialDistribution parse_init(const std::string& s, int n) {
  if (s == "empty") return InitialDistribution::point_mass(Subset{});
  if (s == "full") return InitialDistribution::point_mass(Subset::from_bits(full_mask(n)));
  if (s == "uniform") return InitialDistribution::uniform();
  throw std::runtime_error("unknown initial state '" + s + "' (want empty|full|uniform)");
}

}  // namespace

int run_certify(const CertifyOptions& opt) {
  const PointProcess p = load_model(opt.model);
  if (!(opt.epsilon > 0.0 && opt.epsilon < 1.0))
    throw std::runtime_error("--epsilon must lie in (0, 1)");
  const Certificate cert = certify(p, parse_condition(opt.condition));
  emit_text(certificate_report(p, cert, opt.epsilon, opt.include_matrices).dump(), opt.out);
  return cert.satisfied ? 0 : 2;
}

int run_sample(const SampleOptions& opt) {
  const PointProcess p = load_model(opt.model);
  if (opt.sweeps < 0) throw std::runtime_error("--sweeps must be nonnegative");
  if (opt.replicas < 1) throw std::runtime_error("--replicas must be positive");
  ChainConfig cfg;
  cfg.kernel = parse_kernel(opt.kernel);
  cfg.scan = parse_scan(opt.scan);
  cfg.sweeps = opt.sweeps;
  cfg.seed = opt.seed;
  cfg.initial = parse_init(opt.init, p.size());

  const std::vector<Subset> finals = run_replicas(p, cfg, opt.replicas);
  std::string text;
  for (std::size_t r = 0; r < finals.size(); ++r) {
    JsonValue row = JsonValue::object();
    row.set("replica", JsonValue::integer(static_cast<std::int64_t>(r)));
    JsonValue labels = JsonValue::array();
    for (const int i : finals[r].elements()) labels.push(JsonValue::string(p.ground.label(i)));
    row.set("labels", std::move(labels));
    row.set("bitmask", JsonValue::string(bitmask_hex(finals[r])));
    text += row.dump_compact();
    text += '\n';
  }
  emit_text(text, opt.out);
  return 0;
}

int run_estimate(const EstimateOptions& opt) {
  const PointProcess p = load_model(opt.model);
  const Subset target = parse_marginal(opt.marginal, p.size());
  const bool have_bias = opt.target_bias >= 0.0;
  const bool have_sweeps = opt.sweeps >= 0;
  if (have_bias == have_sweeps)
    throw std::runtime_error("give exactly one of --target-bias and --sweeps");
  if (have_bias && opt.target_bias <= 0.0)
    throw std::runtime_error("--target-bias must be positive");
  if (opt.replicas < 1) throw std::runtime_error("--replicas must be positive");

  const std::optional<Certificate> cert = best_certificate(p);
  int sweeps = opt.sweeps;
  if (have_bias) {
    if (!cert) {
      std::cerr << "no condition certifies this model (gamma >= 1 everywhere); "
                   "cannot size sweeps for a bias target, rerun with --sweeps\n";
      return 2;
    }
    sweeps = choose_m(cert->gamma, target.cardinality(), opt.target_bias);
  }

  ChainConfig cfg;
  cfg.kernel = parse_kernel(opt.kernel);
  cfg.scan = parse_scan(opt.scan);
  cfg.sweeps = sweeps;
  cfg.seed = opt.seed;
  cfg.initial = InitialDistribution::point_mass(Subset{});
  const EstimateReport est =
      estimate_marginal(p, target, cfg, opt.replicas, cert ? &*cert : nullptr);

  JsonValue report = JsonValue::object();
  report.set("schema_version", JsonValue::integer(1));
  report.set("family", JsonValue::string(p.f->family()));
  report.set("n", JsonValue::integer(p.size()));
  report.set("beta", JsonValue::number(p.beta));
  JsonValue sites = JsonValue::array();
  JsonValue site_labels = JsonValue::array();
  for (const int i : target.elements()) {
    sites.push(JsonValue::integer(i));
    site_labels.push(JsonValue::string(p.ground.label(i)));
  }
  JsonValue target_json = JsonValue::object();
  target_json.set("sites", std::move(sites));
  target_json.set("labels", std::move(site_labels));
  target_json.set("bitmask", JsonValue::string(bitmask_hex(target)));
  report.set("marginal", std::move(target_json));
  report.set("kernel", JsonValue::string(kernel_name(cfg.kernel)));
  report.set("scan", JsonValue::string(scan_name(cfg.scan)));
  report.set("sweeps", JsonValue::integer(est.sweeps));
  report.set("replicas", JsonValue::integer(est.replicas));
  report.set("seed", JsonValue::integer(static_cast<std::int64_t>(opt.seed)));
  if (have_bias) report.set("target_bias", JsonValue::number(opt.target_bias));
  if (cert) {
    report.set("condition", JsonValue::string(condition_name(cert->condition)));
    report.set("gamma", JsonValue::number(cert->gamma));
  } else {
    report.set("condition", JsonValue::null());
    report.set("gamma", JsonValue::null());
  }
  report.set("estimate", JsonValue::number(est.estimate));
  report.set("bounded", JsonValue::boolean(est.bounded));
  if (est.bounded) {
    report.set("bias_bound", JsonValue::number(est.bias_bound));
    report.set("mse_bound", JsonValue::number(est.mse_bound));
  } else {
    report.set("bias_bound", JsonValue::null());
    report.set("mse_bound", JsonValue::null());
  }
  emit_text(report.dump(), opt.out);
  return 0;
}

// ---------------------------------------------------------------------------
// verify suites

namespace {

struct CheckRow {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

void suite_kernels(const PointProcess& p, std::vector<CheckRow>& rows) {
  const ExactDistribution mu = exact_distribution(p);
  for (const KernelKind kernel : {KernelKind::Gibbs, KernelKind::MetropolisHastings}) {
    const std::string prefix = "kernels/" + kernel_name(kernel) + "/";

    double worst = 0.0;
    for (int i = 0; i < p.size(); ++i) {
      Eigen::VectorXd rho = mu.probs;
      apply_single_site(p, kernel, i, rho);
      worst = std::max(worst, (rho - mu.probs).lpNorm<1>());
    }
    rows.push_back({prefix + "single-site", worst <= 1e-10, false,
                    "max ||mu T[i] - mu||_1 = " + format_double(worst)});

    Eigen::VectorXd rho = mu.probs;
    apply_systematic_sweep(p, kernel, rho);
    const double resid_s = (rho - mu.probs).lpNorm<1>();
    rows.push_back({prefix + "systematic", resid_s <= 1e-10, false,
                    "||mu T_s - mu||_1 = " + format_double(resid_s)});

    rho = mu.probs;
    apply_random_sweep(p, kernel, rho);
    const double resid_r = (rho - mu.probs).lpNorm<1>();
    rows.push_back({prefix + "random", resid_r <= 1e-10, false,
                    "||mu T_r - mu||_1 = " + format_double(resid_r)});
  }
}

void suite_theorem1(const PointProcess& p, double epsilon, std::vector<CheckRow>& rows) {
  const std::optional<Certificate> cert = best_certificate(p);
  if (!cert) {
    rows.push_back({"theorem1/contraction", true, true,
                    "skipped: no condition certifies gamma < 1 for this model"});
    return;
  }
  const int n = p.size();
  const auto states = std::size_t{1} << n;

  std::vector<TestFunction> test_functions;
  test_functions.push_back(TestFunction::indicator_all_ones(Subset{}.with(0), n));
  CounterRng rng(0x7e57f00dULL);
  std::vector<double> table(states);
  for (auto& v : table) v = rng.next_double();
  test_functions.push_back(TestFunction::from_table(std::move(table), n));

  Eigen::VectorXd rho0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(states));
  rho0[0] = 1.0;  // point mass at the empty set

  const int max_sweeps = 12;
  for (std::size_t k = 0; k < test_functions.size(); ++k) {
    const Theorem1Report rep =
        theorem1_check(p, test_functions[k], rho0, max_sweeps, *cert, epsilon);
    const std::string which = k == 0 ? "indicator" : "random-table";
    double worst_margin = 0.0;
    bool contraction_ok = true;
    for (const Theorem1Row& row : rep.rows) {
      contraction_ok = contraction_ok && row.ok;
      worst_margin = std::max({worst_margin, row.lhs_systematic - row.rhs_systematic,
                               row.lhs_random - row.rhs_random});
    }
    rows.push_back({"theorem1/contraction/" + which, contraction_ok, false,
                    "gamma = " + format_double(rep.gamma) +
                        ", worst bound margin = " + format_double(worst_margin)});
    if (k == 0) {
      rows.push_back(
          {"theorem1/mixing-time", rep.mixing_time_ok, false,
           "tau_s(" + format_double(epsilon) + ") = " + std::to_string(rep.tau_systematic) +
               ", TV = " + format_double(rep.tv_at_tau_systematic) + "; tau_r = " +
               std::to_string(rep.tau_random) + ", TV = " + format_double(rep.tv_at_tau_random)});
    }
  }
}

void suite_lemma4(const PointProcess& p, std::vector<CheckRow>& rows) {
  const Eigen::MatrixXd c = dobrushin_gibbs_exact(p).entries;
  const Eigen::MatrixXd ct = dobrushin_mh_exact(p).entries;
  double worst = 0.0;  // most positive violation of the sandwich
  for (int i = 0; i < p.size(); ++i) {
    worst = std::max(worst, c(i, i));            // C_ii = 0
    worst = std::max(worst, c(i, i) - ct(i, i)); // C_ii <= C~_ii
    for (int j = 0; j < p.size(); ++j) {
      if (i == j) continue;
      worst = std::max(worst, 0.25 * ct(i, j) - c(i, j));  // C~/4 <= C
      worst = std::max(worst, c(i, j) - ct(i, j));         // C <= C~
    }
  }
  rows.push_back({"lemma4/sandwich", worst <= 1e-10, false,
                  "worst violation = " + format_double(worst)});
}

void suite_corollaries(const PointProcess& p, std::vector<CheckRow>& rows) {
  // Chain of bounds: closed form >= enumerated submodular condition >= ||C||_inf.
  Certificate closed;
  bool have_closed = true;
  try {
    closed = certify_family(p);
  } catch (const std::exception& e) {
    have_closed = false;
    rows.push_back({"corollaries/chain", true, true, std::string("skipped: ") + e.what()});
  }
  if (have_closed) {
    const Certificate enumerated = certify(p, ConditionKind::Submodular);
    const double c_norm = dobrushin_gibbs_exact(p).inf_norm();
    const double margin = std::max(enumerated.gamma - closed.gamma - 1e-9,
                                   c_norm - enumerated.gamma - 1e-9);
    rows.push_back({"corollaries/chain", margin <= 0.0, false,
                    "closed-form gamma = " + format_double(closed.gamma) +
                        " >= enumerated gamma = " + format_double(enumerated.gamma) +
                        " >= ||C||_inf = " + format_double(c_norm)});
  }

  // Closed-form gains and Hessians against evaluation differences.
  const double tol = p.f->family() == "log_det" ? 1e-6 : 1e-9;
  CounterRng rng(0xd1ffe4e5ULL);
  const int n = p.size();
  double worst_gain = 0.0;
  double worst_hessian = 0.0;
  for (int trial = 0; trial < 256; ++trial) {
    const std::uint64_t mask = rng.next_u64() & full_mask(n);
    const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const Subset s_gain = Subset::from_bits(mask).without(i);
    worst_gain = std::max(worst_gain, std::abs(p.f->marginal_gain(i, s_gain) -
                                               finite_difference_gain(*p.f, i, s_gain)));
    if (n < 2) continue;
    int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    if (j == i) j = (j + 1) % n;
    const Subset s = s_gain.without(j);
    worst_hessian =
        std::max(worst_hessian, std::abs(p.f->hessian_entry(i, j, s) -
                                         finite_difference_hessian(*p.f, i, j, s)));
  }
  rows.push_back({"corollaries/derivatives", worst_gain <= tol && worst_hessian <= tol, false,
                  "max |gain - diff| = " + format_double(worst_gain) +
                      ", max |hessian - diff| = " + format_double(worst_hessian)});
}

}  // namespace

int run_verify(const VerifyOptions& opt) {
  const PointProcess p = load_model(opt.model);
  if (opt.max_n < 1) throw std::runtime_error("--max-n must be positive");
  if (p.size() > opt.max_n)
    throw std::runtime_error("model has n = " + std::to_string(p.size()) +
                             " > --max-n = " + std::to_string(opt.max_n) +
                             "; exhaustive verification refused");
  if (!(opt.epsilon > 0.0 && opt.epsilon < 1.0))
    throw std::runtime_error("--epsilon must lie in (0, 1)");

  const bool all = opt.suite == "all";
  if (!all && opt.suite != "kernels" && opt.suite != "theorem1" && opt.suite != "lemma4" &&
      opt.suite != "corollaries")
    throw std::runtime_error("unknown suite '" + opt.suite +
                             "' (want kernels|theorem1|lemma4|corollaries|all)");

  std::vector<CheckRow> rows;
  if (all || opt.suite == "kernels") suite_kernels(p, rows);
  if (all || opt.suite == "theorem1") suite_theorem1(p, opt.epsilon, rows);
  if (all || opt.suite == "lemma4") suite_lemma4(p, rows);
  if (all || opt.suite == "corollaries") suite_corollaries(p, rows);

  bool pass = true;
  std::string text;
  for (const CheckRow& row : rows) {
    pass = pass && row.pass;
    text += row.pass ? (row.skipped ? "[SKIP] " : "[PASS] ") : "[FAIL] ";
    text += row.name + " — " + row.detail + "\n";
  }

  JsonValue summary = JsonValue::object();
  summary.set("schema_version", JsonValue::integer(1));
  summary.set("family", JsonValue::string(p.f->family()));
  summary.set("n", JsonValue::integer(p.size()));
  summary.set("beta", JsonValue::number(p.beta));
  summary.set("suite", JsonValue::string(opt.suite));
  summary.set("epsilon", JsonValue::number(opt.epsilon));
  JsonValue checks = JsonValue::array();
  for (const CheckRow& row : rows) {
    JsonValue item = JsonValue::object();
    item.set("name", JsonValue::string(row.name));
    item.set("pass", JsonValue::boolean(row.pass));
    item.set("skipped", JsonValue::boolean(row.skipped));
    item.set("detail", JsonValue::string(row.detail));
    checks.push(std::move(item));
  }
  summary.set("checks", std::move(checks));
  summary.set("pass", JsonValue::boolean(pass));
  text += summary.dump();
  emit_text(text, "");
  return pass ? 0 : 2;
}

}  // namespace dppmix::cli
