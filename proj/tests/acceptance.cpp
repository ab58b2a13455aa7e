// Acceptance gate: one line per criterion, [PASS] or [FAIL], exit status is
// the number of failed criteria. Tolerances are fixed here, not configurable.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dppmix/certificates.hpp"
#include "dppmix/estimation.hpp"
#include "dppmix/families.hpp"
#include "dppmix/gaussian.hpp"
#include "dppmix/oracle.hpp"
#include "dppmix/sampler.hpp"
#include "test_util.hpp"

namespace {

using namespace dppmix;
using test::FamilyTag;

struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1. Every kernel/chain combination leaves the exact law invariant. -----

Criterion check_stationarity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(2024001);
  double worst = 0.0;
  int chains = 0;
  for (const FamilyTag tag : test::kAllFamilies) {
    const int n = (tag == FamilyTag::LogDet || tag == FamilyTag::Decomposable) ? 8 : 10;
    const PointProcess p(test::random_function(gen, tag, n), test::uniform(gen, 0.4, 1.2));
    const ExactDistribution mu = exact_distribution(p);
    for (const KernelKind kernel : {KernelKind::Gibbs, KernelKind::MetropolisHastings}) {
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd rho = mu.probs;
        apply_single_site(p, kernel, i, rho);
        worst = std::max(worst, (rho - mu.probs).lpNorm<1>());
        ++chains;
      }
      Eigen::VectorXd rho = mu.probs;
      apply_systematic_sweep(p, kernel, rho);
      worst = std::max(worst, (rho - mu.probs).lpNorm<1>());
      rho = mu.probs;
      apply_random_sweep(p, kernel, rho);
      worst = std::max(worst, (rho - mu.probs).lpNorm<1>());
      chains += 2;
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass = worst <= 1e-10 && elapsed < 30.0;
  return {"stationarity", pass,
          "worst ||mu T - mu||_1 = " + fmt(worst) + " over " + std::to_string(chains) +
              " chains, " + fmt(elapsed) + "s"};
}

// --- 2/3. A shared pool of certified instances across the whole zoo. -------

struct PoolEntry {
  PointProcess p;
  Certificate cert;
};

std::vector<PoolEntry> build_pool() {
  std::vector<PoolEntry> pool;
  std::mt19937_64 gen(2024002);
  for (const FamilyTag tag : test::kAllFamilies) {
    for (int k = 0; k < 3; ++k) {
      const int n = test::uniform_int(gen, 4, 7);
      Certificate cert;
      PointProcess p = test::certified_instance(gen, tag, n, &cert);
      pool.push_back({std::move(p), cert});
    }
  }
  return pool;
}

Criterion check_contraction(const std::vector<PoolEntry>& pool) {
  std::mt19937_64 gen(2024003);
  double worst = -1e300;
  int instances = 0;
  bool shape_ok = true;
  for (const PoolEntry& entry : pool) {
    const int n = entry.p.size();
    const auto states = std::size_t{1} << n;

    std::uint64_t target_bits = gen() & full_mask(n);
    if (target_bits == 0) target_bits = 1;
    std::vector<TestFunction> hs;
    hs.push_back(TestFunction::indicator_all_ones(Subset::from_bits(target_bits), n));
    std::vector<double> table(states);
    for (auto& v : table) v = test::uniform(gen, -1.0, 1.0);
    hs.push_back(TestFunction::from_table(std::move(table), n));

    Eigen::VectorXd rho0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(states));
    rho0[static_cast<Eigen::Index>(gen() % states)] = 1.0;

    for (const TestFunction& h : hs) {
      const Theorem1Report rep = theorem1_check(entry.p, h, rho0, 20, entry.cert);
      shape_ok = shape_ok && !rep.skipped && rep.rows.size() == 21;
      for (const Theorem1Row& row : rep.rows) {
        worst = std::max({worst, row.lhs_systematic - row.rhs_systematic,
                          row.lhs_random - row.rhs_random, row.tv_systematic - row.tv_bound});
      }
    }
    ++instances;
  }
  const bool pass = shape_ok && instances >= 20 && worst <= 1e-10;
  return {"contraction", pass,
          std::to_string(instances) + " certified instances, sweeps 0..20, worst bound margin = " +
              fmt(worst)};
}

Criterion check_mixing_time(const std::vector<PoolEntry>& pool) {
  double worst_ratio = 0.0;  // max over instances of TV(tau(eps)) / eps
  for (const PoolEntry& entry : pool) {
    const int n = entry.p.size();
    const auto states = static_cast<Eigen::Index>(std::size_t{1} << n);
    const ExactDistribution mu = exact_distribution(entry.p);
    for (const double eps : {0.1, 0.01}) {
      const int tau_s = entry.cert.tau_systematic(eps);
      const int tau_r = entry.cert.tau_random(eps);
      for (const std::uint64_t start : {std::uint64_t{0}, full_mask(n)}) {
        Eigen::VectorXd rho = Eigen::VectorXd::Zero(states);
        rho[static_cast<Eigen::Index>(start)] = 1.0;
        for (int m = 0; m < tau_s; ++m) apply_systematic_sweep(entry.p, KernelKind::Gibbs, rho);
        worst_ratio = std::max(worst_ratio, tv_distance(rho, mu.probs) / eps);

        rho.setZero();
        rho[static_cast<Eigen::Index>(start)] = 1.0;
        for (int m = 0; m < tau_r; ++m) apply_random_sweep(entry.p, KernelKind::Gibbs, rho);
        worst_ratio = std::max(worst_ratio, tv_distance(rho, mu.probs) / eps);
      }
    }
  }
  return {"mixing-time", worst_ratio <= 1.0,
          "worst TV(tau(eps)) / eps = " + fmt(worst_ratio) + " for eps in {0.1, 0.01}"};
}

// --- 4. Modular laws: zero rate, one heat-bath sweep is exact. -------------

Criterion check_modular_exactness() {
  std::mt19937_64 gen(2024004);
  double worst_tv = 0.0;
  double worst_gamma = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const int n = test::uniform_int(gen, 6, 10);
    const PointProcess p(test::random_modular(gen, n), test::uniform(gen, 0.3, 1.5));
    worst_gamma = std::max(worst_gamma, std::abs(certify(p, ConditionKind::General).gamma));
    const ExactDistribution mu = exact_distribution(p);
    const auto states = static_cast<Eigen::Index>(std::size_t{1} << n);
    for (int start = 0; start < 3; ++start) {
      Eigen::VectorXd rho = Eigen::VectorXd::Zero(states);
      if (start == 2) {
        rho.setConstant(1.0 / static_cast<double>(states));
      } else {
        rho[start == 0 ? 0 : static_cast<Eigen::Index>(gen() % states)] = 1.0;
      }
      apply_systematic_sweep(p, KernelKind::Gibbs, rho);
      worst_tv = std::max(worst_tv, tv_distance(rho, mu.probs));
    }
  }
  const bool pass = worst_gamma == 0.0 && worst_tv <= 1e-12;
  return {"modular-exactness", pass,
          "gamma = " + fmt(worst_gamma) + ", worst one-sweep TV = " + fmt(worst_tv)};
}

// --- 5. The one-pair family: full curvature, rate 1 - e^{-beta}. -----------

Criterion check_pair_tweak_rate() {
  double worst = 0.0;
  bool curvature_ok = true;
  for (const double beta : {0.1, 0.5, 1.0}) {
    const auto f = std::make_shared<PairTweakFunction>(PairTweakFunction::unit_preset(5, 1, 3));
    const PointProcess p(f, beta);
    curvature_ok = curvature_ok && std::abs(curvature(*f) - 1.0) <= 1e-12;
    const double expected = -std::expm1(-beta);
    for (const ConditionKind c : {ConditionKind::General, ConditionKind::Submodular})
      worst = std::max(worst, std::abs(certify(p, c).gamma - expected));
  }
  const bool pass = curvature_ok && worst <= 1e-12;
  return {"pair-tweak-rate", pass,
          "curvature 1, max |gamma - (1 - e^-beta)| = " + fmt(worst)};
}

// --- 6. Heat-bath vs Metropolis influence matrices sandwich each other. ----

Criterion check_influence_sandwich() {
  std::mt19937_64 gen(2024006);
  double worst = 0.0;
  int instances = 0;
  for (const FamilyTag tag : test::kAllFamilies) {
    for (int k = 0; k < 7; ++k) {
      const int n = test::uniform_int(gen, 2, 8);
      const PointProcess p(test::random_function(gen, tag, n), test::uniform(gen, 0.2, 1.5));
      const Eigen::MatrixXd c = dobrushin_gibbs_exact(p).entries;
      const Eigen::MatrixXd ct = dobrushin_mh_exact(p).entries;
      for (int i = 0; i < n; ++i) {
        worst = std::max({worst, std::abs(c(i, i)), c(i, i) - ct(i, i)});
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          worst = std::max({worst, 0.25 * ct(i, j) - c(i, j), c(i, j) - ct(i, j)});
        }
      }
      ++instances;
    }
  }
  const bool pass = instances >= 50 && worst <= 1e-10;
  return {"influence-sandwich", pass,
          std::to_string(instances) + " instances, worst sandwich violation = " + fmt(worst)};
}

// --- 7. Closed forms dominate enumeration dominates the exact matrix. ------

Criterion check_certificate_chain() {
  std::mt19937_64 gen(2024007);
  double worst_chain = -1e300;
  int chain_instances = 0;
  const FamilyTag closed_families[] = {FamilyTag::Facility, FamilyTag::GraphCut,
                                       FamilyTag::LogDet, FamilyTag::DecomposableM1};
  for (const FamilyTag tag : closed_families) {
    for (int k = 0; k < 5; ++k) {
      const int n = test::uniform_int(gen, 3, 8);
      const PointProcess p(test::random_function(gen, tag, n), test::uniform(gen, 0.3, 1.0));
      const Certificate closed = certify_family(p);
      const Certificate enumerated = certify(p, ConditionKind::Submodular);
      const double c_norm = dobrushin_gibbs_exact(p).inf_norm();
      worst_chain = std::max(
          {worst_chain, enumerated.gamma - closed.gamma, c_norm - enumerated.gamma});
      ++chain_instances;
    }
  }

  double worst_smooth = 0.0;
  double worst_logdet = 0.0;
  for (const FamilyTag tag : test::kAllFamilies) {
    for (int k = 0; k < 2; ++k) {
      const int n = test::uniform_int(gen, 3, 8);
      const auto f = test::random_function(gen, tag, n);
      double& worst = f->family() == "log_det" ? worst_logdet : worst_smooth;
      for (int trial = 0; trial < 128; ++trial) {
        const std::uint64_t mask = gen() & full_mask(n);
        const int i = test::uniform_int(gen, 0, n - 1);
        const Subset s_gain = Subset::from_bits(mask).without(i);
        worst = std::max(worst, std::abs(f->marginal_gain(i, s_gain) -
                                         finite_difference_gain(*f, i, s_gain)));
        int j = test::uniform_int(gen, 0, n - 2);
        if (j >= i) ++j;
        const Subset s = s_gain.without(j);
        worst = std::max(worst, std::abs(f->hessian_entry(i, j, s) -
                                         finite_difference_hessian(*f, i, j, s)));
      }
    }
  }
  const bool pass = chain_instances >= 20 && worst_chain <= 1e-9 && worst_smooth <= 1e-9 &&
                    worst_logdet <= 1e-6;
  return {"certificate-chain", pass,
          "worst chain margin = " + fmt(worst_chain) +
              ", worst derivative residual = " + fmt(worst_smooth) + " (" + fmt(worst_logdet) +
              " log-det)"};
}

// --- 8. Log-det differences equal Gaussian conditional statistics. ---------

Criterion check_gaussian_identities() {
  std::mt19937_64 gen(2024008);
  double worst = 0.0;
  for (int rep = 0; rep < 6; ++rep) {
    const int n = test::uniform_int(gen, 2, 8);
    const auto f = test::random_log_det(gen, n);
    const auto& ld = static_cast<const LogDetFunction&>(*f);
    const Eigen::MatrixXd& L = ld.kernel();
    for (int trial = 0; trial < 200; ++trial) {
      const int i = test::uniform_int(gen, 0, n - 1);
      const Subset s = Subset::from_bits(gen() & full_mask(n)).without(i);
      worst = std::max(worst, std::abs(ld.marginal_gain(i, s) -
                                       std::log(conditional_variance(L, i, s))));
      int j = test::uniform_int(gen, 0, n - 2);
      if (j >= i) ++j;
      const Subset s2 = s.without(j);
      const double rho = conditional_correlation(L, i, j, s2);
      const double h = ld.hessian_entry(i, j, s2);
      worst = std::max({worst, std::abs(h - std::log1p(-rho * rho)),
                        std::abs(h + 2.0 * conditional_mutual_information(L, i, j, s2))});
    }
  }
  return {"gaussian-identities", worst <= 1e-6,
          "worst identity residual = " + fmt(worst)};
}

// --- 9. The certified MSE bound holds across repeated seeded runs. ---------

Criterion check_estimator_bound() {
  const auto t0 = std::chrono::steady_clock::now();

  struct Setup {
    PointProcess p;
    Certificate cert;
  };
  std::vector<Setup> setups;
  {
    const PointProcess p(std::make_shared<ModularFunction>(std::vector<double>(6, -1.0)), 0.8);
    setups.push_back({p, certify(p, ConditionKind::General)});
  }
  {
    const PointProcess p(
        std::make_shared<PairTweakFunction>(std::vector<double>(6, -0.5), 4, 5), 0.8);
    setups.push_back({p, certify(p, ConditionKind::General)});
  }

  const Subset target = Subset{}.with(0).with(1);
  int hits = 0;
  int runs = 0;
  bool certified = true;
  double bound = 0.0;
  for (const Setup& setup : setups) {
    certified = certified && setup.cert.satisfied;
    const double truth = exact_marginal(setup.p, target);
    ChainConfig cfg;
    cfg.sweeps = choose_m(setup.cert.gamma, target.cardinality(), 0.001);
    for (int run = 0; run < 50; ++run) {
      cfg.seed = 1000 + static_cast<std::uint64_t>(run);
      const EstimateReport rep = estimate_marginal(setup.p, target, cfg, 10000, &setup.cert);
      certified = certified && rep.bounded;
      const double err = rep.estimate - truth;
      if (err * err <= rep.mse_bound) ++hits;
      bound = rep.mse_bound;
      ++runs;
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass = certified && runs == 100 && hits >= 95 && elapsed < 120.0;
  return {"estimator-bound", pass,
          std::to_string(hits) + "/" + std::to_string(runs) +
              " runs within the certified MSE bound (last bound " + fmt(bound) + "), " +
              fmt(elapsed) + "s"};
}

// --- 10. The command-line tool is byte-for-byte reproducible. --------------

struct CliResult {
  int status = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DPPMIX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {};
  CliResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  const int rc = ::pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Criterion check_cli_reproducibility() {
  namespace fs = std::filesystem;
  const std::string models = DPPMIX_MODELS_DIR;
  const std::string pid = std::to_string(::getpid());
  const std::string out_a = (fs::temp_directory_path() / ("dppmix_acc_" + pid + "_a")).string();
  const std::string out_b = (fs::temp_directory_path() / ("dppmix_acc_" + pid + "_b")).string();

  const std::string commands[] = {
      "certify --include-matrices --epsilon 0.05 --model " + models + "/facility_small.json",
      "sample --kernel mh --scan random --init uniform --sweeps 5 --replicas 32 --seed 7"
      " --model " + models + "/log_det_diverse.json",
      "estimate --marginal 0,2 --target-bias 0.02 --replicas 500 --seed 11"
      " --model " + models + "/pair_tweak_unit.json",
  };
  bool ok = true;
  std::size_t bytes = 0;
  for (const std::string& command : commands) {
    const CliResult first = run_cli(command + " --out " + out_a);
    const CliResult second = run_cli(command + " --out " + out_b);
    const std::string text_a = slurp(out_a);
    ok = ok && first.status == 0 && second.status == 0 && !text_a.empty() &&
         text_a == slurp(out_b);
    bytes += text_a.size();
  }
  std::error_code ec;
  fs::remove(out_a, ec);
  fs::remove(out_b, ec);
  return {"cli-reproducibility", ok,
          "3 command pairs byte-identical (" + std::to_string(bytes) + " bytes)"};
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(check_stationarity());
  const std::vector<PoolEntry> pool = build_pool();
  results.push_back(check_contraction(pool));
  results.push_back(check_mixing_time(pool));
  results.push_back(check_modular_exactness());
  results.push_back(check_pair_tweak_rate());
  results.push_back(check_influence_sandwich());
  results.push_back(check_certificate_chain());
  results.push_back(check_gaussian_identities());
  results.push_back(check_estimator_bound());
  results.push_back(check_cli_reproducibility());

  int failures = 0;
  for (const Criterion& c : results) {
    std::printf("%s %s — %s\n", c.pass ? "[PASS]" : "[FAIL]", c.name.c_str(), c.detail.c_str());
    if (!c.pass) ++failures;
  }
  return failures;
}
