#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dppmix — certified local-update sampling for discrete point processes"};
  app.require_subcommand(1);

  dppmix::cli::CertifyOptions certify_opts;
  CLI::App* certify = app.add_subcommand(
      "certify", "Compute a fast-mixing certificate and write it as JSON");
  certify->add_option("--model", certify_opts.model, "Model spec JSON file")->required();
  certify->add_option("--condition", certify_opts.condition,
                      "general|submodular|simplified|closed-form")
      ->capture_default_str();
  certify->add_option("--epsilon", certify_opts.epsilon, "Accuracy for the mixing times")
      ->capture_default_str();
  certify->add_option("--out", certify_opts.out, "Report file (default: stdout)");
  certify->add_flag("--include-matrices", certify_opts.include_matrices,
                    "Also emit the Hessian-bound and influence-bound matrices");

  dppmix::cli::SampleOptions sample_opts;
  CLI::App* sample =
      app.add_subcommand("sample", "Run replica chains and emit one subset per line");
  sample->add_option("--model", sample_opts.model, "Model spec JSON file")->required();
  sample->add_option("--kernel", sample_opts.kernel, "gibbs|mh")->capture_default_str();
  sample->add_option("--scan", sample_opts.scan, "systematic|random")->capture_default_str();
  sample->add_option("--init", sample_opts.init, "empty|full|uniform")->capture_default_str();
  sample->add_option("--sweeps", sample_opts.sweeps, "Sweeps per replica")
      ->capture_default_str();
  sample->add_option("--replicas", sample_opts.replicas, "Independent chains")
      ->capture_default_str();
  sample->add_option("--seed", sample_opts.seed, "Stream seed")->capture_default_str();
  sample->add_option("--out", sample_opts.out, "Output file (default: stdout)");

  dppmix::cli::EstimateOptions estimate_opts;
  CLI::App* estimate = app.add_subcommand(
      "estimate", "Estimate a containment marginal P(A subset of X) with error bounds");
  estimate->add_option("--model", estimate_opts.model, "Model spec JSON file")->required();
  estimate->add_option("--marginal", estimate_opts.marginal,
                       "Comma-separated site indices forming A")
      ->required();
  estimate->add_option("--target-bias", estimate_opts.target_bias,
                       "Bias budget; sweeps are sized automatically");
  estimate->add_option("--sweeps", estimate_opts.sweeps, "Fixed sweep count per replica");
  estimate->add_option("--replicas", estimate_opts.replicas, "Independent chains")
      ->capture_default_str();
  estimate->add_option("--seed", estimate_opts.seed, "Stream seed")->capture_default_str();
  estimate->add_option("--kernel", estimate_opts.kernel, "gibbs|mh")->capture_default_str();
  estimate->add_option("--scan", estimate_opts.scan, "systematic|random")
      ->capture_default_str();
  estimate->add_option("--out", estimate_opts.out, "Report file (default: stdout)");

  dppmix::cli::VerifyOptions verify_opts;
  CLI::App* verify = app.add_subcommand(
      "verify", "Cross-check kernels, contraction bounds and closed forms by enumeration");
  verify->add_option("--model", verify_opts.model, "Model spec JSON file")->required();
  verify->add_option("--suite", verify_opts.suite,
                     "kernels|theorem1|lemma4|corollaries|all")
      ->capture_default_str();
  verify->add_option("--max-n", verify_opts.max_n, "Refuse models larger than this")
      ->capture_default_str();
  verify->add_option("--epsilon", verify_opts.epsilon, "Accuracy for the mixing-time check")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (certify->parsed()) return dppmix::cli::run_certify(certify_opts);
    if (sample->parsed()) return dppmix::cli::run_sample(sample_opts);
    if (estimate->parsed()) return dppmix::cli::run_estimate(estimate_opts);
    if (verify->parsed()) return dppmix::cli::run_verify(verify_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
