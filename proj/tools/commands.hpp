#pragma once

#include <cstdint>
#include <string>

namespace dppmix::cli {

struct CertifyOptions {
  std::string model;
  std::string condition = "general";
  double epsilon = 0.01;
  std::string out;  // empty -> stdout
  bool include_matrices = false;
};
int run_certify(const CertifyOptions& opt);

struct SampleOptions {
  std::string model;
  std::string kernel = "gibbs";
  std::string scan = "systematic";
  std::string init = "empty";  // empty | full | uniform
  int sweeps = 1;
  std::int64_t replicas = 1;
  std::uint64_t seed = 0;
  std::string out;  // empty -> stdout
};
int run_sample(const SampleOptions& opt);

struct EstimateOptions {
  std::string model;
  std::string marginal;       // comma-separated site indices
  double target_bias = -1.0;  // < 0: not given
  int sweeps = -1;            // < 0: not given
  std::int64_t replicas = 1000;
  std::uint64_t seed = 0;
  std::string kernel = "gibbs";
  std::string scan = "systematic";
  std::string out;  // empty -> stdout
};
int run_estimate(const EstimateOptions& opt);

struct VerifyOptions {
  std::string model;
  std::string suite = "all";  // kernels | theorem1 | lemma4 | corollaries | all
  int max_n = 10;
  double epsilon = 0.01;
};
int run_verify(const VerifyOptions& opt);

}  // namespace dppmix::cli
