#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace dppmix::cli {

ConditionKind parse_condition(const std::string& s) {
  if (s == "general") return ConditionKind::General;
  if (s == "submodular") return ConditionKind::Submodular;
  if (s == "simplified") return ConditionKind::Simplified;
  if (s == "closed-form") return ConditionKind::ClosedForm;
  throw std::runtime_error("unknown condition '" + s +
                           "' (want general|submodular|simplified|closed-form)");
}

KernelKind parse_kernel(const std::string& s) {
  if (s == "gibbs") return KernelKind::Gibbs;
  if (s == "mh") return KernelKind::MetropolisHastings;
  throw std::runtime_error("unknown kernel '" + s + "' (want gibbs|mh)");
}

ScanOrder parse_scan(const std::string& s) {
  if (s == "systematic") return ScanOrder::Systematic;
  if (s == "random") return ScanOrder::Random;
  throw std::runtime_error("unknown scan '" + s + "' (want systematic|random)");
}

std::string condition_name(ConditionKind c) {
  switch (c) {
    case ConditionKind::General: return "general";
    case ConditionKind::Submodular: return "submodular";
    case ConditionKind::Simplified: return "simplified";
    case ConditionKind::ClosedForm: return "closed-form";
  }
  return "?";
}

std::string kernel_name(KernelKind k) {
  return k == KernelKind::Gibbs ? "gibbs" : "mh";
}

std::string scan_name(ScanOrder s) {
  return s == ScanOrder::Systematic ? "systematic" : "random";
}

std::string bitmask_hex(Subset s) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(s.bits()));
  return buf;
}

JsonValue matrix_json(const Eigen::MatrixXd& m) {
  JsonValue rows = JsonValue::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    JsonValue row = JsonValue::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push(JsonValue::number(m(r, c)));
    rows.push(std::move(row));
  }
  return rows;
}

JsonValue certificate_report(const PointProcess& p, const Certificate& cert, double epsilon,
                             bool include_matrices) {
  JsonValue report = JsonValue::object();
  report.set("schema_version", JsonValue::integer(1));
  report.set("family", JsonValue::string(cert.family));
  report.set("n", JsonValue::integer(cert.n));
  report.set("beta", JsonValue::number(cert.beta));
  report.set("condition", JsonValue::string(condition_name(cert.condition)));
  report.set("gamma", JsonValue::number(cert.gamma));
  report.set("lambda", JsonValue::number(cert.lambda));
  report.set("alpha_beta", JsonValue::number(cert.alpha_beta));
  report.set("m_inf_norm", JsonValue::number(cert.m_inf_norm));
  report.set("satisfied", JsonValue::boolean(cert.satisfied));
  report.set("epsilon", JsonValue::number(epsilon));
  if (cert.satisfied) {
    report.set("tau_systematic", JsonValue::integer(cert.tau_systematic(epsilon)));
    report.set("tau_random", JsonValue::integer(cert.tau_random(epsilon)));
  } else {
    report.set("tau_systematic", JsonValue::null());
    report.set("tau_random", JsonValue::null());
  }
  if (include_matrices) {
    JsonValue matrices = JsonValue::object();
    try {
      matrices.set("hessian_bound", matrix_json(hessian_bound_matrix(p).entries));
    } catch (const std::exception&) {
      matrices.set("hessian_bound", JsonValue::null());
    }
    try {
      matrices.set("upper_bound", matrix_json(dobrushin_upper_bound_matrix(p).entries));
    } catch (const std::exception&) {
      matrices.set("upper_bound", JsonValue::null());
    }
    report.set("matrices", std::move(matrices));
  }
  return report;
}

std::optional<Certificate> best_certificate(const PointProcess& p) {
  constexpr ConditionKind kOrder[] = {ConditionKind::ClosedForm, ConditionKind::General,
                                      ConditionKind::Submodular, ConditionKind::Simplified};
  std::optional<Certificate> best;
  for (const ConditionKind condition : kOrder) {
    Certificate cert;
    try {
      cert = certify(p, condition);
    } catch (const std::exception&) {
      continue;  // condition rejects the model or needs infeasible enumeration
    }
    if (cert.satisfied && (!best || cert.gamma < best->gamma)) best = cert;
  }
  return best;
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace dppmix::cli
