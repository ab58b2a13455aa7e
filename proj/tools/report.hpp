#pragma once

#include <optional>
#include <string>

#include "dppmix/certificates.hpp"
#include "dppmix/json_out.hpp"
#include "dppmix/sampler.hpp"

namespace dppmix::cli {

// Flag spellings <-> enum values shared by the subcommands.
ConditionKind parse_condition(const std::string& s);
KernelKind parse_kernel(const std::string& s);
ScanOrder parse_scan(const std::string& s);
std::string condition_name(ConditionKind c);
std::string kernel_name(KernelKind k);
std::string scan_name(ScanOrder s);

/// "0x" + 16 hex digits of the subset bits.
std::string bitmask_hex(Subset s);

JsonValue matrix_json(const Eigen::MatrixXd& m);

/// Certificate report body: identity, condition, gamma/lambda, satisfied,
/// mixing times at epsilon (null when unsatisfied) and, optionally, the M
/// and R matrices (null when their enumeration is infeasible).
JsonValue certificate_report(const PointProcess& p, const Certificate& cert, double epsilon,
                             bool include_matrices);

/// Smallest-gamma satisfied certificate across all applicable conditions,
/// trying closed-form, general, submodular and simplified in that order and
/// ignoring conditions that reject the model. Empty when none is satisfied.
std::optional<Certificate> best_certificate(const PointProcess& p);

/// Writes text to the path, or to stdout when the path is empty.
void emit_text(const std::string& text, const std::string& path);

}  // namespace dppmix::cli
