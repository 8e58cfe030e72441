#pragma once
// CSV and JSON artifacts for traces, certificates and audits.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dgn/analysis.hpp"
#include "dgn/solvers.hpp"

namespace dgn {

// Shortest round-trip decimal form.
std::string format_number(double v);

// iter,node,comp_idx,estimate,node_error,global_error,discrepancy_norm
// discrepancy_norm is ||D_G - d_G|| for diffusion traces and empty otherwise.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

// Keys: mode, iterations, stop_reason, final_global_error, certificate_ref.
std::string summary_json(const RunTrace& trace, const std::optional<std::string>& certificate_ref);

std::string certificate_json(const ConvergenceCertificate& certificate);

// iteration,check,lhs,rhs,slack,pass,informational
void write_audit_csv(const AuditReport& report, std::ostream& out);
std::string audit_json(const AuditReport& report);

// iter,<mode>,<mode>,...: global error per iteration, aligned on the
// iteration index; a mode that stopped early leaves its later cells empty.
void write_compare_csv(const std::vector<RunTrace>& traces, std::ostream& out);

}  // namespace dgn
