#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

#include <json.hpp>

#include "dgn/report.hpp"

namespace dgn {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json interval(const Interval& w) { return {{"lower", number(w.lower)}, {"upper", number(w.upper)}}; }

json series(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << "iter,node,comp_idx,estimate,node_error,global_error,discrepancy_norm\n";
  const int n = trace.nodes, m = trace.dim;
  for (const IterationRecord& r : trace.records) {
    std::string disc;
    if (r.coop_descent && r.noncoop_descent) disc = format_number((*r.coop_descent - *r.noncoop_descent).norm());
    const std::string ge = format_number(r.global_error);
    for (int k = 0; k < n; ++k) {
      const std::string ne = format_number(r.node_errors[k]);
      for (int j = 0; j < m; ++j) {
        out << r.iteration << ',' << k << ',' << j << ',' << format_number(r.x_g[k * m + j]) << ',' << ne << ','
            << ge << ',' << disc << '\n';
      }
    }
  }
}

std::string summary_json(const RunTrace& trace, const std::optional<std::string>& certificate_ref) {
  json j;
  j["mode"] = std::string(to_string(trace.mode));
  j["iterations"] = trace.iterations();
  j["stop_reason"] = std::string(to_string(trace.stop_reason));
  j["final_global_error"] = number(trace.final_global_error());
  j["certificate_ref"] = certificate_ref ? json(*certificate_ref) : json(nullptr);
  if (!trace.stop_detail.empty()) j["stop_detail"] = trace.stop_detail;
  return j.dump(2) + "\n";
}

std::string certificate_json(const ConvergenceCertificate& c) {
  const BoundsProfile& b = c.bounds;
  const LemmaConstants& lc = c.constants;
  json j;
  j["overall"] = c.overall;
  j["alpha"] = number(c.alpha);
  j["bounds"] = {{"sigma_min", number(b.sigma_min)}, {"sigma_max", number(b.sigma_max)},
                 {"Sigma_min", number(b.Sigma_min)}, {"Sigma_max", number(b.Sigma_max)},
                 {"omega", number(b.omega)},         {"gamma_f", number(b.gamma_f)},
                 {"gamma_F", number(b.gamma_F)},     {"e_max", number(b.e_max)},
                 {"e_min", number(b.e_min)},         {"eps_max", number(b.eps_max)},
                 {"eps_min", number(b.eps_min)},     {"safety_factor", number(b.safety_factor)},
                 {"samples", b.samples}};
  j["constants"] = {{"t1", number(lc.t1)},
                    {"t2", number(lc.t2)},
                    {"theta", number(lc.theta)},
                    {"a1", number(lc.a1_max)},
                    {"a2", number(lc.a2_max)},
                    {"xi", number(lc.xi)},
                    {"xi_valid", lc.xi_valid},
                    {"horizon", lc.horizon},
                    {"pi", series(lc.pi)},
                    {"zeta", series(lc.zeta)},
                    {"mu", series(lc.mu)}};
  j["equilibria"] = {{"exist", c.equilibria_exist},
                     {"y_min", number(c.equilibria.y_min)},
                     {"y_max", number(c.equilibria.y_max)},
                     {"discriminant", number(c.equilibria.discriminant)}};
  j["windows"] = {{"g_norm", interval(c.windows.g_window)},
                  {"g_norm_closed_form", interval(c.windows.g_window_literal)},
                  {"alpha", interval(c.windows.alpha_window)},
                  {"derivative_at_y_min", number(c.windows.derivative_at_y_min)},
                  {"stable", c.windows.stable}};
  j["g_norm"] = number(c.g_norm);
  j["g_frobenius"] = number(c.g_frobenius);
  j["lambda_bound"] = number(c.lambda_bound);
  j["lambda_bound_main_text"] = number(c.lambda_bound_main_text);
  j["initial_error"] = number(c.initial_error);
  json flags = json::array();
  for (const ConditionFlag& f : c.flags) {
    flags.push_back({{"name", f.name}, {"pass", f.pass}, {"margin", number(f.margin)}, {"detail", f.detail}});
  }
  j["flags"] = flags;
  return j.dump(2) + "\n";
}

void write_audit_csv(const AuditReport& report, std::ostream& out) {
  out << "iteration,check,lhs,rhs,slack,pass,informational\n";
  for (const AuditRow& r : report.rows) {
    out << r.iteration << ',' << r.check << ',' << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
        << format_number(r.slack()) << ',' << (r.pass ? 1 : 0) << ',' << (r.informational ? 1 : 0) << '\n';
  }
}

std::string audit_json(const AuditReport& report) {
  json j;
  j["pass"] = report.pass();
  j["iterations_audited"] = report.iterations_audited;
  j["failed"] = report.failed;
  j["max_lambda_measured"] = number(report.max_lambda_measured);
  std::map<std::string, const AuditRow*> worst;
  std::map<std::string, int> failures;
  for (const AuditRow& r : report.rows) {
    auto& w = worst[r.check];
    if (!w || r.slack() < w->slack()) w = &r;
    if (!r.pass) ++failures[r.check];
  }
  json checks = json::object();
  for (const auto& [name, r] : worst) {
    checks[name] = {{"min_slack", number(r->slack())},
                    {"at_iteration", r->iteration},
                    {"failed", failures[name]},
                    {"informational", r->informational}};
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

void write_compare_csv(const std::vector<RunTrace>& traces, std::ostream& out) {
  out << "iter";
  std::size_t rows = 0;
  for (const RunTrace& t : traces) {
    out << ',' << to_string(t.mode);
    rows = std::max(rows, t.records.size());
  }
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    out << i;
    for (const RunTrace& t : traces) {
      out << ',';
      if (i < t.records.size()) out << format_number(t.records[i].global_error);
    }
    out << '\n';
  }
}

}  // namespace dgn
