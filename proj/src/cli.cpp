#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dgn/analysis.hpp"
#include "dgn/cli.hpp"
#include "dgn/config.hpp"
#include "dgn/error.hpp"
#include "dgn/report.hpp"

namespace dgn {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string gen_output;
  bool require_certified = false;
};

struct Experiment {
  ExperimentConfig config;
  fs::path out_dir;
  NlsProblem problem;
  Network network;
  Vector x0;
};

Experiment prepare(const Options& opt) {
  ExperimentConfig cfg = load_config(opt.config_path);
  const fs::path base = fs::path(opt.config_path).parent_path();
  Network net = build_network(cfg, base.empty() ? "." : base.string());
  NlsProblem problem = make_problem(cfg.problem);
  Vector x0 = initial_point(cfg, problem);
  fs::path out = opt.out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(opt.out_dir);
  fs::create_directories(out);
  return Experiment{std::move(cfg), std::move(out), std::move(problem), std::move(net), std::move(x0)};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  f << text;
}

template <class Fn>
void write_stream(const fs::path& path, Fn fn) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  fn(f);
}

bool failed_numerically(const RunTrace& t) {
  return t.stop_reason == StopReason::Singular || t.stop_reason == StopReason::OutOfDomain;
}

void save_trace(const fs::path& dir, const RunTrace& trace, const std::optional<std::string>& cert_ref) {
  const std::string mode(to_string(trace.mode));
  write_stream(dir / ("trace_" + mode + ".csv"), [&](std::ostream& s) { write_trace_csv(trace, s); });
  write_file(dir / ("summary_" + mode + ".json"), summary_json(trace, cert_ref));
}

void report_run(std::ostream& out, const RunTrace& t) {
  out << to_string(t.mode) << ": " << t.iterations() << " iterations, stop " << to_string(t.stop_reason)
      << ", global error " << format_number(t.final_global_error()) << "\n";
}

void report_certificate(std::ostream& out, const ConvergenceCertificate& c) {
  for (const ConditionFlag& f : c.flags) {
    out << "  " << (f.pass ? "ok  " : "FAIL") << " " << f.name << ": " << f.detail << "\n";
  }
  out << "certificate: " << (c.overall ? "certified" : "not certified") << "\n";
}

ConvergenceCertificate make_certificate(const Experiment& ex, SolverConfig solver) {
  CertifyOptions opts;
  opts.horizon = ex.config.horizon;
  opts.bound_samples = ex.config.bound_samples;
  opts.bound_seed = ex.config.bound_seed;
  opts.safety_factor = ex.config.safety_factor;
  return certify(ex.problem, ex.network, solver, ex.x0, opts);
}

int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
  const Experiment ex = prepare(opt);
  const RunTrace trace = run(ex.problem, ex.network, ex.config.solver, ex.x0);
  save_trace(ex.out_dir, trace, std::nullopt);
  report_run(out, trace);
  if (failed_numerically(trace)) {
    err << "error: " << trace.stop_detail << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_certify(const Options& opt, std::ostream& out, std::ostream&) {
  const Experiment ex = prepare(opt);
  SolverConfig solver = ex.config.solver;
  solver.mode = SolverMode::Diffusion;
  const ConvergenceCertificate cert = make_certificate(ex, solver);
  write_file(ex.out_dir / "certificate.json", certificate_json(cert));
  report_certificate(out, cert);
  return opt.require_certified && !cert.overall ? kExitNotCertified : kExitOk;
}

int cmd_compare(const Options& opt, std::ostream& out, std::ostream& err) {
  const Experiment ex = prepare(opt);
  std::vector<RunTrace> traces;
  int code = kExitOk;
  for (SolverMode mode : {SolverMode::Diffusion, SolverMode::Noncooperative, SolverMode::Centralized}) {
    SolverConfig solver = ex.config.solver;
    solver.mode = mode;
    traces.push_back(run(ex.problem, ex.network, solver, ex.x0));
    save_trace(ex.out_dir, traces.back(), std::nullopt);
    report_run(out, traces.back());
    if (failed_numerically(traces.back())) {
      err << "error: " << to_string(mode) << ": " << traces.back().stop_detail << "\n";
      code = kExitNumerical;
    }
  }
  write_stream(ex.out_dir / "compare.csv", [&](std::ostream& s) { write_compare_csv(traces, s); });
  return code;
}

int cmd_audit(const Options& opt, std::ostream& out, std::ostream& err) {
  const Experiment ex = prepare(opt);
  SolverConfig solver = ex.config.solver;
  solver.mode = SolverMode::Diffusion;
  const ConvergenceCertificate cert = make_certificate(ex, solver);
  write_file(ex.out_dir / "certificate.json", certificate_json(cert));
  report_certificate(out, cert);

  const RunTrace trace = run(ex.problem, ex.network, solver, ex.x0);
  save_trace(ex.out_dir, trace, std::string("certificate.json"));
  report_run(out, trace);
  if (failed_numerically(trace)) {
    err << "error: " << trace.stop_detail << "\n";
    return kExitNumerical;
  }
  const AuditReport audit = audit_trace(trace, cert, ex.network, cert.bounds, ex.problem);
  write_stream(ex.out_dir / "audit.csv", [&](std::ostream& s) { write_audit_csv(audit, s); });
  write_file(ex.out_dir / "audit.json", audit_json(audit));
  out << "audit: " << audit.iterations_audited << " iterations, " << audit.failed << " failed checks\n";
  if (opt.require_certified && (!cert.overall || !audit.pass())) return kExitNotCertified;
  return kExitOk;
}

int cmd_gen_config(const Options& opt, std::ostream& out) {
  const std::string text = to_text(default_config());
  if (opt.gen_output.empty()) out << text;
  else write_file(opt.gen_output, text);
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ValidationError:
    case ErrorCode::ParseError:
    case ErrorCode::BadParams:
    case ErrorCode::BadDimensions:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidCombination:
    case ErrorCode::DisconnectedAfterRetries:
    case ErrorCode::IoError:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed Gauss-Newton experiments over simulated networks", "dgn"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config_path, "experiment config file")->required();
    sub->add_option("-o,--out", opt.out_dir, "output directory (overrides output.dir)");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "run solver.mode and write its trace");
  add_common(run_cmd);
  CLI::App* cert_cmd = app.add_subcommand("certify", "evaluate the convergence certificate");
  add_common(cert_cmd);
  cert_cmd->add_flag("--require-certified", opt.require_certified, "exit 4 unless every condition holds");
  CLI::App* cmp_cmd = app.add_subcommand("compare", "run all three modes from the same start");
  add_common(cmp_cmd);
  CLI::App* audit_cmd = app.add_subcommand("audit", "certify, run diffusion and check every inequality");
  add_common(audit_cmd);
  audit_cmd->add_flag("--require-certified", opt.require_certified,
                      "exit 4 unless the certificate and the audit both pass");
  CLI::App* gen_cmd = app.add_subcommand("gen-config", "print a commented config template");
  gen_cmd->add_option("-o,--output", opt.gen_output, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(opt, out, err);
    if (*cert_cmd) return cmd_certify(opt, out, err);
    if (*cmp_cmd) return cmd_compare(opt, out, err);
    if (*audit_cmd) return cmd_audit(opt, out, err);
    if (*gen_cmd) return cmd_gen_config(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  err << app.help();
  return kExitConfig;
}

}  // namespace dgn
