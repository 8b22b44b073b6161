#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "shellspec/io.hpp"
#include "shellspec/verify.hpp"

using namespace shellspec;
namespace fs = std::filesystem;

namespace {

struct Args {
  std::string config;
  std::string out = ".";
  int threads = 1;
  std::string level;
  bool tamper = false;
};

std::string out_path(const Args& a, const char* name) {
  fs::create_directories(a.out);
  return (fs::path(a.out) / name).string();
}

std::vector<double> probe_eps(const SurfaceQuadrature& s) {
  const double scale = std::sqrt(s.area() / (4.0 * M_PI));
  return {0.1 * scale, 0.05 * scale, 0.025 * scale};
}

int node_stride(const SurfaceQuadrature& s) { return std::max<int>(1, int(s.size() / 64)); }

int cmd_scan(const Args& a) {
  const RunConfig c = load_config(a.config);
  check_noncritical(c.coupling, c.physics.c);
  const SurfaceQuadrature s = build_surface(c.surface);
  SurfaceCache sc(s);
  const json echo = config_to_json(c);
  const GapScan g = scan_gap(c.coupling, sc, c.physics, scan_options(c, a.threads));
  write_scan_csv(out_path(a, "scan.csv"), g, echo);
  write_json(out_path(a, "brackets.json"), brackets_json(g, echo));
  std::printf("%zu samples, %zu brackets\n", g.lambda.size(), g.brackets.size());
  return 0;
}

int cmd_eigs(const Args& a) {
  const RunConfig c = load_config(a.config);
  check_noncritical(c.coupling, c.physics.c);
  const SurfaceQuadrature s = build_surface(c.surface);
  SurfaceCache sc(s);
  const json echo = config_to_json(c);
  const auto ev = find_eigenvalues(c.coupling, sc, c.physics, scan_options(c, a.threads), refine_options(c));
  std::vector<double> residuals;
  for (const EigenResult& r : ev) {
    double worst = 0.0;
    for (const Density& phi : r.densities)
      worst = std::max(worst, coupling_condition_residual(r.lambda, c.coupling, sc, phi, c.physics, probe_eps(s),
                                                          node_stride(s))
                                  .extrapolated);
    residuals.push_back(worst);
  }
  write_json(out_path(a, "eigenvalues.json"), eigenvalues_json(ev, residuals, echo));
  write_densities(out_path(a, "densities.bin"), ev, echo);
  for (size_t i = 0; i < ev.size(); ++i)
    std::printf("lambda = %.12f  multiplicity %d  residual %.3e\n", ev[i].lambda, ev[i].multiplicity, residuals[i]);
  if (ev.empty()) std::printf("no eigenvalues in the gap\n");
  return 0;
}

int cmd_symmetry(const Args& a) {
  const RunConfig c = load_config(a.config);
  check_noncritical(c.coupling, c.physics.c);
  const SurfaceQuadrature s = build_surface(c.surface);
  SurfaceCache sc(s);
  const SymmetryReport r = verify_symmetries(c.coupling, sc, c.physics, scan_options(c, a.threads), refine_options(c));
  write_json(out_path(a, "symmetry_report.json"), symmetry_json(r, config_to_json(c)));
  for (const SymmetryCheck& k : r.checks)
    std::printf("%-12s %s  max mismatch %.3e\n", k.name.c_str(), k.matched ? "matched" : "MISMATCH", k.max_mismatch);
  return r.all_matched ? 0 : 3;
}

int cmd_nonrel(const Args& a) {
  const RunConfig c = load_config(a.config);
  const SurfaceQuadrature s = build_surface(c.surface);
  SurfaceCache sc(s);
  NonrelOptions o;
  o.upper = c.nonrel_upper;
  o.n_samples = c.nonrel_samples;
  o.threads = a.threads;
  o.assembly = c.assembly;
  const NonrelTable t = nonrel_limit_sweep(c.coupling.eta, c.coupling.tau, sc, c.physics.m, c.c_list, o);
  const json echo = config_to_json(c);
  write_nonrel_csv(out_path(a, "nonrel.csv"), t, echo);
  write_json(out_path(a, "nonrel.json"), nonrel_json(t, echo));
  for (const NonrelRow& r : t.rows)
    std::printf("c = %g  shifted %.10f  reference %.10f  difference %.3e %s\n", r.c, r.lambda_shifted, r.schrodinger_ref,
                r.difference, r.error.c_str());
  std::printf("fitted order %.3f\n", t.fitted_order);
  return 0;
}

int cmd_verify(const Args& a) {
  std::string level = a.level;
  if (level.empty()) level = a.config.empty() ? "quick" : load_config(a.config).verify_level;
  if (level != "quick" && level != "full") throw Error(ErrorKind::ConfigError, "verify level must be quick or full");
  DiracMatrices d = dirac_matrices();
  if (a.tamper) d.alpha[1](0, 3) *= -1.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = run_verify(level, d);
  bool ok = true;
  for (const CheckResult& r : checks) {
    std::printf("%-4s %-34s measured %.3e  tol %.1e\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.tol);
    ok = ok && r.pass;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s: %zu checks in %.2f s\n", ok ? "ok" : "failed", checks.size(), secs);
  if (!a.out.empty() && a.out != ".") {
    json j = json::array();
    for (const CheckResult& r : checks) j.push_back({{"name", r.name}, {"measured", r.measured}, {"tol", r.tol}, {"pass", r.pass}});
    write_json(out_path(a, "verify.json"), j);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac operators with delta-shell interactions: boundary-integral spectral solver"};
  app.require_subcommand(1);
  Args args;
  auto common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", args.config, "JSON run configuration");
    if (need_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory");
    sub->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* scan = app.add_subcommand("scan", "sample sigma_min across the gap");
  auto* eigs = app.add_subcommand("eigs", "refine eigenvalues and densities");
  auto* sym = app.add_subcommand("symmetry", "check the coupling symmetries of the spectrum");
  auto* nonrel = app.add_subcommand("nonrel", "nonrelativistic limit sweep");
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  for (auto* s : {scan, eigs, sym, nonrel}) common(s, true);
  common(verify, false);
  verify->add_option("level", args.level, "quick or full");
  verify->add_flag("--tamper", args.tamper)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*scan) return cmd_scan(args);
    if (*eigs) return cmd_eigs(args);
    if (*sym) return cmd_symmetry(args);
    if (*nonrel) return cmd_nonrel(args);
    return cmd_verify(args);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ErrorKind::CriticalCoupling || e.kind() == ErrorKind::MixedCoupling ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
