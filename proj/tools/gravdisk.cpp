#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gravdisk/dynamics.hpp"
#include "gravdisk/errors.hpp"
#include "gravdisk/hodge.hpp"

using namespace gravdisk;

namespace {

int run_simulate(const std::string& path) {
  Config cfg = parse_config_file(path);
  for (const auto& w : cfg.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  RunRecord rec = simulate(cfg);
  write_records(rec, cfg.output_path);
  std::printf("wrote %zu rows to %s\n", rec.rows.size(),
              cfg.output_path.c_str());
  std::printf("status: %s\n", rec.status.c_str());
  return rec.status == "completed" ? 0 : 3;
}

bool report_check(const char* name, double value, double target, double tol) {
  const bool ok = std::abs(value - target) <= tol;
  std::printf("%-34s % .12e  (target % .12e, tol %.1e)  %s\n", name, value,
              target, tol, ok ? "PASS" : "FAIL");
  return ok;
}

int run_equilibrium(int K, int M) {
  DiskContext ctx(make_grid(K, M));
  const GridSpec& g = ctx.g;
  SolverParams sp{1e-10, 2000, 50};
  FlowState s = identity_state(g);
  JacobianData jac = jacobian(g, s.x);
  BoundaryGeometry geom = boundary_geometry(g, s.x);
  PressureResult pr = pressure_solve(ctx, s, -1, sp, jac, geom);

  // Static self-gravitating disk: p = (1 - rho^2)/4, c0 = 1/2, a = 0.
  Field pexact = field_from(
      g, [](double r, double) { return 0.25 * (1.0 - r * r); });
  double perr = 0.0;
  {
    Mat diff = (to_physical(g, pr.p, 2) - to_physical(g, pexact, 2))
                   .real()
                   .cwiseAbs();
    perr = diff.maxCoeff();
  }
  VField a = acceleration(ctx, s, -1, sp);
  double amax =
      std::max(to_physical(g, a[0], 2).cwiseAbs().maxCoeff(),
               to_physical(g, a[1], 2).cwiseAbs().maxCoeff());

  bool ok = true;
  ok &= report_check("pressure vs (1-rho^2)/4, sup", perr, 0.0, 1e-8);
  ok &= report_check("Taylor sign c0", pr.c0, 0.5, 1e-8);
  ok &= report_check("acceleration sup", amax, 0.0, 1e-6);
  return ok ? 0 : 1;
}

int run_rotation(int K, int M, double omega) {
  DiskContext ctx(make_grid(K, M));
  const GridSpec& g = ctx.g;
  SolverParams sp{1e-10, 2000, 50};
  FlowState s = rotation_state(g, omega);
  JacobianData jac = jacobian(g, s.x);
  BoundaryGeometry geom = boundary_geometry(g, s.x);
  PressureResult pr = pressure_solve(ctx, s, -1, sp, jac, geom);

  // Rigid rotation: p = (1 - rho^2)(1 - 2 omega^2)/4, c0 = 1/2 - omega^2,
  // acceleration = -omega^2 x.
  const double fac = 0.25 * (1.0 - 2.0 * omega * omega);
  Field pexact =
      field_from(g, [fac](double r, double) { return fac * (1.0 - r * r); });
  double perr = (to_physical(g, pr.p, 2) - to_physical(g, pexact, 2))
                    .real()
                    .cwiseAbs()
                    .maxCoeff();
  VField a = acceleration(ctx, s, -1, sp);
  double aerr = 0.0;
  for (int i = 0; i < 2; ++i) {
    Mat diff = (to_physical(g, a[i], 2) +
                omega * omega * to_physical(g, s.x[i], 2))
                   .real()
                   .cwiseAbs();
    aerr = std::max(aerr, diff.maxCoeff());
  }

  bool ok = true;
  ok &= report_check("pressure vs closed form, sup", perr, 0.0, 1e-8);
  ok &= report_check("Taylor sign c0", pr.c0, 0.5 - omega * omega, 1e-8);
  ok &= report_check("acceleration vs -omega^2 x, sup", aerr, 0.0, 1e-6);
  return ok ? 0 : 1;
}

int run_verify(int kmax, int samples, unsigned long seed) {
  VerifyOptions opt;
  opt.kmax = kmax;
  opt.samples = samples;
  opt.seed = seed;
  auto reports = verify_lemmas(opt);
  bool all = true;
  std::printf("%-34s %-22s %12s %12s %10s  %s\n", "inequality", "sample",
              "lhs", "rhs", "constant", "result");
  for (const auto& r : reports) {
    all &= r.pass;
    std::printf("%-34s %-22s %12.5e %12.5e %10.4f  %s\n", r.name.c_str(),
                r.sample.c_str(), r.lhs, r.rhs, r.constant,
                r.pass ? "PASS" : "FAIL");
  }
  std::printf("%s\n", all ? "all inequalities hold" : "FAILURES present");
  return all ? 0 : 1;
}

int run_potential(const std::vector<int>& ms) {
  auto rows = mollifier_convergence_report(ms);
  std::printf("%6s %16s %16s %16s %16s\n", "m", "grad_err", "chi_dist_sq",
              "ratio", "ratio*sqrt(m)");
  for (const auto& r : rows)
    std::printf("%6d %16.8e %16.8e %16.8e %16.8e\n", r.m, r.grad_err,
                r.chi_dist_sq, r.ratio, r.ratio * std::sqrt(double(r.m)));
  return 0;
}

int run_energy_report(const std::string& path, double a, double b, double c) {
  RunRecord rec = read_records(path);
  std::vector<EnergyReport> series;
  for (const auto& row : rec.rows) {
    EnergyReport e;
    e.t = row.t;
    e.E = row.E;
    e.E1 = row.E1;
    e.E2 = row.E2;
    e.E3 = row.E3;
    e.E4 = row.E4;
    series.push_back(e);
  }
  auto rates = energy_rate_report(series, a, b, c);
  bool any = false;
  std::printf("%14s %14s %14s %14s %14s  %s\n", "t", "dE1/dt", "dE2/dt",
              "dE3/dt", "dE4/dt", "flag");
  for (const auto& r : rates) {
    any |= r.flagged;
    std::printf("%14.6e %14.6e %14.6e %14.6e %14.6e  %s\n", r.t, r.rate[0],
                r.rate[1], r.rate[2], r.rate[3], r.flagged ? "EXCEEDS" : "ok");
  }
  std::printf("%s\n",
              any ? "rate bound exceeded" : "all rates within the bound");
  return any ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Lagrangian free-boundary Euler on the self-gravitating unit disk"};
  app.require_subcommand(1);

  std::string cfg_path;
  auto* sim = app.add_subcommand("simulate", "run a configuration file");
  sim->add_option("config", cfg_path, "configuration file")->required();

  int K = 32, M = 48;
  auto* eq = app.add_subcommand("equilibrium-check",
                                "closed-form checks for the static disk");
  eq->add_option("--K", K, "tangential modes");
  eq->add_option("--M", M, "radial nodes");

  double omega = 0.5;
  auto* rot = app.add_subcommand("rotation-check",
                                 "closed-form checks for rigid rotation");
  rot->add_option("--omega", omega, "angular velocity");
  rot->add_option("--K", K, "tangential modes");
  rot->add_option("--M", M, "radial nodes");

  int kmax = 2000, samples = 100;
  unsigned long seed = 12345;
  auto* ver = app.add_subcommand("verify-lemmas",
                                 "run the inequality verification suite");
  ver->add_option("--kmax", kmax, "frequency sweep bound");
  ver->add_option("--samples", samples, "random sample count");
  ver->add_option("--seed", seed, "RNG seed");

  std::vector<int> ms{8, 16, 32, 64};
  auto* pot = app.add_subcommand("potential-convergence",
                                 "mollified-indicator potential table");
  pot->add_option("--ms", ms, "mollifier indices")->delimiter(',');

  std::string run_path;
  double ra = 1.0, rb = 1.0, rc = 1.0;
  auto* er = app.add_subcommand("energy-report",
                                "centered energy rates from a run record");
  er->add_option("run", run_path, "run CSV file")->required();
  er->add_option("--a", ra, "rate bound constant");
  er->add_option("--b", rb, "rate bound linear weight");
  er->add_option("--c", rc, "rate bound quadratic weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  try {
    if (*sim) return run_simulate(cfg_path);
    if (*eq) return run_equilibrium(K, M);
    if (*rot) return run_rotation(K, M, omega);
    if (*ver) return run_verify(kmax, samples, seed);
    if (*pot) return run_potential(ms);
    if (*er) return run_energy_report(run_path, ra, rb, rc);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
