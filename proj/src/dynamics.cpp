#include "gravdisk/dynamics.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "gravdisk/errors.hpp"

namespace gravdisk {

namespace {
constexpr double kPi = std::numbers::pi;

std::string fmt_t(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}
}  // namespace

double cfl_limit(int K, double cfl_c) {
  return cfl_c * std::pow(2.0 * kPi / K, 1.5);
}

VField acceleration(const DiskContext& ctx, const FlowState& s,
                    int gravity_sign, const SolverParams& sp) {
  const GridSpec& g = ctx.g;
  JacobianData jac = jacobian(g, s.x);
  BoundaryGeometry geom = boundary_geometry(g, s.x);
  EllipticOperator op = make_operator(g, jac);
  PressureResult pr = pressure_solve(ctx, s, gravity_sign, sp, jac, geom);
  PotentialResult pot = solve_potential(ctx, op, s.x, jac, gravity_sign, sp);
  VField a;
  for (int i = 0; i < 2; ++i) {
    a[i] = -(pr.grad_p[i] + pot.grad_phi[i]);
    enforce_reality(g, a[i]);
  }
  return a;
}

VField projection_correction(const DiskContext& ctx, const FlowState& s,
                             const SolverParams& sp, KrylovStats* stats) {
  const GridSpec& g = ctx.g;
  JacobianData jac = jacobian(g, s.x);
  Field rhs = div_form(g, s.V, jac);

  // Velocities that are divergence free up to rounding would feed the solver
  // pure noise; the resulting "correction" random-walks V over long runs.
  // Skip the solve until divergence clears the noise floor.
  if (l2_norm(g, rhs) <= 1e-11 * (1.0 + l2_norm(g, s.V))) {
    if (stats) *stats = KrylovStats{};
    return zero_vfield(g);
  }
  EllipticOperator op = make_operator(g, jac);

  // Conormal direction A^T n~ at the boundary row of the pad-2 grid; its
  // magnitude is the arclength density of the image boundary.
  const int n2 = g.ntheta(2);
  const Mat v0 = to_physical(g, s.V[0], 2).real();
  const Mat v1 = to_physical(g, s.V[1], 2).real();
  Vec w0(n2), w1(n2);
  for (int q = 0; q < n2; ++q) {
    double cs = std::cos(g.theta(2, q)), sn = std::sin(g.theta(2, q));
    w0(q) = cs * jac.A[0][0](g.M - 1, q) + sn * jac.A[1][0](g.M - 1, q);
    w1(q) = cs * jac.A[0][1](g.M - 1, q) + sn * jac.A[1][1](g.M - 1, q);
  }
  double flux_total = 0.0, perimeter = 0.0;
  for (int q = 0; q < n2; ++q)
    flux_total += w0(q) * v0(g.M - 1, q) + w1(q) * v1(g.M - 1, q);
  flux_total *= 2.0 * kPi / n2;
  for (int q = 0; q < n2; ++q) perimeter += std::hypot(w0(q), w1(q));
  perimeter *= 2.0 * kPi / n2;

  // Uniform normal flux of the same total keeps the Neumann data compatible
  // with the interior divergence.
  const double g0 = flux_total / perimeter;
  Vec flux(n2);
  for (int q = 0; q < n2; ++q) flux(q) = g0 * std::hypot(w0(q), w1(q));

  Field psi = solve_neumann(ctx, op, rhs, flux, sp, stats);
  VField corr = eulerian_gradient(g, psi, jac);
  for (int i = 0; i < 2; ++i) enforce_reality(g, corr[i]);
  return corr;
}

KahanCarry make_carry(const GridSpec& g) {
  KahanCarry c;
  c.x = zero_vfield(g);
  c.V = zero_vfield(g);
  return c;
}

void kahan_add(Field& sum, Field& carry, const Field& delta) {
  for (Eigen::Index m = 0; m < sum.cols(); ++m)
    for (Eigen::Index j = 0; j < sum.rows(); ++j) {
      const cplx y = delta(j, m) - carry(j, m);
      const cplx t = sum(j, m) + y;
      carry(j, m) = (t - sum(j, m)) - y;
      sum(j, m) = t;
    }
}

namespace {

struct Deriv {
  VField kx, kv;
};

Deriv eval_rhs(const DiskContext& ctx, const FlowState& s, int sigma,
               const SolverParams& sp) {
  Deriv d;
  d.kx = s.V;
  d.kv = acceleration(ctx, s, sigma, sp);
  return d;
}

FlowState advanced(const FlowState& s, const Deriv& d, double h) {
  FlowState r;
  r.t = s.t + h;
  for (int i = 0; i < 2; ++i) {
    r.x[i] = s.x[i] + h * d.kx[i];
    r.V[i] = s.V[i] + h * d.kv[i];
  }
  return r;
}

}  // namespace

void rk4_step(const DiskContext& ctx, FlowState& s, const StepParams& p,
              KahanCarry& carry) {
  const GridSpec& g = ctx.g;
  if (p.dt > cfl_limit(g.K, p.cfl_c) * (1.0 + 1e-12))
    throw ConfigError("dt exceeds the CFL bound cfl_c (2 pi / K)^(3/2)");

  const Deriv k1 = eval_rhs(ctx, s, p.gravity_sign, p.solver);
  const Deriv k2 =
      eval_rhs(ctx, advanced(s, k1, 0.5 * p.dt), p.gravity_sign, p.solver);
  const Deriv k3 =
      eval_rhs(ctx, advanced(s, k2, 0.5 * p.dt), p.gravity_sign, p.solver);
  const Deriv k4 =
      eval_rhs(ctx, advanced(s, k3, p.dt), p.gravity_sign, p.solver);

  const double h6 = p.dt / 6.0;
  for (int i = 0; i < 2; ++i) {
    // Filter the increments, not the state: rewriting the state would break
    // the Kahan carries and inject matvec rounding at O(|x|) every step.
    const Field dx = smooth_filter(
        g, h6 * (k1.kx[i] + 2.0 * k2.kx[i] + 2.0 * k3.kx[i] + k4.kx[i]));
    const Field dv = smooth_filter(
        g, h6 * (k1.kv[i] + 2.0 * k2.kv[i] + 2.0 * k3.kv[i] + k4.kv[i]));
    kahan_add(s.x[i], carry.x[i], dx);
    kahan_add(s.V[i], carry.V[i], dv);
    enforce_reality(g, s.x[i]);
    enforce_reality(g, s.V[i]);
  }
  s.t += p.dt;

  if (p.project) {
    VField corr = projection_correction(ctx, s, p.solver);
    for (int i = 0; i < 2; ++i)
      kahan_add(s.V[i], carry.V[i], smooth_filter(g, Field(-corr[i])));
  }
}

FlowState perturbed_state(const GridSpec& g, int mode, double amplitude,
                          const std::string& base, double omega) {
  if (mode < 1) throw ConfigError("perturb_mode must be at least 1");
  if (base != "static" && base != "rotation")
    throw ConfigError("perturb_base must be static or rotation");

  // Hamiltonian field of h = Re z^mode: w = (Im f', Re f'), f' = k z^{k-1}.
  auto wfield = [mode](double y1, double y2, double& w1, double& w2) {
    const cplx z(y1, y2);
    const cplx fp = static_cast<double>(mode) * std::pow(z, mode - 1);
    w1 = fp.imag();
    w2 = fp.real();
  };
  const int nsub = 16;
  auto flow = [&](double y1, double y2, double eps, double& o1, double& o2) {
    const double h = eps / nsub;
    double a = y1, b = y2;
    for (int s = 0; s < nsub; ++s) {
      double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
      wfield(a, b, k1a, k1b);
      wfield(a + 0.5 * h * k1a, b + 0.5 * h * k1b, k2a, k2b);
      wfield(a + 0.5 * h * k2a, b + 0.5 * h * k2b, k3a, k3b);
      wfield(a + h * k3a, b + h * k3b, k4a, k4b);
      a += h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
      b += h / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b);
    }
    o1 = a;
    o2 = b;
  };

  const int n2 = g.ntheta(2);
  CMat p1(g.M, n2), p2(g.M, n2);
  for (int j = 0; j < g.M; ++j)
    for (int q = 0; q < n2; ++q) {
      const double th = g.theta(2, q);
      double o1, o2;
      flow(g.rho(j) * std::cos(th), g.rho(j) * std::sin(th), amplitude, o1,
           o2);
      p1(j, q) = o1;
      p2(j, q) = o2;
    }

  FlowState s;
  s.t = 0.0;
  s.x[0] = from_physical(g, p1, 2);
  s.x[1] = from_physical(g, p2, 2);
  enforce_reality(g, s.x[0]);
  enforce_reality(g, s.x[1]);
  if (base == "rotation") {
    s.V[0] = -omega * s.x[1];
    s.V[1] = omega * s.x[0];
  } else {
    s.V = zero_vfield(g);
  }
  return s;
}

FlowState initial_state(const GridSpec& g, const Config& cfg) {
  switch (cfg.init) {
    case InitKind::statik:
      return identity_state(g);
    case InitKind::rotation:
      return rotation_state(g, cfg.omega);
    case InitKind::perturbed:
    default:
      return perturbed_state(g, cfg.perturb_mode, cfg.perturb_amplitude,
                             cfg.perturb_base, cfg.omega);
  }
}

RunRecord simulate(const DiskContext& ctx, const Config& cfg) {
  const GridSpec& g = ctx.g;
  if (cfg.dt > cfl_limit(g.K, cfg.cfl_c) * (1.0 + 1e-12))
    throw ConfigError("dt exceeds the CFL bound cfl_c (2 pi / K)^(3/2)");

  StepParams sp;
  sp.dt = cfg.dt;
  sp.gravity_sign = cfg.gravity_sign;
  sp.project = cfg.project_divergence;
  sp.cfl_c = cfg.cfl_c;
  sp.solver = SolverParams{cfg.solver_tol, cfg.max_iter, 50};

  const long long steps_per =
      std::llround(cfg.output_interval / cfg.dt);
  const long long n_records =
      static_cast<long long>(
          std::floor(cfg.t_end / cfg.output_interval + 1e-9)) +
      1;

  CutoffFamily cut = make_cutoffs(cfg.d0, 1, g);
  FlowState s = initial_state(g, cfg);
  KahanCarry carry = make_carry(g);

  RunRecord rec;
  rec.echo = config_echo(cfg);
  rec.status = "completed";

  // Material vorticity at t = 0; exactly conserved along particles in 2D.
  Mat curl0;
  {
    JacobianData jac0 = jacobian(g, s.x);
    curl0 = to_physical(g, div_curl(g, s.V, jac0).second, 2).real();
  }

  double running_sup = 0.0;
  int taylor_streak = 0;
  long long total_steps = 0;

  try {
    for (long long r = 0; r < n_records; ++r) {
      JacobianData jac = jacobian(g, s.x);
      auto dc = div_curl(g, s.V, jac);
      RunRow row;
      row.det_drift =
          std::max(std::abs(jac.det_min - 1.0), std::abs(jac.det_max - 1.0));
      row.vorticity_drift =
          (to_physical(g, dc.second, 2).real() - curl0).cwiseAbs().maxCoeff();
      row.div_v = l2_norm(g, dc.first);
      if (row.det_drift > cfg.det_tolerance)
        throw NumericalError("determinant drift " + fmt_t(row.det_drift) +
                             " exceeds tolerance at t = " + fmt_t(s.t));
      check_simple_curve(g, s.x);

      EnergyReport rep = evaluate_energies(ctx, s, cfg.gravity_sign, sp.solver,
                                           cut, &running_sup);
      row.t = s.t;
      row.E = rep.E;
      row.E1 = rep.E1;
      row.E2 = rep.E2;
      row.E3 = rep.E3;
      row.E4 = rep.E4;
      row.c0 = rep.c0;
      row.x_bound = rep.x_bound;
      rec.rows.push_back(row);

      if (rep.c0 <= 0.0) {
        ++taylor_streak;
        if (cfg.taylor_policy == TaylorPolicy::abort_run || taylor_streak > 1)
          throw NumericalError("Taylor sign nonpositive at t = " +
                               fmt_t(s.t));
        rec.echo += "# warning: Taylor sign nonpositive at t = " +
                    fmt_t(s.t) + ", one interval of grace\n";
      } else {
        taylor_streak = 0;
      }

      if (r + 1 < n_records) {
        for (long long k = 0; k < steps_per; ++k) {
          rk4_step(ctx, s, sp, carry);
          ++total_steps;
          s.t = static_cast<double>(total_steps) * cfg.dt;
        }
      }
    }
  } catch (const NumericalError& e) {
    rec.status = std::string("aborted: ") + e.what();
  }
  return rec;
}

RunRecord simulate(const Config& cfg) {
  DiskContext ctx(make_grid(cfg.K, cfg.M));
  return simulate(ctx, cfg);
}

}  // namespace gravdisk
