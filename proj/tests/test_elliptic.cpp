#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gravdisk/elliptic.hpp"
#include "gravdisk/errors.hpp"

using namespace gravdisk;

namespace {
constexpr double kPi = std::numbers::pi;

double sup_phys(const GridSpec& g, const Field& f) {
  return to_physical(g, f, 2).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("operator on the identity map") {
  const GridSpec g = make_grid(16, 12);
  const JacobianData jac = jacobian(g, identity_state(g).x);
  const EllipticOperator op = make_operator(g, jac);

  CHECK((op.G11.array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(op.G12.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(op.kappa < 1.0 + 1e-10);

  // harmonic field is annihilated, Laplace rho^2 = 4
  const Field h = field_from(g, [](double r, double th) { return r * r * std::cos(2 * th); });
  CHECK(sup_phys(g, apply_operator(g, op, h)) < 1e-9);

  const Field q = field_from(g, [](double r, double) { return r * r; });
  const Field want4 = field_from(g, [](double, double) { return 4.0; });
  CHECK(sup_phys(g, Field(apply_operator(g, op, q) - want4)) < 1e-9);
}

TEST_CASE("dirichlet solve, flat closed forms") {
  const DiskContext ctx(make_grid(16, 12));
  const GridSpec& g = ctx.g;
  const JacobianData jac = jacobian(g, identity_state(g).x);
  const EllipticOperator op = make_operator(g, jac);
  const SolverParams sp;

  // Laplace[(rho - rho^3) cos th] = -8 rho cos th, zero trace
  const Field rhs = field_from(g, [](double r, double th) { return -8 * r * std::cos(th); });
  KrylovStats st;
  const Field u = solve_dirichlet(ctx, op, rhs, BField::Zero(g.K), sp, &st);
  const Field want =
      field_from(g, [](double r, double th) { return (r - r * r * r) * std::cos(th); });
  CHECK(sup_phys(g, Field(u - want)) < 1e-10);
  CHECK(st.iterations >= 1);
  CHECK(st.residual <= sp.tol);

  // harmonic lift of cos 2th is rho^2 cos 2th
  BField bc = BField::Zero(g.K);
  bc(g.index(2)) = 0.5;
  bc(g.index(-2)) = 0.5;
  const Field v = solve_dirichlet(ctx, op, zero_field(g), bc, sp);
  const Field wantv = field_from(g, [](double r, double th) { return r * r * std::cos(2 * th); });
  CHECK(sup_phys(g, Field(v - wantv)) < 1e-10);
}

TEST_CASE("dirichlet solve, curved pullback oracle") {
  const DiskContext ctx(make_grid(32, 16));
  const GridSpec& g = ctx.g;
  // volume preserving shear; x1 x2 is harmonic in image coordinates
  VField x;
  x[0] = field_from(g, [](double r, double th) {
    const double s = std::sin(th);
    return r * std::cos(th) + 0.1 * r * r * s * s;
  });
  x[1] = field_from(g, [](double r, double th) { return r * std::sin(th); });
  const JacobianData jac = jacobian(g, x);
  const EllipticOperator op = make_operator(g, jac);

  const Field uref = multiply(g, x[0], x[1]);  // pullback of x1 x2, exact in band
  const Field u = solve_dirichlet(ctx, op, zero_field(g), boundary_trace(g, uref),
                                  SolverParams{1e-12, 2000, 50});
  CHECK(sup_phys(g, Field(u - uref)) < 1e-8);
}

TEST_CASE("harmonic max principle") {
  const DiskContext ctx(make_grid(16, 12));
  const GridSpec& g = ctx.g;
  const EllipticOperator op = make_operator(g, jacobian(g, identity_state(g).x));

  std::mt19937_64 rng(31);
  const Field fb = random_trig_field(g, rng, 5);
  const BField bc = boundary_trace(g, fb);
  const Field u = solve_dirichlet(ctx, op, zero_field(g), bc, SolverParams{});
  const double bmax = trace_to_physical(g, bc, 2).real().maxCoeff();
  const double umax = to_physical(g, u, 2).real().maxCoeff();
  CHECK(umax <= bmax + 1e-9);
}

TEST_CASE("neumann solve, flat closed form") {
  const DiskContext ctx(make_grid(16, 12));
  const GridSpec& g = ctx.g;
  const EllipticOperator op = make_operator(g, jacobian(g, identity_state(g).x));

  // Laplace[(rho^2 - 1)/2] = 2 with d/dn = 1 on the boundary and zero
  // boundary mean (the gauge pin)
  const Field rhs = field_from(g, [](double, double) { return 2.0; });
  const Vec flux = Vec::Ones(g.ntheta(2));
  const Field psi = solve_neumann(ctx, op, rhs, flux, SolverParams{});
  const Field want = field_from(g, [](double r, double) { return 0.5 * (r * r - 1.0); });
  CHECK(sup_phys(g, Field(psi - want)) < 1e-9);
}

TEST_CASE("pressure closed forms") {
  const DiskContext ctx(make_grid(16, 12));
  const GridSpec& g = ctx.g;
  const SolverParams sp;

  const FlowState id = identity_state(g);
  const JacobianData ji = jacobian(g, id.x);
  const BoundaryGeometry gi = boundary_geometry(g, id.x);
  const PressureResult ps = pressure_solve(ctx, id, -1, sp, ji, gi);
  const Field wantp = field_from(g, [](double r, double) { return (1.0 - r * r) / 4.0; });
  CHECK(sup_phys(g, Field(ps.p - wantp)) < 1e-10);
  CHECK(std::abs(ps.c0 - 0.5) < 1e-10);

  const double om = 0.5;
  const FlowState rot = rotation_state(g, om, 0.3);
  const JacobianData jr = jacobian(g, rot.x);
  const BoundaryGeometry gr = boundary_geometry(g, rot.x);
  const PressureResult pr = pressure_solve(ctx, rot, -1, sp, jr, gr);
  const Field wantr = field_from(g, [](double r, double) { return (1.0 - r * r) / 8.0; });
  CHECK(sup_phys(g, Field(pr.p - wantr)) < 1e-10);
  CHECK(std::abs(pr.c0 - 0.25) < 1e-10);

  // taylor_sign on an analytic gradient
  VField gp;
  gp[0] = field_from(g, [](double r, double th) { return -0.5 * r * std::cos(th); });
  gp[1] = field_from(g, [](double r, double th) { return -0.5 * r * std::sin(th); });
  CHECK(std::abs(taylor_sign(g, gp, gi) - 0.5) < 1e-12);
}

TEST_CASE("solver failure reports the residual") {
  const DiskContext ctx(make_grid(16, 12));
  const GridSpec& g = ctx.g;
  const EllipticOperator op = make_operator(g, jacobian(g, identity_state(g).x));
  const Field rhs = field_from(g, [](double r, double th) { return r * std::cos(th); });

  bool caught = false;
  try {
    solve_dirichlet(ctx, op, rhs, BField::Zero(g.K), SolverParams{1e-30, 2, 50});
  } catch (const SolverError& e) {
    caught = e.residual > 0.0 && std::string(e.what()).size() > 0;
  }
  CHECK(caught);
}
