#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gravdisk/potential.hpp"

using namespace gravdisk;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("fundamental solution") {
  CHECK(fundamental_solution(1.0) == 0.0);
  CHECK(std::abs(fundamental_solution(std::exp(1.0)) - 1.0 / (2 * kPi)) < 1e-15);
}

TEST_CASE("boundary values on rigid maps") {
  const GridSpec g = make_grid(16, 12);
  const FlowState id = identity_state(g);
  const JacobianData ji = jacobian(g, id.x);

  // phi vanishes on the unit circle for the uniform disk
  const BField bi = potential_boundary_values(g, id.x, ji);
  CHECK(bi.cwiseAbs().maxCoeff() < 1e-12);

  // isometries reproduce the identity values exactly (model subtraction)
  const FlowState rot = rotation_state(g, 0.7, 1.3);
  const JacobianData jr = jacobian(g, rot.x);
  const BField br = potential_boundary_values(g, rot.x, jr);
  CHECK((br - bi).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reference point values") {
  const GridSpec g = make_grid(16, 12);
  const FlowState id = identity_state(g);
  const JacobianData jac = jacobian(g, id.x);

  // phi(r) = (1 - r^2)/4 for the uniform unit disk
  CHECK(std::abs(potential_at_reference_point(g, id.x, jac, 0.0, 0.0) - 0.25) < 1e-10);
  CHECK(std::abs(potential_at_reference_point(g, id.x, jac, 0.5, 1.0) - 3.0 / 16.0) < 1e-10);
  CHECK(std::abs(potential_at_reference_point(g, id.x, jac, 1.0, 2.0)) < 1e-10);
}

TEST_CASE("potential solve on the identity") {
  const DiskContext ctx(make_grid(16, 12));
  const GridSpec& g = ctx.g;
  const FlowState id = identity_state(g);
  const JacobianData jac = jacobian(g, id.x);
  const EllipticOperator op = make_operator(g, jac);
  const SolverParams sp;

  const PotentialResult plus = solve_potential(ctx, op, id.x, jac, +1, sp);
  const Field want = field_from(g, [](double r, double) { return (1.0 - r * r) / 4.0; });
  CHECK(to_physical(g, Field(plus.phi - want), 2).cwiseAbs().maxCoeff() < 1e-10);
  // grad phi = -x/2
  const Field gerr0 = Field(plus.grad_phi[0] + 0.5 * id.x[0]);
  const Field gerr1 = Field(plus.grad_phi[1] + 0.5 * id.x[1]);
  CHECK(to_physical(g, gerr0, 2).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(to_physical(g, gerr1, 2).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(plus.boundary.cwiseAbs().maxCoeff() < 1e-12);

  // sign flip and the gravity-off short circuit
  const PotentialResult minus = solve_potential(ctx, op, id.x, jac, -1, sp);
  CHECK(to_physical(g, Field(minus.phi + plus.phi), 2).cwiseAbs().maxCoeff() < 1e-10);
  const PotentialResult off = solve_potential(ctx, op, id.x, jac, 0, sp);
  CHECK(off.phi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(off.grad_phi[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mollified indicator") {
  for (int m : {8, 32}) {
    CHECK(std::abs(chi_profile(m, 1.0) - 0.5) < 1e-14);
    CHECK(chi_profile(m, 1.0 - 1.0 / m) == 1.0);
    CHECK(chi_profile(m, 1.0 + 1.0 / m) == 0.0);
    CHECK(chi_profile(m, 0.0) == 1.0);
    double prev = 1.0;
    for (double r = 0.8; r <= 1.2; r += 1e-3) {
      const double v = chi_profile(m, r);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }

  // unit weight reproduces the default path
  const GridSpec g = make_grid(16, 12);
  const FlowState id = identity_state(g);
  const JacobianData jac = jacobian(g, id.x);
  const BField a = potential_boundary_values(g, id.x, jac);
  const BField b = potential_boundary_values(g, id.x, jac, [](double) { return 1.0; });
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mollifier convergence table") {
  const auto rows = mollifier_convergence_report({8, 16, 32});
  REQUIRE(rows.size() == 3);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].m == (8 << i));
    CHECK(rows[i].grad_err > 0.0);
    CHECK(rows[i].chi_dist_sq > 0.0);
    CHECK(rows[i].ratio == rows[i].grad_err / rows[i].chi_dist_sq);
  }
  // the squared indicator distance halves (within 25%) per doubling
  for (size_t i = 1; i < rows.size(); ++i) {
    const double q = rows[i].chi_dist_sq / rows[i - 1].chi_dist_sq;
    CHECK(q > 0.375);
    CHECK(q < 0.625);
  }
  CHECK(rows[2].grad_err < rows[0].grad_err);
}
