#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gravdisk/errors.hpp"
#include "gravdisk/geometry.hpp"

using namespace gravdisk;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("jacobian of rigid maps") {
  const GridSpec g = make_grid(16, 8);

  const FlowState id = identity_state(g);
  const JacobianData ji = jacobian(g, id.x);
  CHECK(std::abs(ji.det_min - 1.0) < 1e-14);
  CHECK(std::abs(ji.det_max - 1.0) < 1e-13);
  CHECK((ji.B[0][0].array() - 1.0).abs().maxCoeff() < 1e-13);
  CHECK(ji.B[0][1].cwiseAbs().maxCoeff() < 1e-14);

  const double om = 0.5, t = 0.8;
  const FlowState rot = rotation_state(g, om, t);
  const JacobianData jr = jacobian(g, rot.x);
  CHECK(std::abs(jr.det_min - 1.0) < 1e-13);
  CHECK(std::abs(jr.det_max - 1.0) < 1e-13);
  CHECK((jr.B[0][0].array() - std::cos(om * t)).abs().maxCoeff() < 1e-13);
  CHECK((jr.B[0][1].array() + std::sin(om * t)).abs().maxCoeff() < 1e-13);

  // V = omega J x
  const CMat x1 = to_physical(g, rot.x[0], 2), v2 = to_physical(g, rot.V[1], 2);
  CHECK((om * x1 - v2).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("map degeneracy guards") {
  const GridSpec g = make_grid(16, 8);

  VField bad;
  bad[0] = field_from(g, [](double r, double th) {
    const double c = std::cos(th);
    return r * r * c * c;  // x1 = y1^2, det = 2 y1 changes sign
  });
  bad[1] = field_from(g, [](double r, double th) { return r * std::sin(th); });
  bool caught = false;
  try {
    jacobian(g, bad);
  } catch (const NumericalError& e) {
    caught = std::string(e.what()) == "map degenerate";
  }
  CHECK(caught);

  caught = false;
  try {
    boundary_geometry(g, zero_vfield(g));
  } catch (const NumericalError& e) {
    caught = std::string(e.what()) == "boundary degenerate";
  }
  CHECK(caught);
}

TEST_CASE("eulerian gradient pulls back") {
  const GridSpec g = make_grid(16, 10);
  // volume preserving shear x = (y1 + 0.1 y2^2, y2)
  VField x;
  x[0] = field_from(g, [](double r, double th) {
    const double s = std::sin(th);
    return r * std::cos(th) + 0.1 * r * r * s * s;
  });
  x[1] = field_from(g, [](double r, double th) { return r * std::sin(th); });
  const JacobianData jac = jacobian(g, x);
  CHECK(std::abs(jac.det_min - 1.0) < 1e-12);
  CHECK(std::abs(jac.det_max - 1.0) < 1e-12);

  // f(x) = x1 pulled back; grad_x f = (1, 0) exactly
  const VField gr = eulerian_gradient(g, x[0], jac);
  CHECK((to_physical(g, gr[0], 2).real().array() - 1.0).abs().maxCoeff() < 1e-11);
  CHECK(to_physical(g, gr[1], 2).real().cwiseAbs().maxCoeff() < 1e-11);

  const GradPhys gp = eulerian_grad_matrix(g, x, jac);
  CHECK((gp.d[0][0].array() - 1.0).abs().maxCoeff() < 1e-11);
  CHECK(gp.d[1][1].cwiseAbs().maxCoeff() > 0.99);  // d v^2/d x^2 of x2 is 1
}

TEST_CASE("divergence and curl") {
  const GridSpec g = make_grid(16, 10);
  const FlowState id = identity_state(g);
  const JacobianData jac = jacobian(g, id.x);

  // v = x: div 2, curl 0; v = J x: div 0, curl 2
  auto dc1 = div_curl(g, id.x, jac);
  CHECK((to_physical(g, dc1.first, 2).real().array() - 2.0).abs().maxCoeff() < 1e-12);
  CHECK(to_physical(g, dc1.second, 2).real().cwiseAbs().maxCoeff() < 1e-12);

  VField jx;
  jx[0] = Field(-id.x[1]);
  jx[1] = id.x[0];
  auto dc2 = div_curl(g, jx, jac);
  CHECK(to_physical(g, dc2.first, 2).real().cwiseAbs().maxCoeff() < 1e-12);
  CHECK((to_physical(g, dc2.second, 2).real().array() - 2.0).abs().maxCoeff() < 1e-12);

  // divergence-form agrees with the advective form on the identity
  CHECK((div_form(g, id.x, jac) - dc1.first).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("divergence forms agree on curved geometry") {
  // the two forms differ by the cofactor divergence, which vanishes only for
  // volume preserving maps, so curve the disk with an exact unit-det shear
  const GridSpec g = make_grid(32, 24);
  std::mt19937_64 rng(11);
  const FlowState id = identity_state(g);
  VField x = id.x;
  x[0] += field_from(g, [](double r, double th) {
    const double s = std::sin(th);
    return 0.1 * r * r * s * s;
  });
  const JacobianData jac = jacobian(g, x);
  const VField v = random_trig_vfield(g, rng, 3);
  const Field a = div_curl(g, v, jac).first;
  const Field b = div_form(g, v, jac);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("boundary frame") {
  const GridSpec g = make_grid(16, 8);
  const FlowState id = identity_state(g);
  const BoundaryGeometry geom = boundary_geometry(g, id.x);
  const int n4 = g.ntheta(4);
  for (int l = 0; l < n4; ++l) {
    const double th = g.theta(4, l);
    CHECK(std::abs(geom.n1(l) - std::cos(th)) < 1e-13);
    CHECK(std::abs(geom.n2(l) - std::sin(th)) < 1e-13);
    CHECK(std::abs(geom.dens(l) - 1.0) < 1e-13);
  }
  CHECK(std::abs(geom.dens_min - 1.0) < 1e-13);

  // mode-2 normal bump: N matches the analytic normal of r = 1 + eps cos 2th
  const double eps = 1e-2;
  VField x;
  x[0] = field_from(g, [eps](double r, double th) {
    return r * std::cos(th) +
           0.5 * eps * (r * r * r * std::cos(3 * th) + r * std::cos(th));
  });
  x[1] = field_from(g, [eps](double r, double th) {
    return r * std::sin(th) +
           0.5 * eps * (r * r * r * std::sin(3 * th) - r * std::sin(th));
  });
  const BoundaryGeometry gb = boundary_geometry(g, x);
  for (int l = 0; l < n4; ++l) {
    const double th = g.theta(4, l);
    const double r = 1.0 + eps * std::cos(2 * th);
    const double rp = -2.0 * eps * std::sin(2 * th);
    double nx = r * std::cos(th) + rp * std::sin(th);
    double ny = r * std::sin(th) - rp * std::cos(th);
    const double nn = std::hypot(nx, ny);
    CHECK(std::abs(gb.n1(l) - nx / nn) < 1e-12);
    CHECK(std::abs(gb.n2(l) - ny / nn) < 1e-12);
  }
}

TEST_CASE("surface integrals") {
  const GridSpec g = make_grid(16, 8);
  const FlowState id = identity_state(g);
  const BoundaryGeometry geom = boundary_geometry(g, id.x);

  Vec ones = Vec::Ones(g.ntheta(4));
  CHECK(std::abs(surface_integral(g, ones, geom) - 2.0 * kPi) < 1e-12);

  // oint cos^2 th dS = pi via the coefficient overload
  BField gc = BField::Zero(g.K);
  gc(g.index(0)) = 0.5;
  gc(g.index(2)) = 0.25;
  gc(g.index(-2)) = 0.25;
  CHECK(std::abs(surface_integral(g, gc, geom) - kPi) < 1e-12);

  // shear map: perimeter against a dense polyline
  VField x;
  x[0] = field_from(g, [](double r, double th) {
    return r * std::cos(th) + 0.05 * r * std::sin(th);
  });
  x[1] = field_from(g, [](double r, double th) { return r * std::sin(th); });
  const BoundaryGeometry gs = boundary_geometry(g, x);
  const double len = surface_integral(g, Vec(Vec::Ones(g.ntheta(4))), gs);
  const int n = 400000;
  double poly = 0.0;
  double px = 1.0, py = 0.0;  // theta = 0 point
  for (int i = 1; i <= n; ++i) {
    const double th = 2.0 * kPi * i / n;
    const double qx = std::cos(th) + 0.05 * std::sin(th), qy = std::sin(th);
    poly += std::hypot(qx - px, qy - py);
    px = qx;
    py = qy;
  }
  CHECK(std::abs(len - poly) < 1e-8);
}

TEST_CASE("simple curve screen") {
  const GridSpec g = make_grid(16, 8);
  check_simple_curve(g, identity_state(g).x);  // no throw

  // trace (cos th, sin 2th) is a figure eight crossing at the origin
  VField x;
  x[0] = field_from(g, [](double r, double th) { return r * std::cos(th); });
  x[1] = field_from(g, [](double r, double th) { return r * r * std::sin(2 * th); });
  bool caught = false;
  try {
    check_simple_curve(g, x);
  } catch (const NumericalError& e) {
    caught = std::string(e.what()) == "boundary self-intersection";
  }
  CHECK(caught);
}

TEST_CASE("moving-domain norms reduce to flat ones") {
  const GridSpec g = make_grid(16, 10);
  const JacobianData jac = jacobian(g, identity_state(g).x);
  std::mt19937_64 rng(5);
  const Field f = random_trig_field(g, rng, 4);
  for (double s : {0.0, 1.0, 2.5, 5.0}) {
    const double a = sobolev_norm_t(g, f, s, jac);
    const double b = sobolev_norm(g, f, s);
    CHECK(std::abs(a - b) < 1e-9 * (1.0 + b));
  }
}

TEST_CASE("point evaluation") {
  const GridSpec g = make_grid(16, 8);
  const Field f = field_from(g, [](double r, double th) { return r * r * r * std::cos(3 * th); });
  const cplx v = eval_field(g, f, 0.37, 1.1);
  CHECK(std::abs(v.real() - 0.37 * 0.37 * 0.37 * std::cos(3.3)) < 1e-12);
  CHECK(std::abs(v.imag()) < 1e-12);

  CHECK(std::abs(eval_field(g, f, 1.0, 0.4).real() - std::cos(1.2)) < 1e-12);

  const Field f0 = field_from(g, [](double r, double) { return 1.0 + r * r; });
  CHECK(std::abs(eval_field(g, f0, 0.0, 0.0).real() - 1.0) < 1e-12);
}
