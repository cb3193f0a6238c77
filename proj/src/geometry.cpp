#include "gravdisk/geometry.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gravdisk/errors.hpp"
#include "gravdisk/parallel.hpp"

namespace gravdisk {

namespace {

constexpr double kPi = std::numbers::pi;

CMat cplx_of(const Mat& r) {
  CMat c(r.rows(), r.cols());
  c.real() = r;
  c.imag().setZero();
  return c;
}

CMat ew(const Mat& a, const CMat& f) {
  CMat r(f.rows(), f.cols());
  r.real() = a.cwiseProduct(f.real());
  r.imag() = a.cwiseProduct(f.imag());
  return r;
}

}  // namespace

FlowState identity_state(const GridSpec& g) {
  FlowState s;
  s.x = zero_vfield(g);
  s.V = zero_vfield(g);
  const int p = g.index(1), m = g.index(-1);
  for (int j = 0; j < g.M; ++j) {
    const double r = g.rho(j);
    s.x[0](j, p) = 0.5 * r;
    s.x[0](j, m) = 0.5 * r;
    s.x[1](j, p) = cplx(0.0, -0.5 * r);
    s.x[1](j, m) = cplx(0.0, 0.5 * r);
  }
  return s;
}

FlowState rotation_state(const GridSpec& g, double omega, double t) {
  FlowState s = identity_state(g);
  const double c = std::cos(omega * t), sn = std::sin(omega * t);
  const Field x1 = c * s.x[0] - sn * s.x[1];
  const Field x2 = sn * s.x[0] + c * s.x[1];
  s.x = {x1, x2};
  s.V = {-omega * x2, omega * x1};
  s.t = t;
  return s;
}

JacobianData jacobian(const GridSpec& g, const VField& x) {
  JacobianData J;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a) {
      J.Bc[i][a] = smooth_filter(g, dy(g, x[i], a));
      J.B[i][a] = to_physical(g, J.Bc[i][a], 2).real();
    }
  J.detB =
      J.B[0][0].cwiseProduct(J.B[1][1]) - J.B[0][1].cwiseProduct(J.B[1][0]);
  J.det_min = J.detB.minCoeff();
  J.det_max = J.detB.maxCoeff();
  if (J.det_min <= 0.0) throw NumericalError("map degenerate");
  J.detB_coef = from_physical(g, cplx_of(J.detB), 2);
  const Mat inv = J.detB.cwiseInverse();
  J.A[0][0] = J.B[1][1].cwiseProduct(inv);
  J.A[0][1] = -J.B[0][1].cwiseProduct(inv);
  J.A[1][0] = -J.B[1][0].cwiseProduct(inv);
  J.A[1][1] = J.B[0][0].cwiseProduct(inv);
  return J;
}

VField eulerian_gradient(const GridSpec& g, const Field& f,
                         const JacobianData& jac) {
  const CMat g0 = to_physical(g, dy(g, f, 0), 2);
  const CMat g1 = to_physical(g, dy(g, f, 1), 2);
  VField out;
  for (int i = 0; i < 2; ++i)
    out[i] = from_physical(g, ew(jac.A[0][i], g0) + ew(jac.A[1][i], g1), 2);
  return out;
}

GradPhys eulerian_grad_matrix(const GridSpec& g, const VField& v,
                              const JacobianData& jac) {
  GradPhys out;
  for (int i = 0; i < 2; ++i) {
    const Mat g0 = to_physical(g, dy(g, v[i], 0), 2).real();
    const Mat g1 = to_physical(g, dy(g, v[i], 1), 2).real();
    for (int j = 0; j < 2; ++j)
      out.d[i][j] =
          jac.A[0][j].cwiseProduct(g0) + jac.A[1][j].cwiseProduct(g1);
  }
  return out;
}

std::pair<Field, Field> div_curl(const GridSpec& g, const VField& v,
                                 const JacobianData& jac) {
  const GradPhys m = eulerian_grad_matrix(g, v, jac);
  Field div = smooth_filter(g, from_physical(g, cplx_of(m.d[0][0] + m.d[1][1]), 2));
  Field curl =
      smooth_filter(g, from_physical(g, cplx_of(m.d[1][0] - m.d[0][1]), 2));
  return {std::move(div), std::move(curl)};
}

Field div_form(const GridSpec& g, const VField& v, const JacobianData& jac) {
  const Mat v0 = to_physical(g, v[0], 2).real();
  const Mat v1 = to_physical(g, v[1], 2).real();
  Field out = zero_field(g);
  for (int a = 0; a < 2; ++a) {
    const Mat wa =
        jac.A[a][0].cwiseProduct(v0) + jac.A[a][1].cwiseProduct(v1);
    out += dy(g, from_physical(g, cplx_of(wa), 2), a);
  }
  return smooth_filter(g, out);
}

BoundaryGeometry boundary_geometry(const GridSpec& g, const VField& x) {
  BoundaryGeometry bg;
  bg.b = boundary_trace(g, x);
  const CVec d1 = trace_to_physical(g, dtheta_trace(g, bg.b[0], 1), 4);
  const CVec d2 = trace_to_physical(g, dtheta_trace(g, bg.b[1], 1), 4);
  const int n = g.ntheta(4);
  bg.t1.resize(n);
  bg.t2.resize(n);
  bg.n1.resize(n);
  bg.n2.resize(n);
  bg.dens.resize(n);
  for (int l = 0; l < n; ++l) {
    const double tx = d1(l).real(), ty = d2(l).real();
    const double dn = std::hypot(tx, ty);
    if (dn < 1e-8) throw NumericalError("boundary degenerate");
    bg.dens(l) = dn;
    bg.t1(l) = tx / dn;
    bg.t2(l) = ty / dn;
    bg.n1(l) = ty / dn;  // tangent rotated by -90 degrees
    bg.n2(l) = -tx / dn;
  }
  bg.dens_min = bg.dens.minCoeff();
  bg.dens_max = bg.dens.maxCoeff();

  // Outward orientation: the position field must have positive flux.
  const CVec b1 = trace_to_physical(g, bg.b[0], 4);
  const CVec b2 = trace_to_physical(g, bg.b[1], 4);
  double flux = 0.0;
  for (int l = 0; l < n; ++l)
    flux += (b1(l).real() * bg.n1(l) + b2(l).real() * bg.n2(l)) * bg.dens(l);
  if (flux < 0.0) {
    bg.n1 = -bg.n1;
    bg.n2 = -bg.n2;
  }
  return bg;
}

double surface_integral(const GridSpec& g, const Vec& g_phys4,
                        const BoundaryGeometry& geom) {
  const int n = g.ntheta(4);
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += g_phys4(l) * geom.dens(l);
  return s * (2.0 * kPi / n);
}

double surface_integral(const GridSpec& g, const BField& gc,
                        const BoundaryGeometry& geom) {
  const CVec p = trace_to_physical(g, gc, 4);
  return surface_integral(g, Vec(p.real()), geom);
}

void check_simple_curve(const GridSpec& g, const VField& x) {
  const int n = g.ntheta(4);
  const CVec b1 = trace_to_physical(g, boundary_trace(g, x[0]), 4);
  const CVec b2 = trace_to_physical(g, boundary_trace(g, x[1]), 4);

  // Probe ring: images of reference points near rho = 0.3. Winding of the
  // boundary polyline about each probe must be one.
  int jstar = 0;
  for (int j = 1; j < g.M; ++j)
    if (std::abs(g.rho(j) - 0.3) < std::abs(g.rho(jstar) - 0.3)) jstar = j;
  const Eigen::RowVectorXcd r1 = x[0].row(jstar) * g.synth[2];
  const Eigen::RowVectorXcd r2 = x[1].row(jstar) * g.synth[2];
  const int np = std::min<int>(64, int(r1.size()));
  const int stride = int(r1.size()) / np;

  std::vector<double> wind(np, 0.0);
  par_for(std::size_t(np), [&](std::size_t q) {
    const double px = r1(int(q) * stride).real();
    const double py = r2(int(q) * stride).real();
    double total = 0.0;
    double ax = b1(n - 1).real() - px, ay = b2(n - 1).real() - py;
    for (int l = 0; l < n; ++l) {
      const double bx = b1(l).real() - px, by = b2(l).real() - py;
      total += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
      ax = bx;
      ay = by;
    }
    wind[q] = total / (2.0 * kPi);
  });
  for (double wq : wind)
    if (std::abs(wq - 1.0) > 0.1)
      throw NumericalError("boundary self-intersection");
}

namespace {

DerivFn eulerian_deriv(const GridSpec& g, const JacobianData& jac) {
  return [&g, &jac](const Field& f, int a) -> Field {
    const CMat g0 = to_physical(g, dy(g, f, 0), 2);
    const CMat g1 = to_physical(g, dy(g, f, 1), 2);
    return from_physical(g, ew(jac.A[0][a], g0) + ew(jac.A[1][a], g1), 2);
  };
}

}  // namespace

double sobolev_norm_t(const GridSpec& g, const Field& f, double s,
                      const JacobianData& jac) {
  return sobolev_norm_general(g, {f}, s, eulerian_deriv(g, jac));
}

double sobolev_norm_t(const GridSpec& g, const VField& f, double s,
                      const JacobianData& jac) {
  return sobolev_norm_general(g, {f[0], f[1]}, s, eulerian_deriv(g, jac));
}

double sobolev_norm_t_weighted(const GridSpec& g,
                               const std::vector<Field>& comps, int s,
                               const Vec& weight, const JacobianData& jac) {
  return sobolev_norm_weighted(g, comps, s, weight, eulerian_deriv(g, jac));
}

cplx eval_field(const GridSpec& g, const Field& f, double rho, double theta) {
  const Vec kern[2] = {radial_eval_kernel(g, 0, rho),
                       radial_eval_kernel(g, 1, rho)};
  cplx total = 0.0;
  for (int m = 1; m < g.K; ++m) {
    const int p = std::abs(g.mode(m)) % 2;
    cplx val = 0.0;
    for (int j = 0; j < g.M; ++j) val += kern[p](j) * f(j, m);
    total += val * std::polar(1.0, double(g.mode(m)) * theta);
  }
  return total;
}

}  // namespace gravdisk
