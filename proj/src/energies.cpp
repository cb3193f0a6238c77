#include "gravdisk/energies.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gravdisk/errors.hpp"

namespace gravdisk {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }

Field dtheta_pow(const GridSpec& g, const Field& f, int order) {
  Field out(g.M, g.K);
  for (int m = 0; m < g.K; ++m) {
    const cplx ik(0.0, double(g.mode(m)));
    out.col(m) = std::pow(ik, order) * f.col(m);
  }
  return out;
}

}  // namespace

double energy_E1(const GridSpec& g, const FlowState& s, const JacobianData& jac,
                 const CutoffFamily& cut) {
  double top = 0.0;
  for (int i = 0; i < 2; ++i)
    top += sq(l2_norm(g, scale_radial(g, dtheta_pow(g, s.V[i], 5), cut.zeta)));
  const double inner =
      sobolev_norm_t_weighted(g, {s.V[0], s.V[1]}, 5, cut.eta, jac);
  return top + sq(inner);
}

double energy_E2(const GridSpec& g, const FlowState& s,
                 const JacobianData& jac) {
  const Field curl = div_curl(g, s.V, jac).second;
  return sobolev_norm_t(g, curl, 4.5, jac);
}

double energy_E3(const GridSpec& g, const FlowState& s, const VField& grad_p,
                 const BoundaryGeometry& geom) {
  const int n = g.ntheta(4);
  const CVec g1 = trace_to_physical(g, boundary_trace(g, grad_p[0]), 4);
  const CVec g2 = trace_to_physical(g, boundary_trace(g, grad_p[1]), 4);
  const CVec d51 =
      trace_to_physical(g, dtheta_trace(g, boundary_trace(g, s.x[0]), 5), 4);
  const CVec d52 =
      trace_to_physical(g, dtheta_trace(g, boundary_trace(g, s.x[1]), 5), 4);
  double acc = 0.0;
  for (int l = 0; l < n; ++l) {
    const double wq = -(g1(l).real() * geom.n1(l) + g2(l).real() * geom.n2(l));
    const double vn = d51(l).real() * geom.n1(l) + d52(l).real() * geom.n2(l);
    acc += wq * vn * vn * geom.dens(l);
  }
  return acc * (2.0 * kPi / n);
}

double energy_E4(const GridSpec& g, const FlowState& s,
                 const JacobianData& jac) {
  (void)s;
  double acc = 0.0;
  for (int a = 0; a < 2; ++a) {
    const VField wa = {jac.Bc[0][a], jac.Bc[1][a]};
    const auto dc = div_curl(g, wa, jac);
    acc += sq(sobolev_norm_t(g, dc.first, 3.5, jac));
    acc += sq(sobolev_norm_t(g, dc.second, 3.5, jac));
  }
  return acc;
}

TraceData trace_data(const GridSpec& g, const FlowState& s,
                     const JacobianData& jac, const BoundaryGeometry& geom) {
  TraceData td;
  const BVField b = boundary_trace(g, s.x);
  for (int j = 0; j <= 4; ++j) {
    double acc = 0.0;
    for (int m = 0; m < g.K; ++m) {
      const double k2j = std::pow(double(g.mode(m)) * double(g.mode(m)), j);
      acc += k2j * (std::norm(b[0](m)) + std::norm(b[1](m)));
    }
    td.theta_deriv_sq_dtheta[j] = 2.0 * kPi * acc;  // Parseval, flat measure
  }
  const int n = g.ntheta(4);
  const CVec d51 = trace_to_physical(g, dtheta_trace(g, b[0], 5), 4);
  const CVec d52 = trace_to_physical(g, dtheta_trace(g, b[1], 5), 4);
  double acc = 0.0;
  for (int l = 0; l < n; ++l) {
    const double vt = d51(l).real() * geom.t1(l) + d52(l).real() * geom.t2(l);
    acc += vt * vt * geom.dens(l);
  }
  td.top_tangential_sq_dS = acc * (2.0 * kPi / n);
  td.dens_min = geom.dens_min;
  td.dens_max = geom.dens_max;
  td.norm_x_H5_sq = sq(sobolev_norm(g, s.x, 5.0));
  (void)jac;
  return td;
}

double reconstruct_x_bound(double E3, double E4, double c0,
                           const TraceData& td) {
  if (!(c0 > 0.0))
    throw NumericalError("Taylor condition violated; bound unavailable");
  // || <dth>^5 x . N ||^2_dS <= dens_max oint |<dth>^5 x|^2 dth
  //   <= 10 dens_max sum_{j<=5} oint |dth^j x|^2 dth            (binomial)
  // and the j = 5 flat term is bounded through the arclength measure:
  //   oint |dth^5 x|^2 dth <= (1/dens_min) [ E3/c0 + oint ((dth^5 x).T)^2 dS ].
  double low = 0.0;
  for (int j = 0; j <= 4; ++j) low += td.theta_deriv_sq_dtheta[j];
  const double top =
      (std::max(E3, 0.0) / c0 + td.top_tangential_sq_dS) / td.dens_min;
  return td.norm_x_H5_sq + E4 + 10.0 * td.dens_max * (low + top);
}

EnergyReport evaluate_energies(const DiskContext& ctx, const FlowState& s,
                               int gravity_sign, const SolverParams& sp,
                               const CutoffFamily& cut, double* running_sup) {
  const GridSpec& g = ctx.g;
  EnergyReport r;
  r.t = s.t;
  const JacobianData jac = jacobian(g, s.x);
  const BoundaryGeometry geom = boundary_geometry(g, s.x);
  const PressureResult pr = pressure_solve(ctx, s, gravity_sign, sp, jac, geom);
  r.c0 = pr.c0;

  r.norm_V_5 = sobolev_norm_t(g, s.V, 5.0, jac);
  r.norm_x_5p5 = sobolev_norm(g, s.x, 5.5);
  r.norm_curl_4p5 = energy_E2(g, s, jac);
  const double inst = r.norm_V_5 + r.norm_x_5p5 + r.norm_curl_4p5;
  if (running_sup) {
    *running_sup = std::max(*running_sup, inst);
    r.E = *running_sup;
  } else {
    r.E = inst;
  }

  r.E1 = energy_E1(g, s, jac, cut);
  r.E2 = r.norm_curl_4p5;
  r.E3 = energy_E3(g, s, pr.grad_p, geom);
  r.E4 = energy_E4(g, s, jac);

  const TraceData td = trace_data(g, s, jac, geom);
  if (r.c0 > 0.0) {
    r.x_bound = reconstruct_x_bound(r.E3, r.E4, r.c0, td);
  } else {
    r.x_bound = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::vector<RateRow> energy_rate_report(const std::vector<EnergyReport>& series,
                                        double a, double b, double c) {
  std::vector<RateRow> rows;
  if (series.size() < 3) return rows;
  rows.reserve(series.size() - 2);
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    const EnergyReport& lo = series[i - 1];
    const EnergyReport& hi = series[i + 1];
    const double dt = hi.t - lo.t;
    RateRow row;
    row.t = series[i].t;
    row.rate[0] = (hi.E1 - lo.E1) / dt;
    row.rate[1] = (hi.E2 - lo.E2) / dt;
    row.rate[2] = (hi.E3 - lo.E3) / dt;
    row.rate[3] = (hi.E4 - lo.E4) / dt;
    const double e = series[i].E;
    const double cap = a + b * e + c * e * e;
    for (double rt : row.rate)
      if (std::abs(rt) > cap) row.flagged = true;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gravdisk
