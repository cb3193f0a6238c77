#include "gravdisk/hodge.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gravdisk/parallel.hpp"

namespace gravdisk {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }

double bracket_half(double k) { return std::sqrt(std::sqrt(1.0 + k * k)); }

Field dtheta_pow(const GridSpec& g, const Field& f, int order) {
  Field out(g.M, g.K);
  for (int m = 0; m < g.K; ++m) {
    const cplx ik(0.0, double(g.mode(m)));
    out.col(m) = std::pow(ik, order) * f.col(m);
  }
  return out;
}

// Arclength L^2 norm of the normal or tangential component of the
// s-weighted trace of alpha.
double trace_component_norm(const GridSpec& g, const VField& alpha, double s,
                            const BoundaryGeometry& geom, bool normal_side) {
  const CVec v1 =
      trace_to_physical(g, frac_tangential(g, boundary_trace(g, alpha[0]), s), 4);
  const CVec v2 =
      trace_to_physical(g, frac_tangential(g, boundary_trace(g, alpha[1]), s), 4);
  const int n = g.ntheta(4);
  double acc = 0.0;
  for (int l = 0; l < n; ++l) {
    const double c =
        normal_side
            ? v1(l).real() * geom.n1(l) + v2(l).real() * geom.n2(l)
            : v1(l).real() * geom.t1(l) + v2(l).real() * geom.t2(l);
    acc += c * c * geom.dens(l);
  }
  return std::sqrt(acc * (2.0 * kPi / n));
}

}  // namespace

InequalityReport pointwise_decomposition_check(const GridSpec& g,
                                               const VField& alpha,
                                               const FlowState& s,
                                               const Vec& zeta) {
  const JacobianData jac = jacobian(g, s.x);
  const GradPhys Mm = eulerian_grad_matrix(g, alpha, jac);
  const Mat div = Mm.d[0][0] + Mm.d[1][1];
  const Mat curl = Mm.d[1][0] - Mm.d[0][1];
  const Mat dx1 = to_physical(g, dtheta(g, s.x[0]), 2).real();
  const Mat dx2 = to_physical(g, dtheta(g, s.x[1]), 2).real();
  // dtheta alpha along the map, pointwise: r = (d . grad_x) alpha
  const Mat r1 = dx1.cwiseProduct(Mm.d[0][0]) + dx2.cwiseProduct(Mm.d[0][1]);
  const Mat r2 = dx1.cwiseProduct(Mm.d[1][0]) + dx2.cwiseProduct(Mm.d[1][1]);
  const Mat q1 = r1 - 0.5 * div.cwiseProduct(dx1) + 0.5 * curl.cwiseProduct(dx2);
  const Mat q2 = r2 - 0.5 * div.cwiseProduct(dx2) - 0.5 * curl.cwiseProduct(dx1);
  const Mat dd = dx1.cwiseProduct(dx1) + dx2.cwiseProduct(dx2);

  double scale = 1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      scale = std::max(scale, Mm.d[i][j].cwiseAbs().maxCoeff());

  double err = 0.0, ratio = 0.0;
  for (int j = 0; j < g.M; ++j) {
    const double z = zeta(j);
    if (z <= 0.0) continue;
    for (int l = 0; l < g.ntheta(2); ++l) {
      const double s1 = (q1(j, l) * dx1(j, l) - q2(j, l) * dx2(j, l)) / dd(j, l);
      const double s2 = (q1(j, l) * dx2(j, l) + q2(j, l) * dx1(j, l)) / dd(j, l);
      const double e = std::abs(Mm.d[0][0](j, l) - 0.5 * div(j, l) - s1) +
                       std::abs(Mm.d[0][1](j, l) + 0.5 * curl(j, l) - s2) +
                       std::abs(Mm.d[1][0](j, l) - 0.5 * curl(j, l) - s2) +
                       std::abs(Mm.d[1][1](j, l) - 0.5 * div(j, l) + s1);
      err = std::max(err, z * e);
      if (z >= 0.5) {
        const double fro = std::sqrt(
            sq(Mm.d[0][0](j, l)) + sq(Mm.d[0][1](j, l)) +
            sq(Mm.d[1][0](j, l)) + sq(Mm.d[1][1](j, l)));
        const double den = std::abs(div(j, l)) + std::abs(curl(j, l)) +
                           std::hypot(r1(j, l), r2(j, l)) / std::sqrt(dd(j, l)) +
                           1e-30;
        ratio = std::max(ratio, fro / den);
      }
    }
  }
  InequalityReport rep;
  rep.name = "pointwise_decomposition";
  rep.lhs = err / scale;
  rep.rhs = 1e-10;
  rep.constant = ratio;
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

InequalityReport graded_estimate_check(const GridSpec& g, const VField& alpha,
                                       const FlowState& s, int sdeg,
                                       const CutoffFamily& cut) {
  const JacobianData jac = jacobian(g, s.x);
  const auto dc = div_curl(g, alpha, jac);
  const double lhs =
      sobolev_norm_t_weighted(g, {alpha[0], alpha[1]}, sdeg, cut.zeta, jac);
  double rhs = l2_norm(g, alpha);
  rhs += sobolev_norm_t_weighted(g, {dc.first}, sdeg - 1, cut.zeta, jac);
  rhs += sobolev_norm_t_weighted(g, {dc.second}, sdeg - 1, cut.zeta, jac);
  for (int j = 1; j <= sdeg; ++j) {
    double acc = 0.0;
    for (int i = 0; i < 2; ++i)
      acc += sq(l2_norm(g, scale_radial(g, dtheta_pow(g, alpha[i], j), cut.zeta)));
    rhs += std::sqrt(acc);
  }
  InequalityReport rep;
  rep.name = "graded_estimate";
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.constant = lhs / rhs;
  rep.pass = std::isfinite(rep.constant) && rhs > 0.0;
  return rep;
}

InequalityReport full_hodge_check(const GridSpec& g, const VField& alpha,
                                  const FlowState& s, int sdeg,
                                  bool normal_side) {
  const JacobianData jac = jacobian(g, s.x);
  const BoundaryGeometry geom = boundary_geometry(g, s.x);
  const auto dc = div_curl(g, alpha, jac);
  const double lhs = sobolev_norm_t(g, alpha, double(sdeg), jac);
  double rhs = l2_norm(g, alpha);
  rhs += sobolev_norm_t(g, dc.first, double(sdeg - 1), jac);
  rhs += sobolev_norm_t(g, dc.second, double(sdeg - 1), jac);
  rhs += trace_component_norm(g, alpha, sdeg - 0.5, geom, normal_side);
  InequalityReport rep;
  rep.name = normal_side ? "full_hodge_normal" : "full_hodge_tangential";
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.constant = lhs / rhs;
  rep.pass = std::isfinite(rep.constant) && rhs > 0.0;
  return rep;
}

InequalityReport normal_tangential_trade_check(const GridSpec& g,
                                               const VField& alpha,
                                               const FlowState& s) {
  const JacobianData jac = jacobian(g, s.x);
  const BoundaryGeometry geom = boundary_geometry(g, s.x);
  const CVec a1 = trace_to_physical(g, boundary_trace(g, alpha[0]), 4);
  const CVec a2 = trace_to_physical(g, boundary_trace(g, alpha[1]), 4);
  const int n = g.ntheta(4);
  double in = 0.0, it = 0.0;
  for (int l = 0; l < n; ++l) {
    const double an = a1(l).real() * geom.n1(l) + a2(l).real() * geom.n2(l);
    const double at = a1(l).real() * geom.t1(l) + a2(l).real() * geom.t2(l);
    in += an * an * geom.dens(l);
    it += at * at * geom.dens(l);
  }
  in *= 2.0 * kPi / n;
  it *= 2.0 * kPi / n;

  const auto dc = div_curl(g, alpha, jac);
  const double bnorm2 = in + it;
  const double rhs =
      sobolev_norm(g, s.x, 5.0) *
      (bnorm2 + std::sqrt(bnorm2) *
                    (l2_norm(g, dc.first) + l2_norm(g, dc.second)));
  InequalityReport rep;
  rep.name = "normal_tangential_trade";
  rep.lhs = std::abs(in - it);
  rep.rhs = rhs;
  rep.constant = rhs > 0.0 ? rep.lhs / rhs : 0.0;
  rep.pass = rep.lhs <= rhs * (1.0 + 1e-9);
  return rep;
}

InequalityReport product_commutator_check(const GridSpec& g, const Field& f,
                                          const Field& gfun, double a) {
  const Field fg = multiply(g, f, gfun);
  const Field com = frac_tangential(g, fg, 0.5) -
                    multiply(g, frac_tangential(g, f, 0.5), gfun);
  InequalityReport rep;
  rep.name = "product_commutator";
  rep.lhs = l2_norm(g, com);
  rep.rhs = l2_norm(g, f) * l2_norm(g, frac_tangential(g, gfun, 0.5 + a));
  rep.constant = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  rep.pass = std::isfinite(rep.constant);
  return rep;
}

InequalityReport frequency_lemma_check(int kmax) {
  const int n = 2 * kmax + 1;
  std::vector<double> rowmax(std::size_t(n), 0.0);
  par_for(std::size_t(n), [&](std::size_t q) {
    const double k = double(int(q) - kmax);
    const double bk = bracket_half(k);
    double mx = 0.0;
    for (int li = -kmax; li <= kmax; ++li) {
      const double l = double(li);
      const double r = std::abs(bracket_half(k + l) - bk) / bracket_half(l);
      if (r > mx) mx = r;
    }
    rowmax[q] = mx;
  });
  double mx = 0.0;
  for (double v : rowmax) mx = std::max(mx, v);
  InequalityReport rep;
  rep.name = "frequency_half_gain";
  rep.sample = "|k|,|l| <= " + std::to_string(kmax);
  rep.lhs = mx;
  rep.rhs = 1.0;
  rep.constant = mx;
  rep.pass = mx <= 1.0;
  return rep;
}

InequalityReport half_ibp_check(const GridSpec& g, const Field& f,
                                const Field& h) {
  const Field dh = dtheta(g, h);
  cplx ip = 0.0;
  for (int m = 0; m < g.K; ++m)
    for (int j = 0; j < g.M; ++j)
      ip += g.w(j) * std::conj(f(j, m)) * dh(j, m);
  InequalityReport rep;
  rep.name = "half_integration_by_parts";
  rep.lhs = std::abs(2.0 * kPi * ip);
  rep.rhs = l2_norm(g, frac_tangential(g, f, 0.5)) *
            l2_norm(g, frac_tangential(g, h, 0.5));
  rep.constant = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-12);
  return rep;
}

namespace {

Field mode_field(const GridSpec& g, int k,
                 const std::function<double(double)>& prof) {
  Field f = zero_field(g);
  for (int j = 0; j < g.M; ++j) f(j, g.index(k)) = prof(g.rho(j));
  return f;
}

FlowState shear_state(const GridSpec& g, double eps) {
  // x = y + eps J grad Re(z^3); det B = 1 - 36 eps^2 rho^2 stays positive
  FlowState s;
  s.V = zero_vfield(g);
  s.x[0] = field_from(g, [eps](double r, double th) {
    const double y1 = r * std::cos(th), y2 = r * std::sin(th);
    return y1 + eps * 6.0 * y1 * y2;
  });
  s.x[1] = field_from(g, [eps](double r, double th) {
    const double y1 = r * std::cos(th), y2 = r * std::sin(th);
    return y2 + eps * (3.0 * y1 * y1 - 3.0 * y2 * y2);
  });
  return s;
}

}  // namespace

std::vector<InequalityReport> verify_lemmas(const VerifyOptions& opt) {
  std::vector<InequalityReport> out;
  out.push_back(frequency_lemma_check(opt.kmax));

  const GridSpec gfine = make_grid(32, 48);
  const GridSpec gcoarse = make_grid(24, 36);

  {
    std::mt19937_64 rng(opt.seed);
    double worst = 0.0;
    bool all = true;
    for (int i = 0; i < opt.samples; ++i) {
      const Field f = random_trig_field(gfine, rng, 8);
      const Field h = random_trig_field(gfine, rng, 8);
      const InequalityReport rep = half_ibp_check(gfine, f, h);
      worst = std::max(worst, rep.constant);
      all = all && rep.pass;
    }
    InequalityReport rep;
    rep.name = "half_integration_by_parts";
    rep.sample = std::to_string(opt.samples) + " seeded pairs";
    rep.lhs = worst;
    rep.rhs = 1.0;
    rep.constant = worst;
    rep.pass = all;
    out.push_back(rep);
  }

  {
    // single-mode closed form: lhs = |<k+l>^(1/2) - <k>^(1/2)| ||PR||,
    // rhs = ||P|| <l>^(1/2+a) ||R||
    const double a = 0.75;
    double maxerr = 0.0;
    const int pairs[5][2] = {{3, 2}, {7, -2}, {0, 1}, {5, 5}, {-4, 9}};
    for (const auto& kl : pairs) {
      const int k = kl[0], l = kl[1];
      const Field f =
          mode_field(gfine, k, [&](double r) { return std::pow(r, std::abs(k)); });
      const Field h = mode_field(gfine, l, [&](double r) {
        return 0.7 * std::pow(r, std::abs(l)) * (1.0 + r * r);
      });
      const InequalityReport rep = product_commutator_check(gfine, f, h, a);
      const Field pr = multiply(gfine, f, h);
      const double closed_lhs =
          std::abs(bracket_half(double(k + l)) - bracket_half(double(k))) *
          l2_norm(gfine, pr);
      const double closed_rhs =
          l2_norm(gfine, f) *
          std::pow(1.0 + double(l) * double(l), 0.5 * (0.5 + a)) *
          l2_norm(gfine, h);
      maxerr = std::max(maxerr, std::abs(rep.lhs - closed_lhs));
      maxerr = std::max(maxerr, std::abs(rep.rhs - closed_rhs));
    }
    InequalityReport rep;
    rep.name = "commutator_closed_form";
    rep.sample = "5 single-mode pairs";
    rep.lhs = maxerr;
    rep.rhs = 1e-12;
    rep.pass = maxerr <= 1e-12;
    out.push_back(rep);
  }

  {
    std::mt19937_64 rng(opt.seed + 1);
    double worst = 0.0;
    for (int i = 0; i < opt.samples; ++i) {
      const Field f = random_trig_field(gfine, rng, 8);
      const Field h = random_trig_field(gfine, rng, 8);
      worst = std::max(worst, product_commutator_check(gfine, f, h, 0.75).constant);
    }
    InequalityReport rep;
    rep.name = "product_commutator";
    rep.sample = std::to_string(opt.samples) + " seeded pairs, a = 0.75";
    rep.lhs = worst;
    rep.rhs = 1.0;
    rep.constant = worst;
    rep.pass = std::isfinite(worst);
    out.push_back(rep);
  }

  {
    const CutoffFamily cut = make_cutoffs(0.5, 1, gfine);
    std::mt19937_64 rng(opt.seed + 2);
    double maxerr = 0.0, maxratio = 0.0;
    bool all = true;
    const FlowState sid = identity_state(gfine);
    const FlowState ssh = shear_state(gfine, 0.05);
    for (int i = 0; i < 20; ++i) {
      const VField alpha = random_trig_vfield(gfine, rng, 6);
      for (const FlowState* st : {&sid, &ssh}) {
        const InequalityReport rep =
            pointwise_decomposition_check(gfine, alpha, *st, cut.zeta);
        maxerr = std::max(maxerr, rep.lhs);
        maxratio = std::max(maxratio, rep.constant);
        all = all && rep.pass;
      }
    }
    InequalityReport rep;
    rep.name = "pointwise_decomposition";
    rep.sample = "20 seeded fields, identity + shear";
    rep.lhs = maxerr;
    rep.rhs = 1e-10;
    rep.constant = maxratio;
    rep.pass = all;
    out.push_back(rep);
  }

  // Graded and full estimates: constants must be grid stable (same analytic
  // samples, both grids, within 20%).
  const auto stability = [&](const char* name, double c1, double c2) {
    InequalityReport rep;
    rep.name = std::string(name) + "_stability";
    rep.sample = "grids (24,36) vs (32,48)";
    rep.lhs = c1;
    rep.rhs = c2;
    rep.constant = std::abs(c1 - c2) / std::max(c1, c2);
    rep.pass = rep.constant <= 0.2;
    return rep;
  };

  {
    double worst[2] = {0.0, 0.0};
    const GridSpec* grids[2] = {&gcoarse, &gfine};
    for (int gi = 0; gi < 2; ++gi) {
      const GridSpec& g = *grids[gi];
      const CutoffFamily cut = make_cutoffs(0.5, 1, g);
      const FlowState ssh = shear_state(g, 0.05);
      std::mt19937_64 rng(opt.seed + 3);
      for (int i = 0; i < 10; ++i) {
        const VField alpha = random_trig_vfield(g, rng, 6);
        worst[gi] = std::max(worst[gi],
                             graded_estimate_check(g, alpha, ssh, 2, cut).constant);
      }
    }
    InequalityReport rep;
    rep.name = "graded_estimate";
    rep.sample = "10 seeded fields, shear";
    rep.lhs = worst[1];
    rep.rhs = 1.0;
    rep.constant = worst[1];
    rep.pass = std::isfinite(worst[1]);
    out.push_back(rep);
    out.push_back(stability("graded_estimate", worst[0], worst[1]));
  }

  {
    double worstn[2] = {0.0, 0.0}, worstt[2] = {0.0, 0.0};
    const GridSpec* grids[2] = {&gcoarse, &gfine};
    for (int gi = 0; gi < 2; ++gi) {
      const GridSpec& g = *grids[gi];
      const FlowState ssh = shear_state(g, 0.05);
      std::mt19937_64 rng(opt.seed + 4);
      for (int i = 0; i < 10; ++i) {
        const VField alpha = random_trig_vfield(g, rng, 6);
        worstn[gi] = std::max(
            worstn[gi], full_hodge_check(g, alpha, ssh, 3, true).constant);
        worstt[gi] = std::max(
            worstt[gi], full_hodge_check(g, alpha, ssh, 3, false).constant);
      }
    }
    InequalityReport repn;
    repn.name = "full_hodge_normal";
    repn.sample = "10 seeded fields, shear";
    repn.lhs = worstn[1];
    repn.rhs = 1.0;
    repn.constant = worstn[1];
    repn.pass = std::isfinite(worstn[1]);
    out.push_back(repn);
    out.push_back(stability("full_hodge_normal", worstn[0], worstn[1]));
    InequalityReport rept = repn;
    rept.name = "full_hodge_tangential";
    rept.lhs = rept.constant = worstt[1];
    rept.pass = std::isfinite(worstt[1]);
    out.push_back(rept);
    out.push_back(stability("full_hodge_tangential", worstt[0], worstt[1]));
  }

  {
    // smooth interior extensions (profile rho) of the boundary frame fields
    const FlowState sid = identity_state(gfine);
    const double rt = 1.0 / std::sqrt(2.0);
    const VField an = vfield_from(
        gfine, [](double r, double th) { return r * std::cos(th); },
        [](double r, double th) { return r * std::sin(th); });
    const VField at = vfield_from(
        gfine, [](double r, double th) { return -r * std::sin(th); },
        [](double r, double th) { return r * std::cos(th); });
    const VField ad = vfield_from(
        gfine,
        [rt](double r, double th) {
          return rt * r * (std::cos(th) - std::sin(th));
        },
        [rt](double r, double th) {
          return rt * r * (std::sin(th) + std::cos(th));
        });
    const char* names[3] = {"normal field", "tangent field", "diagonal field"};
    const VField* fields[3] = {&an, &at, &ad};
    for (int i = 0; i < 3; ++i) {
      InequalityReport rep = normal_tangential_trade_check(gfine, *fields[i], sid);
      rep.sample = names[i];
      out.push_back(rep);
    }
  }

  return out;
}

}  // namespace gravdisk
