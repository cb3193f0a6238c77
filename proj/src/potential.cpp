#include "gravdisk/potential.hpp"

#include <cmath>
#include <numbers>

#include "gravdisk/errors.hpp"
#include "gravdisk/parallel.hpp"

namespace gravdisk {

namespace {

constexpr double kPi = std::numbers::pi;

// Frozen-coefficient scale: for d(y) ~ |B0 (y - y_b)|, the angular mean of
// ln|B0 u| - ln|u| over unit u is ln stilde with
// stilde = (|singular values summed|)/2 = sqrt(|B|_F^2 + 2 det B) / 2.
double model_scale(double b11, double b12, double b21, double b22) {
  const double fro2 = b11 * b11 + b12 * b12 + b21 * b21 + b22 * b22;
  const double det = b11 * b22 - b12 * b21;
  return 0.5 * std::sqrt(std::max(1e-300, fro2 + 2.0 * std::abs(det)));
}

}  // namespace

double fundamental_solution(double r) { return std::log(r) / (2.0 * kPi); }

BField potential_boundary_values(const GridSpec& g, const VField& x,
                                 const JacobianData& jac,
                                 const std::function<double(double)>& weight) {
  const int n4 = g.ntheta(4);
  const Mat x1p = to_physical(g, x[0], 4).real();
  const Mat x2p = to_physical(g, x[1], 4).real();

  Vec wt(g.M);
  for (int j = 0; j < g.M; ++j) wt(j) = weight ? weight(g.rho(j)) : 1.0;
  const double wtb = wt(g.M - 1);

  // cos(theta_l - theta_q) lookup on the pad-4 circle
  Vec costab(n4);
  for (int i = 0; i < n4; ++i) costab(i) = std::cos(g.theta(4, i));

  const double dth = 2.0 * kPi / n4;
  Vec vals(g.K);
  par_for(std::size_t(g.K), [&](std::size_t q) {
    const int lq = 4 * int(q);  // target angle on the pad-4 grid
    const double px = x1p(g.M - 1, lq), py = x2p(g.M - 1, lq);

    // model coefficients frozen at the target boundary point (pad-2 index)
    const int l2 = 2 * int(q);
    const double b11 = jac.B[0][0](g.M - 1, l2), b12 = jac.B[0][1](g.M - 1, l2);
    const double b21 = jac.B[1][0](g.M - 1, l2), b22 = jac.B[1][1](g.M - 1, l2);
    const double st = model_scale(b11, b12, b21, b22);
    const double tq = g.theta(4, lq);
    const double t1 = -b11 * std::sin(tq) + b12 * std::cos(tq);
    const double t2 = -b21 * std::sin(tq) + b22 * std::cos(tq);
    const double dens = std::hypot(t1, t2);

    const double st2 = st * st;
    double acc = 0.0;
    for (int j = 0; j < g.M; ++j) {
      const double r = g.rho(j), r2p1 = r * r + 1.0;
      const double w2 = g.w(j) * dth;
      double row = 0.0;
      for (int l = 0; l < n4; ++l) {
        if (j == g.M - 1 && l == lq) {
          // boundary-direction limit of -Phi(d) + Phi(st |y_b - y|)
          row += -wtb * std::log(dens / st) / (2.0 * kPi);
          continue;
        }
        const double dx = px - x1p(j, l), dy = py - x2p(j, l);
        const double d2 = dx * dx + dy * dy;
        const double ry2 = r2p1 - 2.0 * r * costab((l - lq + n4) % n4);
        row += (-wt(j) * std::log(d2) + wtb * std::log(st2 * ry2)) / (4.0 * kPi);
      }
      acc += w2 * row;
    }
    // analytic model integral over the disk: int Phi(st |y_b - y|) dy
    // = (pi ln st + V(1)) / (2 pi) with V(1) = 0
    vals(int(q)) = acc - wtb * 0.5 * std::log(st);
  });

  CVec phys(g.K);
  for (int q = 0; q < g.K; ++q) phys(q) = vals(q);
  return trace_from_physical(g, phys, 1);
}

double potential_at_reference_point(const GridSpec& g, const VField& x,
                                    const JacobianData& jac, double rho,
                                    double theta,
                                    const std::function<double(double)>& weight) {
  const int n4 = g.ntheta(4);
  const Mat x1p = to_physical(g, x[0], 4).real();
  const Mat x2p = to_physical(g, x[1], 4).real();

  const double px = eval_field(g, x[0], rho, theta).real();
  const double py = eval_field(g, x[1], rho, theta).real();
  const double b11 = eval_field(g, jac.Bc[0][0], rho, theta).real();
  const double b12 = eval_field(g, jac.Bc[0][1], rho, theta).real();
  const double b21 = eval_field(g, jac.Bc[1][0], rho, theta).real();
  const double b22 = eval_field(g, jac.Bc[1][1], rho, theta).real();
  const double st = model_scale(b11, b12, b21, b22);
  const double st2 = st * st;
  const double wts = weight ? weight(rho) : 1.0;

  const double ysx = rho * std::cos(theta), ysy = rho * std::sin(theta);
  const double dth = 2.0 * kPi / n4;
  double acc = 0.0;
  for (int j = 0; j < g.M; ++j) {
    const double r = g.rho(j);
    const double wtj = weight ? weight(r) : 1.0;
    const double w2 = g.w(j) * dth;
    double row = 0.0;
    for (int l = 0; l < n4; ++l) {
      const double dx = px - x1p(j, l), dy = py - x2p(j, l);
      const double d2 = dx * dx + dy * dy;
      const double ux = ysx - r * std::cos(g.theta(4, l));
      const double uy = ysy - r * std::sin(g.theta(4, l));
      const double ry2 = ux * ux + uy * uy;
      if (d2 < 1e-30 || ry2 < 1e-30) continue;  // probe hit a node exactly
      row += (-wtj * std::log(d2) + wts * std::log(st2 * ry2)) / (4.0 * kPi);
    }
    acc += w2 * row;
  }
  // int_Omega Phi(st |y* - y|) dy = (pi ln st + V(|y*|)) / (2 pi),
  // V(r) = pi (r^2 - 1) / 2 for r <= 1
  const double vr = kPi * (rho * rho - 1.0) / 2.0;
  return acc - wts * (kPi * std::log(st) + vr) / (2.0 * kPi);
}

PotentialResult solve_potential(const DiskContext& ctx,
                                const EllipticOperator& op, const VField& x,
                                const JacobianData& jac, int sigma,
                                const SolverParams& p) {
  const GridSpec& g = ctx.g;
  PotentialResult out;
  if (sigma == 0) {
    out.phi = zero_field(g);
    out.grad_phi = zero_vfield(g);
    out.boundary = BField::Zero(g.K);
    return out;
  }
  const BField plus = potential_boundary_values(g, x, jac);
  out.boundary = double(sigma) * plus;
  Field rhs = zero_field(g);
  const int m0 = g.index(0);
  for (int j = 0; j < g.M; ++j) rhs(j, m0) = -double(sigma);
  out.phi = solve_dirichlet(ctx, op, rhs, out.boundary, p);
  out.grad_phi = eulerian_gradient(g, out.phi, jac);
  return out;
}

namespace {

double chi_ramp(int m, double r) {
  // quintic 0->1 ramp across the transition annulus
  const double t = (r - (1.0 - 1.0 / m)) * m / 2.0;
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return ((6.0 * t - 15.0) * t + 10.0) * t * t * t;
}

}  // namespace

double chi_profile(int m, double r) {
  if (r <= 1.0 - 1.0 / m) return 1.0;
  if (r >= 1.0 + 1.0 / m) return 0.0;
  return 1.0 - chi_ramp(m, r);
}

namespace {

// Gauss-Legendre rule on [a, b].
void legendre_rule(int n, double a, double b, Vec& nodes, Vec& wts) {
  Vec diag = Vec::Zero(n), sub(n - 1);
  for (int k = 1; k < n; ++k)
    sub(k - 1) = double(k) / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(diag, sub);
  if (es.info() != Eigen::Success)
    throw NumericalError("quadrature eigensolve failed");
  nodes.resize(n);
  wts.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int j = 0; j < n; ++j) {
    nodes(j) = mid + half * es.eigenvalues()(j);
    const double v0 = es.eigenvectors()(0, j);
    wts(j) = 2.0 * v0 * v0 * half;
  }
}

}  // namespace

std::vector<MollifierRow> mollifier_convergence_report(
    const std::vector<int>& ms) {
  std::vector<MollifierRow> rows;
  rows.reserve(ms.size());
  for (int m : ms) {
    if (m < 2) throw ConfigError("mollifier index must be at least 2");
    const double lo = 1.0 - 1.0 / m, hi = 1.0 + 1.0 / m;

    // inner(r) = int_lo^r (1 - chi_m) rho drho, so that for r <= hi
    // I_m(r) = int_0^r chi_m rho drho = r^2/2 - inner(r).
    const auto inner = [&](double r) {
      Vec nd, wq;
      legendre_rule(32, lo, r, nd, wq);
      double s = 0.0;
      for (int i = 0; i < 32; ++i) s += wq(i) * chi_ramp(m, nd(i)) * nd(i);
      return s;
    };

    // Gauss law: (phi_m' - phi')(r) = (I_chi(r) - I_m(r)) / r with
    // I_chi(r) = min(r^2, 1)/2; supported on the transition annulus.
    double num = 0.0;
    {
      Vec nd, wq;
      legendre_rule(64, lo, 1.0, nd, wq);
      for (int i = 0; i < 64; ++i) {
        const double diff = inner(nd(i));  // r^2/2 - I_m on [lo, 1]
        num += wq(i) * diff * diff / nd(i);
      }
      legendre_rule(64, 1.0, hi, nd, wq);
      for (int i = 0; i < 64; ++i) {
        const double diff = 0.5 - nd(i) * nd(i) / 2.0 + inner(nd(i));
        num += wq(i) * diff * diff / nd(i);
      }
    }
    const double grad_err = std::sqrt(2.0 * kPi * num);

    double den = 0.0;
    {
      Vec nd, wq;
      legendre_rule(64, lo, 1.0, nd, wq);
      for (int i = 0; i < 64; ++i) {
        const double d = chi_ramp(m, nd(i));  // 1 - chi_m inside
        den += wq(i) * d * d * nd(i);
      }
      legendre_rule(64, 1.0, hi, nd, wq);
      for (int i = 0; i < 64; ++i) {
        const double d = 1.0 - chi_ramp(m, nd(i));  // chi_m outside
        den += wq(i) * d * d * nd(i);
      }
    }
    const double chi_dist_sq = 2.0 * kPi * den;

    rows.push_back({m, grad_err, chi_dist_sq, grad_err / chi_dist_sq});
  }
  return rows;
}

}  // namespace gravdisk
