#include "gravdisk/elliptic.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/QR>

#include "gravdisk/errors.hpp"
#include "gravdisk/parallel.hpp"

namespace gravdisk {

namespace {

CMat ewc(const Mat& a, const CMat& f) {
  CMat r(f.rows(), f.cols());
  r.real() = a.cwiseProduct(f.real());
  r.imag() = a.cwiseProduct(f.imag());
  return r;
}

cplx dotF(const GridSpec& g, const Field& a, const Field& b) {
  cplx s = 0.0;
  for (int m = 0; m < g.K; ++m)
    for (int j = 0; j < g.M; ++j)
      s += g.w(j) * std::conj(a(j, m)) * b(j, m);
  return s;
}

double normF(const GridSpec& g, const Field& a) {
  return std::sqrt(std::max(0.0, dotF(g, a, a).real()));
}

// Divergence-form application; optionally also returns the boundary conormal
// row n~_a G^{ab} d_b u at rho = 1 as trace coefficients.
Field apply_full(const GridSpec& g, const EllipticOperator& op, const Field& u,
                 BField* conormal) {
  const CMat e0 = to_physical(g, dy(g, u, 0), 2);
  const CMat e1 = to_physical(g, dy(g, u, 1), 2);
  const CMat w0 = ewc(op.G11, e0) + ewc(op.G12, e1);
  const CMat w1 = ewc(op.G12, e0) + ewc(op.G22, e1);
  if (conormal) {
    const int n = g.ntheta(2);
    CVec c(n);
    for (int l = 0; l < n; ++l) {
      const double th = g.theta(2, l);
      c(l) = std::cos(th) * w0(g.M - 1, l) + std::sin(th) * w1(g.M - 1, l);
    }
    *conormal = trace_from_physical(g, c, 2);
  }
  return dy(g, from_physical(g, w0, 2), 0) +
         dy(g, from_physical(g, w1, 2), 1);
}

using ApplyFn = std::function<Field(const Field&)>;

// Right-preconditioned restarted GMRES in the quadrature inner product.
// Residual estimated through a small least-squares solve each step; true
// residual recomputed at cycle ends before acceptance.
Field gmres(const GridSpec& g, const ApplyFn& A, const ApplyFn& P,
            const Field& b, const SolverParams& prm, KrylovStats* stats) {
  const double bnorm = normF(g, b);
  Field x = Field::Zero(g.M, g.K);
  if (!(bnorm > 1e-300)) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  const int rs = std::max(1, prm.restart);
  Field r = b;
  double rel = 1.0;
  int total = 0;
  while (total < prm.max_iter) {
    const double beta = normF(g, r);
    rel = beta / bnorm;
    if (rel <= prm.tol) break;

    std::vector<Field> V, Z;
    V.reserve(rs + 1);
    Z.reserve(rs);
    V.push_back(r / beta);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(rs + 1, rs);
    int j = 0;
    bool breakdown = false;
    for (; j < rs && total < prm.max_iter;) {
      Z.push_back(P(V[j]));
      Field w = A(Z[j]);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = dotF(g, V[i], w);
        w -= H(i, j) * V[i];
      }
      const double hs = normF(g, w);
      H(j + 1, j) = hs;
      ++j;
      ++total;
      if (hs > 1e-300) {
        V.push_back(w / hs);
      } else {
        breakdown = true;  // Krylov space exhausted; LS solve is exact
        break;
      }
      const Eigen::MatrixXcd Hb = H.topLeftCorner(j + 1, j);
      Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(j + 1);
      e1(0) = beta;
      const Eigen::VectorXcd y = Hb.colPivHouseholderQr().solve(e1);
      if ((e1 - Hb * y).norm() <= 0.5 * prm.tol * bnorm) break;
    }
    const Eigen::MatrixXcd Hb = H.topLeftCorner(j + 1, j);
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(j + 1);
    e1(0) = beta;
    const Eigen::VectorXcd y = Hb.colPivHouseholderQr().solve(e1);
    for (int i = 0; i < j; ++i) x += y(i) * Z[i];
    r = b - A(x);
    rel = normF(g, r) / bnorm;
    if (breakdown) break;
  }
  if (stats) *stats = {total, rel};
  if (rel > prm.tol)
    throw SolverError("elliptic solver failed to converge", rel);
  return x;
}

}  // namespace

EllipticOperator make_operator(const GridSpec& g, const JacobianData& jac) {
  EllipticOperator op;
  op.G11 = jac.A[0][0].cwiseProduct(jac.A[0][0]) +
           jac.A[0][1].cwiseProduct(jac.A[0][1]);
  op.G12 = jac.A[0][0].cwiseProduct(jac.A[1][0]) +
           jac.A[0][1].cwiseProduct(jac.A[1][1]);
  op.G22 = jac.A[1][0].cwiseProduct(jac.A[1][0]) +
           jac.A[1][1].cwiseProduct(jac.A[1][1]);
  double kap = 1.0;
  for (int j = 0; j < g.M; ++j) {
    for (int l = 0; l < g.ntheta(2); ++l) {
      const double tr = op.G11(j, l) + op.G22(j, l);
      const double det =
          op.G11(j, l) * op.G22(j, l) - op.G12(j, l) * op.G12(j, l);
      const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
      const double lmin = 0.5 * (tr - disc), lmax = 0.5 * (tr + disc);
      if (!(lmin > 0.0)) throw NumericalError("coefficient not elliptic");
      kap = std::max({kap, lmax, 1.0 / lmin});
    }
  }
  op.kappa = kap;
  return op;
}

Field apply_operator(const GridSpec& g, const EllipticOperator& op,
                     const Field& u) {
  return apply_full(g, op, u, nullptr);
}

ModePrecond::ModePrecond(const GridSpec& g, BC bc) {
  const int kmax = g.K / 2;
  lu_.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    const Mat& D1 = g.d1(k);
    Mat L = g.d2(k);
    for (int r = 0; r < g.M; ++r) {
      L.row(r) += D1.row(r) / g.rho(r);
      L(r, r) -= double(k) * double(k) / (g.rho(r) * g.rho(r));
    }
    L.row(g.M - 1).setZero();
    if (bc == BC::dirichlet || k == 0) {
      L(g.M - 1, g.M - 1) = 1.0;  // value row (gauge pin for Neumann k=0)
    } else {
      L.row(g.M - 1) = D1.row(g.M - 1);  // flat conormal d_rho at rho = 1
    }
    lu_.emplace_back(L);
  }
}

Field ModePrecond::solve(const GridSpec& g, const Field& rhs) const {
  Field out(g.M, g.K);
  out.col(0).setZero();
  par_for(std::size_t(g.K - 1), [&](std::size_t q) {
    const int m = int(q) + 1;
    const int k = std::abs(g.mode(m));
    const Vec re = rhs.col(m).real();
    const Vec im = rhs.col(m).imag();
    const Vec sr = lu_[k].solve(re);
    const Vec si = lu_[k].solve(im);
    for (int j = 0; j < g.M; ++j) out(j, m) = cplx(sr(j), si(j));
  });
  return out;
}

Field solve_dirichlet(const DiskContext& ctx, const EllipticOperator& op,
                      const Field& rhs, const BField& bc,
                      const SolverParams& p, KrylovStats* stats) {
  const GridSpec& g = ctx.g;
  // Exact flat-harmonic lift of the boundary data keeps the GMRES unknown in
  // the zero-trace subspace.
  Field lift = zero_field(g);
  for (int m = 1; m < g.K; ++m) {
    const int k = std::abs(g.mode(m));
    if (bc(m) == cplx(0.0, 0.0)) continue;
    for (int j = 0; j < g.M; ++j)
      lift(j, m) = bc(m) * std::pow(g.rho(j), k);
  }
  Field b = rhs - apply_operator(g, op, lift);
  b.row(g.M - 1).setZero();
  b.col(0).setZero();
  const ApplyFn A = [&](const Field& z) {
    Field y = apply_operator(g, op, z);
    y.row(g.M - 1).setZero();
    y.col(0).setZero();
    return y;
  };
  const ApplyFn P = [&](const Field& v) { return ctx.dirichlet.solve(g, v); };
  const Field z = gmres(g, A, P, b, p, stats);
  return lift + z;
}

Field solve_neumann(const DiskContext& ctx, const EllipticOperator& op,
                    const Field& rhs, const Vec& flux_phys2,
                    const SolverParams& p, KrylovStats* stats) {
  const GridSpec& g = ctx.g;
  CVec fphys(g.ntheta(2));
  for (int l = 0; l < g.ntheta(2); ++l) fphys(l) = flux_phys2(l);
  const BField fc = trace_from_physical(g, fphys, 2);

  Field b = rhs;
  b.row(g.M - 1) = fc.transpose();
  b(g.M - 1, g.index(0)) = 0.0;  // gauge pin target
  b.col(0).setZero();

  const ApplyFn A = [&](const Field& psi) {
    BField cn;
    Field y = apply_full(g, op, psi, &cn);
    y.row(g.M - 1) = cn.transpose();
    y(g.M - 1, g.index(0)) = psi(g.M - 1, g.index(0));
    y.col(0).setZero();
    return y;
  };
  const ApplyFn P = [&](const Field& v) { return ctx.neumann.solve(g, v); };
  return gmres(g, A, P, b, p, stats);
}

PressureResult pressure_solve(const DiskContext& ctx, const FlowState& s,
                              int gravity_sign, const SolverParams& p,
                              const JacobianData& jac,
                              const BoundaryGeometry& geom) {
  const GridSpec& g = ctx.g;
  const EllipticOperator op = make_operator(g, jac);
  const GradPhys dv = eulerian_grad_matrix(g, s.V, jac);
  Mat tr2 = Mat::Zero(g.M, g.ntheta(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tr2 += dv.d[i][j].cwiseProduct(dv.d[j][i]);
  CMat rphys(g.M, g.ntheta(2));
  rphys.real() = -tr2;
  rphys.imag().setZero();
  Field rhs = from_physical(g, rphys, 2);
  const int m0 = g.index(0);
  for (int j = 0; j < g.M; ++j)
    rhs(j, m0) += double(gravity_sign);

  PressureResult out;
  out.p = solve_dirichlet(ctx, op, rhs, BField::Zero(g.K), p);
  out.grad_p = eulerian_gradient(g, out.p, jac);
  out.c0 = taylor_sign(g, out.grad_p, geom);
  return out;
}

double taylor_sign(const GridSpec& g, const VField& grad_p,
                   const BoundaryGeometry& geom) {
  const CVec g1 = trace_to_physical(g, boundary_trace(g, grad_p[0]), 4);
  const CVec g2 = trace_to_physical(g, boundary_trace(g, grad_p[1]), 4);
  double c0 = std::numeric_limits<double>::infinity();
  for (int l = 0; l < g.ntheta(4); ++l)
    c0 = std::min(
        c0, -(g1(l).real() * geom.n1(l) + g2(l).real() * geom.n2(l)));
  return c0;
}

}  // namespace gravdisk
