#include "gravdisk/grid.hpp"

#include <cmath>
#include <numbers>

#include "gravdisk/errors.hpp"

namespace gravdisk {

double GridSpec::theta(int pad, int j) const {
  return 2.0 * std::numbers::pi * double(j) / double(ntheta(pad));
}

int GridSpec::pad_slot(int pad) {
  switch (pad) {
    case 1: return 0;
    case 2: return 1;
    case 4: return 2;
    default: throw std::logic_error("unsupported padding");
  }
}

namespace {

// Gauss-Radau rule for int_{-1}^{1} g(u) (1+u) du with the node u=1 fixed.
// Weight (1+u) is Jacobi(alpha=0, beta=1); monic recurrence coefficients
//   a_n = 1/((2n+1)(2n+3)),  b_n^2 = n(n+1)/(2n+1)^2,  mu0 = 2.
// The Radau tridiagonal replaces the last diagonal entry with
// 1 - b_{M-1}^2 pi_{M-2}(1)/pi_{M-1}(1), the ratio built by recurrence.
void radau_jacobi01(int M, Vec& nodes, Vec& weights) {
  Vec a(M), b2(M);
  for (int n = 0; n < M; ++n) {
    a(n) = 1.0 / ((2.0 * n + 1.0) * (2.0 * n + 3.0));
    b2(n) = n == 0 ? 0.0
                   : double(n) * (double(n) + 1.0) /
                         ((2.0 * n + 1.0) * (2.0 * n + 1.0));
  }
  double r = 1.0 - a(0);  // pi_1(1)/pi_0(1)
  for (int k = 1; k <= M - 2; ++k) r = (1.0 - a(k)) - b2(k) / r;

  Vec diag = a;
  diag(M - 1) = 1.0 - b2(M - 1) / r;
  Vec sub(M - 1);
  for (int k = 1; k < M; ++k) sub(k - 1) = std::sqrt(b2(k));

  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(diag, sub);
  if (es.info() != Eigen::Success)
    throw NumericalError("quadrature eigensolve failed");

  nodes = es.eigenvalues();  // ascending
  weights.resize(M);
  for (int j = 0; j < M; ++j) {
    double v0 = es.eigenvectors()(0, j);
    weights(j) = 2.0 * v0 * v0;
  }
}

// Orthonormal Jacobi(0, beta) recurrence on [-1, 1]:
//   x p_n = c_{n+1} p_{n+1} + d_n p_n + c_n p_{n-1}.
double jac_d(int beta, int n) {
  const double b = beta;
  return b * b / ((2.0 * n + b) * (2.0 * n + b + 2.0));
}

double jac_c(int beta, int n) {
  const double b = beta;
  return 2.0 * n * (n + b) /
         ((2.0 * n + b) * std::sqrt((2.0 * n + b - 1.0) * (2.0 * n + b + 1.0)));
}

double jac_p0(int beta) {
  return 1.0 / std::sqrt(std::pow(2.0, beta + 1) / (beta + 1.0));
}

// Spanning set u_n(rho) = rho^p P_n(2 rho - 1) for parity class p, where P_n
// is orthonormal Jacobi(0, 2p+1). Then sum_j w_j u_m u_n is nearly diagonal
// (the quadrature integrates almost every product exactly), so the weighted
// QR below is essentially a rescaling. The rho^p prefactor pins the
// parity-mandated vanishing at the origin; the P_n factor carries full
// polynomial degree, which keeps interpolation on these nodes stable. Strict
// even/odd interpolants (polynomials in rho^2 through the same nodes) blow
// up like 4^M, so parity beyond the prefactor is deliberately not encoded.
void jacobi_span(int p, const Vec& rho, Mat& U, Mat& dU, Mat& d2U) {
  const int M = int(rho.size());
  const int beta = 2 * p + 1;
  const Vec x = 2.0 * rho.array() - 1.0;
  Mat P = Mat::Zero(M, M), dP = Mat::Zero(M, M), d2P = Mat::Zero(M, M);
  P.col(0).setConstant(jac_p0(beta));
  for (int n = 0; n + 1 < M; ++n) {
    const double cn1 = jac_c(beta, n + 1), dn = jac_d(beta, n);
    Vec pn1 = ((x.array() - dn) * P.col(n).array()).matrix();
    Vec dpn1 =
        (P.col(n).array() + (x.array() - dn) * dP.col(n).array()).matrix();
    Vec d2pn1 =
        (2.0 * dP.col(n).array() + (x.array() - dn) * d2P.col(n).array())
            .matrix();
    if (n > 0) {
      const double cn = jac_c(beta, n);
      pn1 -= cn * P.col(n - 1);
      dpn1 -= cn * dP.col(n - 1);
      d2pn1 -= cn * d2P.col(n - 1);
    }
    P.col(n + 1) = pn1 / cn1;
    dP.col(n + 1) = dpn1 / cn1;
    d2P.col(n + 1) = d2pn1 / cn1;
  }
  // dP, d2P are d/dx; each rho-derivative brings a factor 2
  if (p == 0) {
    U = P;
    dU = 2.0 * dP;
    d2U = 4.0 * d2P;
  } else {
    // u = rho P, u' = P + 2 rho P', u'' = 4 P' + 4 rho P''
    U = rho.asDiagonal() * P;
    dU = P + (2.0 * rho).asDiagonal() * dP;
    d2U = 4.0 * dP + (4.0 * rho).asDiagonal() * d2P;
  }
}

// Values of u_n at a single radius (same recurrence as jacobi_span).
Vec jacobi_point(int p, int M, double rho) {
  const int beta = 2 * p + 1;
  const double x = 2.0 * rho - 1.0;
  Vec u(M);
  u(0) = jac_p0(beta);
  for (int n = 0; n + 1 < M; ++n)
    u(n + 1) = ((x - jac_d(beta, n)) * u(n) -
                (n > 0 ? jac_c(beta, n) * u(n - 1) : 0.0)) /
               jac_c(beta, n + 1);
  if (p == 1) u *= rho;
  return u;
}

}  // namespace

GridSpec make_grid(int K, int M) {
  if (K < 16 || K % 2 != 0) throw ConfigError("K must be even ≥ 16");
  if (M < 4) throw ConfigError("M must be at least 4");

  GridSpec g;
  g.K = K;
  g.M = M;

  Vec u, W;
  radau_jacobi01(M, u, W);
  g.rho.resize(M);
  g.w.resize(M);
  for (int j = 0; j < M; ++j) {
    g.rho(j) = 0.5 * (1.0 + u(j));
    g.w(j) = 0.25 * W(j);
  }
  g.rho(M - 1) = 1.0;  // analytically exact; snap off the eigensolver noise
  if (g.rho(0) <= 0.0) throw NumericalError("radial node at or below origin");

  // Orthonormalize the spanning set in the quadrature metric: with
  // S = diag(sqrt w), QR of S U gives phi_n values V = S^{-1} Q, analysis
  // coef = V^T diag(w) = Q^T S, and derivative matrices dV R^{-1} etc.
  // Householder QR keeps every factor well scaled at any M.
  const Vec sq = g.w.cwiseSqrt();
  const auto build = [&](int p, Mat& D1, Mat& D2, Mat& coef, Mat& rtri) {
    Mat U, dU, d2U;
    jacobi_span(p, g.rho, U, dU, d2U);
    const Mat SU = sq.asDiagonal() * U;
    Eigen::HouseholderQR<Mat> qr(SU);
    Mat Q = qr.householderQ() * Mat::Identity(M, M);
    Mat R = qr.matrixQR().topRows(M).triangularView<Eigen::Upper>();
    for (int n = 0; n < M; ++n)
      if (R(n, n) < 0.0) {
        R.row(n) = -R.row(n);
        Q.col(n) = -Q.col(n);
      }
    coef = Q.transpose() * sq.asDiagonal();
    const Mat dV = R.transpose()
                       .triangularView<Eigen::Lower>()
                       .solve(dU.transpose())
                       .transpose();
    const Mat d2V = R.transpose()
                        .triangularView<Eigen::Lower>()
                        .solve(d2U.transpose())
                        .transpose();
    D1 = dV * coef;
    D2 = d2V * coef;
    rtri = R;
  };
  build(0, g.D1_even, g.D2_even, g.coef_even, g.rtri_even);
  build(1, g.D1_odd, g.D2_odd, g.coef_odd, g.rtri_odd);

  // Vanishing-order projectors: the spanning functions rho^q P_n(2rho-1)
  // with P_n orthonormal Jacobi(0, 2q+1) have a near-identity Gram in the
  // quadrature metric, so the thin QR is well scaled for every q.
  const int qmax = std::min(K / 2, M - 1);
  g.vanish.resize(std::size_t(qmax) + 1);
  g.vanish[0] = Mat::Identity(M, M);
  for (int q = 1; q <= qmax; ++q) {
    const int cols = M - q;
    const int beta = 2 * q + 1;
    Mat U(M, cols);
    for (int j = 0; j < M; ++j) {
      const double x = 2.0 * g.rho(j) - 1.0;
      const double rq = std::pow(g.rho(j), q);
      double pm = 0.0, pn = jac_p0(beta);
      for (int n = 0; n < cols; ++n) {
        U(j, n) = rq * pn;
        const double pn1 =
            ((x - jac_d(beta, n)) * pn - jac_c(beta, n) * pm) /
            jac_c(beta, n + 1);
        pm = pn;
        pn = pn1;
      }
    }
    const Mat SU = sq.asDiagonal() * U;
    Eigen::HouseholderQR<Mat> qr(SU);
    const Mat Q = qr.householderQ() * Mat::Identity(M, cols);
    g.vanish[std::size_t(q)] = sq.cwiseInverse().asDiagonal() *
                               (Q * Q.transpose()) * sq.asDiagonal();
  }

  const int pads[3] = {1, 2, 4};
  for (int s = 0; s < 3; ++s) {
    const int n = pads[s] * K;
    g.synth[s].resize(K, n);
    g.analysis[s].resize(n, K);
    for (int m = 0; m < K; ++m) {
      const double k = double(m - K / 2);
      for (int j = 0; j < n; ++j) {
        const double th = 2.0 * std::numbers::pi * double(j) / double(n);
        g.synth[s](m, j) = std::polar(1.0, k * th);
        g.analysis[s](j, m) =
            (m == 0) ? cplx(0.0, 0.0) : std::polar(1.0 / n, -k * th);
      }
    }
  }
  return g;
}

Vec radial_eval_kernel(const GridSpec& g, int parity, double rho) {
  const Vec u = jacobi_point(parity, g.M, rho);
  const Mat& R = (parity == 0) ? g.rtri_even : g.rtri_odd;
  const Vec phi = R.transpose().triangularView<Eigen::Lower>().solve(u);
  return ((parity == 0) ? g.coef_even : g.coef_odd).transpose() * phi;
}

}  // namespace gravdisk
