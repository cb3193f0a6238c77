#pragma once
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace gravdisk {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

// Collocation grid for the unit disk: M Gauss-Radau radial nodes in (0,1]
// (quadrature weight rho, endpoint rho=1 included, origin excluded) times K
// tangential Fourier modes k in [-K/2, K/2-1].
//
// Coefficient arrays are M x K; column m holds mode k = m - K/2 sampled at
// the radial nodes. The k = -K/2 column is kept identically zero so every
// represented real field has a conjugate-symmetric spectrum.
struct GridSpec {
  int K = 0;
  int M = 0;

  Vec rho;  // ascending, rho(M-1) = 1 exactly
  Vec w;    // weights for int_0^1 f(rho) rho drho; sum = 1/2

  // Parity-respecting differentiation in rho. The coefficient c_k behaves
  // like rho^|k| * (even polynomial) near the origin; each parity class
  // interpolates in the span rho^p * (polynomials of degree < M), which
  // contains every smooth profile of that parity and stays stable at any M.
  Mat D1_even, D1_odd;
  Mat D2_even, D2_odd;

  // Discrete orthonormal radial basis per parity p: phi_n = rho^p b_n(rho)
  // with sum_j w_j phi_m phi_n = delta_mn, built by weighted QR over shifted
  // Jacobi polynomials. coef_* maps nodal profile values to basis
  // coefficients; rtri_* is the upper-triangular change of basis from the
  // Jacobi spanning set, kept for off-node evaluation.
  Mat coef_even, coef_odd;
  Mat rtri_even, rtri_odd;

  // L2(w)-orthogonal projectors onto rho^q * (polynomials of degree < M-q),
  // the vanishing-order structure of a smooth mode-q radial profile. Exact
  // on smooth fields; strips the origin noise that repeated differentiation
  // would otherwise amplify through the k c/rho terms.
  std::vector<Mat> vanish;

  const Mat& vanishing_projector(int abs_k) const {
    const std::size_t q = std::size_t(abs_k);
    return vanish[q < vanish.size() ? q : vanish.size() - 1];
  }

  // Dense DFT synthesis (K x n) and analysis (n x K) matrices for the padded
  // physical grids n = pad*K, pad in {1,2,4}. Analysis truncates to the K
  // band and zeroes the Nyquist column.
  CMat synth[3];
  CMat analysis[3];

  int mode(int m) const { return m - K / 2; }
  int index(int k) const { return k + K / 2; }
  int ntheta(int pad) const { return pad * K; }
  double theta(int pad, int j) const;

  const Mat& d1(int abs_k) const { return (abs_k % 2 == 0) ? D1_even : D1_odd; }
  const Mat& d2(int abs_k) const { return (abs_k % 2 == 0) ? D2_even : D2_odd; }
  const Mat& rcoef(int abs_k) const {
    return (abs_k % 2 == 0) ? coef_even : coef_odd;
  }

  static int pad_slot(int pad);  // 1,2,4 -> 0,1,2
};

GridSpec make_grid(int K, int M);

// Weights k with profile(rho) = sum_j k(j) * profile(rho_j) for any radial
// profile of the given parity in the representable span.
Vec radial_eval_kernel(const GridSpec& g, int parity, double rho);

}  // namespace gravdisk
