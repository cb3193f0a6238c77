#pragma once
#include <string>
#include <vector>

#include "gravdisk/cutoff.hpp"
#include "gravdisk/elliptic.hpp"

namespace gravdisk {

struct InequalityReport {
  std::string name;
  std::string sample;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;  // lhs / rhs where meaningful
  bool pass = false;
};

// Pointwise trace-free decomposition along the map: with M = grad_x alpha,
//   M = S + (div/2) I + (curl/2) J,   S = [[s1, s2], [s2, -s1]],
//   s1 = (q1 d1 - q2 d2)/|d|^2, s2 = (q1 d2 + q2 d1)/|d|^2,
//   q = dtheta alpha - (div/2) d - (curl/2) J d,  d = dtheta x.
// lhs reports the zeta-weighted sup reconstruction error (exact algebra);
// constant reports the sup ratio |M| / (|div| + |curl| + |dtheta alpha|).
InequalityReport pointwise_decomposition_check(const GridSpec& g,
                                               const VField& alpha,
                                               const FlowState& s,
                                               const Vec& zeta);

// || zeta alpha ||_{H^s} against L^2 + graded div/curl + tangential tower.
InequalityReport graded_estimate_check(const GridSpec& g, const VField& alpha,
                                       const FlowState& s, int sdeg,
                                       const CutoffFamily& cut);

// || alpha ||_{H^s(Omega_t)} against div, curl, and one boundary trace term
// (normal or tangential component carrying s - 1/2 tangential derivatives).
InequalityReport full_hodge_check(const GridSpec& g, const VField& alpha,
                                  const FlowState& s, int sdeg,
                                  bool normal_side);

// | oint (alpha.N)^2 - (alpha.T)^2 dS | against
// ||x||_{H^5} (||alpha||_dS^2 + ||alpha||_dS (||div|| + ||curl||)).
InequalityReport normal_tangential_trade_check(const GridSpec& g,
                                               const VField& alpha,
                                               const FlowState& s);

// || <dth>^{1/2}(fg) - (<dth>^{1/2} f) g || <= c ||f|| ||<dth>^{1/2+a} g||.
InequalityReport product_commutator_check(const GridSpec& g, const Field& f,
                                          const Field& gfun, double a);

// sup_{|k|,|l| <= kmax} |<k+l>^{1/2} - <k>^{1/2}| / <l>^{1/2} <= 1.
InequalityReport frequency_lemma_check(int kmax);

// |<f, dtheta h>| <= ||<dth>^{1/2} f|| ||<dth>^{1/2} h||.
InequalityReport half_ibp_check(const GridSpec& g, const Field& f,
                                const Field& h);

struct VerifyOptions {
  int kmax = 2000;
  int samples = 100;
  unsigned long seed = 12345;
};

// Full suite on the built-in grid pair (24, 36) and (32, 48); constants of
// the graded/full estimates must agree between the grids within 20%.
std::vector<InequalityReport> verify_lemmas(const VerifyOptions& opt);

}  // namespace gravdisk
