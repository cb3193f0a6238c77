#pragma once
#include <array>
#include <functional>
#include <random>

#include "gravdisk/grid.hpp"

namespace gravdisk {

// Scalar field on the disk: M x K matrix of tangential Fourier coefficients
// c_k(rho_j), column m <-> mode k = m - K/2, Nyquist column zero.
using Field = CMat;
// Vector field: Cartesian components.
using VField = std::array<Field, 2>;
// Trace on the unit circle: K Fourier coefficients.
using BField = CVec;
using BVField = std::array<BField, 2>;

Field zero_field(const GridSpec& g);
VField zero_vfield(const GridSpec& g);

// Sample a smooth function on the pad-2 physical grid and project onto the
// K band. Exact for trig polynomials inside the band.
Field field_from(const GridSpec& g,
                 const std::function<double(double, double)>& f);
VField vfield_from(const GridSpec& g,
                   const std::function<double(double, double)>& f1,
                   const std::function<double(double, double)>& f2);

// Transforms between coefficients and padded physical values (M x pad*K).
CMat to_physical(const GridSpec& g, const Field& f, int pad);
Field from_physical(const GridSpec& g, const CMat& phys, int pad);

// Tangential calculus: coefficientwise multipliers.
Field dtheta(const GridSpec& g, const Field& f);
Field frac_tangential(const GridSpec& g, const Field& f, double s);

// Radial derivative (parity-aware) and pointwise 1/rho scaling.
Field drho(const GridSpec& g, const Field& f);
Field over_rho(const GridSpec& g, const Field& f);

// Cartesian reference derivatives d/dy_a via the ladder recombination
//   (d1 f)_m = (L-[c_{m-1}] + L+[c_{m+1}])/2,
//   (d2 f)_m = i(L+[c_{m+1}] - L-[c_{m-1}])/2,  L+-[c_k] = c_k' +- k c_k/rho.
// Modes leaving the band are truncated; nothing wraps.
Field dy(const GridSpec& g, const Field& f, int a);
VField grad(const GridSpec& g, const Field& f);

// Projects every mode onto its vanishing-order subspace rho^|k| * P_{<M-|k|}.
// A no-op on smooth fields; applied after differentiation and per time step
// so origin-violating rounding noise never compounds.
Field smooth_filter(const GridSpec& g, const Field& f);
VField smooth_filter(const GridSpec& g, const VField& f);

// Dealiased pointwise product (pad-2 grid) projected back to the K band.
Field multiply(const GridSpec& g, const Field& a, const Field& b);

// Radial profile weight applied pointwise (exact row scaling).
Field scale_radial(const GridSpec& g, const Field& f, const Vec& profile);

// Quadrature reductions; serial fixed order.
double integral(const GridSpec& g, const Field& f);  // real part of int f dA
double l2_norm(const GridSpec& g, const Field& f);
double l2_norm(const GridSpec& g, const VField& f);

// H^s(Omega) norm, 0 <= s <= 6. Integer s: root-sum-square of all distinct
// multi-index derivatives up to order s. Fractional s = m + sig: the order-m
// plain term is replaced by the tangential multiplier term,
//   ||f||_{m+sig}^2 = ||f||_{H^{m-1}}^2 + sum_{|a|=m} ||<dth>^sig D^a f||^2,
// which is continuous at integer s and monotone in s.
double sobolev_norm(const GridSpec& g, const Field& f, double s);
double sobolev_norm(const GridSpec& g, const VField& f, double s);

// Shared assembly used by the Omega_t variants (geometry supplies the
// Eulerian derivative) and by cutoff-weighted norms. deriv(f, a) must return
// the a-th first derivative of f in whatever frame the norm lives in.
using DerivFn = std::function<Field(const Field&, int)>;
double sobolev_norm_general(const GridSpec& g, const std::vector<Field>& comps,
                            double s, const DerivFn& deriv);
// Integer-order norm with a radial cutoff weight outside every derivative:
//   sum_{j<=s} sum_{|a|=j} ||weight * D^a f||^2.
double sobolev_norm_weighted(const GridSpec& g, const std::vector<Field>& comps,
                             int s, const Vec& weight, const DerivFn& deriv);

// Boundary traces (exact, a node sits at rho = 1).
BField boundary_trace(const GridSpec& g, const Field& f);
BVField boundary_trace(const GridSpec& g, const VField& f);
double trace_norm(const GridSpec& g, const BField& b, double s);
double trace_norm(const GridSpec& g, const BVField& b, double s);
BField frac_tangential(const GridSpec& g, const BField& b, double s);
BField dtheta_trace(const GridSpec& g, const BField& b, int order);
CVec trace_to_physical(const GridSpec& g, const BField& b, int pad);
BField trace_from_physical(const GridSpec& g, const CVec& phys, int pad);

// Reality bookkeeping.
double reality_defect(const GridSpec& g, const Field& f);
void enforce_reality(const GridSpec& g, Field& f);
// Diagnostic: |c_k(rho_min)| <= slack * rho_min^{min(|k|,6)} * max_j |c_k|.
bool origin_smoothness_ok(const GridSpec& g, const Field& f,
                          double slack = 10.0);

// Seeded random real trig-polynomial field: modes |k| <= kband with radial
// profile rho^{|k|} (a + b rho^2 + c rho^4), coefficients decaying like
// decay^{|k|}. Same recipe on any grid resolves to the same function.
Field random_trig_field(const GridSpec& g, std::mt19937_64& rng, int kband,
                        double decay = 0.5);
VField random_trig_vfield(const GridSpec& g, std::mt19937_64& rng, int kband,
                          double decay = 0.5);

}  // namespace gravdisk
