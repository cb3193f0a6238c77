#pragma once
#include <vector>

#include "gravdisk/cutoff.hpp"
#include "gravdisk/elliptic.hpp"

namespace gravdisk {

struct EnergyReport {
  double t = 0.0;
  double E = 0.0;   // running sup of ||v||_5 + ||x||_5.5 + ||curl v||_4.5
  double E1 = 0.0;
  double E2 = 0.0;
  double E3 = 0.0;
  double E4 = 0.0;
  double c0 = 0.0;
  double norm_V_5 = 0.0;
  double norm_x_5p5 = 0.0;
  double norm_curl_4p5 = 0.0;
  double x_bound = 0.0;  // NaN when the Taylor sign fails
};

// E1 = ||zeta dtheta^5 v||^2 + ||eta v||^2_{H^5(Omega_t), weighted}, the
// cutoff sitting outside every derivative in the eta piece.
double energy_E1(const GridSpec& g, const FlowState& s, const JacobianData& jac,
                 const CutoffFamily& cut);
// E2 = ||curl v||_{H^4.5(Omega_t)} (not squared).
double energy_E2(const GridSpec& g, const FlowState& s, const JacobianData& jac);
// E3 = oint (-grad p . N) [(dtheta^5 x) . N]^2 dS.
double energy_E3(const GridSpec& g, const FlowState& s, const VField& grad_p,
                 const BoundaryGeometry& geom);
// E4 = sum_a ||div w_a||^2 + ||curl w_a||^2 in H^{3.5}(Omega_t), where w_a
// is the pushforward of d_a (columns of the Jacobian).
double energy_E4(const GridSpec& g, const FlowState& s, const JacobianData& jac);

// Boundary trace quantities feeding the reconstruction bound.
struct TraceData {
  double theta_deriv_sq_dtheta[5] = {0, 0, 0, 0, 0};  // oint |dtheta^j x|^2 dtheta
  double top_tangential_sq_dS = 0.0;  // oint ((dtheta^5 x) . T)^2 dS
  double dens_min = 0.0, dens_max = 0.0;
  double norm_x_H5_sq = 0.0;
};
TraceData trace_data(const GridSpec& g, const FlowState& s,
                     const JacobianData& jac, const BoundaryGeometry& geom);

// Squared-scale upper bound for || <dtheta>^5 x . N ||^2_{L^2(dS)} assembled
// from E3, E4 and the trace data; every step of the chain holds termwise in
// the shared boundary quadrature. Throws when c0 <= 0.
double reconstruct_x_bound(double E3, double E4, double c0,
                           const TraceData& td);

// One full energy evaluation at a state (pressure solve included).
// running_sup carries the sup defining E across calls; pass 0 to start.
EnergyReport evaluate_energies(const DiskContext& ctx, const FlowState& s,
                               int gravity_sign, const SolverParams& sp,
                               const CutoffFamily& cut, double* running_sup);

struct RateRow {
  double t = 0.0;
  double rate[4] = {0, 0, 0, 0};  // centered dE_i/dt, i = 1..4
  bool flagged = false;
};
// Centered-difference rates of E1..E4 with threshold a + b E + c E^2.
std::vector<RateRow> energy_rate_report(const std::vector<EnergyReport>& series,
                                        double a, double b, double c);

}  // namespace gravdisk
