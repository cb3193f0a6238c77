#pragma once
#include <utility>

#include "gravdisk/field.hpp"

namespace gravdisk {

// Lagrangian state: flow map x and material velocity V, both as spectral
// fields over the reference disk.
struct FlowState {
  double t = 0.0;
  VField x, V;
};

FlowState identity_state(const GridSpec& g);
// x = R(omega t) y, V = omega J x (rigid rotation of the disk).
FlowState rotation_state(const GridSpec& g, double omega, double t = 0.0);

// Pointwise Jacobian data of the map x on the pad-2 physical grid.
// B[i][a] = d x^i / d y^a, A[a][i] = (B^{-1})^a_i; detB must stay positive.
struct JacobianData {
  Mat B[2][2];
  Mat A[2][2];
  Mat detB;
  Field Bc[2][2];   // spectral copies of B entries (for off-node evaluation)
  Field detB_coef;
  double det_min = 0.0, det_max = 0.0;
};

JacobianData jacobian(const GridSpec& g, const VField& x);

// Gradient in flow coordinates: (grad_x f) o x, component i = A^a_i d_a f.
VField eulerian_gradient(const GridSpec& g, const Field& f, const JacobianData& jac);

// Full velocity gradient, pointwise on the pad-2 physical grid:
// d[i][j] = (d v^i / d x^j) o x.
struct GradPhys {
  Mat d[2][2];
};
GradPhys eulerian_grad_matrix(const GridSpec& g, const VField& v, const JacobianData& jac);

// Advective-form divergence and curl of v along the map.
std::pair<Field, Field> div_curl(const GridSpec& g, const VField& v, const JacobianData& jac);

// Divergence-form d_a (A^a_i v^i); equals div_curl().first up to commuting
// derivatives past the cofactor identity, but this is the discrete form the
// elliptic operator and the projection use.
Field div_form(const GridSpec& g, const VField& v, const JacobianData& jac);

// Boundary frame of the moving domain, sampled on the pad-4 angular grid.
struct BoundaryGeometry {
  BVField b;                     // trace of x
  Vec t1, t2, n1, n2, dens;      // unit tangent, outward normal, |d_theta x|
  double dens_min = 0.0, dens_max = 0.0;
};

BoundaryGeometry boundary_geometry(const GridSpec& g, const VField& x);

// Integral over the moving boundary with respect to arclength dS.
double surface_integral(const GridSpec& g, const Vec& g_phys4, const BoundaryGeometry& geom);
double surface_integral(const GridSpec& g, const BField& gc, const BoundaryGeometry& geom);

// Winding-number screen for boundary self-intersection; throws NumericalError.
void check_simple_curve(const GridSpec& g, const VField& x);

// Sobolev norms over the moving domain (Eulerian derivatives, reference
// measure equals image measure since detB = 1 along the flow).
double sobolev_norm_t(const GridSpec& g, const Field& f, double s, const JacobianData& jac);
double sobolev_norm_t(const GridSpec& g, const VField& f, double s, const JacobianData& jac);
double sobolev_norm_t_weighted(const GridSpec& g, const std::vector<Field>& comps, int s,
                               const Vec& weight, const JacobianData& jac);

// Point evaluation of a spectral field at an arbitrary reference point
// (rho, theta), rho in (0, 1]; barycentric in radius, exact in angle.
cplx eval_field(const GridSpec& g, const Field& f, double rho, double theta);

}  // namespace gravdisk
