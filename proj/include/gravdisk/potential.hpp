#pragma once
#include <functional>
#include <vector>

#include "gravdisk/elliptic.hpp"

namespace gravdisk {

// Fundamental solution of the plane Laplacian: Phi(r) = ln(r) / (2 pi).
double fundamental_solution(double r);

// Boundary values (trace coefficients) of the single-layer volume potential
//   phi(x_b) = -int_Omega Phi(|x_b - x(y)|) weight(|y|) dy,
// the attractive-unit-density convention: Laplace phi = -weight along the
// map. Pad-4 area quadrature with a frozen-coefficient model subtracted and
// re-added in closed form; exact for isometric maps. Empty weight means 1.
BField potential_boundary_values(const GridSpec& g, const VField& x,
                                 const JacobianData& jac,
                                 const std::function<double(double)>& weight = {});

// Same integral at the image of an arbitrary interior reference point.
double potential_at_reference_point(const GridSpec& g, const VField& x,
                                    const JacobianData& jac, double rho,
                                    double theta,
                                    const std::function<double(double)>& weight = {});

struct PotentialResult {
  Field phi;
  VField grad_phi;
  BField boundary;
};

// Self-gravity potential: Laplace_x phi = -sigma in the image domain with
// the quadrature boundary data, sigma in {-1, 0, +1} (0 = gravity off).
PotentialResult solve_potential(const DiskContext& ctx,
                                const EllipticOperator& op, const VField& x,
                                const JacobianData& jac, int sigma,
                                const SolverParams& p);

// Radial mollified indicator: 1 for r <= 1 - 1/m, 0 for r >= 1 + 1/m,
// quintic blend between; chi(1) = 1/2, monotone in r.
double chi_profile(int m, double r);

struct MollifierRow {
  int m = 0;
  double grad_err = 0.0;     // || grad phi_m - grad phi ||_{L^2(R^2)}
  double chi_dist_sq = 0.0;  // || chi_m - chi_Omega ||_{L^2(R^2)}^2
  double ratio = 0.0;        // grad_err / chi_dist_sq
};

// Radial route via the Gauss law; every entry computed by quadrature.
std::vector<MollifierRow> mollifier_convergence_report(const std::vector<int>& ms);

}  // namespace gravdisk
