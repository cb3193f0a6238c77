#pragma once
#include <vector>

#include <Eigen/LU>

#include "gravdisk/geometry.hpp"

namespace gravdisk {

struct SolverParams {
  double tol = 1e-10;
  int max_iter = 2000;
  int restart = 50;
};

struct KrylovStats {
  int iterations = 0;
  double residual = 0.0;  // relative true residual at acceptance
};

// Pullback coefficient G^{ab} = A^a_i A^b_i on the pad-2 physical grid.
// Pointwise SPD with eigenvalues in [1/kappa, kappa]; violation throws.
struct EllipticOperator {
  Mat G11, G12, G22;
  double kappa = 1.0;
};

EllipticOperator make_operator(const GridSpec& g, const JacobianData& jac);

// L u = d_a (G^{ab} d_b u) in reference coordinates (equals Laplace_x u o x).
Field apply_operator(const GridSpec& g, const EllipticOperator& op,
                     const Field& u);

// Per-mode constant-coefficient (flat Laplacian) solver used as the GMRES
// preconditioner. One real LU per |k|, shared by the conjugate pair.
class ModePrecond {
 public:
  enum class BC { dirichlet, neumann };
  ModePrecond(const GridSpec& g, BC bc);
  // rhs rows 0..M-2: residual values; row M-1: boundary datum (Dirichlet
  // value, or conormal flux for Neumann with the k=0 column a gauge pin).
  Field solve(const GridSpec& g, const Field& rhs) const;

 private:
  std::vector<Eigen::PartialPivLU<Mat>> lu_;
};

// Grid plus both preconditioner caches; built once per run, map independent.
struct DiskContext {
  GridSpec g;
  ModePrecond dirichlet;
  ModePrecond neumann;
  explicit DiskContext(GridSpec gg)
      : g(std::move(gg)),
        dirichlet(g, ModePrecond::BC::dirichlet),
        neumann(g, ModePrecond::BC::neumann) {}
};

// L u = rhs in the interior, trace u = bc. Harmonic lift of bc plus GMRES on
// the zero-trace remainder.
Field solve_dirichlet(const DiskContext& ctx, const EllipticOperator& op,
                      const Field& rhs, const BField& bc,
                      const SolverParams& p, KrylovStats* stats = nullptr);

// L psi = rhs with conormal data G^{ab} n~_a d_b psi = flux at rho = 1
// (physical pad-2 samples); k = 0 gauged by pinning the boundary mean.
Field solve_neumann(const DiskContext& ctx, const EllipticOperator& op,
                    const Field& rhs, const Vec& flux_phys2,
                    const SolverParams& p, KrylovStats* stats = nullptr);

struct PressureResult {
  Field p;
  VField grad_p;
  double c0 = 0.0;  // min over the boundary of -grad p . N
};

// Dirichlet pressure problem Laplace_x p = -tr((grad v)^2) + sigma, p = 0 on
// the moving boundary, along with the Taylor sign quantity.
PressureResult pressure_solve(const DiskContext& ctx, const FlowState& s,
                              int gravity_sign, const SolverParams& p,
                              const JacobianData& jac,
                              const BoundaryGeometry& geom);

double taylor_sign(const GridSpec& g, const VField& grad_p,
                   const BoundaryGeometry& geom);

}  // namespace gravdisk
