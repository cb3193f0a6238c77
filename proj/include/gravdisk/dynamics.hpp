#pragma once
#include <string>

#include "gravdisk/energies.hpp"
#include "gravdisk/io.hpp"
#include "gravdisk/potential.hpp"

namespace gravdisk {

struct StepParams {
  double dt = 1e-3;
  int gravity_sign = -1;
  bool project = true;
  double cfl_c = 0.5;
  SolverParams solver{};
};

// Largest admissible dt for the spectral boundary wave speed.
double cfl_limit(int K, double cfl_c);

// Material acceleration a = -(grad p + grad phi) o x.
VField acceleration(const DiskContext& ctx, const FlowState& s,
                    int gravity_sign, const SolverParams& sp);

// Leray correction: grad_x psi o x with a Neumann solve built from the
// divergence of V; subtracting it from V removes the Eulerian divergence
// while keeping the normal boundary motion (up to a uniform-flux shift that
// restores compatibility).
VField projection_correction(const DiskContext& ctx, const FlowState& s,
                             const SolverParams& sp,
                             KrylovStats* stats = nullptr);

// Compensated accumulators for the long-time update x += dx, V += dV.
struct KahanCarry {
  VField x, V;
};
KahanCarry make_carry(const GridSpec& g);
void kahan_add(Field& sum, Field& carry, const Field& delta);

// One classical RK4 step; projection (if enabled) applied after the full
// step, never inside stages. Throws ConfigError when dt violates the CFL
// bound cfl_c (2 pi / K)^{3/2}.
void rk4_step(const DiskContext& ctx, FlowState& s, const StepParams& p,
              KahanCarry& carry);

// Volume-preserving mode-k perturbation: the time-amplitude flow of the
// Hamiltonian field J grad Re((y1 + i y2)^k) applied to the rest or rigidly
// rotating disk.
FlowState perturbed_state(const GridSpec& g, int mode, double amplitude,
                          const std::string& base, double omega);
FlowState initial_state(const GridSpec& g, const Config& cfg);

// Full run: records at t = 0 and every output_interval, floor(t_end /
// output_interval) + 1 rows, leftover tail ignored. Numerical aborts are
// reported in the record status, not thrown.
RunRecord simulate(const DiskContext& ctx, const Config& cfg);
RunRecord simulate(const Config& cfg);

}  // namespace gravdisk
