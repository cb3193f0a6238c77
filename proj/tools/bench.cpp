#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "gravdisk/dynamics.hpp"
#include "gravdisk/parallel.hpp"

using namespace gravdisk;
using clk = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < 3; ++r) {
    auto t0 = clk::now();
    for (int i = 0; i < reps; ++i) fn();
    auto t1 = clk::now();
    best = std::min(
        best, std::chrono::duration<double, std::milli>(t1 - t0).count() /
                  reps);
  }
  return best;
}

void row(const char* name, const std::function<void()>& fn, int reps) {
  set_parallel(false);
  double ser = time_ms(fn, reps);
  set_parallel(true);
  double par = time_ms(fn, reps);
  std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, ser, par,
              ser / par);
}

}  // namespace

int main() {
  const int K = 64, M = 96;
  DiskContext ctx(make_grid(K, M));
  const GridSpec& g = ctx.g;
  std::printf("grid K = %d, M = %d, threads = %d\n", K, M, max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  std::mt19937_64 rng(7);
  Field f = random_trig_field(g, rng, 12);
  VField v = random_trig_vfield(g, rng, 12);
  FlowState s = perturbed_state(g, 3, 5e-3, "rotation", 0.5);
  JacobianData jac = jacobian(g, s.x);
  EllipticOperator op = make_operator(g, jac);
  SolverParams sp{1e-10, 2000, 50};

  row("transform round trip", [&] { from_physical(g, to_physical(g, f, 2), 2); },
      20);
  row("cartesian gradient", [&] { grad(g, f); }, 20);
  row("jacobian + operator",
      [&] { make_operator(g, jacobian(g, s.x)); }, 10);
  row("operator apply", [&] { apply_operator(g, op, f); }, 20);
  Field rhs = apply_operator(g, op, f);
  row("dirichlet solve",
      [&] { solve_dirichlet(ctx, op, rhs, BField::Zero(g.K), sp); }, 3);
  row("potential boundary",
      [&] { potential_boundary_values(g, s.x, jac); }, 3);
  row("sobolev norm 5", [&] { sobolev_norm(g, v, 5.0); }, 5);
  StepParams p;
  p.dt = 1e-3;
  p.gravity_sign = -1;
  row("rk4 step",
      [&] {
        FlowState tmp = s;
        KahanCarry carry = make_carry(g);
        rk4_step(ctx, tmp, p, carry);
      },
      1);
  return 0;
}
