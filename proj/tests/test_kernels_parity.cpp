#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "gravdisk/dynamics.hpp"
#include "gravdisk/parallel.hpp"

using namespace gravdisk;

namespace {

template <class M>
bool same_bytes(const M& a, const M& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(),
                     sizeof(typename M::Scalar) * size_t(a.size())) == 0;
}

struct ParallelGuard {
  ~ParallelGuard() { set_parallel(true); }
};

// every pair below must match to the byte: parallel loops only partition
// index ranges, reductions stay serial and fixed-order
template <class Fn>
auto both(const Fn& fn) {
  set_parallel(false);
  auto serial = fn();
  set_parallel(true);
  auto parallel = fn();
  return std::make_pair(std::move(serial), std::move(parallel));
}

}  // namespace

TEST_CASE("transforms, products and derivatives") {
  ParallelGuard guard;
  const GridSpec g = make_grid(32, 16);
  std::mt19937_64 rng(2024);
  const Field f = random_trig_field(g, rng, 6);
  const Field h = random_trig_field(g, rng, 6);

  auto [ps, pp] = both([&] { return to_physical(g, f, 2); });
  CHECK(same_bytes(ps, pp));
  auto [bs, bp] = both([&] { return from_physical(g, to_physical(g, f, 2), 2); });
  CHECK(same_bytes(bs, bp));
  auto [d0s, d0p] = both([&] { return dy(g, f, 0); });
  CHECK(same_bytes(d0s, d0p));
  auto [d1s, d1p] = both([&] { return dy(g, f, 1); });
  CHECK(same_bytes(d1s, d1p));
  auto [ms, mp] = both([&] { return multiply(g, f, h); });
  CHECK(same_bytes(ms, mp));

  auto [ns, np] = both([&] { return l2_norm(g, f); });
  CHECK(ns == np);
  auto [ss, sp] = both([&] { return sobolev_norm(g, f, 3.5); });
  CHECK(ss == sp);
  auto [is, ip] = both([&] { return integral(g, multiply(g, f, h)); });
  CHECK(is == ip);
}

TEST_CASE("geometry, solves and a full step") {
  ParallelGuard guard;
  const DiskContext ctx(make_grid(32, 16));
  const GridSpec& g = ctx.g;
  std::mt19937_64 rng(77);

  FlowState s0 = identity_state(g);
  const VField bump = random_trig_vfield(g, rng, 4);
  const VField vel = random_trig_vfield(g, rng, 4);
  for (int i = 0; i < 2; ++i) {
    s0.x[i] += 0.02 * bump[i];
    s0.V[i] = 0.1 * vel[i];
  }

  auto [js, jp] = both([&] { return jacobian(g, s0.x); });
  CHECK(js.det_min == jp.det_min);
  CHECK(js.det_max == jp.det_max);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a) CHECK(same_bytes(js.Bc[i][a], jp.Bc[i][a]));

  auto [os, op] = both([&] { return make_operator(g, jacobian(g, s0.x)); });
  CHECK(os.kappa == op.kappa);
  CHECK(same_bytes(os.G11, op.G11));
  CHECK(same_bytes(os.G12, op.G12));
  CHECK(same_bytes(os.G22, op.G22));

  const Field rhs = field_from(g, [](double r, double th) {
    return (1.0 - r * r) * (1.0 + 0.3 * std::cos(2 * th));
  });
  const BField bc = boundary_trace(g, random_trig_field(g, rng, 3));
  const SolverParams spar;
  auto [us, up] = both([&] {
    const JacobianData jac = jacobian(g, s0.x);
    const EllipticOperator eop = make_operator(g, jac);
    return solve_dirichlet(ctx, eop, rhs, bc, spar);
  });
  CHECK(same_bytes(us, up));

  auto [qs, qp] = both([&] {
    const JacobianData jac = jacobian(g, s0.x);
    return potential_boundary_values(g, s0.x, jac);
  });
  CHECK(same_bytes(qs, qp));

  StepParams stp;
  stp.dt = 1e-3;
  auto [fs, fp] = both([&] {
    FlowState s = s0;
    KahanCarry carry = make_carry(g);
    rk4_step(ctx, s, stp, carry);
    return s;
  });
  CHECK(fs.t == fp.t);
  for (int i = 0; i < 2; ++i) {
    CHECK(same_bytes(fs.x[i], fp.x[i]));
    CHECK(same_bytes(fs.V[i], fp.V[i]));
  }
}
