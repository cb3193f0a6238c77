#include "gravdisk/field.hpp"

#include <cmath>
#include <numbers>

#include "gravdisk/errors.hpp"
#include "gravdisk/parallel.hpp"

namespace gravdisk {

namespace {

CMat real_times_complex(const Mat& D, const CMat& F) {
  CMat R(D.rows(), F.cols());
  R.real() = D * F.real();
  R.imag() = D * F.imag();
  return R;
}

}  // namespace

Field zero_field(const GridSpec& g) { return CMat::Zero(g.M, g.K); }
VField zero_vfield(const GridSpec& g) { return {zero_field(g), zero_field(g)}; }

CMat to_physical(const GridSpec& g, const Field& f, int pad) {
  return f * g.synth[GridSpec::pad_slot(pad)];
}

Field from_physical(const GridSpec& g, const CMat& phys, int pad) {
  return phys * g.analysis[GridSpec::pad_slot(pad)];
}

Field field_from(const GridSpec& g,
                 const std::function<double(double, double)>& f) {
  const int n = g.ntheta(2);
  CMat phys(g.M, n);
  par_for(std::size_t(g.M), [&](std::size_t j) {
    for (int l = 0; l < n; ++l)
      phys(int(j), l) = f(g.rho(int(j)), g.theta(2, l));
  });
  Field c = from_physical(g, phys, 2);
  enforce_reality(g, c);
  return c;
}

VField vfield_from(const GridSpec& g,
                   const std::function<double(double, double)>& f1,
                   const std::function<double(double, double)>& f2) {
  return {field_from(g, f1), field_from(g, f2)};
}

Field dtheta(const GridSpec& g, const Field& f) {
  Field out(g.M, g.K);
  for (int m = 0; m < g.K; ++m)
    out.col(m) = cplx(0.0, double(g.mode(m))) * f.col(m);
  return out;
}

Field frac_tangential(const GridSpec& g, const Field& f, double s) {
  Field out(g.M, g.K);
  for (int m = 0; m < g.K; ++m) {
    const double k = double(g.mode(m));
    out.col(m) = std::pow(1.0 + k * k, 0.5 * s) * f.col(m);
  }
  return out;
}

Field drho(const GridSpec& g, const Field& f) {
  const CMat ye = real_times_complex(g.D1_even, f);
  const CMat yo = real_times_complex(g.D1_odd, f);
  Field out(g.M, g.K);
  for (int m = 0; m < g.K; ++m)
    out.col(m) = (std::abs(g.mode(m)) % 2 == 0) ? ye.col(m) : yo.col(m);
  return out;
}

Field over_rho(const GridSpec& g, const Field& f) {
  Field out = f;
  for (int j = 0; j < g.M; ++j) out.row(j) /= g.rho(j);
  return out;
}

Field dy(const GridSpec& g, const Field& f, int a) {
  const Field r = drho(g, f);
  const Field q = over_rho(g, f);
  Field tm(g.M, g.K), tp(g.M, g.K);
  for (int m = 0; m < g.K; ++m) {
    const double k = double(g.mode(m));
    tm.col(m) = r.col(m) - k * q.col(m);
    tp.col(m) = r.col(m) + k * q.col(m);
  }
  Field out = zero_field(g);
  for (int m = 1; m < g.K; ++m) {
    CVec acc = CVec::Zero(g.M);
    if (m - 1 >= 1) {
      if (a == 0)
        acc += 0.5 * tm.col(m - 1);
      else
        acc -= cplx(0.0, 0.5) * tm.col(m - 1);
    }
    if (m + 1 <= g.K - 1) {
      if (a == 0)
        acc += 0.5 * tp.col(m + 1);
      else
        acc += cplx(0.0, 0.5) * tp.col(m + 1);
    }
    out.col(m) = acc;
  }
  return out;
}

VField grad(const GridSpec& g, const Field& f) {
  return {dy(g, f, 0), dy(g, f, 1)};
}

Field smooth_filter(const GridSpec& g, const Field& f) {
  Field out = zero_field(g);
  CVec c(g.M);
  for (int m = 1; m < g.K; ++m) {
    const Mat& P = g.vanishing_projector(std::abs(g.mode(m)));
    c.real() = P * f.col(m).real();
    c.imag() = P * f.col(m).imag();
    out.col(m) = c;
  }
  return out;
}

VField smooth_filter(const GridSpec& g, const VField& f) {
  return {smooth_filter(g, f[0]), smooth_filter(g, f[1])};
}

Field multiply(const GridSpec& g, const Field& a, const Field& b) {
  const CMat pa = to_physical(g, a, 2);
  const CMat pb = to_physical(g, b, 2);
  return from_physical(g, pa.cwiseProduct(pb), 2);
}

Field scale_radial(const GridSpec& g, const Field& f, const Vec& profile) {
  Field out = f;
  for (int j = 0; j < g.M; ++j) out.row(j) *= profile(j);
  return out;
}

double integral(const GridSpec& g, const Field& f) {
  double s = 0.0;
  const int m0 = g.index(0);
  for (int j = 0; j < g.M; ++j) s += g.w(j) * f(j, m0).real();
  return 2.0 * std::numbers::pi * s;
}

double l2_norm(const GridSpec& g, const Field& f) {
  double s = 0.0;
  for (int m = 0; m < g.K; ++m)
    for (int j = 0; j < g.M; ++j) s += g.w(j) * std::norm(f(j, m));
  return std::sqrt(2.0 * std::numbers::pi * s);
}

double l2_norm(const GridSpec& g, const VField& f) {
  const double a = l2_norm(g, f[0]), b = l2_norm(g, f[1]);
  return std::sqrt(a * a + b * b);
}

namespace {

double sq(double x) { return x * x; }

// Distinct multi-index derivative table walker shared by every Sobolev norm.
// level j entry l holds d1^{j-l} d2^l f.
double sobolev_sq_one(const GridSpec& g, const Field& f, double s,
                      const DerivFn& deriv, const Vec* weight) {
  const int m = int(std::floor(s + 1e-12));
  double sig = s - m;
  if (sig < 1e-12) sig = 0.0;

  double acc = 0.0;
  std::vector<Field> cur{f};
  for (int j = 0; j <= m; ++j) {
    if (j > 0) {
      std::vector<Field> nxt(j + 1);
      for (int l = 0; l < j; ++l) nxt[l] = smooth_filter(g, deriv(cur[l], 0));
      nxt[j] = smooth_filter(g, deriv(cur[j - 1], 1));
      cur = std::move(nxt);
    }
    const bool top = (j == m);
    if (top && sig > 0.0) {
      for (const Field& d : cur) {
        Field t = frac_tangential(g, d, sig);
        if (weight) t = scale_radial(g, t, *weight);
        acc += sq(l2_norm(g, t));
      }
    } else if (!top || sig == 0.0) {
      for (const Field& d : cur) {
        if (weight) {
          acc += sq(l2_norm(g, scale_radial(g, d, *weight)));
        } else {
          acc += sq(l2_norm(g, d));
        }
      }
    }
  }
  return acc;
}

}  // namespace

double sobolev_norm_general(const GridSpec& g, const std::vector<Field>& comps,
                            double s, const DerivFn& deriv) {
  if (s < 0.0 || s > 6.0)
    throw ConfigError("sobolev_norm: s must be in [0, 6]");
  double acc = 0.0;
  for (const Field& f : comps) acc += sobolev_sq_one(g, f, s, deriv, nullptr);
  return std::sqrt(acc);
}

double sobolev_norm_weighted(const GridSpec& g, const std::vector<Field>& comps,
                             int s, const Vec& weight, const DerivFn& deriv) {
  if (s < 0 || s > 6)
    throw ConfigError("sobolev_norm: s must be in [0, 6]");
  double acc = 0.0;
  for (const Field& f : comps)
    acc += sobolev_sq_one(g, f, double(s), deriv, &weight);
  return std::sqrt(acc);
}

double sobolev_norm(const GridSpec& g, const Field& f, double s) {
  const DerivFn d = [&g](const Field& u, int a) { return dy(g, u, a); };
  return sobolev_norm_general(g, {f}, s, d);
}

double sobolev_norm(const GridSpec& g, const VField& f, double s) {
  const DerivFn d = [&g](const Field& u, int a) { return dy(g, u, a); };
  return sobolev_norm_general(g, {f[0], f[1]}, s, d);
}

BField boundary_trace(const GridSpec& g, const Field& f) {
  return f.row(g.M - 1).transpose();
}

BVField boundary_trace(const GridSpec& g, const VField& f) {
  return {boundary_trace(g, f[0]), boundary_trace(g, f[1])};
}

double trace_norm(const GridSpec& g, const BField& b, double s) {
  double acc = 0.0;
  for (int m = 0; m < g.K; ++m) {
    const double k = double(g.mode(m));
    acc += std::pow(1.0 + k * k, s) * std::norm(b(m));
  }
  return std::sqrt(2.0 * std::numbers::pi * acc);
}

double trace_norm(const GridSpec& g, const BVField& b, double s) {
  const double a0 = trace_norm(g, b[0], s), a1 = trace_norm(g, b[1], s);
  return std::sqrt(a0 * a0 + a1 * a1);
}

BField frac_tangential(const GridSpec& g, const BField& b, double s) {
  BField out(g.K);
  for (int m = 0; m < g.K; ++m) {
    const double k = double(g.mode(m));
    out(m) = std::pow(1.0 + k * k, 0.5 * s) * b(m);
  }
  return out;
}

BField dtheta_trace(const GridSpec& g, const BField& b, int order) {
  BField out(g.K);
  for (int m = 0; m < g.K; ++m) {
    const cplx ik(0.0, double(g.mode(m)));
    out(m) = std::pow(ik, order) * b(m);
  }
  return out;
}

CVec trace_to_physical(const GridSpec& g, const BField& b, int pad) {
  return g.synth[GridSpec::pad_slot(pad)].transpose() * b;
}

BField trace_from_physical(const GridSpec& g, const CVec& phys, int pad) {
  return g.analysis[GridSpec::pad_slot(pad)].transpose() * phys;
}

double reality_defect(const GridSpec& g, const Field& f) {
  double d = f.col(0).cwiseAbs().maxCoeff();  // Nyquist must stay zero
  for (int k = 0; k <= g.K / 2 - 1; ++k) {
    const auto cp = f.col(g.index(k));
    const auto cm = f.col(g.index(-k));
    for (int j = 0; j < g.M; ++j)
      d = std::max(d, std::abs(cm(j) - std::conj(cp(j))));
  }
  return d;
}

void enforce_reality(const GridSpec& g, Field& f) {
  f.col(0).setZero();
  const int m0 = g.index(0);
  for (int j = 0; j < g.M; ++j) f(j, m0) = f(j, m0).real();
  for (int k = 1; k <= g.K / 2 - 1; ++k) {
    for (int j = 0; j < g.M; ++j) {
      const cplx avg = 0.5 * (f(j, g.index(k)) + std::conj(f(j, g.index(-k))));
      f(j, g.index(k)) = avg;
      f(j, g.index(-k)) = std::conj(avg);
    }
  }
}

bool origin_smoothness_ok(const GridSpec& g, const Field& f, double slack) {
  const double global = f.cwiseAbs().maxCoeff();
  if (global <= 0.0) return true;
  for (int m = 0; m < g.K; ++m) {
    const double colmax = f.col(m).cwiseAbs().maxCoeff();
    if (colmax <= 1e-14 * global) continue;
    const int e = std::min(std::abs(g.mode(m)), 6);
    const double cap = slack * std::pow(g.rho(0), e) * colmax;
    if (std::abs(f(0, m)) > cap) return false;
  }
  return true;
}

Field random_trig_field(const GridSpec& g, std::mt19937_64& rng, int kband,
                        double decay) {
  std::normal_distribution<double> N(0.0, 1.0);
  Field f = zero_field(g);
  for (int k = 0; k <= kband; ++k) {
    cplx a, b, c;
    if (k == 0) {
      a = N(rng);
      b = N(rng);
      c = N(rng);
    } else {
      const double ar = N(rng), ai = N(rng), br = N(rng), bi = N(rng),
                   cr = N(rng), ci = N(rng);
      a = cplx(ar, ai);
      b = cplx(br, bi);
      c = cplx(cr, ci);
    }
    const double amp = std::pow(decay, k);
    for (int j = 0; j < g.M; ++j) {
      const double r = g.rho(j), r2 = r * r;
      const cplx prof = amp * std::pow(r, k) * (a + b * r2 + c * r2 * r2);
      f(j, g.index(k)) += prof;
      if (k > 0) f(j, g.index(-k)) += std::conj(prof);
    }
  }
  return f;
}

VField random_trig_vfield(const GridSpec& g, std::mt19937_64& rng, int kband,
                          double decay) {
  Field a = random_trig_field(g, rng, kband, decay);
  Field b = random_trig_field(g, rng, kband, decay);
  return {std::move(a), std::move(b)};
}

}  // namespace gravdisk
