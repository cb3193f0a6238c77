#include "gravdisk/cutoff.hpp"

#include "gravdisk/errors.hpp"

namespace gravdisk {

double quintic_blend(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return ((6.0 * t - 15.0) * t + 10.0) * t * t * t;
}

double eta_profile(double d0, int i, double rho) {
  const double lo = 1.0 - d0 / i;         // eta = 1 below here
  const double hi = 1.0 - d0 / (2.0 * i); // eta = 0 above here
  if (rho <= lo) return 1.0;
  if (rho >= hi) return 0.0;
  return 1.0 - quintic_blend((rho - lo) / (hi - lo));
}

CutoffFamily make_cutoffs(double d0, int i, const GridSpec& g) {
  if (i < 1) throw ConfigError("cutoff index must be a positive integer");
  if (!(d0 > 0.0)) throw ConfigError("cutoff width d0 must be positive");
  if (1.0 - d0 / i <= 0.0)
    throw ConfigError("cutoff width d0 too large for index i: transition leaves the disk");
  CutoffFamily f;
  f.d0 = d0;
  f.i = i;
  f.eta.resize(g.M);
  f.zeta.resize(g.M);
  for (int j = 0; j < g.M; ++j) {
    f.eta(j) = eta_profile(d0, i, g.rho(j));
    f.zeta(j) = 1.0 - f.eta(j);
  }
  return f;
}

}  // namespace gravdisk
