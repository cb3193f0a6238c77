#pragma once
#include "gravdisk/grid.hpp"

namespace gravdisk {

// C2 quintic ramp 0 -> 1 on [0,1]: q(t) = 6t^5 - 15t^4 + 10t^3.
double quintic_blend(double t);

// Interior/boundary partition of unity: eta_i = 1 for rho <= 1 - d0/i,
// zeta_i = 1 for rho >= 1 - d0/(2i), quintic transition between, and
// eta_i + zeta_i = 1 everywhere.
struct CutoffFamily {
  double d0 = 0.0;
  int i = 0;
  Vec eta, zeta;  // sampled on the radial nodes
};

double eta_profile(double d0, int i, double rho);
CutoffFamily make_cutoffs(double d0, int i, const GridSpec& g);

}  // namespace gravdisk
