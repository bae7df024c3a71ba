#pragma once

#include <vector>

namespace blowup {

// Smooth radial cut-off: 1 on [0,1], 0 on [2,inf), C-infinity in between.
double chi(double r);
inline double chi_scaled(double r, double M) { return chi(r / M); }

struct ChiJet {
  double v = 0;
  double d1 = 0;
  double d2 = 0;
};

// chi^{(k)}(r) for k = 0..order, exact.
std::vector<double> chi_derivatives(double r, int order);
// Derivatives in r of chi(r / M).
std::vector<double> chi_derivatives_scaled(double r, double M, int order);

// chi and its first two derivatives, exact.
ChiJet chi_jet(double r);
// Derivatives taken in r for chi(r / M).
ChiJet chi_jet_scaled(double r, double M);

}  // namespace blowup
