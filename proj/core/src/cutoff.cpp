#include "blowup/cutoff.hpp"

#include <cmath>

namespace blowup {
namespace {

// d^k/dx^k exp(-1/x) = exp(-1/x) P_k(1/x), P_{k+1}(y) = y^2 (P_k(y) - P_k'(y))
std::vector<double> bump_tail_derivatives(double x, int order) {
  std::vector<double> out(order + 1, 0.0);
  if (!(x > 0)) return out;
  const double f = std::exp(-1.0 / x);
  const double y = 1.0 / x;
  std::vector<double> P{1.0};  // coefficients in y
  for (int k = 0; k <= order; ++k) {
    double v = 0.0, pw = 1.0;
    for (double c : P) {
      v += c * pw;
      pw *= y;
    }
    out[k] = f * v;
    std::vector<double> next(P.size() + 2, 0.0);
    for (std::size_t i = 0; i < P.size(); ++i) {
      next[i + 2] += P[i];
      if (i > 0) next[i + 1] -= i * P[i];
    }
    P = std::move(next);
  }
  return out;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double chi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = std::exp(-1.0 / (2.0 - r));
  const double b = std::exp(-1.0 / (r - 1.0));
  return a / (a + b);
}

std::vector<double> chi_derivatives(double r, int order) {
  std::vector<double> out(order + 1, 0.0);
  if (r <= 1.0) {
    out[0] = 1.0;
    return out;
  }
  if (r >= 2.0) return out;
  auto a = bump_tail_derivatives(2.0 - r, order);
  const auto b = bump_tail_derivatives(r - 1.0, order);
  for (int k = 1; k <= order; k += 2) a[k] = -a[k];
  std::vector<double> S(order + 1);
  for (int k = 0; k <= order; ++k) S[k] = a[k] + b[k];
  // chi S = a, differentiated with Leibniz
  for (int k = 0; k <= order; ++k) {
    double v = a[k];
    for (int j = 1; j <= k; ++j) v -= binom(k, j) * S[j] * out[k - j];
    out[k] = v / S[0];
  }
  return out;
}

std::vector<double> chi_derivatives_scaled(double r, double M, int order) {
  auto d = chi_derivatives(r / M, order);
  double s = 1.0;
  for (auto& v : d) {
    v *= s;
    s /= M;
  }
  return d;
}

ChiJet chi_jet(double r) {
  const auto d = chi_derivatives(r, 2);
  return {d[0], d[1], d[2]};
}

ChiJet chi_jet_scaled(double r, double M) {
  const ChiJet j = chi_jet(r / M);
  return {j.v, j.d1 / M, j.d2 / (M * M)};
}

}  // namespace blowup
