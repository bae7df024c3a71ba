#pragma once

// Internal helpers shared by the ground-state and kernel constructions.

#include <array>
#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "blowup/error.hpp"
#include "blowup/numerology.hpp"

namespace blowup::detail {

// Even power series of Q about the origin and of Q^{p-1}.
struct OriginSeries {
  std::vector<double> q;   // Q = sum q_k r^{2k}
  std::vector<double> qp1; // Q^{p-1} = sum qp1_k r^{2k}
};

inline std::vector<double> series_mul(const std::vector<double>& a, const std::vector<double>& b, std::size_t K) {
  std::vector<double> c(K, 0.0);
  for (std::size_t i = 0; i < K && i < a.size(); ++i)
    for (std::size_t j = 0; i + j < K && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline std::vector<double> series_pow(const std::vector<double>& a, int e, std::size_t K) {
  std::vector<double> c(K, 0.0);
  c[0] = 1.0;
  for (int i = 0; i < e; ++i) c = series_mul(c, a, K);
  return c;
}

inline OriginSeries origin_series(int d, int p, std::size_t K) {
  OriginSeries s;
  s.q.assign(K, 0.0);
  s.q[0] = 1.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const auto qp = series_pow(s.q, p, k + 1);
    s.q[k + 1] = -qp[k] / ((2.0 * k + 2.0) * (2.0 * k + d));
  }
  s.qp1 = series_pow(s.q, p - 1, K);
  return s;
}

inline double eval_even(const std::vector<double>& c, double r, double* dr = nullptr) {
  double v = 0.0, dv = 0.0, rr = r * r, pw = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    v += c[k] * pw;
    if (k > 0) dv += 2.0 * k * c[k] * pw / r;
    pw *= rr;
  }
  if (dr) *dr = dv;
  return v;
}

// Frobenius coefficients of a zero of H^(n) behaving like r^sigma (1 + ...).
inline std::vector<double> frobenius(const OriginSeries& s, int d, int p, int n, double sigma, std::size_t K) {
  std::vector<double> g(1, 1.0);
  const double cn = n * (d + n - 2.0);
  for (std::size_t k = 1; k < K; ++k) {
    const double e = sigma + 2.0 * k;
    const double D = e * (e + d - 2.0) - cn;
    if (std::abs(D) < 1e-10) break;  // resonance: truncate before the logarithmic term
    double rhs = 0.0;
    for (std::size_t j = 0; j < k; ++j) rhs += -p * s.qp1[k - 1 - j] * g[j];
    g.push_back(rhs / D);
  }
  return g;
}

// (1+x)^p - (1+x) without cancellation for small x.
inline double reaction_shift(double x, int p) {
  if (std::abs(x) < 0.5) return std::expm1(p * std::log1p(x)) - x;
  return std::pow(1.0 + x, p) - (1.0 + x);
}

// v^{p-1} for v = c (1 + x)
inline double vpow(double c_pm1, double x, int p) {
  if (std::abs(x) < 0.5) return c_pm1 * std::exp((p - 1) * std::log1p(x));
  return c_pm1 * std::pow(1.0 + x, p - 1);
}

template <std::size_t N, class System, class Observer>
void integrate_times(System sys, std::array<double, N> x, const std::vector<double>& times, Observer obs,
                     double rtol, double atol) {
  namespace ode = boost::numeric::odeint;
  using state = std::array<double, N>;
  try {
    auto stepper = ode::make_dense_output(atol, rtol, ode::runge_kutta_dopri5<state>());
    const double dt0 = times.size() > 1 ? std::min(1e-3, 0.1 * (times[1] - times[0])) : 1e-3;
    ode::integrate_times(stepper, sys, x, times.begin(), times.end(), dt0, obs);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Errc::IntegratorFailure, e.what());
  }
}

}  // namespace blowup::detail
