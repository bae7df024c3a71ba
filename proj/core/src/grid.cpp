#include "blowup/grid.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "blowup/error.hpp"

namespace blowup {

std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& x, int max_order) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(max_order + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<std::vector<double>> out(max_order + 1, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k <= max_order; ++k) out[k][i] = c[i][k];
  return out;
}

RadialGrid::RadialGrid(const GridSpec& spec) : spec_(spec) {
  if (!(spec.h_core > 0) || !(spec.r_core > spec.h_core) || !(spec.r_max > spec.r_core))
    throw Error(Errc::InvalidInput, "grid spec must satisfy 0 < h_core < r_core < r_max");
  n_core_ = static_cast<std::size_t>(std::llround(spec.r_core / spec.h_core));
  const double h = spec.r_core / n_core_;
  for (std::size_t j = 0; j <= n_core_; ++j) r_.push_back(j * h);
  const double q = spec.log_step();
  for (std::size_t k = 1;; ++k) {
    const double rk = spec.r_core * std::exp(k * q);
    r_.push_back(rk);
    if (rk >= spec.r_max) break;
  }
  if (r_.size() < 8) throw Error(Errc::InvalidInput, "grid too small");

  const std::size_t n = r_.size();
  stencils_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    long lo = static_cast<long>(j) - 2;
    if (lo + 4 > static_cast<long>(n) - 1) lo = static_cast<long>(n) - 5;
    std::vector<double> x(5);
    Stencil<5>& st = stencils_[j];
    for (int k = 0; k < 5; ++k) {
      const long pos = lo + k;
      st.nodes[k].index = static_cast<std::size_t>(std::labs(pos));
      st.nodes[k].mirrored = pos < 0;
      x[k] = pos < 0 ? -r_[-pos] : r_[pos];
    }
    const auto w = fornberg_weights(r_[j], x, 2);
    for (int k = 0; k < 5; ++k) {
      st.d1[k] = w[1][k];
      st.d2[k] = w[2][k];
    }
  }
}

RadialGrid::~RadialGrid() = default;

std::shared_ptr<const RadialGrid> RadialGrid::make(const GridSpec& spec) {
  return std::make_shared<const RadialGrid>(spec);
}

std::size_t RadialGrid::lower_index(double x) const {
  return static_cast<std::size_t>(std::lower_bound(r_.begin(), r_.end(), x) - r_.begin());
}

const RadialQuadrature& RadialGrid::quadrature(int power) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = quadratures_.find(power);
  if (it == quadratures_.end())
    it = quadratures_.emplace(power, std::make_unique<RadialQuadrature>(*this, power)).first;
  return *it->second;
}

namespace {

template <class Fn>
std::vector<double> apply_stencil(const RadialGrid& g, const std::vector<double>& f, int parity, Fn pick) {
  if (f.size() != g.size()) throw Error(Errc::GridMismatch, "sample count differs from grid size");
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const Stencil<5>& st = g.stencil(j);
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) {
      const double v = f[st.nodes[k].index] * (st.nodes[k].mirrored ? parity : 1);
      acc += pick(st, k) * v;
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace

std::vector<double> derivative(const RadialGrid& g, const std::vector<double>& f, int parity) {
  return apply_stencil(g, f, parity, [](const Stencil<5>& s, int k) { return s.d1[k]; });
}

std::vector<double> second_derivative(const RadialGrid& g, const std::vector<double>& f, int parity) {
  return apply_stencil(g, f, parity, [](const Stencil<5>& s, int k) { return s.d2[k]; });
}

std::vector<double> radial_laplacian(const RadialGrid& g, const std::vector<double>& f, int d, int n) {
  const int parity = (n % 2 == 0) ? 1 : -1;
  const auto f1 = derivative(g, f, parity);
  const auto f2 = second_derivative(g, f, parity);
  const double cn = n * (d + n - 2.0);
  std::vector<double> out(f.size());
  out[0] = (n == 0) ? d * f2[0] : 0.0;
  for (std::size_t j = 1; j < f.size(); ++j) {
    const double r = g[j];
    out[j] = f2[j] + (d - 1.0) / r * f1[j] - cn / (r * r) * f[j];
  }
  return out;
}

RadialQuadrature::RadialQuadrature(const RadialGrid& grid, int power) : grid_(grid), power_(power) {
  const auto& r = grid.r();
  const std::size_t n = r.size();
  intervals_.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Interval& iv = intervals_[k];
    std::size_t start = k == 0 ? 0 : k - 1;
    start = std::min(start, n - 4);
    for (int a = 0; a < 4; ++a) iv.idx[a] = start + a;
    for (int a = 0; a < 4; ++a) {
      auto basis = [&](double s) {
        double v = std::pow(s, power);
        for (int b = 0; b < 4; ++b)
          if (b != a) v *= (s - r[iv.idx[b]]) / (r[iv.idx[a]] - r[iv.idx[b]]);
        return v;
      };
      iv.w[a] = boost::math::quadrature::gauss<double, 10>::integrate(basis, r[k], r[k + 1]);
    }
  }
}

std::vector<double> RadialQuadrature::cumulative(const std::vector<double>& g) const {
  if (g.size() != grid_.size()) throw Error(Errc::GridMismatch, "sample count differs from grid size");
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const Interval& iv = intervals_[k];
    double s = 0.0;
    for (int a = 0; a < 4; ++a) s += iv.w[a] * g[iv.idx[a]];
    out[k + 1] = out[k] + s;
  }
  return out;
}

std::vector<double> RadialQuadrature::cumulative_from(const std::vector<double>& g, std::size_t j0) const {
  if (g.size() != grid_.size()) throw Error(Errc::GridMismatch, "sample count differs from grid size");
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = j0; k < intervals_.size(); ++k) {
    const Interval& iv = intervals_[k];
    double s = 0.0;
    for (int a = 0; a < 4; ++a) s += iv.w[a] * g[iv.idx[a]];
    out[k + 1] = out[k] + s;
  }
  return out;
}

std::vector<double> RadialQuadrature::reverse_cumulative(const std::vector<double>& g) const {
  if (g.size() != grid_.size()) throw Error(Errc::GridMismatch, "sample count differs from grid size");
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = intervals_.size(); k-- > 0;) {
    const Interval& iv = intervals_[k];
    double s = 0.0;
    for (int a = 0; a < 4; ++a) s += iv.w[a] * g[iv.idx[a]];
    out[k] = out[k + 1] + s;
  }
  return out;
}

double RadialQuadrature::total(const std::vector<double>& g) const { return cumulative(g).back(); }

double RadialQuadrature::partial(const std::vector<double>& g, std::size_t k, double a, double b) const {
  const auto& r = grid_.r();
  const Interval& iv = intervals_[k];
  auto interp = [&](double s) {
    double v = 0.0;
    for (int i = 0; i < 4; ++i) {
      double l = 1.0;
      for (int j = 0; j < 4; ++j)
        if (j != i) l *= (s - r[iv.idx[j]]) / (r[iv.idx[i]] - r[iv.idx[j]]);
      v += l * g[iv.idx[i]];
    }
    return std::pow(s, power_) * v;
  };
  return boost::math::quadrature::gauss<double, 10>::integrate(interp, a, b);
}

double RadialQuadrature::integral(const std::vector<double>& g, double a, double b) const {
  if (g.size() != grid_.size()) throw Error(Errc::GridMismatch, "sample count differs from grid size");
  const auto& r = grid_.r();
  a = std::max(a, 0.0);
  b = std::min(b, r.back());
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const double lo = r[k], hi = r[k + 1];
    if (hi <= a) continue;
    if (lo >= b) break;
    if (lo >= a && hi <= b) {
      const Interval& iv = intervals_[k];
      for (int i = 0; i < 4; ++i) sum += iv.w[i] * g[iv.idx[i]];
    } else {
      sum += partial(g, k, std::max(lo, a), std::min(hi, b));
    }
  }
  return sum;
}

double RadialQuadrature::integral_to(const std::vector<double>& g, double B) const { return integral(g, 0.0, B); }

}  // namespace blowup
