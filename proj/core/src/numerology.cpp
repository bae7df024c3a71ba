#include "blowup/numerology.hpp"

#include <cmath>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup {
namespace {

constexpr double kDegenerateTol = 1e-9;
constexpr double kIntegerTol = 1e-9;

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return std::round(r);
}

bool is_integer(double x) { return std::abs(x - std::round(x)) < kIntegerTol; }

// E[x] with x - 1 < E[x] <= x, robust to round-off just below an integer.
int entire(double x) {
  if (is_integer(x)) return static_cast<int>(std::lround(x));
  return static_cast<int>(std::floor(x));
}

}  // namespace

double joseph_lundgren(int d) {
  if (d < 11) return INFINITY;
  return 1.0 + 4.0 / (d - 4.0 - 2.0 * std::sqrt(d - 1.0));
}

double critical_exponent(int d, double p) { return d / 2.0 - 2.0 / (p - 1.0); }

double c_inf_pm1_of(int d, double p) {
  const double m = 2.0 / (p - 1.0);
  return m * (d - 2.0 - m);
}

double delta_of(int d, double p) {
  return (d - 2.0) * (d - 2.0) - 4.0 * p * c_inf_pm1_of(d, p);
}

double gamma_n_of(int d, double p, int n) {
  const double dn = delta_of(d, p) + 4.0 * n * (d + n - 2.0);
  return (d - 2.0 - std::sqrt(dn)) / 2.0;
}

long long harmonic_count(int d, int n) {
  if (n < 0) return 0;
  if (n == 0) return 1;
  if (n == 1) return d;
  return static_cast<long long>(binomial(n + d - 1, n) - binomial(n + d - 3, n - 2));
}

long long harmonic_count(const ConstantsTable& table, int n) { return harmonic_count(table.d(), n); }

const HarmonicRow& ConstantsTable::row(int n) const {
  if (n < 0 || n >= static_cast<int>(rows.size()))
    throw Error(Errc::InvalidInput, "harmonic index out of table range");
  return rows[n];
}

double ConstantsTable::B0(double b) const { return 1.0 / std::sqrt(b); }
double ConstantsTable::B1(double b) const { return std::pow(B0(b), 1.0 + input.eta); }

ConstantsTable derive_constants_unchecked(const ModelInput& in) {
  ConstantsTable t;
  t.input = in;
  const int d = in.d;
  const double p = in.p;
  const double m = 2.0 / (p - 1.0);
  t.p_jl = joseph_lundgren(d);
  t.s_c = critical_exponent(d, p);
  t.c_inf_pm1 = c_inf_pm1_of(d, p);
  t.c_inf = t.c_inf_pm1 > 0 ? std::pow(t.c_inf_pm1, 1.0 / (p - 1.0)) : NAN;
  t.Delta = delta_of(d, p);
  t.gamma = (d - 2.0 - std::sqrt(t.Delta)) / 2.0;
  t.alpha = t.gamma - m;
  t.kappa = std::pow(1.0 / (p - 1.0), 1.0 / (p - 1.0));

  auto make_row = [&](int n) {
    HarmonicRow r;
    r.n = n;
    r.Delta = t.Delta + 4.0 * n * (d + n - 2.0);
    r.gamma = (d - 2.0 - std::sqrt(r.Delta)) / 2.0;
    r.gamma_prime = (d - 2.0 + std::sqrt(r.Delta)) / 2.0;
    r.alpha = r.gamma - m;
    r.m = entire(0.5 * (d / 2.0 - r.gamma));
    r.delta = (d - 2.0 * r.gamma - 4.0 * r.m) / 4.0;
    r.k = harmonic_count(d, n);
    r.i = in.ell - (t.gamma - r.gamma) / 2.0;
    return r;
  };

  const HarmonicRow r0 = make_row(0);
  t.s_L = r0.m + in.L + 1;

  // n_0: last n with d - 2 gamma_n <= 4 s_L (gamma_n decreases in n).
  int n = 0;
  while (d - 2.0 * gamma_n_of(d, p, n + 1) <= 4.0 * t.s_L + 1e-12) ++n;
  t.n_0 = n;
  t.n_max = t.n_0 + 2;

  for (int j = 0; j <= t.n_max; ++j) {
    HarmonicRow r = make_row(j);
    r.L = t.s_L - r.m - 1;
    t.rows.push_back(r);
  }

  t.g = std::min(t.alpha, t.Delta) - in.eps_g;
  t.g_prime = 0.5 * std::min({t.g, 1.0, r0.delta - in.eps_g});
  t.delta0_prime = 0.0;
  for (int j = 0; j <= t.n_0; ++j) t.delta0_prime = std::max(t.delta0_prime, t.rows[j].delta);
  return t;
}

ConstantsTable derive_constants(const ModelInput& in) {
  if (in.d < 11) throw Error(Errc::InvalidInput, "dimension must be at least 11");
  if (in.p < 3 || in.p % 2 == 0) throw Error(Errc::InvalidInput, "p must be an odd integer >= 3");
  if (!(in.p > joseph_lundgren(in.d))) {
    std::ostringstream os;
    os << "p = " << in.p << " <= p_JL(" << in.d << ") = " << joseph_lundgren(in.d);
    throw Error(Errc::SubcriticalP, os.str());
  }
  if (in.L < 1) throw Error(Errc::InvalidInput, "L must be positive");
  if (!(in.eps_g > 0) || !(in.eta > 0) || !(in.M > 0))
    throw Error(Errc::InvalidInput, "eps_g, eta and M must be positive");

  ConstantsTable t = derive_constants_unchecked(in);
  if (!(2.0 * in.ell > t.alpha)) {
    std::ostringstream os;
    os << "2*ell = " << 2 * in.ell << " <= alpha = " << t.alpha;
    throw Error(Errc::BadEll, os.str());
  }
  if (in.ell > in.L) throw Error(Errc::BadEll, "ell must not exceed L");

  for (const HarmonicRow& r : t.rows) {
    if (r.n > t.n_0) break;
    if (r.delta < kDegenerateTol || r.delta > 1.0 - kDegenerateTol) {
      std::ostringstream os;
      os << "delta_" << r.n << " = " << r.delta;
      throw Error(Errc::DegenerateDelta, os.str());
    }
  }
  return t;
}

std::vector<const char*> check_table_invariants(const ConstantsTable& t) {
  std::vector<const char*> bad;
  const double m = t.scaling_exponent();
  const int d = t.d();
  if (std::abs(t.rows[0].gamma - t.gamma) > 1e-12) bad.push_back("gamma_0 != gamma");
  if (t.rows.size() > 1 && std::abs(t.rows[1].gamma - (m + 1.0)) > 1e-12)
    bad.push_back("gamma_1 != 2/(p-1)+1");
  for (size_t n = 1; n < t.rows.size(); ++n)
    if (!(t.rows[n].gamma < t.rows[n - 1].gamma)) bad.push_back("gamma_n not decreasing");
  for (size_t n = 2; n < t.rows.size(); ++n) {
    if (!(t.rows[n].gamma < m)) bad.push_back("gamma_n >= 2/(p-1) for n >= 2");
    if (!(t.rows[n].alpha < 0)) bad.push_back("alpha_n >= 0 for n >= 2");
  }
  if (t.rows.size() > 1 && std::abs(t.rows[1].alpha - 1.0) > 1e-12) bad.push_back("alpha_1 != 1");
  if (!(t.alpha > 2.0 && t.alpha < d / 2.0 - 1.0)) bad.push_back("alpha outside (2, d/2-1)");
  for (const HarmonicRow& r : t.rows) {
    if (std::abs(d - 2.0 * r.gamma - 4.0 * r.m - 4.0 * r.delta) > 1e-12)
      bad.push_back("d != 2 gamma_n + 4 m_n + 4 delta_n");
    if (r.delta < 0.0 || r.delta >= 1.0) bad.push_back("delta_n outside [0,1)");
  }
  const bool above = t.input.p > t.p_jl;
  const bool window = 2.0 + std::sqrt(d - 1.0) < t.s_c && t.s_c < d / 2.0;
  if (above != window) bad.push_back("s_c window disagrees with p > p_JL");
  return bad;
}

int instability_count(const ConstantsTable& t, int ell) {
  if (!(2.0 * ell > t.alpha)) throw Error(Errc::BadEll, "2*ell <= alpha");
  auto i_of = [&](int n) { return ell - (t.gamma - t.rows[n].gamma) / 2.0; };
  auto nat = [](double x) { return is_integer(x) && std::round(x) >= 0 ? 1 : 0; };
  long long m = ell - 1;
  if (t.n_0 >= 1) {
    const double i1 = i_of(1);
    m += t.d() * std::max(0LL, static_cast<long long>(entire(i1)) - nat(i1));
  }
  for (int n = 2; n <= t.n_0; ++n) {
    const double in = i_of(n);
    m += harmonic_count(t, n) * std::max(0LL, static_cast<long long>(entire(in)) + 1 - nat(in));
  }
  return static_cast<int>(m);
}

int radial_instability_count(const ConstantsTable& t, int ell) {
  if (!(2.0 * ell > t.alpha)) throw Error(Errc::BadEll, "2*ell <= alpha");
  return ell - 1;
}

}  // namespace blowup
