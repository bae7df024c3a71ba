#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "blowup/blowup_profile.hpp"
#include "blowup/numerology.hpp"

namespace blowup {

// u(r) = sum_k a_k phi((log r - c_k) / w_k), phi(s) = exp(-1 / (1 - s^2)) on |s| < 1.
struct BumpSum {
  std::vector<double> coef;
  std::vector<double> centre;  // in log r
  std::vector<double> width;

  // u, du/dr, d^2u/dr^2
  void eval(double r, double& u, double& up, double& upp) const;
  double support_lo() const;  // in r
  double support_hi() const;
};

// Up to max_terms bumps with centres uniform in [t_lo, t_hi] (log r), supports inside the interval.
BumpSum random_bump_sum(std::mt19937_64& rng, double t_lo, double t_hi, int max_terms);

struct HardyOptions {
  int d = 13;
  double q = 0.0;
  double delta = 0.1;
  double r_min = 1.0;  // test functions live in [r_min, R]
  double R = 1e3;
  int samples = 1000;
  std::uint64_t seed = 1;
  int max_terms = 12;
  int dictionary = 48;  // bumps spanning [r_min, R] for the span minimum
};

struct HardyReport {
  double q = 0;
  double gap = 0;              // |q - (d/2 - 1)|
  bool boundary_branch = false;  // q above d/2 - 1: u(1)^2 enters with constant delta
  double sharp = 0;            // (d/2 - 1 - q)^2
  double proof_constant = 0;   // delta^2
  double sample_min = 0;       // min over the random ensemble of (rhs + C' u(1)^2) / lhs
  double span_min = 0;         // min over the dictionary span (generalized eigenvalue)
  BumpSum minimizer;
  int samples = 0;
};

// lhs = int u^2 y^{d-3-2q} dy, rhs = int |u'|^2 y^{d-1-2q} dy. Throws ConfigInvalid if the gap is below delta.
HardyReport hardy_ratio(const HardyOptions& opt);

struct RellichOptions {
  int d = 13;
  double r_lo = 1e-3;
  double r_hi = 1e3;
  int samples = 1000;
  std::uint64_t seed = 1;
  int max_terms = 12;
  int dictionary = 48;
};

struct RellichForms {
  double lap2 = 0;      // int |Delta u|^2 r^{d-1}
  double u2_r4 = 0;     // int u^2 r^{d-5}
  double grad2_r2 = 0;  // int |u'|^2 r^{d-3}
};

using RadialFunction = std::function<void(double r, double& u, double& up, double& upp)>;

// Gauss-Legendre in log r over [r_lo, r_hi].
RellichForms rellich_forms(int d, const RadialFunction& f, double r_lo, double r_hi);

struct RellichReport {
  double const_u = 0;     // ((d-4) d / 4)^2
  double const_grad = 0;  // d^2 / 4
  double sample_min_u = 0;
  double sample_min_grad = 0;
  double span_min_u = 0;
  double span_min_grad = 0;
  double worst_violation = 0;  // max(0, 1 - ratio / constant) over everything tried
  int samples = 0;
};

RellichReport rellich_ratio(const RellichOptions& opt);

enum class CoercivityForm {
  SingleH,  // int |H u|^2/(1+r^{2q}) vs |Delta u|^2/(1+r^{2q}) + |u'|^2/(r^2(1+r^{2q})) + u^2/(r^4(1+r^{2q}))
  Iterate,  // int |H^i u|^2/(1+r^{2q}) vs sum_{mu <= 2i} |D^mu u|^2/(1+r^{4i-2mu+2q}), q playing delta'
};

struct QuotientProblem {
  CoercivityForm form = CoercivityForm::SingleH;
  int n = 0;
  int i = 1;
  double q = 2.5;
  double delta = 0.1;        // required gap of q from the critical weights
  bool constraints = true;
  // orthogonality against the full Phi_M instead of its leading term chi_M T_0; the full function
  // carries cut-off derivatives that make the condition almost unbounded in the denominator norm
  bool full_phi = false;
  int max_constraints = -1;  // cap on the number of orthogonality conditions, -1 for all
  double R = 1e3;
  std::size_t nodes = 1500;
  double h_min = 0.02;
  int max_iterations = 400;
  double tol = 1e-10;
  double max_condition = 1e12;
};

struct CoercivityReport {
  double min_quotient = 0;
  int constraint_count = 0;
  std::vector<int> constraint_levels;  // j of each <u, H^j Phi_M> = 0
  int iterations = 0;
  bool converged = false;
  double condition = 0;       // largest over smallest eigenvalue of the constrained pencil
  double kernel_quotient = 0; // quotient of chi_{R/2} T_0
  double unweighted_ratio = 0;  // Iterate form: min over random constrained samples of |H^i u|^2 / |u|_{H^{2i}}^2
  std::vector<double> r;
  std::vector<double> eigenfunction;
};

// n > 0 builds its own kernel pair and ladder from the basis grid.
CoercivityReport coercivity_spectrum(const QuotientProblem& problem, const ConstantsTable& table,
                                     const ProfileBasis& basis);

}  // namespace blowup
