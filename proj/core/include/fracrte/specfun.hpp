#pragma once

#include <complex>

namespace fracrte {

using cplx = std::complex<double>;

// Region boundaries for the Mittag-Leffler evaluator. Inside the series disc
// the Taylor series is summed; beyond the asymptotic radius the algebraic
// expansion is used when its optimal truncation error is below tolerance;
// everything else goes through the Laplace-inversion contour.
struct MLEvalConfig {
  double series_cutoff_radius = 1.0;
  double target_rel_tol = 1e-12;
  int max_terms = 500;
  double asymptotic_radius = 10.0;

  void validate() const;
};

/// One-parameter Mittag-Leffler function E_a(z) = sum_n z^n / Gamma(a n + 1).
///
/// alpha is accepted on (0, 2]; the transport formulas only need (0, 1] but
/// the duplication identity E_a(z) + E_a(-z) = 2 E_{2a}(z^2) reaches E_{2a}.
cplx mittag_leffler(double alpha, cplx z, const MLEvalConfig& cfg = {});

// Real-argument convenience; returns the (exactly real) value E_a(x).
double mittag_leffler_real(double alpha, double x, const MLEvalConfig& cfg = {});

/// M-Wright function M_nu(x) for nu in (0,1), x >= 0.
///
/// Power series near the origin; for larger x the Kanter integral of the
/// one-sided stable law, which is free of cancellation.
double m_wright(double nu, double x);

// Closed form t^{-3/2} exp(-1/(4t)) / (2 sqrt(pi)).
double f_alpha_half(double t);

// One-sided stable density with Laplace transform exp(-s^a), a in (0,1),
// via Kanter's integral representation.
double stable_density(double alpha, double t);

// Same density through fixed-Talbot inversion of exp(-s^a).
double stable_density_talbot(double alpha, double t, int nodes = 32);

// 1/Gamma(x) for all real x, zero at the poles.
double rgamma(double x);

}  // namespace fracrte
