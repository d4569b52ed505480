#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fracrte/quadrature.hpp"
#include "fracrte/spectral.hpp"

namespace fracrte {

// Legendre coefficients c_l(k, t; mu0), l = 0..N, of the Fourier-transformed
// angular density: u^(k, mu, t) = sum_l c_l sqrt(2l+1) P_l(mu). Only k >= 0 is
// stored; c(-k) = conj(c(k)).
struct CoefficientVector {
  double k = 0.0;
  double t = 0.0;
  double mu0 = 0.0;
  CVector c;
};

CoefficientVector initial_coefficients(double mu0, int n);

CoefficientVector evolve_coefficients(double k, double t, double mu0, int n, const MediumParams& params,
                                      EvolutionMode mode, const MLEvalConfig& ml = {});

enum class DensityMethod { exact, paper, closed_N1, diffusion, ctrw, subordination };

const char* to_string(DensityMethod m);

// values(i, j) = U(x_grid[j], times[i]).
struct DensityField {
  std::vector<double> x_grid;
  std::vector<double> times;
  Eigen::MatrixXd values;
  DensityMethod method = DensityMethod::exact;
  std::string params_fingerprint;
  // Per-value standard error, present for Monte Carlo estimates.
  std::optional<Eigen::MatrixXd> sigma;
};

// Stable hex digest of the medium parameters and truncation order.
std::string params_fingerprint(const MediumParams& params, int n);

// Fills in problem-dependent defaults: k_max = max(40/x_min, 50 k_c, k_osc)
// (x_min the smallest positive |x|, capped at 4000; k_osc the decay point of
// the oscillating Mittag-Leffler term for 1/2 < alpha < 1 at the earliest
// time) and, for alpha = 1, the 0.01 mollifier width that regularises the
// wave fronts.
QuadratureSpec resolve_quadrature(const QuadratureSpec& spec, std::span<const double> x_grid,
                                  const MediumParams& params, std::span<const double> times = {});

// [E_a(-A(k) t^a)]_00 per time (or its paper-mode counterpart): the Fourier
// transform of the unit-mass energy density for an isotropic delta source.
class EnergySpectrum {
 public:
  EnergySpectrum(const MediumParams& params, int n, EvolutionMode mode, std::vector<double> times,
                 const MLEvalConfig& ml = {});
  void operator()(double k, std::span<double> out) const;
  std::size_t size() const { return times_.size(); }

 private:
  MediumParams params_;
  int n_;
  EvolutionMode mode_;
  std::vector<double> times_;
  MLEvalConfig ml_;
};

// Decomposition of A(k), nudging k by relative steps of 1e-7 while the
// operator is flagged defective.
ModeDecomposition decompose_regular(double k, const MediumParams& params, int n);

/// U(x, t; N) for the isotropic source U(x, 0) = delta(x), normalised to unit
/// mass when sigma_a = 0. Even in x.
DensityField energy_density(std::span<const double> x_grid, std::span<const double> times, const MediumParams& params,
                            int n, EvolutionMode mode, const QuadratureSpec& spec = {});

/// The closed N = 1 two-branch integral: real eigenvalues below k_c with
/// weights (1 -+ sqrt(1 - (k/k_c)^2))/2, the real part of E_a at the complex
/// eigenvalue above. Requires L <= 1 and sigma_a = 0.
double energy_density_N1_closed(double x, double t, const MediumParams& params, const QuadratureSpec& spec = {});
DensityField energy_density_N1_closed(std::span<const double> x_grid, std::span<const double> times,
                                      const MediumParams& params, const QuadratureSpec& spec = {});

// u(x, mu, t; N) for the source delta(x) delta(mu - mu0).
double angular_density(double x, double mu, double mu0, double t, const MediumParams& params, int n,
                       EvolutionMode mode, const QuadratureSpec& spec = {});

// Coefficient of delta(mu - mu0) in the unscattered part:
// (1/2pi) int e^{ikx} E_a(-(ikv mu0 + sigma_t) t^a) dk. mu must equal mu0.
double ballistic_density(double x, double mu, double mu0, double t, const MediumParams& params,
                         const QuadratureSpec& spec = {});

// b_l = sigma_s beta_l P_l(mu0) / (2 sqrt(2l+1)), zero above L.
CVector scattering_source(double mu0, int n, const MediumParams& params);

// Legendre coefficients of the ballistic term E_a(-gamma t^a) delta(mu - mu0).
CoefficientVector ballistic_coefficients(double k, double t, double mu0, int n, const MediumParams& params,
                                         const MLEvalConfig& ml = {});

// (A - gamma)^{-1} [E_a(-gamma t^a) - E_a(-A t^a)] b, gamma = ikv mu0 + sigma_t.
CoefficientVector scattered_coefficients(double k, double t, double mu0, int n, const MediumParams& params,
                                         EvolutionMode mode, const MLEvalConfig& ml = {});

}  // namespace fracrte
