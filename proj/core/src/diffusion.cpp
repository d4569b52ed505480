#include "fracrte/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracrte/errors.hpp"

namespace fracrte {
namespace {

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("diffusion density: t must be positive and finite");
}

std::string fingerprint(const DiffusionParams& dp) {
  MediumParams mp;
  mp.alpha = dp.alpha;
  mp.v = dp.D0;
  mp.sigma_a = dp.sigma_a;
  mp.phase = PhaseFunction::isotropic();
  return params_fingerprint(mp, 0);
}

}  // namespace

void DiffusionParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(D0 > 0.0) || !std::isfinite(D0)) throw ConfigError("D0 must be positive");
  if (!(sigma_a >= 0.0)) throw ConfigError("sigma_a must be non-negative");
}

double d0(const MediumParams& params) {
  params.validate();
  const double g = anisotropy_g(params.phase);
  if (!(g < 1.0)) throw ConfigError("diffusion coefficient undefined for g >= 1 (degenerate forward-peaked transport)");
  return params.v / (3.0 * (1.0 - g) * params.sigma_s);
}

DiffusionParams DiffusionParams::from_medium(const MediumParams& params) {
  DiffusionParams dp;
  dp.alpha = params.alpha;
  dp.D0 = d0(params);
  dp.sigma_a = params.sigma_a;
  return dp;
}

DensityField diffusion_density_quadrature(std::span<const double> x_grid, std::span<const double> times,
                                          const DiffusionParams& dp, const QuadratureSpec& spec) {
  dp.validate();
  if (x_grid.empty()) throw DomainError("diffusion density: empty x grid");
  std::vector<double> ta;
  for (double t : times) {
    check_t(t);
    ta.push_back(std::pow(t, dp.alpha));
  }
  const double t_min = std::pow(*std::min_element(ta.begin(), ta.end()), 1.0 / dp.alpha);

  QuadratureSpec q = spec;
  q.validate();
  if (q.k_max == 0.0) {
    // Spectrum width ~ 1/sqrt(D0 t^a); for alpha = 1 the Gaussian is gone by 40 widths.
    double x_min = 0.0;
    for (double x : x_grid)
      if (x != 0.0 && (x_min == 0.0 || std::abs(x) < x_min)) x_min = std::abs(x);
    const double width = 1.0 / std::sqrt(dp.D0 * std::pow(t_min, dp.alpha));
    q.k_max = std::max(40.0 * width, x_min > 0.0 ? std::min(40.0 / x_min, 4000.0) : 0.0);
  }
  auto spectrum = [&](double k, std::span<double> out) {
    const double rate = dp.D0 * k * k + dp.sigma_a;
    for (std::size_t j = 0; j < ta.size(); ++j) out[j] = mittag_leffler_real(dp.alpha, -rate * ta[j]);
  };

  DensityField field;
  field.x_grid.assign(x_grid.begin(), x_grid.end());
  field.times.assign(times.begin(), times.end());
  field.method = DensityMethod::diffusion;
  field.params_fingerprint = fingerprint(dp);
  field.values = cosine_inversion(spectrum, ta.size(), x_grid, q);
  return field;
}

double diffusion_density_quadrature(double x, double t, const DiffusionParams& dp, const QuadratureSpec& spec) {
  const double xs[1] = {x};
  const double ts[1] = {t};
  return diffusion_density_quadrature(xs, ts, dp, spec).values(0, 0);
}

double diffusion_density_mwright(double x, double t, const DiffusionParams& dp) {
  dp.validate();
  check_t(t);
  if (dp.sigma_a != 0.0) throw ConfigError("M-Wright closed form is only available for sigma_a = 0");
  const double sd = std::sqrt(dp.D0);
  const double th = std::pow(t, 0.5 * dp.alpha);
  return m_wright(0.5 * dp.alpha, std::abs(x) / (sd * th)) / (2.0 * sd * th);
}

DensityField diffusion_density_mwright(std::span<const double> x_grid, std::span<const double> times,
                                       const DiffusionParams& dp) {
  DensityField field;
  field.x_grid.assign(x_grid.begin(), x_grid.end());
  field.times.assign(times.begin(), times.end());
  field.method = DensityMethod::diffusion;
  field.params_fingerprint = fingerprint(dp);
  field.values.resize(times.size(), x_grid.size());
  for (std::size_t j = 0; j < times.size(); ++j)
    for (std::size_t i = 0; i < x_grid.size(); ++i)
      field.values(j, i) = diffusion_density_mwright(x_grid[i], times[j], dp);
  return field;
}

}  // namespace fracrte
