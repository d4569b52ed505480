#pragma once

#include <span>

#include "fracrte/quadrature.hpp"
#include "fracrte/spectral.hpp"
#include "fracrte/transport.hpp"

namespace fracrte {

// Time-fractional diffusion d^a U/dt^a = D0 U'' - sigma_a U.
struct DiffusionParams {
  double alpha = 1.0;
  double D0 = 1.0 / 3.0;  // length^2 / time^alpha
  double sigma_a = 0.0;

  void validate() const;
  static DiffusionParams from_medium(const MediumParams& params);
  bool operator==(const DiffusionParams&) const = default;
};

// v / (3 (1 - g) sigma_s); ConfigError for g >= 1.
double d0(const MediumParams& params);

// (1/pi) int_0^inf cos(kx) E_a(-(D0 k^2 + sigma_a) t^a) dk.
double diffusion_density_quadrature(double x, double t, const DiffusionParams& dp, const QuadratureSpec& spec = {});
DensityField diffusion_density_quadrature(std::span<const double> x_grid, std::span<const double> times,
                                          const DiffusionParams& dp, const QuadratureSpec& spec = {});

// 1/(2 sqrt(D0)) t^{-a/2} M_{a/2}(|x| / (sqrt(D0) t^{a/2})); unit mass.
// sigma_a must be 0.
double diffusion_density_mwright(double x, double t, const DiffusionParams& dp);
DensityField diffusion_density_mwright(std::span<const double> x_grid, std::span<const double> times,
                                       const DiffusionParams& dp);

}  // namespace fracrte
