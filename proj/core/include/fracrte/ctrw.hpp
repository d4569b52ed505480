#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fracrte/legendre.hpp"
#include "fracrte/random.hpp"
#include "fracrte/spectral.hpp"
#include "fracrte/transport.hpp"

namespace fracrte {

// Per-event probabilities of the walk: scatter (xi_s), absorb (xi_a), jump
// by mu r (1 - xi_t). Waiting times follow the Mittag-Leffler law with time
// scale tau.
struct CTRWParams {
  double alpha = 1.0;
  double tau = 1.0;
  double xi_t = 0.0;
  double xi_s = 0.0;
  double xi_a = 0.0;
  double r = 0.0;

  void validate() const;
};

// xi_t = sigma_t tau^a, xi_s = sigma_s tau^a, r = v tau^a / (1 - xi_t).
// ScaleError if xi_t >= 1.
CTRWParams map_params(const MediumParams& params, double tau);

// tau giving xi_t = xi_target.
double tau_for_xi(const MediumParams& params, double xi_target);

// Survival E_a(-(t/tau)^a); alpha = 1 is the exponential law.
double sample_waiting_time(double alpha, double tau, RandomStream& rng);

struct WalkerState {
  double x = 0.0;
  double mu = 0.0;
  double clock = 0.0;
  bool alive = true;
  // Signed importance weight; scattering by a kernel that is negative
  // somewhere multiplies it by +-||p(., mu')||_1.
  double weight = 1.0;
};

WalkerState step(const WalkerState& w, const CTRWParams& cp, const PhaseFunction& pf, RandomStream& rng);

struct CTRWResult {
  DensityField field;             // bin-averaged U with per-bin sigma
  std::vector<double> survival;   // alive fraction per observation time
  std::vector<double> survival_sigma;
};

/// Histogram of walker positions for the isotropic source delta(x) at each
/// observation time. x_grid holds uniformly spaced bin centres. Walker i
/// draws from RandomStream(seed, i), and histograms are merged per fixed
/// block of walkers in block order, so the result does not depend on the
/// thread count.
CTRWResult simulate_density(std::uint64_t n_walkers, std::span<const double> t_obs, std::span<const double> x_grid,
                            const MediumParams& params, double tau, std::uint64_t seed);

}  // namespace fracrte
