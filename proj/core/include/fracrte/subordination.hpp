#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fracrte/transport.hpp"

namespace fracrte {

// phi(tau, t) = t / (alpha tau^{1+1/alpha}) f_alpha(t / tau^{1/alpha}), the
// density in tau of the operational time reached at physical time t.
// alpha in (0, 1); alpha = 1/2 is exp(-tau^2/(4t)) / sqrt(pi t).
double kernel_phi(double tau, double t, double alpha);

/// Quadrature for int_0^inf g(tau) phi(tau, t) dtau: Gauss panels of width
/// at most `resolution` on [0, tau_max], where tau_max is where tau phi has
/// fallen below 1e-16 relative. phi(., t) is entire in tau, so the panel
/// width is dictated by g; resolution = 0 selects t^a min(1/8, 3(1 - a)),
/// which follows the peak as it narrows towards alpha = 1.
class SubordinationKernel {
 public:
  SubordinationKernel(double alpha, double t, double resolution = 0.0, int points_per_panel = 16);

  double alpha() const { return alpha_; }
  double t() const { return t_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double mass() const;

 private:
  double alpha_, t_;
  std::vector<double> nodes_, weights_;
};

// int_0^inf u1(x, tau) phi(tau, t) dtau.
double subordinate_density(const std::function<double(double x, double tau)>& u1, double x,
                           const SubordinationKernel& kernel);

// Vectorised form: u1(x_grid, taus) returns a taus.size() x x_grid.size()
// matrix (e.g. DensityField::values of the alpha = 1 solver).
using FieldProvider = std::function<Eigen::MatrixXd(std::span<const double> x_grid, std::span<const double> taus)>;
Eigen::VectorXd subordinate_density(const FieldProvider& u1, std::span<const double> x_grid,
                                    const SubordinationKernel& kernel);

// U(x, t; N) of order alpha built from the alpha = 1 energy density.
DensityField subordinated_energy_density(std::span<const double> x_grid, std::span<const double> times,
                                         const MediumParams& params, int n, EvolutionMode mode,
                                         const QuadratureSpec& spec = {});

}  // namespace fracrte
