#include "fracrte/subordination.hpp"

#include <cmath>
#include <numbers>

#include "fracrte/errors.hpp"
#include "fracrte/quadrature.hpp"

namespace fracrte {

double kernel_phi(double tau, double t, double alpha) {
  if (!(tau > 0.0) || !(t > 0.0)) throw DomainError("kernel_phi: tau and t must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("kernel_phi: alpha must lie in (0, 1)");
  if (alpha == 0.5) return std::exp(-tau * tau / (4.0 * t)) / std::sqrt(std::numbers::pi * t);
  const double s = t / std::pow(tau, 1.0 / alpha);
  return t / (alpha * std::pow(tau, 1.0 + 1.0 / alpha)) * stable_density(alpha, s);
}

SubordinationKernel::SubordinationKernel(double alpha, double t, double resolution, int points_per_panel)
    : alpha_(alpha), t_(t) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("SubordinationKernel: alpha must lie in (0, 1)");
  if (!(t > 0.0)) throw DomainError("SubordinationKernel: t must be positive");
  if (!(resolution >= 0.0)) throw DomainError("SubordinationKernel: resolution must be non-negative");
  const double scale = std::pow(t, alpha);
  // tau phi(tau, t) is O(1) on the bulk of the kernel (tau ~ t^a).
  double tau_max = 2.0 * scale;
  while (tau_max * kernel_phi(tau_max, t, alpha) > 1e-16) tau_max *= 1.5;
  // Near alpha = 1 the kernel narrows towards delta(tau - t); the peak width
  // shrinks like (1 - alpha) t^a.
  double width = scale * std::min(0.125, 3.0 * (1.0 - alpha));
  if (resolution > 0.0) width = std::min(width, resolution);
  const Nodes nd = composite_gauss(0.0, tau_max, width, points_per_panel);
  nodes_ = nd.k;
  weights_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) weights_[i] = nd.w[i] * kernel_phi(nodes_[i], t, alpha);
}

double SubordinationKernel::mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double subordinate_density(const std::function<double(double, double)>& u1, double x,
                           const SubordinationKernel& kernel) {
  double s = 0.0;
  for (std::size_t i = 0; i < kernel.nodes().size(); ++i) s += kernel.weights()[i] * u1(x, kernel.nodes()[i]);
  return s;
}

Eigen::VectorXd subordinate_density(const FieldProvider& u1, std::span<const double> x_grid,
                                    const SubordinationKernel& kernel) {
  const Eigen::MatrixXd values = u1(x_grid, kernel.nodes());
  if (values.rows() != static_cast<Eigen::Index>(kernel.nodes().size()) ||
      values.cols() != static_cast<Eigen::Index>(x_grid.size()))
    throw LogicError("subordinate_density: provider returned a matrix of the wrong shape");
  const Eigen::Map<const Eigen::VectorXd> w(kernel.weights().data(), kernel.weights().size());
  return values.transpose() * w;
}

DensityField subordinated_energy_density(std::span<const double> x_grid, std::span<const double> times,
                                         const MediumParams& params, int n, EvolutionMode mode,
                                         const QuadratureSpec& spec) {
  MediumParams p1 = params;
  p1.alpha = 1.0;
  FieldProvider provider = [&](std::span<const double> xs, std::span<const double> taus) {
    return energy_density(xs, taus, p1, n, mode, spec).values;
  };
  // Mollified wave fronts of the alpha = 1 solution move at speed <= v and
  // are eps wide, so they take at least eps / v in tau to sweep past a fixed
  // x; a 16-point panel of twice that resolves them.
  const double resolution = 2.0 * resolve_quadrature(spec, x_grid, p1).mollifier_width / p1.v;
  DensityField field;
  field.x_grid.assign(x_grid.begin(), x_grid.end());
  field.times.assign(times.begin(), times.end());
  field.method = DensityMethod::subordination;
  field.params_fingerprint = params_fingerprint(params, n);
  field.values.resize(times.size(), x_grid.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    const SubordinationKernel kernel(params.alpha, times[j], resolution);
    field.values.row(j) = subordinate_density(provider, x_grid, kernel).transpose();
  }
  return field;
}

}  // namespace fracrte
