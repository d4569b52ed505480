#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fracrte/specfun.hpp"

namespace fracrte {

enum class TailMode {
  none,         // truncate at k_max
  accelerated,  // half-period panels beyond k_max, Wynn-epsilon extrapolated
};

const char* to_string(TailMode m);
TailMode tail_mode_from_string(const std::string& s);

struct QuadratureSpec {
  double k_max = 0.0;  // 0 selects a problem-dependent default
  int nodes_per_halfperiod = 16;
  int acceleration_order = 8;
  TailMode tail_mode = TailMode::accelerated;
  // Gaussian mollifier exp(-(eps k)^2 / 2) applied in k-space; 0 disables.
  double mollifier_width = 0.0;

  void validate() const;
  bool operator==(const QuadratureSpec&) const = default;
};

/// (1/pi) int_0^inf [cos(kx) Re f(k) - sin(kx) Im f(k)] dk.
///
/// [0, k_max] is covered with Gauss panels no wider than a half period of
/// cos(kx) (and split at the given breakpoints). The tail is summed over
/// geometrically growing panels until they reach a half period, then over
/// half periods aligned with the zeros of cos (resp. sin) whose partial sums
/// are extrapolated by the epsilon algorithm. For x = 0 the tail is mapped
/// onto (0, 1] by k = k_max / u.
double fourier_inversion(const std::function<cplx(double)>& f, double x, const QuadratureSpec& spec,
                         std::span<const double> breakpoints = {});

// Real spectrum sampled for several parameter values at once (e.g. one value
// per observation time): f(k, out) fills out[0..m).
using SpectrumFn = std::function<void(double k, std::span<double> out)>;

/// (1/pi) int_0^inf cos(kx) f_j(k) dk for every x in x_grid and j < m; returns
/// an m x n_x matrix. The [0, k_max] nodes are shared by all x; each x adds
/// its own accelerated tail, evaluated on a shared piecewise-Chebyshev
/// interpolant of f when the grid has more than one point. spec.k_max must
/// be resolved (> 0) by the caller.
Eigen::MatrixXd cosine_inversion(const SpectrumFn& f, std::size_t m, std::span<const double> x_grid,
                                 const QuadratureSpec& spec, std::span<const double> breakpoints = {});

// Wynn's epsilon algorithm; returns the highest-order even-column estimate.
double wynn_epsilon(std::span<const double> partial_sums);

// Composite Gauss-Legendre nodes on [a, b] split at the given breakpoints and
// with panels no wider than max_width.
struct Nodes {
  std::vector<double> k;
  std::vector<double> w;
};
Nodes composite_gauss(double a, double b, double max_width, int points_per_panel,
                      std::span<const double> breakpoints = {});

// Gauss-Legendre rule mapped to [a, b], appended to out.
void append_gauss(double a, double b, int points, Nodes& out);

}  // namespace fracrte
