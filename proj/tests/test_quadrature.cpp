#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fracrte/errors.hpp"
#include "fracrte/quadrature.hpp"
#include "gen.hpp"

using namespace fracrte;
using fracrte::test::for_all;
using fracrte::test::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureSpec spec_with(double k_max, TailMode tail = TailMode::accelerated) {
  QuadratureSpec s;
  s.k_max = k_max;
  s.tail_mode = tail;
  return s;
}

}  // namespace

TEST_CASE("fourier_inversion: Gaussian pair") {
  const auto f = [](double k) { return cplx(std::exp(-0.5 * k * k), 0.0); };
  for (double x : {0.0, 0.3, 1.0, 2.5, 6.0}) {
    const double ref = std::exp(-0.5 * x * x) / std::sqrt(2 * kPi);
    CHECK(std::abs(fourier_inversion(f, x, spec_with(12.0)) - ref) <= 1e-12);
  }
}

TEST_CASE("fourier_inversion: reference transform pairs") {
  const auto gauss = [](double k) { return cplx(std::exp(-k * k), 0.0); };
  const auto lorentz = [](double k) { return cplx(1.0 / (1.0 + k * k), 0.0); };
  CHECK(fourier_inversion(gauss, 1.0, spec_with(10.0)) == doctest::Approx(0.2196956).epsilon(1e-6));
  CHECK(fourier_inversion(lorentz, 2.0, spec_with(20.0)) == doctest::Approx(0.0676676).epsilon(1e-6));
}

TEST_CASE("fourier_inversion: algebraic tail 1/(1+k^2) gives exp(-|x|)/2") {
  const auto f = [](double k) { return cplx(1.0 / (1.0 + k * k), 0.0); };
  for (double x : {0.05, 0.2, 1.0, 3.0}) {
    CHECK(std::abs(fourier_inversion(f, x, spec_with(20.0)) - 0.5 * std::exp(-x)) <= 1e-9);
    CHECK(std::abs(fourier_inversion(f, -x, spec_with(20.0)) - 0.5 * std::exp(-x)) <= 1e-9);
  }
  // At x = 0 the tail is mapped onto a finite interval.
  CHECK(std::abs(fourier_inversion(f, 0.0, spec_with(20.0)) - 0.5) <= 1e-9);
}

TEST_CASE("fourier_inversion: shifted Lorentzian exercises the sine part") {
  // f(k) = exp(-(a - ic) k) inverts to (a/pi) / (a^2 + (x + c)^2).
  for_all(40, 61, [](Gen& g, int) {
    const double a = g.uniform(0.3, 3.0), c = g.uniform(-2.0, 2.0), x = g.uniform(-3.0, 3.0);
    const auto f = [a, c](double k) { return std::exp(-cplx(a, -c) * k); };
    const double ref = a / kPi / (a * a + (x + c) * (x + c));
    CHECK(std::abs(fourier_inversion(f, x, spec_with(60.0 / a)) - ref) <= 1e-10);
  });
}

TEST_CASE("fourier_inversion: truncated integral against a dense trapezoid oracle") {
  // Without a tail both methods compute (1/pi) int_0^1000 cos(kx) f(k) dk.
  const auto fr = [](double k) { return 1.0 / std::sqrt(1.0 + k); };
  const auto f = [&](double k) { return cplx(fr(k), 0.0); };
  constexpr long n = 10000000;
  constexpr double K = 1000.0, h = K / n;
  for (double x : {0.0, 0.37, 2.0}) {
    double s = 0.5 * (fr(0.0) + fr(K) * std::cos(K * x));
    for (long i = 1; i < n; ++i) s += fr(i * h) * std::cos(i * h * x);
    const double oracle = s * h / kPi;
    CHECK(std::abs(fourier_inversion(f, x, spec_with(K, TailMode::none)) - oracle) <= 1e-4);
  }
}

TEST_CASE("cosine_inversion: grid evaluation agrees with pointwise inversion") {
  const SpectrumFn f = [](double k, std::span<double> out) {
    out[0] = std::exp(-0.5 * k * k);
    out[1] = 1.0 / (1.0 + k * k);
    out[2] = std::exp(-0.2 * k) / (1.0 + k);
  };
  std::vector<double> x;
  for (int i = -20; i <= 20; ++i) x.push_back(0.1 * i);
  const QuadratureSpec spec = spec_with(30.0);
  const Eigen::MatrixXd grid = cosine_inversion(f, 3, x, spec);
  REQUIRE(grid.rows() == 3);
  REQUIRE(grid.cols() == 41);
  for (int j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto fj = [&](double k) {
        double out[3];
        f(k, out);
        return cplx(out[j], 0.0);
      };
      CHECK(std::abs(grid(j, static_cast<Eigen::Index>(i)) - fourier_inversion(fj, x[i], spec)) <= 1e-8);
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(grid(0, static_cast<Eigen::Index>(i)) - std::exp(-0.5 * x[i] * x[i]) / std::sqrt(2 * kPi)) <= 1e-10);
    CHECK(std::abs(grid(1, static_cast<Eigen::Index>(i)) - 0.5 * std::exp(-std::abs(x[i]))) <= 1e-8);
  }
}

TEST_CASE("fourier_inversion: mollifier multiplies the spectrum by a Gaussian") {
  // A flat spectrum inverts to the mollifier itself: a Gaussian of width eps.
  QuadratureSpec s = spec_with(40.0);
  s.mollifier_width = 0.5;
  const auto flat = [](double) { return cplx(1.0, 0.0); };
  for (double x : {0.0, 0.4, 1.3}) {
    const double ref = std::exp(-0.5 * x * x / 0.25) / std::sqrt(2 * kPi * 0.25);
    CHECK(std::abs(fourier_inversion(flat, x, s) - ref) <= 1e-10);
  }
}

TEST_CASE("wynn_epsilon: accelerates alternating and geometric series") {
  std::vector<double> ps;
  double s = 0.0;
  for (int n = 1; n <= 20; ++n) {
    s += (n % 2 ? 1.0 : -1.0) / n;
    ps.push_back(s);
  }
  CHECK(std::abs(wynn_epsilon(ps) - std::log(2.0)) <= 1e-10);
  CHECK(std::abs(ps.back() - std::log(2.0)) > 1e-3);

  ps.clear();
  s = 0.0;
  for (int n = 0; n < 5; ++n) {
    s += std::pow(-0.9, n);
    ps.push_back(s);
  }
  // A geometric sequence is resolved exactly by the first epsilon column.
  CHECK(std::abs(wynn_epsilon(ps) - 1.0 / 1.9) <= 1e-13);
}

TEST_CASE("composite_gauss: exact on polynomials, honours breakpoints and widths") {
  for_all(50, 62, [](Gen& g, int) {
    const double a = g.uniform(-3.0, 0.0), b = a + g.uniform(0.1, 5.0);
    const double width = g.uniform(0.05, 2.0);
    const double bp = g.uniform(a, b);
    const double bps[] = {bp, b + 1.0};
    const Nodes n = composite_gauss(a, b, width, 8, bps);
    double s = 0.0;
    for (std::size_t i = 0; i < n.k.size(); ++i) {
      CHECK(n.k[i] > a);
      CHECK(n.k[i] < b);
      s += n.w[i] * (3 * n.k[i] * n.k[i] - 2 * std::pow(n.k[i], 5));
    }
    const double ref = (b * b * b - std::pow(b, 6) / 3) - (a * a * a - std::pow(a, 6) / 3);
    CHECK(s == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
    // Nodes per panel times the panel count implied by the width and the breakpoint.
    CHECK(n.k.size() >= 8 * static_cast<std::size_t>(std::ceil((b - a) / width)));
  });
}

TEST_CASE("QuadratureSpec::validate and tail mode names") {
  QuadratureSpec s;
  CHECK_NOTHROW(s.validate());
  s.nodes_per_halfperiod = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.k_max = -1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.mollifier_width = -0.1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  CHECK(tail_mode_from_string(to_string(TailMode::none)) == TailMode::none);
  CHECK(tail_mode_from_string(to_string(TailMode::accelerated)) == TailMode::accelerated);
  CHECK_THROWS_AS(tail_mode_from_string("asymptotic"), ConfigError);
}
