#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "field.hpp"
#include "fracrte/diffusion.hpp"
#include "fracrte/errors.hpp"
#include "gen.hpp"

using namespace fracrte;
using fracrte::test::for_all;
using fracrte::test::Gen;
using fracrte::test::linspace;

namespace {

constexpr double kPi = std::numbers::pi;

DiffusionParams params(double alpha, double D0 = 1.0 / 3.0) {
  DiffusionParams dp;
  dp.alpha = alpha;
  dp.D0 = D0;
  return dp;
}

double heat_kernel(double x, double t, double D0) { return std::exp(-x * x / (4 * D0 * t)) / std::sqrt(4 * kPi * D0 * t); }

}  // namespace

TEST_CASE("d0: reference medium and isotropic unit case") {
  CHECK(d0(MediumParams::reference(0.5)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  MediumParams unit;
  unit.sigma_s = 1.0;
  unit.phase = PhaseFunction::isotropic();
  CHECK(d0(unit) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  MediumParams fast = unit;
  fast.v = 3.0;
  CHECK(d0(fast) == doctest::Approx(1.0).epsilon(1e-15));
  // g -> 1 blows up; g = 1 itself is not a valid kernel.
  CHECK(d0(MediumParams{.phase = PhaseFunction::from_g(0.999999)}) > 1e4);
  CHECK_THROWS_AS(PhaseFunction::from_g(1.0), InvalidPhaseFunction);
  const DiffusionParams dp = DiffusionParams::from_medium(MediumParams::reference(0.75));
  CHECK(dp.alpha == 0.75);
  CHECK(dp.D0 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("alpha = 1: both forms are the heat kernel") {
  const DiffusionParams dp = params(1.0);
  for (double x : {0.0, 0.5, 1.0}) {
    const double ref = heat_kernel(x, 0.01, dp.D0);
    CHECK(std::abs(diffusion_density_quadrature(x, 0.01, dp) - ref) <= 1e-8);
    CHECK(std::abs(diffusion_density_mwright(x, 0.01, dp) - ref) <= 1e-8);
  }
  for_all(50, 81, [](Gen& g, int) {
    const DiffusionParams dp = params(1.0, g.log_uniform(0.01, 10.0));
    const double x = g.uniform(-3.0, 3.0), t = g.log_uniform(1e-3, 10.0);
    const double ref = heat_kernel(x, t, dp.D0);
    CHECK(std::abs(diffusion_density_mwright(x, t, dp) - ref) <= 1e-12 * (1 + ref));
  });
}

TEST_CASE("M-Wright form: centre value at alpha = 1/2, t = 1") {
  // (sqrt 3 / 2) M_{1/4}(0) = (sqrt 3 / 2) / Gamma(3/4).
  const double v = diffusion_density_mwright(0.0, 1.0, params(0.5));
  CHECK(v == doctest::Approx(std::sqrt(3.0) / 2 / 1.2254167024651776451).epsilon(1e-13));
  CHECK(v == doctest::Approx(0.7067191120).epsilon(1e-9));
  CHECK(std::abs(diffusion_density_quadrature(0.0, 0.1, params(0.5)) - diffusion_density_mwright(0.0, 0.1, params(0.5))) <= 1e-8);
}

TEST_CASE("cross-method: quadrature equals M-Wright on a 41 x 3 grid") {
  const std::vector<double> x = linspace(-2.0, 2.0, 41), t{0.01, 0.1, 1.0};
  for (double alpha : {0.25, 0.5, 0.75}) {
    const DiffusionParams dp = params(alpha);
    const DensityField q = diffusion_density_quadrature(x, t, dp);
    const DensityField m = diffusion_density_mwright(x, t, dp);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 41; ++i) {
        INFO("alpha=" << alpha << " t=" << t[j] << " x=" << x[i]);
        CHECK(std::abs(q.values(j, i) - m.values(j, i)) <= 1e-6 * (1 + std::abs(m.values(j, i))));
      }
    CHECK(q.method == DensityMethod::diffusion);
  }
}

TEST_CASE("unit mass and second moment 2 D0 t^a / Gamma(1 + a)") {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
    for (double t : {0.01, 0.3, 2.0}) {
      const DiffusionParams dp = params(alpha);
      const auto u = [&](double x) { return diffusion_density_mwright(x, t, dp); };
      const double mass = 2 * integrator.integrate(u, 1e-12);
      const double m2 = 2 * integrator.integrate([&](double x) { return x * x * u(x); }, 1e-12);
      CHECK(std::abs(mass - 1.0) <= 1e-8);
      CHECK(std::abs(m2 - 2 * dp.D0 * std::pow(t, alpha) / std::tgamma(1 + alpha)) <= 1e-6);
    }
  }
}

TEST_CASE("self-similarity: t^{a/2} U(x t^{a/2}, t) is one profile") {
  for_all(100, 82, [](Gen& g, int) {
    const DiffusionParams dp = params(g.uniform(0.1, 1.0), g.log_uniform(0.1, 3.0));
    const double t1 = g.log_uniform(1e-3, 10.0), t2 = g.log_uniform(1e-3, 10.0), z = g.uniform(0.0, 4.0);
    const double s1 = std::pow(t1, dp.alpha / 2), s2 = std::pow(t2, dp.alpha / 2);
    const double f1 = s1 * diffusion_density_mwright(z * s1, t1, dp);
    const double f2 = s2 * diffusion_density_mwright(z * s2, t2, dp);
    CHECK(std::abs(f1 - f2) <= 1e-8 * std::max(1.0, f1));
  });
}

TEST_CASE("positivity and evenness") {
  for_all(200, 83, [](Gen& g, int) {
    const DiffusionParams dp = params(g.uniform(0.1, 1.0));
    // Similarity variable up to 6 keeps the density far above underflow.
    const double t = g.log_uniform(1e-3, 1.0), x = g.uniform(0.0, 6.0) * std::sqrt(dp.D0 * std::pow(t, dp.alpha));
    const double u = diffusion_density_mwright(x, t, dp);
    CHECK(u > 0.0);
    CHECK(diffusion_density_mwright(-x, t, dp) == u);
  });
}

TEST_CASE("absorption: quadrature mass E_a(-sigma_a t^a), closed form refused") {
  for (double alpha : {0.5, 1.0}) {
    DiffusionParams dp = params(alpha);
    dp.sigma_a = 1.0;
    const double t = 0.1;
    const std::vector<double> ts{t};
    double m = 0.0;
    for (const test::Window& win : test::half_line_segments(6.0)) {
      const DensityField f = diffusion_density_quadrature(win.x, ts, dp);
      for (std::size_t i = 0; i < win.x.size(); ++i) m += 2 * win.w[i] * f.values(0, static_cast<Eigen::Index>(i));
    }
    CHECK(std::abs(m - mittag_leffler_real(alpha, -std::pow(t, alpha))) <= 1e-6);
    CHECK_THROWS_AS(diffusion_density_mwright(0.1, t, dp), ConfigError);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(diffusion_density_mwright(0.0, 0.0, params(0.5)), DomainError);
  CHECK_THROWS_AS(params(1.5).validate(), ConfigError);
  CHECK_THROWS_AS(params(0.5, -1.0).validate(), ConfigError);
}
