#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "field.hpp"
#include "fracrte/diffusion.hpp"
#include "fracrte/errors.hpp"
#include "fracrte/specfun.hpp"
#include "fracrte/subordination.hpp"
#include "gen.hpp"

using namespace fracrte;
using fracrte::test::for_all;
using fracrte::test::Gen;
using fracrte::test::linspace;

namespace {

constexpr double kPi = std::numbers::pi;

double kernel_integral(const SubordinationKernel& k, double (*g)(double)) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.nodes().size(); ++i) s += k.weights()[i] * g(k.nodes()[i]);
  return s;
}

}  // namespace

TEST_CASE("kernel_phi: closed form at alpha = 1/2") {
  CHECK(kernel_phi(1.0, 1.0, 0.5) == doctest::Approx(0.4393913).epsilon(1e-6));
  CHECK(kernel_phi(1.0, 1.0, 0.5) == doctest::Approx(2 * stable_density(0.5, 1.0)).epsilon(1e-12));
  // The closed form agrees with the general stable-density route.
  for_all(50, 101, [](Gen& g, int) {
    const double tau = g.log_uniform(1e-2, 10.0), t = g.log_uniform(1e-2, 10.0);
    const double s = t / (tau * tau);
    const double general = t / (0.5 * tau * tau * tau) * stable_density(0.5, s);
    CHECK(kernel_phi(tau, t, 0.5) == doctest::Approx(general).epsilon(1e-10).scale(1e-300));
  });
  CHECK_THROWS_AS(kernel_phi(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(kernel_phi(1.0, -1.0, 0.5), DomainError);
}

TEST_CASE("kernel_phi: non-negative") {
  for_all(300, 102, [](Gen& g, int) {
    const double alpha = g.uniform(0.1, 0.95);
    CHECK(kernel_phi(g.log_uniform(1e-4, 1e2), g.log_uniform(1e-3, 10.0), alpha) >= 0.0);
  });
}

TEST_CASE("SubordinationKernel: unit mass") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (double t : {0.01, 0.1, 0.3, 1.0}) {
      INFO("alpha=" << alpha << " t=" << t);
      CHECK(std::abs(SubordinationKernel(alpha, t).mass() - 1.0) <= 1e-6);
    }
}

TEST_CASE("SubordinationKernel: first moment t^a / Gamma(1 + a)") {
  // Laplace transform s^{a-1} exp(-tau s^a) of phi gives the mean in tau.
  for (double alpha : {0.25, 0.5, 0.75, 0.999})
    for (double t : {0.1, 1.0}) {
      const SubordinationKernel k(alpha, t);
      const double ref = std::pow(t, alpha) / std::tgamma(1 + alpha);
      INFO("alpha=" << alpha << " t=" << t);
      CHECK(kernel_integral(k, [](double tau) { return tau; }) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("SubordinationKernel: alpha near 1 concentrates at tau = t" * doctest::should_fail()) {
  // The mean is t^a / Gamma(1 + a), 4.2e-4 above t at alpha = 0.999, t = 1:
  // the approach to delta(tau - t) is first order in 1 - alpha, too slow for
  // a 1e-4 tolerance.
  const SubordinationKernel k(0.999, 1.0);
  CHECK(std::abs(kernel_integral(k, [](double tau) { return tau; }) - 1.0) <= 1e-4);
}

TEST_CASE("subordinate_density: constants are reproduced") {
  const SubordinationKernel k(0.5, 0.2);
  CHECK(subordinate_density([](double, double) { return 3.5; }, 0.1, k) == doctest::Approx(3.5).epsilon(1e-12));
  const std::vector<double> x{-1.0, 0.0, 2.0};
  const FieldProvider ones = [](std::span<const double> xs, std::span<const double> taus) {
    return Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(taus.size()), static_cast<Eigen::Index>(xs.size()), 2.0);
  };
  const Eigen::VectorXd v = subordinate_density(ones, x, k);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(v[i] == doctest::Approx(2.0).epsilon(1e-12));
  const FieldProvider wrong = [](std::span<const double>, std::span<const double>) { return Eigen::MatrixXd(1, 1); };
  CHECK_THROWS_AS(subordinate_density(wrong, x, k), LogicError);
}

TEST_CASE("subordinate_density: heat kernel becomes the fractional diffusion density") {
  const double D0 = 1.0 / 3.0;
  const auto heat = [D0](double x, double tau) {
    return std::exp(-x * x / (4 * D0 * tau)) / std::sqrt(4 * kPi * D0 * tau);
  };
  DiffusionParams dp;
  dp.D0 = D0;
  for (double alpha : {0.5, 0.75}) {
    dp.alpha = alpha;
    for (double t : {0.1, 1.0}) {
      const SubordinationKernel k(alpha, t, 1e-2);
      for (double x : {0.05, 0.3, 1.0, 2.0}) {
        INFO("alpha=" << alpha << " t=" << t << " x=" << x);
        CHECK(std::abs(subordinate_density(heat, x, k) - diffusion_density_mwright(x, t, dp)) <= 1e-5);
      }
    }
  }
}

TEST_CASE("subordinated transport equals the direct fractional solution") {
  MediumParams p = MediumParams::reference(0.5);
  p.phase = PhaseFunction::isotropic();
  const std::vector<double> x = linspace(-1.0, 1.0, 161), t{0.05};
  const DensityField sub = subordinated_energy_density(x, t, p, 1, EvolutionMode::exact);
  // The subordinated field inherits the alpha = 1 mollifier; use it directly too.
  QuadratureSpec spec;
  spec.mollifier_width = 0.01;
  const DensityField direct = energy_density(x, t, p, 1, EvolutionMode::exact, spec);
  const std::vector<double> a(sub.values.data(), sub.values.data() + sub.values.size());
  const std::vector<double> b(direct.values.data(), direct.values.data() + direct.values.size());
  CHECK(test::relative_l1(a, b) <= 1e-3);
  CHECK(sub.method == DensityMethod::subordination);
}

TEST_CASE("SubordinationKernel: argument checks") {
  CHECK_THROWS_AS(SubordinationKernel(1.0, 0.1), DomainError);
  CHECK_THROWS_AS(SubordinationKernel(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(SubordinationKernel(0.5, 0.1, -1.0), DomainError);
}
