#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fracrte/errors.hpp"
#include "fracrte/specfun.hpp"
#include "gen.hpp"

using namespace fracrte;
using fracrte::test::for_all;
using fracrte::test::Gen;

namespace {

using mp = boost::multiprecision::cpp_bin_float_50;

// Taylor series of E_a(z) in 50-digit arithmetic, summed until the terms are
// below 1e-45 of the running maximum. Usable where |z|^{1/a} stays below ~60
// so cancellation leaves well over 16 digits.
cplx ml_oracle(double alpha, cplx z) {
  const mp zr = z.real(), zi = z.imag();
  mp pr = 1, pi = 0, sr = 0, si = 0, peak = 0;
  for (int n = 0; n < 20000; ++n) {
    const mp g = boost::math::tgamma(mp(alpha) * n + 1);
    const mp tr = pr / g, ti = pi / g;
    sr += tr;
    si += ti;
    const mp mag = abs(tr) + abs(ti);
    peak = std::max(peak, mag);
    if (n > 10 && mag < peak * mp(1e-45) && mp(n) * alpha > 2 * pow(abs(zr) + abs(zi), 1 / mp(alpha)))
      break;
    const mp nr = pr * zr - pi * zi;
    pi = pr * zi + pi * zr;
    pr = nr;
  }
  return {static_cast<double>(sr), static_cast<double>(si)};
}

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("mittag_leffler: frozen values from the extended-precision series") {
  CHECK(mittag_leffler_real(0.5, -1.0) == doctest::Approx(0.42758357615580700441).epsilon(1e-13));
  CHECK(std::exp(1.0) * boost::math::erfc(1.0) == doctest::Approx(0.42758357615580700441).epsilon(1e-14));

  const cplx frozen(0.57253996579591764073, 0.16415895553058265218);
  const cplx z = -cplx(0.5, -0.3);
  CHECK(rel_err(mittag_leffler(0.75, z), frozen) < 1e-12);
  CHECK(rel_err(ml_oracle(0.75, z), frozen) < 1e-15);
}

TEST_CASE("mittag_leffler: E_a(0) = 1 exactly") {
  for (double a : {0.1, 0.25, 0.5, 0.75, 1.0, 1.3, 2.0}) CHECK(mittag_leffler(a, 0.0) == cplx(1.0, 0.0));
}

TEST_CASE("mittag_leffler: E_1 is exp on |z| <= 10") {
  for_all(400, 11, [](Gen& g, int) {
    const double r = g.uniform(0.0, 10.0), th = g.uniform(-std::numbers::pi, std::numbers::pi);
    const cplx z = std::polar(r, th);
    CHECK(rel_err(mittag_leffler(1.0, z), std::exp(z)) <= 1e-10);
  });
}

TEST_CASE("mittag_leffler: E_2(-x^2) = cos x on [0, 5]") {
  for (int i = 0; i <= 200; ++i) {
    const double x = 5.0 * i / 200;
    CHECK(std::abs(mittag_leffler_real(2.0, -x * x) - std::cos(x)) <= 1e-10);
  }
}

TEST_CASE("mittag_leffler: E_1/2(z) = exp(z^2) erfc(-z) on real z") {
  for (int i = 0; i <= 120; ++i) {
    const double z = -6.0 + 9.0 * i / 120;
    const double ref = std::exp(z * z) * boost::math::erfc(-z);
    CHECK(std::abs(mittag_leffler_real(0.5, z) - ref) <= 1e-8 * std::abs(ref));
  }
}

TEST_CASE("mittag_leffler: duplication identity E_a(z) + E_a(-z) = 2 E_2a(z^2)") {
  for_all(300, 12, [](Gen& g, int) {
    const double a = g.pick(std::vector<double>{0.25, 0.375, 0.5});
    const cplx z = std::polar(g.uniform(0.0, 3.0), g.uniform(-std::numbers::pi, std::numbers::pi));
    const cplx rhs = 2.0 * mittag_leffler(2.0 * a, z * z);
    const cplx lhs = mittag_leffler(a, z) + mittag_leffler(a, -z);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs) / 2.0));
  });
}

TEST_CASE("mittag_leffler: agrees with the 50-digit series oracle") {
  for_all(150, 13, [](Gen& g, int i) {
    const double a = g.uniform(0.2, 1.5);
    const double rmax = std::min(6.0, std::pow(40.0, a));
    const cplx z = std::polar(g.uniform(0.0, rmax), g.uniform(-std::numbers::pi, std::numbers::pi));
    const cplx ref = ml_oracle(a, z);
    INFO("case " << i << " alpha=" << a << " z=" << z);
    CHECK(std::abs(mittag_leffler(a, z) - ref) <= 1e-8 * std::max(std::abs(ref), 1e-3));
  });
}

TEST_CASE("mittag_leffler: E_a(-x) is in (0, 1] and non-increasing for 0 < a <= 1") {
  // x stops at 10^2.8 so exp(-x) at a = 1 stays above the double underflow.
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    double prev = 1.0;
    for (int i = 0; i <= 400; ++i) {
      const double x = std::pow(10.0, -3.0 + 5.8 * i / 400);
      const double e = mittag_leffler_real(a, -x);
      CHECK(e > 0.0);
      CHECK(e <= prev * (1.0 + 1e-12));
      prev = e;
    }
  }
}

TEST_CASE("mittag_leffler: domain and configuration errors") {
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(2.5, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.5, cplx(std::nan(""), 0.0)), DomainError);
  MLEvalConfig bad;
  bad.target_rel_tol = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("m_wright: closed form at nu = 1/2 and the frozen nu = 1/4 value") {
  CHECK(m_wright(0.5, 1.0) == doctest::Approx(std::exp(-0.25) / std::sqrt(std::numbers::pi)).epsilon(1e-12));
  for (double x : {0.0, 0.3, 1.7, 4.0, 9.0})
    CHECK(m_wright(0.5, x) == doctest::Approx(std::exp(-x * x / 4) / std::sqrt(std::numbers::pi)).epsilon(1e-10));
  CHECK(m_wright(0.25, 2.0) == doctest::Approx(0.16125108345458585591).epsilon(1e-10));
  CHECK(m_wright(0.3, 0.0) == doctest::Approx(1.0 / std::tgamma(0.7)).epsilon(1e-13));
}

TEST_CASE("m_wright: values near the series/integral switch for nu close to 1") {
  // 30-digit references (mpmath Wright function).
  CHECK(m_wright(0.9, 0.5) == doctest::Approx(0.280041742087365848).epsilon(1e-12));
  CHECK(m_wright(0.9, 0.9999) == doctest::Approx(1.007894885639343).epsilon(1e-12));
  CHECK(m_wright(0.9, 1.0) == doctest::Approx(1.008146745621271).epsilon(1e-12));
  CHECK(m_wright(0.9, 1.0001) == doctest::Approx(1.008398637403392).epsilon(1e-10));
  CHECK(m_wright(0.75, 1.0) == doctest::Approx(0.606598543590276).epsilon(1e-12));
}

TEST_CASE("m_wright: non-negative with unit half-line mass") {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double nu : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    for (int i = 0; i <= 100; ++i) CHECK(m_wright(nu, 0.2 * i) >= 0.0);
    const double mass = integrator.integrate([nu](double x) { return m_wright(nu, x); }, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("f_alpha_half: closed form and unit mass") {
  CHECK(f_alpha_half(1.0) == doctest::Approx(std::exp(-0.25) / (2 * std::sqrt(std::numbers::pi))).epsilon(1e-14));
  CHECK(f_alpha_half(1.0) == doctest::Approx(0.2196956447).epsilon(1e-9));
  boost::math::quadrature::exp_sinh<double> integrator;
  CHECK(integrator.integrate(f_alpha_half, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(stable_density(0.5, 1.0) == doctest::Approx(f_alpha_half(1.0)).epsilon(1e-10));
}

TEST_CASE("stable_density: frozen reference values and unit mass") {
  // 40-digit values of the Laplace inversion of exp(-s^a).
  CHECK(stable_density(0.25, 10.0) == doctest::Approx(0.00761501846).epsilon(1e-8));
  CHECK(stable_density(0.75, 1000.0) == doctest::Approx(1.16997656e-6).epsilon(1e-7));
  CHECK(stable_density(0.75, 1.0) == doctest::Approx(0.4549489077).epsilon(1e-9));
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double a : {0.3, 0.6, 0.8}) {
    const double mass = integrator.integrate([a](double t) { return stable_density(a, t); }, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("stable_density: Talbot cross-check where the contour is valid") {
  for (double t : {0.05, 0.3, 1.0, 4.0}) {
    CHECK(stable_density_talbot(0.5, t) == doctest::Approx(f_alpha_half(t)).epsilon(1e-6));
    CHECK(stable_density_talbot(0.3, t) == doctest::Approx(stable_density(0.3, t)).epsilon(1e-6));
  }
}

TEST_CASE("rgamma: reciprocal gamma with zeros at the poles") {
  CHECK(rgamma(0.0) == 0.0);
  CHECK(rgamma(-3.0) == 0.0);
  CHECK(rgamma(0.75) == doctest::Approx(1.0 / 1.2254167024651776451).epsilon(1e-14));
  CHECK(rgamma(5.0) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
}
