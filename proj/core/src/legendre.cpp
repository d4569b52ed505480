#include "fracrte/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracrte/errors.hpp"

namespace fracrte {

double legendre_eval(int l, double mu) {
  if (!(std::abs(mu) <= 1.0)) throw DomainError("legendre_eval: |mu| must not exceed 1");
  if (l < 0) throw DomainError("legendre_eval: degree must be non-negative");
  if (l == 0) return 1.0;
  double p0 = 1.0, p1 = mu;
  for (int n = 1; n < l; ++n) {
    const double p2 = ((2.0 * n + 1.0) * mu * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void legendre_all(double mu, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() > 1) out[1] = mu;
  for (std::size_t n = 1; n + 1 < out.size(); ++n)
    out[n + 1] = ((2.0 * n + 1.0) * mu * out[n] - n * out[n - 1]) / (n + 1.0);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

PhaseFunction::PhaseFunction(std::vector<double> beta) : beta_(std::move(beta)) {
  if (beta_.empty()) throw InvalidPhaseFunction("phase function needs beta_0");
  if (beta_[0] != 1.0) throw InvalidPhaseFunction("phase function requires beta_0 = 1");
  for (int l = 1; l <= degree(); ++l) {
    if (!(beta_[l] > 0.0 && beta_[l] < 2.0 * l + 1.0)) {
      std::ostringstream os;
      os << "phase function requires 0 < beta_" << l << " < " << 2 * l + 1 << ", got " << beta_[l];
      throw InvalidPhaseFunction(os.str());
    }
  }
  if (degree() == 0) {
    min_value_ = 0.5;
    return;
  }
  constexpr int kScan = 512;
  std::vector<std::vector<double>> pl(kScan, std::vector<double>(beta_.size()));
  for (int i = 0; i < kScan; ++i) legendre_all(-1.0 + 2.0 * i / (kScan - 1), pl[i]);
  min_value_ = 1.0;
  for (int i = 0; i < kScan; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < beta_.size(); ++l) s += beta_[l] * pl[i][l] * pl[j][l];
      min_value_ = std::min(min_value_, 0.5 * s);
    }
  }
}

PhaseFunction PhaseFunction::from_g(double g) {
  if (g == 0.0) return isotropic();
  return PhaseFunction({1.0, 3.0 * g});
}

PhaseFunction PhaseFunction::require_nonnegative(std::vector<double> beta) {
  PhaseFunction pf(std::move(beta));
  if (!pf.nonnegative()) {
    std::ostringstream os;
    os << "phase function takes the negative value " << pf.min_value() << " on the scan grid";
    throw InvalidPhaseFunction(os.str());
  }
  return pf;
}

double PhaseFunction::operator()(double mu, double mu_prime) const {
  if (!(std::abs(mu) <= 1.0 && std::abs(mu_prime) <= 1.0))
    throw DomainError("phase_eval: directions must lie in [-1,1]");
  double p0a = 1.0, p1a = mu, p0b = 1.0, p1b = mu_prime;
  double s = beta_[0];
  for (int l = 1; l <= degree(); ++l) {
    s += beta_[l] * p1a * p1b;
    const double p2a = ((2.0 * l + 1.0) * mu * p1a - l * p0a) / (l + 1.0);
    const double p2b = ((2.0 * l + 1.0) * mu_prime * p1b - l * p0b) / (l + 1.0);
    p0a = p1a;
    p1a = p2a;
    p0b = p1b;
    p1b = p2b;
  }
  return 0.5 * s;
}

double phase_eval(const PhaseFunction& pf, double mu, double mu_prime) { return pf(mu, mu_prime); }

double anisotropy_g(const PhaseFunction& pf) { return pf.degree() >= 1 ? pf.beta(1) / 3.0 : 0.0; }

double phase_abs_norm(const PhaseFunction& pf, double mu_prime) {
  if (pf.degree() == 0) return 1.0;
  if (pf.degree() == 1) {
    const double b = std::abs(pf.beta(1) * mu_prime);
    return b <= 1.0 ? 1.0 : 1.0 + (b - 1.0) * (b - 1.0) / (2.0 * b);
  }
  if (pf.nonnegative()) return 1.0;
  static const GaussRule rule = gauss_legendre(12);
  constexpr int kPanels = 256;
  double s = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double a = -1.0 + 2.0 * p / kPanels, h = 2.0 / kPanels;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += 0.5 * h * rule.weights[i] * std::abs(pf(a + 0.5 * h * (rule.nodes[i] + 1.0), mu_prime));
  }
  return s;
}

PhaseSample phase_sample(const PhaseFunction& pf, double mu_prime, RandomStream& rng) {
  if (!(std::abs(mu_prime) <= 1.0)) throw DomainError("phase_sample: |mu'| must not exceed 1");
  if (pf.degree() == 0) return {2.0 * rng.uniform() - 1.0, 1.0};

  if (pf.degree() == 1) {
    const double b = pf.beta(1) * mu_prime;
    if (std::abs(b) <= 1.0) {
      // Invert F(mu) = (mu+1)/2 + b (mu^2 - 1)/4.
      const double u = rng.uniform();
      const double qa = b / 4.0, qb = 0.5, qc = 0.5 - b / 4.0 - u;
      const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
      const double mu = -2.0 * qc / (qb + std::sqrt(disc));
      return {std::clamp(mu, -1.0, 1.0), 1.0};
    }
    const double envelope = 0.5 * (1.0 + std::abs(b));
    const double norm = phase_abs_norm(pf, mu_prime);
    for (;;) {
      const double mu = 2.0 * rng.uniform() - 1.0;
      const double p = 0.5 * (1.0 + b * mu);
      if (rng.uniform() * envelope <= std::abs(p)) return {mu, p >= 0.0 ? norm : -norm};
    }
  }

  double envelope = 0.0;
  for (int l = 0; l <= pf.degree(); ++l) envelope += 0.5 * pf.beta(l);
  const double norm = phase_abs_norm(pf, mu_prime);
  for (;;) {
    const double mu = 2.0 * rng.uniform() - 1.0;
    const double p = pf(mu, mu_prime);
    if (rng.uniform() * envelope <= std::abs(p)) return {mu, p >= 0.0 ? norm : -norm};
  }
}

}  // namespace fracrte
