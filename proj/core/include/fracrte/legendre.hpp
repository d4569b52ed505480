#pragma once

#include <span>
#include <vector>

#include "fracrte/random.hpp"

namespace fracrte {

// P_l(mu) by upward three-term recurrence.
double legendre_eval(int l, double mu);

// P_0..P_{out.size()-1} at mu.
void legendre_all(double mu, std::span<double> out);

// Gauss-Legendre nodes and weights on [-1,1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

/// Legendre-expanded scattering kernel p(mu, mu') = 1/2 sum_l beta_l P_l(mu) P_l(mu').
///
/// Construction enforces beta_0 = 1 and 0 < beta_l < 2l+1 and scans a
/// 512x512 grid for the sign of p. Kernels that dip below zero (for instance
/// L = 1 with beta_1 > 1) are admitted by the transport solvers, which only
/// see the moments; use require_nonnegative() where a probability density is
/// needed.
class PhaseFunction {
 public:
  explicit PhaseFunction(std::vector<double> beta);

  static PhaseFunction isotropic() { return PhaseFunction({1.0}); }
  // L = 1 kernel with anisotropy g (beta_1 = 3g).
  static PhaseFunction from_g(double g);
  // Throws InvalidPhaseFunction if p < 0 anywhere on the scan grid.
  static PhaseFunction require_nonnegative(std::vector<double> beta);

  int degree() const { return static_cast<int>(beta_.size()) - 1; }
  std::span<const double> beta() const { return beta_; }
  // beta_l, zero above the degree.
  double beta(int l) const { return l <= degree() ? beta_[l] : 0.0; }

  bool nonnegative() const { return min_value_ >= 0.0; }
  double min_value() const { return min_value_; }

  double operator()(double mu, double mu_prime) const;

  bool operator==(const PhaseFunction& o) const { return beta_ == o.beta_; }

 private:
  std::vector<double> beta_;
  double min_value_ = 0.0;
};

double phase_eval(const PhaseFunction& pf, double mu, double mu_prime);

// Mean cosine g = beta_1 / 3.
double anisotropy_g(const PhaseFunction& pf);

// Outgoing direction together with the Monte Carlo weight factor. For a
// non-negative kernel the weight is 1; for a signed kernel mu is drawn from
// |p(., mu')| and the weight is sign(p) * integral |p(., mu')|, so that
// E[weight * h(mu)] = integral p(mu, mu') h(mu) dmu holds either way.
struct PhaseSample {
  double mu;
  double weight;
};

PhaseSample phase_sample(const PhaseFunction& pf, double mu_prime, RandomStream& rng);

// integral_{-1}^{1} |p(mu, mu')| dmu
double phase_abs_norm(const PhaseFunction& pf, double mu_prime);

}  // namespace fracrte
