#include "fracrte/ctrw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracrte/errors.hpp"
#include "fracrte/parallel.hpp"

namespace fracrte {
namespace {

constexpr std::uint64_t kBlock = 4096;

struct Accumulator {
  Eigen::MatrixXd w;   // times x bins
  Eigen::MatrixXd w2;
  std::vector<double> alive;
};

}  // namespace

void CTRWParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(xi_s > 0.0 && xi_s <= xi_t && xi_t < 1.0)) throw ConfigError("require 0 < xi_s <= xi_t < 1");
  if (!(xi_a >= 0.0)) throw ConfigError("xi_a must be non-negative");
  if (!(r > 0.0)) throw ConfigError("jump length r must be positive");
}

CTRWParams map_params(const MediumParams& params, double tau) {
  params.validate();
  if (!(tau > 0.0)) throw DomainError("map_params: tau must be positive");
  const double ta = std::pow(tau, params.alpha);
  CTRWParams cp;
  cp.alpha = params.alpha;
  cp.tau = tau;
  cp.xi_t = params.sigma_t() * ta;
  if (!(cp.xi_t < 1.0)) {
    std::ostringstream os;
    os << "sigma_t tau^alpha = " << cp.xi_t << " >= 1; choose tau below " << std::pow(1.0 / params.sigma_t(), 1.0 / params.alpha);
    throw ScaleError(os.str());
  }
  cp.xi_s = params.sigma_s * ta;
  cp.xi_a = cp.xi_t - cp.xi_s;
  cp.r = params.v * ta / (1.0 - cp.xi_t);
  return cp;
}

double tau_for_xi(const MediumParams& params, double xi_target) {
  params.validate();
  if (!(xi_target > 0.0 && xi_target < 1.0)) throw DomainError("tau_for_xi: target must lie in (0, 1)");
  return std::pow(xi_target / params.sigma_t(), 1.0 / params.alpha);
}

double sample_waiting_time(double alpha, double tau, RandomStream& rng) {
  const double u = rng.uniform();
  if (alpha == 1.0) return -tau * std::log(u);
  const double v = rng.uniform();
  const double ap = alpha * std::numbers::pi;
  const double shape = std::sin(ap) / std::tan(ap * v) - std::cos(ap);
  return -tau * std::log(u) * std::pow(shape, 1.0 / alpha);
}

WalkerState step(const WalkerState& w, const CTRWParams& cp, const PhaseFunction& pf, RandomStream& rng) {
  if (!w.alive) throw LogicError("step called on an absorbed walker");
  WalkerState next = w;
  next.clock += sample_waiting_time(cp.alpha, cp.tau, rng);
  const double u = rng.uniform();
  if (u < cp.xi_s) {
    const PhaseSample s = phase_sample(pf, w.mu, rng);
    next.mu = s.mu;
    next.weight *= s.weight;
  } else if (u < cp.xi_t) {
    next.alive = false;
  } else {
    next.x += w.mu * cp.r;
  }
  return next;
}

CTRWResult simulate_density(std::uint64_t n_walkers, std::span<const double> t_obs, std::span<const double> x_grid,
                            const MediumParams& params, double tau, std::uint64_t seed) {
  if (n_walkers < 1) throw DomainError("simulate_density: need at least one walker");
  if (t_obs.empty()) throw DomainError("simulate_density: no observation times");
  for (std::size_t j = 0; j < t_obs.size(); ++j)
    if (!(t_obs[j] > 0.0) || (j > 0 && !(t_obs[j] > t_obs[j - 1])))
      throw DomainError("simulate_density: observation times must be positive and increasing");
  if (x_grid.size() < 2) throw DomainError("simulate_density: need at least two bins");
  const double h = (x_grid.back() - x_grid.front()) / static_cast<double>(x_grid.size() - 1);
  if (!(h > 0.0)) throw DomainError("simulate_density: bin centres must increase");
  const double left = x_grid.front() - 0.5 * h;
  const std::size_t nb = x_grid.size(), nt = t_obs.size();

  const CTRWParams cp = map_params(params, tau);
  const PhaseFunction& pf = params.phase;
  const std::uint64_t n_blocks = (n_walkers + kBlock - 1) / kBlock;
  std::vector<Accumulator> blocks(n_blocks);

  parallel_for(n_blocks, [&](std::size_t b) {
    Accumulator& acc = blocks[b];
    acc.w = Eigen::MatrixXd::Zero(nt, nb);
    acc.w2 = Eigen::MatrixXd::Zero(nt, nb);
    acc.alive.assign(nt, 0.0);
    const std::uint64_t end = std::min<std::uint64_t>(n_walkers, (b + 1) * kBlock);
    for (std::uint64_t i = b * kBlock; i < end; ++i) {
      RandomStream rng(seed, i);
      WalkerState w;
      w.mu = 2.0 * rng.uniform() - 1.0;
      std::size_t j = 0;
      while (j < nt) {
        const WalkerState next = step(w, cp, pf, rng);
        // Observations strictly before the event see the pre-event state.
        for (; j < nt && t_obs[j] < next.clock; ++j) {
          acc.alive[j] += 1.0;
          const double pos = (w.x - left) / h;
          if (pos >= 0.0 && pos < static_cast<double>(nb)) {
            const auto bin = static_cast<Eigen::Index>(pos);
            acc.w(j, bin) += w.weight;
            acc.w2(j, bin) += w.weight * w.weight;
          }
        }
        if (!next.alive) break;
        w = next;
      }
    }
  });

  Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(nt, nb), sw2 = Eigen::MatrixXd::Zero(nt, nb);
  std::vector<double> alive(nt, 0.0);
  for (const Accumulator& acc : blocks) {
    sw += acc.w;
    sw2 += acc.w2;
    for (std::size_t j = 0; j < nt; ++j) alive[j] += acc.alive[j];
  }

  const double n = static_cast<double>(n_walkers);
  CTRWResult res;
  res.field.x_grid.assign(x_grid.begin(), x_grid.end());
  res.field.times.assign(t_obs.begin(), t_obs.end());
  res.field.method = DensityMethod::ctrw;
  res.field.params_fingerprint = params_fingerprint(params, -1);
  const Eigen::MatrixXd mean = sw / n;
  const Eigen::MatrixXd var = (sw2 / n - mean.cwiseProduct(mean)).cwiseMax(0.0) / n;
  res.field.values = mean / h;
  res.field.sigma = var.cwiseSqrt() / h;
  for (std::size_t j = 0; j < nt; ++j) {
    const double p = alive[j] / n;
    res.survival.push_back(p);
    res.survival_sigma.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return res;
}

}  // namespace fracrte
