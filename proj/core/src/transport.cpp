#include "fracrte/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "fracrte/errors.hpp"
#include "fracrte/legendre.hpp"

namespace fracrte {
namespace {

constexpr double kDefaultMollifier = 0.01;
constexpr double kMaxDefaultKMax = 4000.0;
constexpr double kMaxOscillationKMax = 1e5;
constexpr int kDisplacementTries = 4;

void check_times(std::span<const double> times) {
  for (double t : times)
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("observation times must be positive and finite");
}

// sum_n v_n (v_n^H c0) / |v_n|^2 E_a(-lambda_n t^a): the eigen-expansion that
// treats the right eigenvectors as orthonormal.
CVector paper_action(const ModeDecomposition& dec, double t, double alpha, const CVector& c0, const MLEvalConfig& ml) {
  if (t == 0.0) return c0;
  const double ta = std::pow(t, alpha);
  CVector out = CVector::Zero(c0.size());
  for (Eigen::Index n = 0; n < dec.eigenvalues.size(); ++n) {
    const auto v = dec.right.col(n);
    const cplx proj = v.dot(c0) / v.squaredNorm();
    out += v * (proj * mittag_leffler(alpha, -dec.eigenvalues[n] * ta, ml));
  }
  return out;
}

CVector act(const ModeDecomposition& dec, double t, double alpha, const CVector& c0, EvolutionMode mode,
            const MLEvalConfig& ml) {
  return mode == EvolutionMode::exact ? ml_matrix_action(dec, t, alpha, c0, ml) : paper_action(dec, t, alpha, c0, ml);
}

void require_closed_form_params(const MediumParams& params) {
  params.validate();
  if (params.phase.degree() > 1) throw ConfigError("closed N=1 form requires a phase function of degree L <= 1");
  if (params.sigma_a != 0.0) throw ConfigError("closed N=1 form requires sigma_a = 0");
}

}  // namespace

CoefficientVector initial_coefficients(double mu0, int n) {
  if (!(std::abs(mu0) <= 1.0)) throw DomainError("initial_coefficients: |mu0| must not exceed 1");
  if (n < 0) throw DomainError("initial_coefficients: N must be non-negative");
  CoefficientVector cv;
  cv.mu0 = mu0;
  cv.c.resize(n + 1);
  for (int l = 0; l <= n; ++l) cv.c[l] = std::sqrt(2.0 * l + 1.0) * legendre_eval(l, mu0) / 2.0;
  return cv;
}

ModeDecomposition decompose_regular(double k, const MediumParams& params, int n) {
  double kk = k;
  for (int attempt = 0; attempt < kDisplacementTries; ++attempt) {
    ModeDecomposition dec = decompose(assemble_A(kk, params, n));
    if (!dec.defective) return dec;
    kk = k + std::pow(10.0, attempt) * 1e-7 * std::max(1.0, std::abs(k));
  }
  throw DefectiveOperatorError("A(k) stays defective under node displacement", k);
}

CoefficientVector evolve_coefficients(double k, double t, double mu0, int n, const MediumParams& params,
                                      EvolutionMode mode, const MLEvalConfig& ml) {
  if (!(t >= 0.0)) throw DomainError("evolve_coefficients: t must be non-negative");
  CoefficientVector cv = initial_coefficients(mu0, n);
  cv.k = k;
  cv.t = t;
  if (t == 0.0) return cv;
  cv.c = act(decompose_regular(k, params, n), t, params.alpha, cv.c, mode, ml);
  return cv;
}

const char* to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::exact: return "exact";
    case DensityMethod::paper: return "paper";
    case DensityMethod::closed_N1: return "closed_N1";
    case DensityMethod::diffusion: return "diffusion";
    case DensityMethod::ctrw: return "ctrw";
    case DensityMethod::subordination: return "subordination";
  }
  return "unknown";
}

std::string params_fingerprint(const MediumParams& params, int n) {
  std::ostringstream os;
  os.precision(17);
  os << params.alpha << ';' << params.v << ';' << params.sigma_s << ';' << params.sigma_a << ';' << n;
  for (double b : params.phase.beta()) os << ';' << b;
  // FNV-1a
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

QuadratureSpec resolve_quadrature(const QuadratureSpec& spec, std::span<const double> x_grid,
                                  const MediumParams& params, std::span<const double> times) {
  spec.validate();
  QuadratureSpec out = spec;
  if (out.mollifier_width == 0.0 && params.alpha == 1.0) out.mollifier_width = kDefaultMollifier;
  if (out.k_max == 0.0) {
    double x_min = 0.0;
    for (double x : x_grid)
      if (x != 0.0 && (x_min == 0.0 || std::abs(x) < x_min)) x_min = std::abs(x);
    double from_grid = x_min > 0.0 ? std::min(40.0 / x_min, kMaxDefaultKMax) : 0.0;
    // Mollified fronts are eps wide wherever they sit, not only near the
    // origin; beyond 9/eps the mollifier is below e^-40.
    if (out.mollifier_width > 0.0) from_grid = 9.0 / out.mollifier_width;
    // For 1/2 < alpha < 1, E_a(-(s + ikv mu) t^a) carries an oscillating term
    // exp(w^{1/a}) with |w| = k v t^a that decays only like
    // exp(cos(pi/2a) |w|^{1/a}); the head must run until it is below e^-36 so
    // the tail sees a non-oscillating integrand.
    double from_oscillation = 0.0;
    if (params.alpha > 0.5 && params.alpha < 1.0 && !times.empty()) {
      const double c = -std::cos(std::numbers::pi / (2.0 * params.alpha));
      const double t_min = *std::min_element(times.begin(), times.end());
      from_oscillation = std::min(std::pow(36.0 / c, params.alpha) / (params.v * std::pow(t_min, params.alpha)),
                                  kMaxOscillationKMax);
    }
    out.k_max = std::max({from_grid, from_oscillation, 50.0 * critical_wavenumber(params), 1.0});
  }
  return out;
}

EnergySpectrum::EnergySpectrum(const MediumParams& params, int n, EvolutionMode mode, std::vector<double> times,
                               const MLEvalConfig& ml)
    : params_(params), n_(n), mode_(mode), times_(std::move(times)), ml_(ml) {
  params_.validate();
  ml_.validate();
  check_times(times_);
  assemble_A(0.0, params_, n_);  // order / degree check
}

void EnergySpectrum::operator()(double k, std::span<double> out) const {
  const ModeDecomposition dec = decompose_regular(k, params_, n_);
  const Eigen::Index m = dec.eigenvalues.size();
  CVector w(m);
  if (mode_ == EvolutionMode::exact) {
    w = exact_mode_weights(dec);
  } else {
    const Eigen::VectorXd pw = paper_mode_weights(dec);
    for (Eigen::Index i = 0; i < m; ++i) w[i] = pw[i];
  }
  for (std::size_t j = 0; j < times_.size(); ++j) {
    const double ta = std::pow(times_[j], params_.alpha);
    cplx s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) s += w[i] * mittag_leffler(params_.alpha, -dec.eigenvalues[i] * ta, ml_);
    out[j] = s.real();
  }
}

DensityField energy_density(std::span<const double> x_grid, std::span<const double> times, const MediumParams& params,
                            int n, EvolutionMode mode, const QuadratureSpec& spec) {
  if (x_grid.empty()) throw DomainError("energy_density: empty x grid");
  EnergySpectrum spectrum(params, n, mode, std::vector<double>(times.begin(), times.end()));
  const QuadratureSpec q = resolve_quadrature(spec, x_grid, params, times);
  const double kc = critical_wavenumber(params);
  const std::vector<double> breaks{kc, 2.0 * kc};

  DensityField field;
  field.x_grid.assign(x_grid.begin(), x_grid.end());
  field.times.assign(times.begin(), times.end());
  field.method = mode == EvolutionMode::exact ? DensityMethod::exact : DensityMethod::paper;
  field.params_fingerprint = params_fingerprint(params, n);
  field.values = cosine_inversion(std::cref(spectrum), times.size(), x_grid, q, breaks);
  return field;
}

DensityField energy_density_N1_closed(std::span<const double> x_grid, std::span<const double> times,
                                      const MediumParams& params, const QuadratureSpec& spec) {
  require_closed_form_params(params);
  if (x_grid.empty()) throw DomainError("energy_density_N1_closed: empty x grid");
  check_times(times);
  const double kc = critical_wavenumber(params);
  const double alpha = params.alpha;
  const double scale = params.v / std::sqrt(3.0);
  std::vector<double> ta(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) ta[j] = std::pow(times[j], alpha);

  auto spectrum = [&](double k, std::span<double> out) {
    if (k <= kc) {
      const double root = std::sqrt(kc * kc - k * k);
      const double s = root / kc;
      for (std::size_t j = 0; j < ta.size(); ++j)
        out[j] = 0.5 * ((1.0 - s) * mittag_leffler_real(alpha, -scale * (kc + root) * ta[j]) +
                        (1.0 + s) * mittag_leffler_real(alpha, -scale * (kc - root) * ta[j]));
    } else {
      const cplx lambda = scale * cplx(kc, -std::sqrt(k * k - kc * kc));
      for (std::size_t j = 0; j < ta.size(); ++j) out[j] = mittag_leffler(alpha, -lambda * ta[j]).real();
    }
  };

  const QuadratureSpec q = resolve_quadrature(spec, x_grid, params, times);
  const std::vector<double> breaks{kc, 2.0 * kc};
  DensityField field;
  field.x_grid.assign(x_grid.begin(), x_grid.end());
  field.times.assign(times.begin(), times.end());
  field.method = DensityMethod::closed_N1;
  field.params_fingerprint = params_fingerprint(params, 1);
  field.values = cosine_inversion(spectrum, times.size(), x_grid, q, breaks);
  return field;
}

double energy_density_N1_closed(double x, double t, const MediumParams& params, const QuadratureSpec& spec) {
  const double xs[1] = {x};
  const double ts[1] = {t};
  return energy_density_N1_closed(xs, ts, params, spec).values(0, 0);
}

double angular_density(double x, double mu, double mu0, double t, const MediumParams& params, int n,
                       EvolutionMode mode, const QuadratureSpec& spec) {
  if (!(std::abs(mu) <= 1.0)) throw DomainError("angular_density: |mu| must not exceed 1");
  if (!(t > 0.0)) throw DomainError("angular_density: t must be positive");
  std::vector<double> basis(n + 1);
  legendre_all(mu, basis);
  for (int l = 0; l <= n; ++l) basis[l] *= std::sqrt(2.0 * l + 1.0);
  const CVector c0 = initial_coefficients(mu0, n).c;

  auto f = [&](double k) {
    const CVector c = act(decompose_regular(k, params, n), t, params.alpha, c0, mode, {});
    cplx s = 0.0;
    for (int l = 0; l <= n; ++l) s += c[l] * basis[l];
    return s;
  };
  const double xs[1] = {x};
  const double ts[1] = {t};
  const double kc = critical_wavenumber(params);
  const double breaks[2] = {kc, 2.0 * kc};
  return fourier_inversion(f, x, resolve_quadrature(spec, xs, params, ts), breaks);
}

double ballistic_density(double x, double mu, double mu0, double t, const MediumParams& params,
                         const QuadratureSpec& spec) {
  params.validate();
  if (!(std::abs(mu0) <= 1.0)) throw DomainError("ballistic_density: |mu0| must not exceed 1");
  if (mu != mu0) throw DomainError("ballistic_density: the ballistic term is supported on mu = mu0 only");
  if (!(t > 0.0)) throw DomainError("ballistic_density: t must be positive");
  const double ta = std::pow(t, params.alpha);
  auto f = [&](double k) {
    return mittag_leffler(params.alpha, -cplx(params.sigma_t(), k * params.v * mu0) * ta);
  };
  const double xs[1] = {x};
  const double ts[1] = {t};
  return fourier_inversion(f, x, resolve_quadrature(spec, xs, params, ts));
}

CVector scattering_source(double mu0, int n, const MediumParams& params) {
  if (!(std::abs(mu0) <= 1.0)) throw DomainError("scattering_source: |mu0| must not exceed 1");
  CVector b = CVector::Zero(n + 1);
  for (int l = 0; l <= std::min(n, params.phase.degree()); ++l)
    b[l] = params.sigma_s * params.phase.beta(l) * legendre_eval(l, mu0) / (2.0 * std::sqrt(2.0 * l + 1.0));
  return b;
}

CoefficientVector ballistic_coefficients(double k, double t, double mu0, int n, const MediumParams& params,
                                         const MLEvalConfig& ml) {
  params.validate();
  if (!(t >= 0.0)) throw DomainError("ballistic_coefficients: t must be non-negative");
  CoefficientVector cv = initial_coefficients(mu0, n);
  cv.k = k;
  cv.t = t;
  const cplx gamma(params.sigma_t(), k * params.v * mu0);
  cv.c *= mittag_leffler(params.alpha, -gamma * std::pow(t, params.alpha), ml);
  return cv;
}

CoefficientVector scattered_coefficients(double k, double t, double mu0, int n, const MediumParams& params,
                                         EvolutionMode mode, const MLEvalConfig& ml) {
  if (!(t >= 0.0)) throw DomainError("scattered_coefficients: t must be non-negative");
  CoefficientVector cv;
  cv.k = k;
  cv.t = t;
  cv.mu0 = mu0;
  const CVector b = scattering_source(mu0, n, params);
  if (t == 0.0) {
    cv.c = CVector::Zero(n + 1);
    return cv;
  }
  double kk = k;
  for (int attempt = 0; attempt < kDisplacementTries; ++attempt) {
    const SpectralOperator op = assemble_A(kk, params, n);
    const cplx gamma(params.sigma_t(), kk * params.v * mu0);
    const CMatrix shifted = op.dense() - gamma * CMatrix::Identity(n + 1, n + 1);
    Eigen::PartialPivLU<CMatrix> lu(shifted);
    if (lu.rcond() > 1e-13) {
      const double ta = std::pow(t, params.alpha);
      const CVector evolved = act(decompose_regular(kk, params, n), t, params.alpha, b, mode, ml);
      cv.c = lu.solve(mittag_leffler(params.alpha, -gamma * ta, ml) * b - evolved);
      return cv;
    }
    kk = k + std::pow(10.0, attempt) * 1e-7 * std::max(1.0, std::abs(k));
  }
  throw ResolventError("A(k) - (ikv mu0 + sigma_t) is singular under node displacement", k);
}

}  // namespace fracrte
