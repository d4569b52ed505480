#include "fracrte/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fracrte/errors.hpp"

namespace fracrte {

void MediumParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(v > 0.0)) throw ConfigError("v must be positive");
  if (!(sigma_s > 0.0)) throw ConfigError("sigma_s must be positive");
  if (!(sigma_a >= 0.0)) throw ConfigError("sigma_a must be non-negative");
}

MediumParams MediumParams::reference(double alpha) {
  MediumParams p;
  p.alpha = alpha;
  return p;
}

const char* to_string(EvolutionMode m) { return m == EvolutionMode::exact ? "exact" : "paper"; }

EvolutionMode evolution_mode_from_string(const std::string& s) {
  if (s == "exact") return EvolutionMode::exact;
  if (s == "paper") return EvolutionMode::paper;
  throw ConfigError("unknown evolution mode '" + s + "' (expected exact or paper)");
}

double h_coeff(int l, const MediumParams& params) {
  if (l < 0) throw DomainError("h_coeff: l must be non-negative");
  const double scat = l <= params.phase.degree() ? params.sigma_s / params.sigma_t() * params.phase.beta(l) : 0.0;
  return 2.0 * l + 1.0 - scat;
}

double critical_wavenumber(const MediumParams& params) {
  const double a0 = params.sigma_t() * h_coeff(0, params);
  const double a1 = params.sigma_t() * h_coeff(1, params) / 3.0;
  return std::sqrt(3.0) * std::abs(a1 - a0) / (2.0 * params.v);
}

SpectralOperator::SpectralOperator(double k, const MediumParams& params, int n) : n_(n), k_(k) {
  params.validate();
  if (n < params.phase.degree()) {
    std::ostringstream os;
    os << "truncation order N=" << n << " is below the phase-function degree L=" << params.phase.degree();
    throw ConfigError(os.str());
  }
  h_.resize(n + 1);
  diag_.resize(n + 1);
  off_.resize(n);
  for (int l = 0; l <= n; ++l) {
    h_[l] = h_coeff(l, params);
    diag_[l] = params.sigma_t() * h_[l] / (2.0 * l + 1.0);
  }
  for (int l = 0; l < n; ++l) {
    const double m = l + 1.0;
    off_[l] = cplx(0.0, params.v * k * m / std::sqrt(4.0 * m * m - 1.0));
  }
}

CMatrix SpectralOperator::dense() const {
  CMatrix a = CMatrix::Zero(n_ + 1, n_ + 1);
  for (int l = 0; l <= n_; ++l) a(l, l) = diag_[l];
  for (int l = 0; l < n_; ++l) {
    a(l, l + 1) = off_[l];
    a(l + 1, l) = off_[l];
  }
  return a;
}

double SpectralOperator::norm() const {
  return std::sqrt(diag_.squaredNorm() + 2.0 * off_.squaredNorm());
}

SpectralOperator assemble_A(double k, const MediumParams& params, int n) {
  return SpectralOperator(k, params, n);
}

ModeDecomposition decompose(const SpectralOperator& op) {
  const CMatrix a = op.dense();
  Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("decompose: eigensolver did not converge", op.k());

  const int m = static_cast<int>(a.rows());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (ev[i].real() != ev[j].real()) return ev[i].real() < ev[j].real();
    return ev[i].imag() < ev[j].imag();
  });

  ModeDecomposition dec;
  dec.k = op.k();
  dec.operator_norm = op.norm();
  dec.eigenvalues.resize(m);
  dec.right.resize(m, m);
  for (int i = 0; i < m; ++i) {
    dec.eigenvalues[i] = ev[order[i]];
    dec.right.col(i) = solver.eigenvectors().col(order[i]).normalized();
  }
  Eigen::PartialPivLU<CMatrix> lu(dec.right);
  dec.left = lu.inverse();
  dec.condition_estimate = dec.right.norm() * dec.left.norm() / m;
  // A singular eigenvector basis gives a non-finite inverse.
  if (!std::isfinite(dec.condition_estimate)) dec.condition_estimate = std::numeric_limits<double>::infinity();

  dec.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      dec.min_gap = std::min(dec.min_gap, std::abs(dec.eigenvalues[i] - dec.eigenvalues[j]));
  // Repeated eigenvalues with an orthogonal eigenbasis (A(0) for l > L) are
  // harmless; only coalescence with a collapsing basis is defective.
  dec.defective = dec.min_gap < 1e-8 * dec.operator_norm && dec.condition_estimate > 1e4;
  return dec;
}

CVector ml_matrix_action(const ModeDecomposition& dec, double t, double alpha, const CVector& c0,
                         const MLEvalConfig& cfg) {
  if (!(t >= 0.0)) throw DomainError("ml_matrix_action: t must be non-negative");
  if (dec.defective)
    throw DefectiveOperatorError("ml_matrix_action: operator is defective at this wavenumber", dec.k);
  if (t == 0.0) return c0;
  const double ta = std::pow(t, alpha);
  CVector modal = dec.left * c0;
  for (Eigen::Index n = 0; n < modal.size(); ++n)
    modal[n] *= mittag_leffler(alpha, -dec.eigenvalues[n] * ta, cfg);
  return dec.right * modal;
}

CVector exact_mode_weights(const ModeDecomposition& dec) {
  CVector w(dec.eigenvalues.size());
  for (Eigen::Index n = 0; n < w.size(); ++n) w[n] = dec.right(0, n) * dec.left(n, 0);
  return w;
}

Eigen::VectorXd paper_mode_weights(const ModeDecomposition& dec) {
  Eigen::VectorXd w(dec.eigenvalues.size());
  for (Eigen::Index n = 0; n < w.size(); ++n) w[n] = std::norm(dec.right(0, n)) / dec.right.col(n).squaredNorm();
  return w;
}

}  // namespace fracrte
