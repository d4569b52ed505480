#pragma once

#include <string>

#include <Eigen/Dense>

#include "fracrte/legendre.hpp"
#include "fracrte/specfun.hpp"

namespace fracrte {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Physical constants of one problem instance. sigma_t = sigma_s + sigma_a.
struct MediumParams {
  double alpha = 1.0;
  double v = 1.0;
  double sigma_s = 10.0;
  double sigma_a = 0.0;
  PhaseFunction phase = PhaseFunction::from_g(0.9);

  double sigma_t() const { return sigma_s + sigma_a; }
  void validate() const;

  // v = 1, sigma_s = 10, sigma_a = 0, g = 0.9 with an L = 1 kernel.
  static MediumParams reference(double alpha);

  bool operator==(const MediumParams&) const = default;
};

// Choice of eigen-expansion used to evaluate E_a(-A t^a).
//  exact: Q diag(E) Q^{-1}, the true matrix function.
//  paper: sum_n |v_n^(0)|^2 E(-lambda_n t^a) with Hermitian-normalised v_n,
//         which coincides with exact only for normal A.
enum class EvolutionMode { exact, paper };

const char* to_string(EvolutionMode m);
EvolutionMode evolution_mode_from_string(const std::string& s);

double h_coeff(int l, const MediumParams& params);

// Wavenumber at which the two N = 1 eigenvalues coalesce,
// sqrt(3) |a_1 - a_0| / (2 v) with a_l the diagonal of A(0).
double critical_wavenumber(const MediumParams& params);

/// Complex symmetric tridiagonal operator A(k) of the P_N system
///   d^a c / dt^a + A(k) c = 0.
class SpectralOperator {
 public:
  SpectralOperator(double k, const MediumParams& params, int n);

  int order() const { return n_; }
  double k() const { return k_; }
  const Eigen::VectorXd& h() const { return h_; }
  const Eigen::VectorXd& diagonal() const { return diag_; }
  // Entry (l, l+1) = (l+1, l), l = 0..N-1.
  const Eigen::VectorXcd& off_diagonal() const { return off_; }

  CMatrix dense() const;
  double norm() const;  // Frobenius

 private:
  int n_;
  double k_;
  Eigen::VectorXd h_;
  Eigen::VectorXd diag_;
  Eigen::VectorXcd off_;
};

SpectralOperator assemble_A(double k, const MediumParams& params, int n);

struct ModeDecomposition {
  double k = 0.0;
  double operator_norm = 0.0;
  CVector eigenvalues;
  CMatrix right;  // columns: right eigenvectors, unit 2-norm
  CMatrix left;   // rows: rows of right^{-1}
  double condition_estimate = 1.0;
  double min_gap = 0.0;
  bool defective = false;
};

// Dense complex eigensolve; eigenvalues ordered by (Re, Im).
ModeDecomposition decompose(const SpectralOperator& op);

// Q diag(E_a(-lambda_n t^a)) Q^{-1} c0. Throws DefectiveOperatorError if
// the decomposition is flagged defective.
CVector ml_matrix_action(const ModeDecomposition& dec, double t, double alpha, const CVector& c0,
                         const MLEvalConfig& cfg = {});

// Weights Q_{0n} (Q^{-1})_{n0}: the (0,0) entry of E(-A t^a) is
// sum_n w_n E(-lambda_n t^a).
CVector exact_mode_weights(const ModeDecomposition& dec);

// |v_n^(0)|^2 with Hermitian-normalised right eigenvectors.
Eigen::VectorXd paper_mode_weights(const ModeDecomposition& dec);

}  // namespace fracrte
