#pragma once

#include "cvqt/gaussian.hpp"

#include <complex>
#include <vector>

namespace cvqt {

/// Symplectic spectrum of a symmetric covariance matrix: the n absolute
/// eigenvalues of i Omega V, ascending. Computed through the equivalent
/// symmetric problem on (V^{1/2} Omega V^{1/2})^T (V^{1/2} Omega V^{1/2}).
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov);

double min_symplectic_eigenvalue(const Eigen::MatrixXd& cov);

/// PPT negativity of a two-mode state: partial transpose (sign flip of p2),
/// nu = min symplectic eigenvalue, N = max(0, (1-nu)/(2 nu)). N > 0 certifies
/// entanglement.
double negativity(const GaussianState& state);

/// 1/sqrt(det V). Throws std::domain_error when V is not positive definite.
double purity(const GaussianState& state);

/// -10 log10(min eigenvalue of the single-mode covariance block); positive for
/// squeezed modes, negative for thermal ones.
double squeezing_db(const GaussianState& state, std::size_t mode);

/// Overlap of a single-mode Gaussian state with the pure coherent state of the
/// given amplitude: F = 2 exp(-1/2 d^T Y^{-1} d) / sqrt(det Y), Y = V + I,
/// d = mean - (2 Re alpha, 2 Im alpha).
double fidelity_to_coherent(std::complex<double> target_alpha, const GaussianState& state);

struct TwoModeDiagnostics {
  double negativity = 0.0;
  double purity = 0.0;
  double squeezing_db_mode0 = 0.0;
  double squeezing_db_mode1 = 0.0;
  double min_ptranspose_eig = 0.0;
};

TwoModeDiagnostics two_mode_diagnostics(const GaussianState& state);

}  // namespace cvqt
