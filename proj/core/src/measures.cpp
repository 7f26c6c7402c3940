#include "cvqt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvqt {

namespace {

// Symmetric square root with eigenvalues clamped at zero; tolerates the tiny
// negative eigenvalues roundoff can leave on strongly squeezed states.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symmetric_sqrt: eigensolver failed");
  }
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() < 2 || cov.rows() % 2 != 0) {
    throw std::invalid_argument("symplectic_eigenvalues: covariance must be 2n x 2n");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > kCovSymmetryTol * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("symplectic_eigenvalues: covariance is not symmetric");
  }
  const std::size_t n = static_cast<std::size_t>(cov.rows()) / 2;
  const Eigen::MatrixXd root = symmetric_sqrt((cov + cov.transpose()) / 2.0);
  // A = V^{1/2} Omega V^{1/2} is antisymmetric with eigenvalues +- i nu_k, so
  // A^T A is symmetric PSD with each nu_k^2 doubly degenerate.
  const Eigen::MatrixXd a = root * symplectic_form(n) * root;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
  }
  Eigen::VectorXd sq = es.eigenvalues().cwiseMax(0.0);  // ascending
  std::vector<double> nus(n);
  for (std::size_t k = 0; k < n; ++k) {
    nus[k] = std::sqrt(std::sqrt(sq(2 * k) * sq(2 * k + 1)));  // geometric mean of the pair
  }
  std::sort(nus.begin(), nus.end());
  return nus;
}

double min_symplectic_eigenvalue(const Eigen::MatrixXd& cov) {
  return symplectic_eigenvalues(cov).front();
}

double negativity(const GaussianState& state) {
  if (state.num_modes() != 2) {
    throw std::invalid_argument("negativity: state must have exactly two modes");
  }
  Eigen::MatrixXd pt = state.cov();
  pt.row(3) *= -1.0;
  pt.col(3) *= -1.0;
  const double nu = min_symplectic_eigenvalue(pt);
  // Roundoff can leave nu a hair below 1 on separable states; treat as 1.
  if (nu >= 1.0 - kPhysicalityTol) return 0.0;
  return (1.0 - nu) / (2.0 * nu);
}

double purity(const GaussianState& state) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.cov());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("purity: eigensolver failed");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v <= 0.0) {
      throw std::domain_error("purity: covariance is not positive definite");
    }
    log_det += std::log(v);
  }
  return std::exp(-0.5 * log_det);
}

double squeezing_db(const GaussianState& state, std::size_t mode) {
  const Eigen::Matrix2d block = state.mode_cov(mode);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
  const double min_var = es.eigenvalues().minCoeff();
  if (min_var <= 0.0) {
    throw std::domain_error("squeezing_db: mode covariance is not positive definite");
  }
  return -10.0 * std::log10(min_var);
}

double fidelity_to_coherent(std::complex<double> target_alpha, const GaussianState& state) {
  if (state.num_modes() != 1) {
    throw std::invalid_argument("fidelity_to_coherent: state must be single-mode");
  }
  const Eigen::Matrix2d y = state.cov().block<2, 2>(0, 0) + Eigen::Matrix2d::Identity();
  const double det = y.determinant();
  if (det <= 0.0) {
    throw std::domain_error("fidelity_to_coherent: singular overlap matrix");
  }
  Eigen::Vector2d delta;
  delta << state.mean()(0) - 2.0 * target_alpha.real(),
      state.mean()(1) - 2.0 * target_alpha.imag();
  const double quad = delta.dot(y.inverse() * delta);
  return 2.0 * std::exp(-0.5 * quad) / std::sqrt(det);
}

TwoModeDiagnostics two_mode_diagnostics(const GaussianState& state) {
  if (state.num_modes() != 2) {
    throw std::invalid_argument("two_mode_diagnostics: state must have exactly two modes");
  }
  TwoModeDiagnostics d;
  Eigen::MatrixXd pt = state.cov();
  pt.row(3) *= -1.0;
  pt.col(3) *= -1.0;
  d.min_ptranspose_eig = min_symplectic_eigenvalue(pt);
  d.negativity = d.min_ptranspose_eig >= 1.0 - kPhysicalityTol
                     ? 0.0
                     : (1.0 - d.min_ptranspose_eig) / (2.0 * d.min_ptranspose_eig);
  d.purity = purity(state);
  d.squeezing_db_mode0 = squeezing_db(state, 0);
  d.squeezing_db_mode1 = squeezing_db(state, 1);
  return d;
}

}  // namespace cvqt
