#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace cvqt {

// Shared numerical tolerances.
inline constexpr double kCovSymmetryTol = 1e-10;  // accepted covariance asymmetry
inline constexpr double kPhysicalityTol = 1e-9;   // slack on min symplectic eigenvalue >= 1
inline constexpr double kSymplecticTol = 1e-9;    // slack on S^T Omega S == Omega

/// Standard symplectic form Omega: block-diagonal [[0,1],[-1,0]] per mode,
/// quadrature ordering (x1,p1,x2,p2,...).
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

/// Multimode Gaussian state in vacuum-normalized units: the vacuum covariance
/// is the identity and a coherent state of amplitude alpha has mean vector
/// (2 Re alpha, 2 Im alpha). Immutable value type; all operations are free
/// functions returning new states, so states can be shared across threads.
class GaussianState {
 public:
  /// Validates dimensions and symmetrizes the covariance. Throws
  /// std::invalid_argument on dimension mismatch, zero modes, asymmetry
  /// beyond kCovSymmetryTol, or non-finite entries.
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  std::size_t num_modes() const { return n_modes_; }
  std::size_t dim() const { return 2 * n_modes_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  Eigen::Vector2d mode_mean(std::size_t mode) const;
  Eigen::Matrix2d mode_cov(std::size_t mode) const;

  double min_symplectic_eigenvalue() const;
  /// True when every symplectic eigenvalue is >= 1 - tol.
  bool is_physical(double tol = kPhysicalityTol) const;
  /// Throws std::domain_error naming `context` when the state is unphysical.
  void require_physical(const std::string& context) const;

 private:
  std::size_t n_modes_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

GaussianState vacuum(std::size_t n_modes);
GaussianState coherent(std::complex<double> alpha);
/// Single-mode thermal state with mean photon number n_occ: cov = (2 n + 1) I.
GaussianState thermal(double n_occ);

GaussianState tensor(const GaussianState& a, const GaussianState& b);
/// Keeps the listed modes (in the given order), tracing out the rest.
GaussianState partial_trace(const GaussianState& state, const std::vector<std::size_t>& keep);
/// Relabels modes: output mode k is input mode order[k]. `order` must be a
/// permutation of 0..n-1.
GaussianState permute_modes(const GaussianState& state, const std::vector<std::size_t>& order);

/// Mean photon number of one mode: (mx^2 + mp^2 + tr cov_mode - 2) / 4.
double photon_number(const GaussianState& state, std::size_t mode);
double total_photon_number(const GaussianState& state);

}  // namespace cvqt
