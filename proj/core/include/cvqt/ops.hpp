#pragma once

#include "cvqt/gaussian.hpp"

#include <complex>
#include <cstddef>
#include <string>

namespace cvqt {

/// Linear transformation of quadratures satisfying S^T Omega S == Omega.
/// Construction verifies the symplectic condition to kSymplecticTol.
class SymplecticOp {
 public:
  SymplecticOp(Eigen::MatrixXd matrix, std::string description);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const std::string& description() const { return description_; }
  std::size_t num_modes() const { return matrix_.rows() / 2; }

  /// Composition: state -> next(this(state)).
  SymplecticOp then(const SymplecticOp& next) const;

 private:
  Eigen::MatrixXd matrix_;
  std::string description_;
};

SymplecticOp identity_op(std::size_t n_modes);
/// Single-mode squeezer: quadrature variance e^{-2r} along axis phi,
/// e^{+2r} orthogonal.
SymplecticOp squeezer(std::size_t n_modes, std::size_t mode, double r, double phi = 0.0);
SymplecticOp rotation_op(std::size_t n_modes, std::size_t mode, double theta);
/// Two-mode mixer with power transmissivity tau; tau = 1/2 is a balanced
/// hybrid ring. `phase` rotates mode j before mixing.
SymplecticOp beam_splitter_op(std::size_t n_modes, std::size_t mode_i, std::size_t mode_j,
                              double transmissivity, double phase = 0.0);
/// Ideal phase-sensitive amplifier: sqrt(G) along axis phi, 1/sqrt(G)
/// orthogonal, G = 10^(gain_db/10). Noiseless; device noise is inserted as
/// separate loss stages by callers that model real hardware.
SymplecticOp phase_sensitive_amp_op(std::size_t n_modes, std::size_t mode, double gain_db,
                                    double axis_phi);

GaussianState apply(const GaussianState& state, const SymplecticOp& op);

GaussianState squeeze(const GaussianState& state, std::size_t mode, double r, double phi = 0.0);
GaussianState beam_splitter(const GaussianState& state, std::size_t mode_i, std::size_t mode_j,
                            double transmissivity, double phase = 0.0);
GaussianState phase_rotation(const GaussianState& state, std::size_t mode, double theta);
GaussianState displace(const GaussianState& state, std::size_t mode, std::complex<double> beta);
GaussianState phase_sensitive_amp(const GaussianState& state, std::size_t mode, double gain_db,
                                  double axis_phi);

/// Thermal loss channel on one mode: mean scales by sqrt(1-eps), the mode
/// covariance block becomes (1-eps) V + eps (2 n_env + 1) I, and cross blocks
/// scale by sqrt(1-eps). eps = 1 replaces the mode by thermal(n_env).
GaussianState loss_thermal_channel(const GaussianState& state, std::size_t mode, double eps,
                                   double n_env);

}  // namespace cvqt
