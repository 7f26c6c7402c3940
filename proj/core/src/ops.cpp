#include "cvqt/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cvqt {

namespace {

void check_mode(const char* op, std::size_t n_modes, std::size_t mode) {
  if (mode >= n_modes) {
    throw std::out_of_range(std::string(op) + ": invalid mode index");
  }
}

Eigen::Matrix2d rotation2(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

// Embeds a 2x2 block acting on one mode into the 2n x 2n identity.
Eigen::MatrixXd embed1(std::size_t n_modes, std::size_t mode, const Eigen::Matrix2d& block) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  s.block<2, 2>(2 * mode, 2 * mode) = block;
  return s;
}

}  // namespace

SymplecticOp::SymplecticOp(Eigen::MatrixXd matrix, std::string description)
    : matrix_(std::move(matrix)), description_(std::move(description)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2 || matrix_.rows() % 2 != 0) {
    throw std::invalid_argument("SymplecticOp: matrix must be 2n x 2n");
  }
  const Eigen::MatrixXd omega = symplectic_form(num_modes());
  const double err = (matrix_.transpose() * omega * matrix_ - omega).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
  if (err > kSymplecticTol * scale * scale) {
    throw std::invalid_argument("SymplecticOp: matrix is not symplectic (" + description_ + ")");
  }
}

SymplecticOp SymplecticOp::then(const SymplecticOp& next) const {
  if (next.num_modes() != num_modes()) {
    throw std::invalid_argument("SymplecticOp::then: mode count mismatch");
  }
  return SymplecticOp(next.matrix_ * matrix_, description_ + " ; " + next.description_);
}

SymplecticOp identity_op(std::size_t n_modes) {
  return SymplecticOp(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes), "identity");
}

SymplecticOp squeezer(std::size_t n_modes, std::size_t mode, double r, double phi) {
  check_mode("squeezer", n_modes, mode);
  if (r < 0.0) throw std::invalid_argument("squeezer: r must be non-negative");
  Eigen::Matrix2d core;
  core << std::exp(-r), 0.0, 0.0, std::exp(r);
  const Eigen::Matrix2d rot = rotation2(phi);
  return SymplecticOp(embed1(n_modes, mode, rot * core * rot.transpose()), "squeezer");
}

SymplecticOp rotation_op(std::size_t n_modes, std::size_t mode, double theta) {
  check_mode("rotation", n_modes, mode);
  return SymplecticOp(embed1(n_modes, mode, rotation2(theta)), "rotation");
}

SymplecticOp beam_splitter_op(std::size_t n_modes, std::size_t mode_i, std::size_t mode_j,
                              double transmissivity, double phase) {
  check_mode("beam_splitter", n_modes, mode_i);
  check_mode("beam_splitter", n_modes, mode_j);
  if (mode_i == mode_j) throw std::invalid_argument("beam_splitter: modes must differ");
  if (transmissivity < 0.0 || transmissivity > 1.0) {
    throw std::invalid_argument("beam_splitter: transmissivity outside [0, 1]");
  }
  const double t = std::sqrt(transmissivity);
  const double rho = std::sqrt(1.0 - transmissivity);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  s.block<2, 2>(2 * mode_i, 2 * mode_i) = t * id;
  s.block<2, 2>(2 * mode_i, 2 * mode_j) = rho * id;
  s.block<2, 2>(2 * mode_j, 2 * mode_i) = -rho * id;
  s.block<2, 2>(2 * mode_j, 2 * mode_j) = t * id;
  SymplecticOp mix(std::move(s), "beam_splitter");
  if (phase == 0.0) return mix;
  return rotation_op(n_modes, mode_j, phase).then(mix);
}

SymplecticOp phase_sensitive_amp_op(std::size_t n_modes, std::size_t mode, double gain_db,
                                    double axis_phi) {
  check_mode("phase_sensitive_amp", n_modes, mode);
  const double g_amp = std::pow(10.0, gain_db / 20.0);  // sqrt of the power gain
  Eigen::Matrix2d core;
  core << g_amp, 0.0, 0.0, 1.0 / g_amp;
  const Eigen::Matrix2d rot = rotation2(axis_phi);
  return SymplecticOp(embed1(n_modes, mode, rot * core * rot.transpose()), "phase_sensitive_amp");
}

GaussianState apply(const GaussianState& state, const SymplecticOp& op) {
  if (op.num_modes() != state.num_modes()) {
    throw std::invalid_argument("apply: operation and state mode counts differ");
  }
  const Eigen::MatrixXd& s = op.matrix();
  return GaussianState(s * state.mean(), s * state.cov() * s.transpose());
}

GaussianState squeeze(const GaussianState& state, std::size_t mode, double r, double phi) {
  return apply(state, squeezer(state.num_modes(), mode, r, phi));
}

GaussianState beam_splitter(const GaussianState& state, std::size_t mode_i, std::size_t mode_j,
                            double transmissivity, double phase) {
  return apply(state, beam_splitter_op(state.num_modes(), mode_i, mode_j, transmissivity, phase));
}

GaussianState phase_rotation(const GaussianState& state, std::size_t mode, double theta) {
  return apply(state, rotation_op(state.num_modes(), mode, theta));
}

GaussianState displace(const GaussianState& state, std::size_t mode, std::complex<double> beta) {
  check_mode("displace", state.num_modes(), mode);
  Eigen::VectorXd mean = state.mean();
  mean(2 * mode) += 2.0 * beta.real();
  mean(2 * mode + 1) += 2.0 * beta.imag();
  return GaussianState(std::move(mean), state.cov());
}

GaussianState phase_sensitive_amp(const GaussianState& state, std::size_t mode, double gain_db,
                                  double axis_phi) {
  return apply(state, phase_sensitive_amp_op(state.num_modes(), mode, gain_db, axis_phi));
}

GaussianState loss_thermal_channel(const GaussianState& state, std::size_t mode, double eps,
                                   double n_env) {
  check_mode("loss_thermal_channel", state.num_modes(), mode);
  if (eps < 0.0 || eps > 1.0) {
    throw std::invalid_argument("loss_thermal_channel: eps outside [0, 1]");
  }
  if (n_env < 0.0) {
    throw std::invalid_argument("loss_thermal_channel: environment occupancy must be >= 0");
  }
  const double t = std::sqrt(1.0 - eps);
  Eigen::VectorXd mean = state.mean();
  mean.segment<2>(2 * mode) *= t;
  Eigen::MatrixXd cov = state.cov();
  // Cross blocks scale by sqrt(1-eps), the diagonal block by (1-eps).
  cov.middleRows<2>(2 * mode) *= t;
  cov.middleCols<2>(2 * mode) *= t;
  cov.block<2, 2>(2 * mode, 2 * mode) +=
      eps * (2.0 * n_env + 1.0) * Eigen::Matrix2d::Identity();
  return GaussianState(std::move(mean), std::move(cov));
}

}  // namespace cvqt
