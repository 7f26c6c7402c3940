#include "cvqt/gaussian.hpp"

#include "cvqt/measures.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cvqt {

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t m = 0; m < n_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : n_modes_(static_cast<std::size_t>(mean.size()) / 2),
      mean_(std::move(mean)),
      cov_(std::move(cov)) {
  if (mean_.size() < 2 || mean_.size() % 2 != 0) {
    throw std::invalid_argument("GaussianState: mean must have positive even dimension");
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw std::invalid_argument("GaussianState: covariance shape does not match mean");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw std::invalid_argument("GaussianState: non-finite entries");
  }
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kCovSymmetryTol * std::max(1.0, cov_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("GaussianState: covariance asymmetry exceeds tolerance");
  }
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
}

Eigen::Vector2d GaussianState::mode_mean(std::size_t mode) const {
  if (mode >= n_modes_) throw std::out_of_range("mode_mean: invalid mode index");
  return mean_.segment<2>(2 * mode);
}

Eigen::Matrix2d GaussianState::mode_cov(std::size_t mode) const {
  if (mode >= n_modes_) throw std::out_of_range("mode_cov: invalid mode index");
  return cov_.block<2, 2>(2 * mode, 2 * mode);
}

double GaussianState::min_symplectic_eigenvalue() const {
  return cvqt::min_symplectic_eigenvalue(cov_);
}

namespace {

// Physicality through the Hermitian form: V + i Omega >= 0, equivalent to
// every symplectic eigenvalue being >= 1. Hermitian eigenvalues carry an
// absolute error bounded by the matrix norm (Weyl), so this stays reliable on
// the strongly squeezed and amplified covariances where the symplectic
// spectrum itself loses precision.
double physicality_deficit(const Eigen::MatrixXd& cov) {
  const Eigen::Index d = cov.rows();
  Eigen::MatrixXcd h = cov.cast<std::complex<double>>();
  const Eigen::MatrixXd omega = symplectic_form(static_cast<std::size_t>(d) / 2);
  h += std::complex<double>(0.0, 1.0) * omega;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("physicality_deficit: eigensolver failed");
  }
  return -es.eigenvalues().minCoeff();  // positive when unphysical
}

}  // namespace

bool GaussianState::is_physical(double tol) const {
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  return physicality_deficit(cov_) <= tol * scale;
}

void GaussianState::require_physical(const std::string& context) const {
  if (!is_physical()) {
    throw std::domain_error(context + ": state is not physical (cov + i Omega deficit " +
                            std::to_string(physicality_deficit(cov_)) + ")");
  }
}

GaussianState vacuum(std::size_t n_modes) {
  if (n_modes == 0) throw std::invalid_argument("vacuum: need at least one mode");
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes),
                       Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState coherent(std::complex<double> alpha) {
  Eigen::VectorXd mean(2);
  mean << 2.0 * alpha.real(), 2.0 * alpha.imag();
  return GaussianState(mean, Eigen::MatrixXd::Identity(2, 2));
}

GaussianState thermal(double n_occ) {
  if (n_occ < 0.0) throw std::invalid_argument("thermal: occupancy must be non-negative");
  return GaussianState(Eigen::VectorXd::Zero(2),
                       (2.0 * n_occ + 1.0) * Eigen::MatrixXd::Identity(2, 2));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const auto da = a.dim();
  const auto db = b.dim();
  Eigen::VectorXd mean(da + db);
  mean << a.mean(), b.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(da + db, da + db);
  cov.topLeftCorner(da, da) = a.cov();
  cov.bottomRightCorner(db, db) = b.cov();
  return GaussianState(mean, cov);
}

GaussianState partial_trace(const GaussianState& state, const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: must keep at least one mode");
  const std::size_t k = keep.size();
  Eigen::VectorXd mean(2 * k);
  Eigen::MatrixXd cov(2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    if (keep[i] >= state.num_modes()) {
      throw std::out_of_range("partial_trace: invalid mode index");
    }
    mean.segment<2>(2 * i) = state.mean().segment<2>(2 * keep[i]);
    for (std::size_t j = 0; j < k; ++j) {
      cov.block<2, 2>(2 * i, 2 * j) = state.cov().block<2, 2>(2 * keep[i], 2 * keep[j]);
    }
  }
  return GaussianState(mean, cov);
}

GaussianState permute_modes(const GaussianState& state, const std::vector<std::size_t>& order) {
  if (order.size() != state.num_modes()) {
    throw std::invalid_argument("permute_modes: order must list every mode exactly once");
  }
  std::vector<bool> seen(order.size(), false);
  for (std::size_t m : order) {
    if (m >= order.size() || seen[m]) {
      throw std::invalid_argument("permute_modes: order is not a permutation");
    }
    seen[m] = true;
  }
  return partial_trace(state, order);
}

double photon_number(const GaussianState& state, std::size_t mode) {
  const Eigen::Vector2d m = state.mode_mean(mode);
  const Eigen::Matrix2d v = state.mode_cov(mode);
  return (m.squaredNorm() + v.trace() - 2.0) / 4.0;
}

double total_photon_number(const GaussianState& state) {
  double n = 0.0;
  for (std::size_t m = 0; m < state.num_modes(); ++m) n += photon_number(state, m);
  return n;
}

}  // namespace cvqt
