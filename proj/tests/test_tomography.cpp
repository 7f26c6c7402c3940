#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cvqt/measures.hpp"
#include "cvqt/ops.hpp"
#include "cvqt/protocol.hpp"
#include "cvqt/tomography.hpp"

#include <cmath>
#include <numbers>

using namespace cvqt;

TEST_CASE("sampling is deterministic and matches the state statistics") {
  const GaussianState vac = vacuum(1);
  const Eigen::MatrixXd a = sample_state(vac, 5000, 123);
  const Eigen::MatrixXd b = sample_state(vac, 5000, 123);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd c = sample_state(vac, 5000, 124);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);

  // Normal-sampling statistics oracle: each covariance entry of N samples has
  // standard error about sqrt(2/N); three sigma bounds the whole matrix.
  const std::size_t n = 1'000'000;
  const Eigen::MatrixXd big = sample_state(vac, n, 7);
  Eigen::Vector2d mean = big.colwise().mean();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d d = big.row(i).transpose() - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(n - 1);
  CHECK((cov - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <
        3.0 * std::sqrt(2.0 / static_cast<double>(n)));

  // Unbiased mean: coherent(2) centers at (4, 0).
  const Eigen::MatrixXd coh = sample_state(coherent({2.0, 0.0}), n, 8);
  const Eigen::Vector2d m = coh.colwise().mean();
  CHECK(std::abs(m(0) - 4.0) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(m(1) - 0.0) < 3.0 / std::sqrt(static_cast<double>(n)));

  GaussianState unphysical(Eigen::VectorXd::Zero(2), 0.5 * Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(sample_state(unphysical, 10, 1), std::domain_error);
}

TEST_CASE("moments of constant and Gaussian samples") {
  Eigen::MatrixXd constant(8, 2);
  for (int i = 0; i < 8; ++i) constant.row(i) << 2.0, -1.0;
  const MomentSet set = compute_moments(constant, 4, 2);
  CHECK(set.find({1, 0}).value == doctest::Approx(2.0));
  CHECK(set.find({0, 3}).value == doctest::Approx(-1.0));
  CHECK(set.find({2, 2}).value == doctest::Approx(4.0));
  CHECK(set.find({4, 0}).value == doctest::Approx(16.0));

  // Gaussian-moment oracle: vacuum quadratures have <q^2> = 1, <q^4> = 3,
  // odd moments zero.
  const Eigen::MatrixXd vac = sample_state(vacuum(1), 1'000'000, 21);
  const MomentSet vm = compute_moments(vac, 4, 100);
  CHECK(vm.find({2, 0}).value == doctest::Approx(1.0).epsilon(0.01));
  CHECK(vm.find({4, 0}).value == doctest::Approx(3.0).epsilon(0.03));
  CHECK(std::abs(vm.find({1, 0}).value) < 0.01);
  CHECK(std::abs(vm.find({3, 0}).value) < 0.02);

  CHECK_THROWS_AS(compute_moments(constant, 5, 2), std::invalid_argument);
  CHECK_THROWS_AS(compute_moments(constant, 4, 9), std::invalid_argument);
}

TEST_CASE("reconstruction recovers the sampled state") {
  const GaussianState tms = build_tms(5.0);
  const Eigen::MatrixXd samples = sample_state(tms, 2'000'000, 31);
  const MomentSet moments = compute_moments(samples, 2, 100);
  const ReconstructionResult rec = reconstruct_gaussian(moments);

  CHECK(rec.cov_positive_definite);
  CHECK((rec.state_estimate.mean() - tms.mean()).cwiseAbs().maxCoeff() <
        4.0 * rec.mean_stderr.maxCoeff());
  CHECK((rec.state_estimate.cov() - tms.cov()).cwiseAbs().maxCoeff() <
        5.0 * rec.cov_stderr.maxCoeff());

  // Physicality of the estimate is reported through the symplectic spectrum.
  CHECK(rec.min_symplectic_eig > 0.9);

  // Jackknife errors against the iid oracle sqrt(2/N) for diagonal entries.
  const double expected = std::sqrt(2.0 / 2'000'000.0) * tms.cov()(0, 0);
  CHECK(rec.cov_stderr(0, 0) == doctest::Approx(expected).epsilon(0.35));

  const DiagnosticsWithErrors diag = jackknife_two_mode_diagnostics(moments);
  CHECK(std::abs(diag.value.negativity - 1.0811388300841898) <
        4.0 * diag.negativity_stderr);
  CHECK(std::abs(diag.value.purity - 1.0) < 5.0 * diag.purity_stderr + 5e-3);

  // Reconstructed vacuum: unit purity within the jackknife error bar.
  const MomentSet vac_moments =
      compute_moments(sample_state(vacuum(2), 1'000'000, 33), 2, 100);
  const DiagnosticsWithErrors vac_diag = jackknife_two_mode_diagnostics(vac_moments);
  CHECK(std::abs(vac_diag.value.purity - 1.0) < 3.0 * vac_diag.purity_stderr + 1e-3);
  // Sampling noise can leave a ~1e-3 spurious negativity on a product state.
  CHECK(vac_diag.value.negativity < 3e-3);
}

TEST_CASE("reconstruction error shrinks as 1/sqrt(N)") {
  const GaussianState state = squeeze(coherent({0.4, 0.1}), 0, 0.35, 0.2);
  auto worst_cov_error = [&](std::size_t n, std::uint64_t seed) {
    const ReconstructionResult rec =
        reconstruct_gaussian(compute_moments(sample_state(state, n, seed), 2, 50));
    return (rec.state_estimate.cov() - state.cov()).cwiseAbs().maxCoeff();
  };
  // Averaged over seeds the factor-16 sample increase shrinks the error by
  // about 4; allow wide slack for a stochastic ratio.
  double small = 0.0;
  double large = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    small += worst_cov_error(40'000, 100 + seed);
    large += worst_cov_error(640'000, 200 + seed);
  }
  const double ratio = small / large;
  CHECK(ratio > 2.0);
  CHECK(ratio < 8.0);

  // Missing second order refuses to reconstruct.
  Eigen::MatrixXd tiny = sample_state(state, 100, 5);
  MomentSet order1 = compute_moments(tiny, 2, 10);
  order1.max_order = 1;
  CHECK_THROWS_AS(reconstruct_gaussian(order1), std::invalid_argument);
}

TEST_CASE("batch errors scale with the sample count") {
  const GaussianState state = vacuum(1);
  auto stderr_of = [&](std::size_t n, std::uint64_t seed) {
    const ReconstructionResult rec =
        reconstruct_gaussian(compute_moments(sample_state(state, n, seed), 2, 20));
    return rec.cov_stderr(0, 0);
  };
  // Halving N inflates the error bar by about sqrt(2); tolerance factor 1.3
  // around that, averaged over 20 seeds.
  double full = 0.0;
  double half = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    full += stderr_of(200'000, 300 + seed);
    half += stderr_of(100'000, 400 + seed);
  }
  const double inflation = half / full;
  CHECK(inflation > std::sqrt(2.0) / 1.3);
  CHECK(inflation < std::sqrt(2.0) * 1.3);
}

TEST_CASE("reconstruction is equivariant under quadrature rotation") {
  const GaussianState state = squeeze(coherent({1.0, -0.5}), 0, 0.4, 0.9);
  const double theta = 0.77;
  const Eigen::MatrixXd samples = sample_state(state, 200'000, 55);

  Eigen::Matrix2d rot;
  rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  const Eigen::MatrixXd rotated_samples = samples * rot.transpose();

  const GaussianState direct =
      reconstruct_gaussian(compute_moments(rotated_samples, 2, 50)).state_estimate;
  const GaussianState roundabout = phase_rotation(
      reconstruct_gaussian(compute_moments(samples, 2, 50)).state_estimate, 0, theta);
  CHECK((direct.mean() - roundabout.mean()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((direct.cov() - roundabout.cov()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gaussianity verdicts") {
  // Gaussian input passes.
  const GaussianState state = squeeze(coherent({0.5, 0.2}), 0, 0.3, 0.1);
  const GaussianityReport pass =
      gaussianity_test(compute_moments(sample_state(state, 500'000, 77), 4, 100));
  CHECK(pass.verdict == GaussianityVerdict::kPass);
  CHECK(pass.max_abs_statistic < 4.0);

  // A balanced mixture of two separated coherent states fails on the fourth
  // cumulant (bimodal oracle: c4 = -2 a^4 for displacement a per quadrature).
  const Eigen::MatrixXd plus = sample_state(coherent({3.0, 0.0}), 100'000, 78);
  const Eigen::MatrixXd minus = sample_state(coherent({-3.0, 0.0}), 100'000, 79);
  Eigen::MatrixXd mixture(200'000, 2);
  for (Eigen::Index i = 0; i < plus.rows(); ++i) {
    mixture.row(2 * i) = plus.row(i);
    mixture.row(2 * i + 1) = minus.row(i);
  }
  const GaussianityReport fail = gaussianity_test(compute_moments(mixture, 4, 100));
  CHECK(fail.verdict == GaussianityVerdict::kFail);
  bool fourth_cumulant_flagged = false;
  for (const auto& s : fail.stats) {
    if (s.order == 4 && s.quadrature == 0 && std::abs(s.standardized) > 4.0) {
      fourth_cumulant_flagged = true;
      // The x-quadrature mixture of +-6 means has excess kurtosis about
      // -2 * 6^4 / ... => strongly negative c4.
      CHECK(s.value < -2000.0);
    }
  }
  CHECK(fourth_cumulant_flagged);

  // Ten samples are never conclusive.
  const GaussianityReport tiny =
      gaussianity_test(compute_moments(sample_state(vacuum(1), 10, 3), 4, 2));
  CHECK(tiny.verdict == GaussianityVerdict::kInconclusive);
}

TEST_CASE("teleported output is Gaussian end to end") {
  const ProtocolConfig lab = reference_lab_config();
  const GaussianState out = run_teleportation(lab, {1.0, 0.5}).output_state;
  const Eigen::MatrixXd samples = sample_state(out, 300'000, 91);
  const GaussianityReport report = gaussianity_test(compute_moments(samples, 4, 100));
  CHECK(report.verdict == GaussianityVerdict::kPass);
}
