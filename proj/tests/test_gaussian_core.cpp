#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cvqt/gaussian.hpp"
#include "cvqt/measures.hpp"
#include "cvqt/model.hpp"
#include "cvqt/ops.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace cvqt;

namespace {

// Conversion oracle: a squeezing level of S dB corresponds to r = S ln(10)/20,
// i.e. the squeezed variance is 10^(-S/10).
double db_to_r_oracle(double s_db) { return s_db * std::log(10.0) / 20.0; }

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("vacuum and coherent states follow the convention") {
  const GaussianState vac = vacuum(1);
  CHECK(vac.mean().norm() == 0.0);
  CHECK((vac.cov() - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
  CHECK(purity(vac) == doctest::Approx(1.0));

  const GaussianState vac2 = vacuum(2);
  CHECK((vac2.cov() - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);

  CHECK_THROWS_AS(vacuum(0), std::invalid_argument);

  const GaussianState zero = coherent({0.0, 0.0});
  CHECK(zero.mean().norm() == 0.0);
  CHECK((zero.cov() - vac.cov()).norm() == 0.0);

  // n_in = |alpha|^2; the operating point uses alpha = sqrt(1.3).
  const GaussianState c = coherent({std::sqrt(1.3), 0.0});
  CHECK(photon_number(c, 0) == doctest::Approx(1.3).epsilon(1e-12));

  const GaussianState ci = coherent({0.0, 1.0});
  CHECK(ci.mean()(0) == 0.0);
  CHECK(ci.mean()(1) == 2.0);
  CHECK(photon_number(ci, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("thermal states") {
  const GaussianState t0 = thermal(0.0);
  CHECK((t0.cov() - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);

  // Planck oracle at 5.35 GHz / 4 K gives n ~ 15.1, covariance 31.2 I.
  const GaussianState hot = thermal(15.1);
  CHECK(hot.cov()(0, 0) == doctest::Approx(31.2).epsilon(1e-12));

  // Determinant oracle: det((2n+1) I) = 9 at n = 1, purity = 1/3.
  CHECK(purity(thermal(1.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(photon_number(thermal(0.5), 0) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(thermal(-0.1), std::invalid_argument);
}

TEST_CASE("squeezing matches the dB conversion oracle") {
  const GaussianState vac = vacuum(1);
  const GaussianState same = squeeze(vac, 0, 0.0, 0.0);
  CHECK((same.cov() - vac.cov()).norm() < 1e-15);

  const double r = db_to_r_oracle(5.0);
  CHECK(r == doctest::Approx(0.5756462732485115).epsilon(1e-14));
  const GaussianState sq = squeeze(vac, 0, r, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sq.mode_cov(0));
  CHECK(es.eigenvalues().minCoeff() ==
        doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-12));  // 0.31623
  CHECK(squeezing_db(sq, 0) == doctest::Approx(5.0).epsilon(1e-12));

  CHECK(purity(sq) == doctest::Approx(1.0).epsilon(1e-12));  // unitary
  CHECK_THROWS_AS(squeeze(vac, 1, 0.1, 0.0), std::out_of_range);
}

TEST_CASE("beam splitter against the explicit matrix-product oracle") {
  const GaussianState vac2 = vacuum(2);
  const GaussianState through = beam_splitter(vac2, 0, 1, 1.0);
  CHECK((through.cov() - vac2.cov()).norm() < 1e-15);

  // Vacuum is invariant under any passive mixing.
  for (double tau : {0.0, 0.3, 0.5, 0.9}) {
    const GaussianState mixed = beam_splitter(vac2, 0, 1, tau);
    CHECK((mixed.cov() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-14);
  }

  // Two orthogonally squeezed modes through a balanced splitter: compare the
  // full covariance against a hand-built 4x4 product S_bs S_sq I S_sq^T S_bs^T.
  const double r = db_to_r_oracle(5.0);
  GaussianState in = squeeze(squeeze(vacuum(2), 0, r, kPi / 2.0), 1, r, 0.0);
  const GaussianState tms = beam_splitter(in, 0, 1, 0.5);

  Eigen::Matrix4d s_sq = Eigen::Matrix4d::Identity();
  s_sq(0, 0) = std::exp(r);   // mode 0 squeezed along p
  s_sq(1, 1) = std::exp(-r);
  s_sq(2, 2) = std::exp(-r);  // mode 1 squeezed along x
  s_sq(3, 3) = std::exp(r);
  Eigen::Matrix4d s_bs = Eigen::Matrix4d::Zero();
  const double c = 1.0 / std::sqrt(2.0);
  s_bs.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
  s_bs.block<2, 2>(0, 2) = c * Eigen::Matrix2d::Identity();
  s_bs.block<2, 2>(2, 0) = -c * Eigen::Matrix2d::Identity();
  s_bs.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
  const Eigen::Matrix4d total = s_bs * s_sq;
  const Eigen::Matrix4d expected = total * total.transpose();
  CHECK((tms.cov() - expected).cwiseAbs().maxCoeff() < 1e-12);

  // Cross correlations carry +-sinh(2r) and the state is entangled.
  CHECK(std::abs(tms.cov()(0, 2)) == doctest::Approx(std::sinh(2.0 * r)).epsilon(1e-12));
  CHECK(negativity(tms) > 1.0);

  CHECK_THROWS_AS(beam_splitter(vac2, 0, 1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(beam_splitter(vac2, 0, 0, 0.5), std::invalid_argument);
}

TEST_CASE("phase rotation") {
  const GaussianState c = coherent({1.0, 0.5});
  const GaussianState same = phase_rotation(c, 0, 0.0);
  CHECK((same.mean() - c.mean()).norm() < 1e-15);
  const GaussianState flipped = phase_rotation(c, 0, kPi);
  CHECK((flipped.mean() + c.mean()).norm() < 1e-12);

  const GaussianState th = thermal(2.3);
  for (double theta : {0.17, 1.0, 2.9}) {
    CHECK((phase_rotation(th, 0, theta).cov() - th.cov()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("displacement") {
  const GaussianState vac = vacuum(1);
  const std::complex<double> alpha{0.7, -1.1};
  const GaussianState disp = displace(vac, 0, alpha);
  CHECK((disp.mean() - coherent(alpha).mean()).norm() < 1e-15);
  CHECK((disp.cov() - vac.cov()).norm() == 0.0);
  const GaussianState undone = displace(coherent(alpha), 0, -alpha);
  CHECK(undone.mean().norm() < 1e-15);
}

TEST_CASE("thermal loss channel") {
  const GaussianState vac = vacuum(1);
  const GaussianState same = loss_thermal_channel(vac, 0, 0.0, 3.0);
  CHECK((same.cov() - vac.cov()).norm() < 1e-15);

  // Coupled noise n_th = eps n_env shows up as 2 eps n_env of variance.
  const double eps = 0.3;
  const double n_env = 2.5;
  const GaussianState noisy = loss_thermal_channel(vac, 0, eps, n_env);
  CHECK(noisy.cov()(0, 0) == doctest::Approx(1.0 + 2.0 * eps * n_env).epsilon(1e-12));
  CHECK(photon_number(noisy, 0) == doctest::Approx(eps * n_env).epsilon(1e-12));

  // Composition of the attenuation law and Planck oracles: a 6 m run at
  // 1 dB/km into a 4 K environment couples ~0.021 photons.
  const double eps_link = attenuation_eps(6.0, 1.0);
  CHECK(eps_link == doctest::Approx(1.3805971534753825e-3).epsilon(1e-10));
  const double n_link = planck_occupancy(5.35e9, 4.0);
  const GaussianState through = loss_thermal_channel(vac, 0, eps_link, n_link);
  CHECK(photon_number(through, 0) == doctest::Approx(0.0208251).epsilon(1e-4));

  // Full loss replaces the mode with the environment regardless of input.
  const GaussianState squeezed = squeeze(coherent({2.0, 1.0}), 0, 0.9, 0.3);
  const GaussianState replaced = loss_thermal_channel(squeezed, 0, 1.0, n_env);
  CHECK((replaced.cov() - thermal(n_env).cov()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(replaced.mean().norm() < 1e-12);

  CHECK_THROWS_AS(loss_thermal_channel(vac, 0, 1.2, 0.0), std::invalid_argument);

  // Loss on a pure state never pushes purity above one, and strictly lowers
  // it for eps in (0,1) with a hot environment.
  const double mu = purity(loss_thermal_channel(squeezed, 0, 0.4, 1.0));
  CHECK(mu < 1.0);
  CHECK(mu > 0.0);
}

TEST_CASE("phase sensitive amplifier") {
  const GaussianState vac = vacuum(1);
  const GaussianState same = phase_sensitive_amp(vac, 0, 0.0, 0.0);
  CHECK((same.cov() - vac.cov()).norm() < 1e-13);

  const GaussianState amped = phase_sensitive_amp(vac, 0, 21.0, 0.0);
  CHECK(amped.cov()(0, 0) == doctest::Approx(std::pow(10.0, 2.1)).epsilon(1e-12));  // 125.9
  CHECK(purity(amped) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tensor and partial trace") {
  const GaussianState two = tensor(vacuum(1), vacuum(1));
  CHECK((two.cov() - vacuum(2).cov()).norm() == 0.0);

  // Closed-form TMS marginal oracle: each arm is thermal with n = sinh^2 r.
  const double r = db_to_r_oracle(5.0);
  GaussianState in = squeeze(squeeze(vacuum(2), 0, r, kPi / 2.0), 1, r, 0.0);
  const GaussianState tms = beam_splitter(in, 0, 1, 0.5);
  const double n_arm = std::sinh(r) * std::sinh(r);
  for (std::size_t arm : {0u, 1u}) {
    const GaussianState marginal = partial_trace(tms, {arm});
    CHECK((marginal.cov() - thermal(n_arm).cov()).cwiseAbs().maxCoeff() < 1e-12);
  }

  // Round trip through a product state returns the original factor.
  const GaussianState a = squeeze(coherent({0.3, -0.4}), 0, 0.2, 0.1);
  const GaussianState joint = tensor(a, thermal(0.7));
  const GaussianState back = partial_trace(joint, {0});
  CHECK((back.mean() - a.mean()).norm() < 1e-14);
  CHECK((back.cov() - a.cov()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(partial_trace(joint, {5}), std::out_of_range);
}

TEST_CASE("symplectic ops compose like their matrices") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 2;  // 2- and 3-mode states
    const SymplecticOp a = squeezer(n, trial % n, unit(rng), 2.0 * kPi * unit(rng));
    const SymplecticOp b =
        beam_splitter_op(n, 0, 1 + trial % (n - 1), unit(rng), 2.0 * kPi * unit(rng));
    const SymplecticOp c = rotation_op(n, (trial + 1) % n, 2.0 * kPi * unit(rng));
    const SymplecticOp chained = a.then(b).then(c);

    // Matrix-product oracle.
    const Eigen::MatrixXd expected = c.matrix() * b.matrix() * a.matrix();
    CHECK((chained.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);

    // Applying the composition equals applying the steps on a random state.
    GaussianState state = vacuum(n);
    for (std::size_t m = 0; m < n; ++m) {
      state = loss_thermal_channel(state, m, 0.3 * unit(rng), unit(rng));
    }
    const GaussianState stepped = apply(apply(apply(state, a), b), c);
    const GaussianState direct = apply(state, chained);
    CHECK((stepped.cov() - direct.cov()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((stepped.mean() - direct.mean()).norm() < 1e-12);

    // Every generated operation satisfies the symplectic condition.
    const Eigen::MatrixXd omega = symplectic_form(n);
    CHECK((chained.matrix().transpose() * omega * chained.matrix() - omega)
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }

  CHECK_THROWS_AS(SymplecticOp(2.0 * Eigen::MatrixXd::Identity(4, 4), "not symplectic"),
                  std::invalid_argument);
}

TEST_CASE("passive operations preserve total photon number") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    GaussianState state = tensor(coherent({unit(rng), unit(rng)}), thermal(unit(rng)));
    state = squeeze(state, 0, 0.4 * unit(rng), 2.0 * kPi * unit(rng));
    const double before = total_photon_number(state);
    GaussianState mixed = beam_splitter(state, 0, 1, unit(rng), 2.0 * kPi * unit(rng));
    mixed = phase_rotation(mixed, 0, 2.0 * kPi * unit(rng));
    mixed = phase_rotation(mixed, 1, 2.0 * kPi * unit(rng));
    CHECK(total_photon_number(mixed) == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("operations preserve symmetry and physicality") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GaussianState state = vacuum(3);
  for (int step = 0; step < 40; ++step) {
    switch (step % 5) {
      case 0: state = squeeze(state, step % 3, 0.6 * unit(rng), 2.0 * kPi * unit(rng)); break;
      case 1: state = beam_splitter(state, step % 3, (step + 1) % 3, unit(rng)); break;
      case 2: state = loss_thermal_channel(state, step % 3, unit(rng), 2.0 * unit(rng)); break;
      case 3: state = phase_sensitive_amp(state, step % 3, 4.0 * unit(rng), unit(rng)); break;
      default: state = displace(state, step % 3, {unit(rng), -unit(rng)}); break;
    }
    CHECK((state.cov() - state.cov().transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(state.min_symplectic_eigenvalue() >= 1.0 - 1e-9);
  }
}

TEST_CASE("permute modes relabels blocks") {
  const GaussianState joint = tensor(coherent({1.0, 0.0}), thermal(0.5));
  const GaussianState swapped = permute_modes(joint, {1, 0});
  CHECK(swapped.mean()(2) == doctest::Approx(2.0));
  CHECK(swapped.cov()(0, 0) == doctest::Approx(2.0));  // thermal(0.5) block first
  CHECK_THROWS_AS(permute_modes(joint, {0, 0}), std::invalid_argument);
}
