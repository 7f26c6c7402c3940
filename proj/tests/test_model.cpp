#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cvqt/model.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace cvqt;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1));
  }
  return out;
}

}  // namespace

TEST_CASE("model fidelity closed form") {
  // Classical limit: kappa = 1, zeta = 2 gives exactly 1/2 at every photon
  // number.
  for (double n : {0.0, 0.5, 3.0, 50.0}) {
    CHECK(model_fidelity(n, {1.0, 2.0}) == doctest::Approx(0.5).epsilon(1e-15));
  }

  // Direct evaluation at the fitted operating point (values frozen from an
  // independent evaluation of the expression).
  const ModelParams fitted{0.778, 1.015};
  CHECK(model_fidelity(0.0, fitted) == doctest::Approx(0.7160759040458288).epsilon(1e-12));
  CHECK(model_fidelity(8.3, fitted) == doctest::Approx(0.6592417245383636).epsilon(1e-12));
  CHECK(model_fidelity(33.2, fitted) == doctest::Approx(0.5144007194334359).epsilon(1e-12));

  CHECK_THROWS_AS(model_fidelity(1.0, {-0.1, 0.0}), std::domain_error);
  CHECK_THROWS_AS(model_fidelity(-1.0, fitted), std::domain_error);
}

TEST_CASE("model fidelity monotonicity") {
  // Strictly decreasing in zeta everywhere.
  for (double n : {0.0, 1.0, 10.0}) {
    double previous = 2.0;
    for (double zeta : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      const double f = model_fidelity(n, {0.9, zeta});
      CHECK(f < previous);
      previous = f;
    }
  }
  // Decreasing in n_in iff kappa != 1.
  CHECK(model_fidelity(5.0, {0.7, 1.0}) < model_fidelity(1.0, {0.7, 1.0}));
  CHECK(model_fidelity(5.0, {1.3, 1.0}) < model_fidelity(1.0, {1.3, 1.0}));
  CHECK(model_fidelity(5.0, {1.0, 1.0}) == doctest::Approx(model_fidelity(1.0, {1.0, 1.0})));
}

TEST_CASE("effective noise expression") {
  CHECK(effective_noise(0.0, 1.0, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));

  // Asymptotic oracle: at kappa = 1 the resource term is exactly 2 e^{-2r}.
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    CHECK(effective_noise(r, 1.0, 0.0, 0.0) ==
          doctest::Approx(2.0 * std::exp(-2.0 * r)).epsilon(1e-12));
  }

  // Direct evaluation at the reference gain and 5 dB squeezing.
  CHECK(effective_noise(0.5756462732485115, 0.778, 0.0, 0.0) ==
        doctest::Approx(0.5820527013020147).epsilon(1e-12));

  // Additive noise terms.
  CHECK(effective_noise(0.3, 0.9, 0.25, 0.1) ==
        doctest::Approx(tms_noise_term(0.3, 0.9) + 0.35).epsilon(1e-12));

  CHECK_THROWS_AS(effective_noise(-0.1, 1.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(effective_noise(0.0, 0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("resource term has a unique stationary gain") {
  // d zeta / d kappa = cosh 2r - sinh 2r / sqrt(kappa) vanishes only at
  // sqrt(kappa) = tanh 2r; verified numerically on a grid.
  for (double r : {0.2, 0.6, 1.2}) {
    const double kappa_opt = std::tanh(2.0 * r) * std::tanh(2.0 * r);
    int sign_changes = 0;
    double previous = 0.0;
    bool first = true;
    for (double kappa = 0.05; kappa < 2.0; kappa += 0.01) {
      const double h = 1e-6;
      const double d = (tms_noise_term(r, kappa + h) - tms_noise_term(r, kappa - h)) / (2 * h);
      if (!first && d * previous < 0.0) ++sign_changes;
      previous = d;
      first = false;
    }
    CHECK(sign_changes == 1);
    // The minimum sits at tanh^2(2r).
    const double h = 1e-6;
    CHECK(std::abs((tms_noise_term(r, kappa_opt + h) - tms_noise_term(r, kappa_opt - h)) /
                   (2 * h)) < 1e-4);
  }
}

TEST_CASE("planck occupancy") {
  // Analytic point: hf/kT = ln 2 makes the occupancy exactly one.
  const double f = 5.0e9;
  const double t_ln2 = kPlanckH * f / (kBoltzmannK * std::log(2.0));
  CHECK(planck_occupancy(f, t_ln2) == doctest::Approx(1.0).epsilon(1e-12));

  // Constants oracle (CODATA h, k) evaluated independently.
  CHECK(planck_occupancy(5.35e9, 4.0) == doctest::Approx(15.084129441994355).epsilon(1e-12));
  CHECK(planck_occupancy(5.35e9, 0.17) == doctest::Approx(0.28342136273604446).epsilon(1e-12));

  // Monotone in both arguments.
  CHECK(planck_occupancy(5.35e9, 2.0) < planck_occupancy(5.35e9, 4.0));
  CHECK(planck_occupancy(8.0e9, 4.0) < planck_occupancy(5.35e9, 4.0));

  CHECK_THROWS_AS(planck_occupancy(5.35e9, 0.0), std::domain_error);
  CHECK_THROWS_AS(planck_occupancy(0.0, 1.0), std::domain_error);
}

TEST_CASE("coupled noise") {
  CHECK(coupled_noise(0.0, 100.0) == 0.0);
  CHECK(coupled_noise(0.5, 2.0) == doctest::Approx(1.0));
  CHECK(coupled_noise(1.3805971534753825e-3, 15.084129441994355) ==
        doctest::Approx(0.0208251).epsilon(1e-4));
  CHECK_THROWS_AS(coupled_noise(-0.1, 1.0), std::domain_error);
}

TEST_CASE("fit recovers parameters from clean data") {
  const ModelParams truth{0.778, 1.015};
  std::vector<FitPoint> data;
  for (double n : log_grid(0.01, 100.0, 20)) {
    data.push_back({n, model_fidelity(n, truth), 1.0});
  }
  const FitResult fit = fit_model(data);
  CHECK(fit.converged);
  CHECK(fit.n_points == 20);
  CHECK(std::abs(fit.params.kappa - truth.kappa) < 1e-6);
  CHECK(std::abs(fit.params.zeta - truth.zeta) < 1e-6);
  CHECK(fit.rms_residual < 1e-9);

  // Implied attenuation of the recovered gain.
  CHECK(-10.0 * std::log10(fit.params.kappa) == doctest::Approx(1.09).epsilon(2e-3));
}

TEST_CASE("fit is robust to multiplicative noise") {
  const ModelParams truth{0.778, 1.015};
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  int failures = 0;
  for (int seed = 0; seed < 20; ++seed) {
    std::vector<FitPoint> data;
    for (double n : log_grid(0.01, 100.0, 20)) {
      const double f = model_fidelity(n, truth);
      data.push_back({n, std::min(1.0, f * (1.0 + 0.005 * normal(rng))), 0.005 * f});
    }
    const FitResult fit = fit_model(data);
    if (std::abs(fit.params.kappa / truth.kappa - 1.0) > 0.02 ||
        std::abs(fit.params.zeta / truth.zeta - 1.0) > 0.02) {
      ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("fit is scale consistent in the weights") {
  const ModelParams truth{0.85, 1.4};
  std::vector<FitPoint> data;
  std::mt19937_64 rng(123);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double n : log_grid(0.05, 50.0, 15)) {
    const double f = model_fidelity(n, truth);
    data.push_back({n, std::min(1.0, f + 0.002 * normal(rng)), 0.01});
  }
  const FitResult base = fit_model(data);
  for (auto& p : data) p.sigma *= 7.5;
  const FitResult scaled = fit_model(data);
  CHECK(std::abs(base.params.kappa - scaled.params.kappa) < 1e-7);
  CHECK(std::abs(base.params.zeta - scaled.params.zeta) < 1e-7);
}

TEST_CASE("fit input validation") {
  std::vector<FitPoint> tiny = {{0.1, 0.7, 1.0}, {1.0, 0.6, 1.0}};
  CHECK_THROWS_AS(fit_model(tiny), std::invalid_argument);

  std::vector<FitPoint> degenerate = {{1.0, 0.7, 1.0}, {1.0, 0.6, 1.0}, {1.0, 0.65, 1.0}};
  CHECK_THROWS_AS(fit_model(degenerate), std::invalid_argument);

  std::vector<FitPoint> bad_sigma = {{0.1, 0.7, 0.0}, {1.0, 0.6, 1.0}, {2.0, 0.5, 1.0}};
  CHECK_THROWS_AS(fit_model(bad_sigma), std::invalid_argument);

  std::vector<FitPoint> bad_f = {{0.1, 1.2, 1.0}, {1.0, 0.6, 1.0}, {2.0, 0.5, 1.0}};
  CHECK_THROWS_AS(fit_model(bad_f), std::invalid_argument);
}

TEST_CASE("decomposed fit ties zeta to the squeezing level") {
  const double r = 0.5756462732485115;  // 5 dB
  const double kappa_true = 0.8;
  const double n_extra_true = 0.4;
  const ModelParams truth{kappa_true, tms_noise_term(r, kappa_true) + n_extra_true};
  std::vector<FitPoint> data;
  for (double n : log_grid(0.01, 100.0, 20)) {
    data.push_back({n, model_fidelity(n, truth), 1.0});
  }
  const FitResult fit = fit_model_decomposed(data, r);
  CHECK(fit.converged);
  CHECK(std::abs(fit.params.kappa - kappa_true) < 1e-6);
  CHECK(std::abs(fit.params.zeta - truth.zeta) < 1e-6);
}

TEST_CASE("conversion helpers") {
  CHECK(squeezing_db_to_r(5.0) == doctest::Approx(0.5756462732485115).epsilon(1e-14));
  CHECK(r_to_squeezing_db(squeezing_db_to_r(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
  CHECK(db_to_power_ratio(3.0) == doctest::Approx(1.9952623149688795).epsilon(1e-12));
  CHECK(attenuation_eps(0.0, 1.0) == 0.0);
  CHECK(attenuation_eps(6.0, 1.0) == doctest::Approx(1.3805971534753825e-3).epsilon(1e-12));
}
