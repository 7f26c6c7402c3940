#pragma once

#include <cstddef>
#include <vector>

namespace cvqt {

// CODATA exact values.
inline constexpr double kPlanckH = 6.62607015e-34;     // J s
inline constexpr double kBoltzmannK = 1.380649e-23;    // J / K

// dB helpers. Squeezing level S_dB relates to the squeezing parameter r via
// S_dB = (20 / ln 10) r, i.e. the squeezed quadrature variance is 10^(-S/10).
double squeezing_db_to_r(double s_db);
double r_to_squeezing_db(double r);
double db_to_power_ratio(double db);   // 10^(db/10)
double power_ratio_to_db(double ratio);
/// Loss fraction of a cable run: 1 - 10^(-(length_m * rate_dB_per_km / 1000) / 10).
double attenuation_eps(double length_m, double db_per_km);

/// Effective teleportation channel: output mean = sqrt(kappa) * input mean,
/// plus zeta of added noise (variance per quadrature, vacuum = 1 units).
struct ModelParams {
  double kappa = 1.0;  // effective gain
  double zeta = 0.0;   // effective added noise
};

/// Phase-averaged coherent-state teleportation fidelity of the effective
/// channel at input photon number n_in = |alpha|^2:
///   F = 2/(zeta+kappa+1) * exp(-2 (sqrt(kappa)-1)^2 n_in / (zeta+kappa+1)).
double model_fidelity(double n_in, const ModelParams& params);

/// Resource contribution to the effective noise at squeezing r and gain kappa:
/// (1+kappa) cosh 2r - 2 sqrt(kappa) sinh 2r.
double tms_noise_term(double r, double kappa);

/// zeta = (1+kappa) cosh 2r - 2 sqrt(kappa) sinh 2r + n_dev + n_th.
double effective_noise(double r, double kappa, double n_dev, double n_th);

/// Bose occupancy 1/(exp(hf/kT) - 1) of a mode at frequency f and temperature T.
double planck_occupancy(double frequency_hz, double temperature_k);

/// Thermal photons coupled through a lossy channel: n_th = eps * n_env.
double coupled_noise(double eps, double n_env);

struct FitPoint {
  double n_in = 0.0;
  double fidelity = 0.0;
  double sigma = 1.0;  // standard error; 1 when unknown
};

struct FitResult {
  ModelParams params;
  double rms_residual = 0.0;  // unweighted RMS of (model - data)
  std::size_t n_points = 0;
  bool converged = false;
  std::size_t iterations = 0;  // total objective evaluations
};

/// Weighted least squares for (kappa, zeta) over fidelity-vs-photon-number
/// data. Derivative-free simplex descent with multi-start from
/// kappa0 in {0.5, 1.0} x zeta0 in {0.5, 2.0}; bounds kappa in (1e-4, 10],
/// zeta in [0, 100]; converged when the simplex diameter falls below 1e-10.
/// The model curve is invariant under sqrt(kappa) -> 2 - sqrt(kappa) with
/// zeta shifted to keep zeta+kappa+1 fixed, so the parameters are only
/// identifiable up to that mirror; the attenuating branch (kappa <= 1) is
/// reported. Throws std::invalid_argument for fewer than 3 points,
/// non-positive sigma, fidelities outside (0, 1], or degenerate data (all
/// n_in equal). Non-convergence within the evaluation budget is reported
/// through FitResult::converged rather than thrown.
FitResult fit_model(const std::vector<FitPoint>& data);

/// Constrained variant with the squeezing parameter fixed: fits (kappa, n_extra)
/// with zeta = tms_noise_term(r_fixed, kappa) + n_extra, n_extra >= 0 covering
/// device plus coupled thermal noise.
FitResult fit_model_decomposed(const std::vector<FitPoint>& data, double r_fixed);

}  // namespace cvqt
