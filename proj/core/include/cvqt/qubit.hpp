#pragma once

#include "cvqt/model.hpp"

#include <vector>

namespace cvqt {

/// Ground state |0> teleportation fidelity via the effective channel:
/// F = 2/(zeta+kappa+1). Coincides with model_fidelity at n_in = 0.
double fidelity_ground(double kappa, double zeta);

/// Excited state |1> teleportation fidelity:
/// F = (2 zeta^2 - 2 kappa^2 + 12 kappa - 2) / (zeta+kappa+1)^3.
/// Throws std::domain_error when the expression leaves [0,1] by more than
/// 1e-9 (parameters outside the model's validity).
double fidelity_excited(double kappa, double zeta);

/// Average fidelity over the Bloch sphere:
/// ((6 zeta + 4 sqrt(kappa)) (zeta+kappa+1) + 16 kappa) / (3 (zeta+kappa+1)^3).
double average_qubit_fidelity(double kappa, double zeta);

struct TemperatureFit {
  double t_cen = 0.0;  // kelvin
  ModelParams params;  // fitted at this temperature
};

struct QubitPrediction {
  double t_cen = 0.0;
  double kappa = 0.0;
  double zeta = 0.0;        // after any squeezing-level substitution
  double fidelity_ground = 0.0;
  double fidelity_excited = 0.0;
  double avg_fidelity = 0.0;
};

/// Maps fitted (kappa, zeta) per channel temperature to predicted qubit
/// teleportation fidelities. When target_s_tms_db differs from the squeezing
/// the fits were taken at, the resource part of zeta is swapped:
/// zeta' = zeta - tms_noise_term(r_fitted, kappa) + tms_noise_term(r_target, kappa).
std::vector<QubitPrediction> predict_vs_temperature(const std::vector<TemperatureFit>& fits,
                                                    double fitted_s_tms_db,
                                                    double target_s_tms_db);

}  // namespace cvqt
