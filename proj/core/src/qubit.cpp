#include "cvqt/qubit.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqt {

namespace {

void check_domain(const char* op, double kappa, double zeta) {
  if (kappa <= 0.0) throw std::domain_error(std::string(op) + ": kappa must be positive");
  if (zeta < 0.0) throw std::domain_error(std::string(op) + ": zeta must be non-negative");
}

}  // namespace

double fidelity_ground(double kappa, double zeta) {
  check_domain("fidelity_ground", kappa, zeta);
  return 2.0 / (zeta + kappa + 1.0);
}

double fidelity_excited(double kappa, double zeta) {
  check_domain("fidelity_excited", kappa, zeta);
  const double s = zeta + kappa + 1.0;
  const double f = (2.0 * zeta * zeta - 2.0 * kappa * kappa + 12.0 * kappa - 2.0) / (s * s * s);
  if (f < -1e-9 || f > 1.0 + 1e-9) {
    throw std::domain_error("fidelity_excited: parameters outside the model's validity");
  }
  return f;
}

double average_qubit_fidelity(double kappa, double zeta) {
  check_domain("average_qubit_fidelity", kappa, zeta);
  const double s = zeta + kappa + 1.0;
  // Single-fraction form so the perfect-channel point (1, 0) lands on 1 exactly.
  const double f = ((6.0 * zeta + 4.0 * std::sqrt(kappa)) * s + 16.0 * kappa) / (3.0 * s * s * s);
  if (f < -1e-9 || f > 1.0 + 1e-9) {
    throw std::domain_error("average_qubit_fidelity: parameters outside the model's validity");
  }
  return f;
}

std::vector<QubitPrediction> predict_vs_temperature(const std::vector<TemperatureFit>& fits,
                                                    double fitted_s_tms_db,
                                                    double target_s_tms_db) {
  const double r_fit = squeezing_db_to_r(fitted_s_tms_db);
  const double r_target = squeezing_db_to_r(target_s_tms_db);
  std::vector<QubitPrediction> out;
  out.reserve(fits.size());
  for (const auto& f : fits) {
    QubitPrediction p;
    p.t_cen = f.t_cen;
    p.kappa = f.params.kappa;
    p.zeta = f.params.zeta;
    if (r_target != r_fit) {
      p.zeta += tms_noise_term(r_target, p.kappa) - tms_noise_term(r_fit, p.kappa);
      if (p.zeta < 0.0) {
        throw std::domain_error(
            "predict_vs_temperature: squeezing substitution drove zeta negative");
      }
    }
    p.fidelity_ground = fidelity_ground(p.kappa, p.zeta);
    p.fidelity_excited = fidelity_excited(p.kappa, p.zeta);
    p.avg_fidelity = average_qubit_fidelity(p.kappa, p.zeta);
    out.push_back(p);
  }
  return out;
}

}  // namespace cvqt
