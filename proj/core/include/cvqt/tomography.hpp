#pragma once

#include "cvqt/gaussian.hpp"
#include "cvqt/measures.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cvqt {

/// I.i.d. quadrature samples from the state's normal distribution, one row
/// per shot, columns (x1,p1,...). Deterministic for a given seed and
/// independent of how callers may later split work: draws are generated in
/// fixed-size chunks whose generators are seeded from (seed, chunk index).
/// Throws std::domain_error for unphysical states.
Eigen::MatrixXd sample_state(const GaussianState& state, std::size_t n_samples, std::uint64_t seed);

struct MomentEntry {
  std::vector<int> exponents;        // one exponent per quadrature
  double value = 0.0;                // grand mean of the monomial
  std::vector<double> batch_values;  // per-batch means, for error estimation
};

/// Raw mixed moments <x1^a p1^b ...> up to a total order, with per-batch
/// values kept for jackknife errors.
struct MomentSet {
  std::size_t dim = 0;
  std::size_t n_samples = 0;
  std::size_t n_batches = 0;
  int max_order = 0;
  std::vector<MomentEntry> entries;  // ascending total order, lexicographic within

  const MomentEntry& find(const std::vector<int>& exponents) const;
  /// Pooled moment with batch b left out.
  double leave_one_out(const MomentEntry& entry, std::size_t b) const;
};

/// max_order must be 2, 3 or 4; requires at least one sample per batch.
MomentSet compute_moments(const Eigen::MatrixXd& samples, int max_order = 4,
                          std::size_t n_batches = 100);

struct ReconstructionResult {
  GaussianState state_estimate;
  Eigen::VectorXd mean_stderr;
  Eigen::MatrixXd cov_stderr;
  bool cov_positive_definite = true;  // reported, never silently repaired
  double min_symplectic_eig = 0.0;
};

/// Gaussian estimate from first- and second-order moments; standard errors by
/// jackknife over batches. Throws std::invalid_argument when orders 1-2 are
/// missing.
ReconstructionResult reconstruct_gaussian(const MomentSet& moments);

/// Two-mode entanglement diagnostics of the reconstructed state with
/// jackknife standard errors.
struct DiagnosticsWithErrors {
  TwoModeDiagnostics value;
  double negativity_stderr = 0.0;
  double purity_stderr = 0.0;
};
DiagnosticsWithErrors jackknife_two_mode_diagnostics(const MomentSet& moments);

enum class GaussianityVerdict { kPass, kFail, kInconclusive };

struct CumulantStat {
  std::size_t quadrature = 0;
  int order = 0;          // 3 or 4
  double value = 0.0;     // c3, or excess c4 = <q^4>_c - 3 <q^2>_c^2
  double stderr_ = 0.0;
  double standardized = 0.0;
};

struct GaussianityReport {
  GaussianityVerdict verdict = GaussianityVerdict::kInconclusive;
  double max_abs_statistic = 0.0;
  double threshold = 4.0;
  std::vector<CumulantStat> stats;
};

/// Standardized per-quadrature third and excess fourth cumulants from the
/// batch spread; pass iff all |statistic| < threshold standard errors.
/// Fewer than 1000 samples (or a degenerate batch spread) is inconclusive.
GaussianityReport gaussianity_test(const MomentSet& moments, double threshold = 4.0);

}  // namespace cvqt
