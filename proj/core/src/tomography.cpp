#include "cvqt/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>

namespace cvqt {

namespace {

constexpr std::size_t kSampleChunk = 1 << 16;
constexpr std::size_t kMinGaussianitySamples = 1000;

// SplitMix64; decorrelates per-chunk generator seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t chunk) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (chunk + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Enumerates exponent vectors with total order 1..max_order, ascending total
// order, lexicographic within an order.
void enumerate_exponents(std::size_t dim, int max_order, std::vector<std::vector<int>>& out) {
  std::vector<int> current(dim, 0);
  for (int order = 1; order <= max_order; ++order) {
    std::vector<std::vector<int>> level;
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int remaining) {
      if (pos == dim - 1) {
        current[pos] = remaining;
        level.push_back(current);
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        current[pos] = e;
        rec(pos + 1, remaining - e);
      }
      current[pos] = 0;
    };
    rec(0, order);
    for (auto& v : level) out.push_back(std::move(v));
  }
}

}  // namespace

Eigen::MatrixXd sample_state(const GaussianState& state, std::size_t n_samples,
                             std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("sample_state: need at least one sample");
  state.require_physical("sample_state");

  // Factor V = B B^T through the symmetric eigendecomposition; robust for
  // strongly squeezed covariances where Cholesky can fail on roundoff.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.cov());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("sample_state: eigensolver failed");
  }
  const Eigen::MatrixXd factor =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  const std::size_t dim = state.dim();
  Eigen::MatrixXd samples(n_samples, dim);
  const std::size_t n_chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
  Eigen::VectorXd z(dim);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    std::mt19937_64 rng(mix_seed(seed, c));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(begin + kSampleChunk, n_samples);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t d = 0; d < dim; ++d) z(d) = normal(rng);
      samples.row(i) = (state.mean() + factor * z).transpose();
    }
  }
  return samples;
}

const MomentEntry& MomentSet::find(const std::vector<int>& exponents) const {
  for (const auto& e : entries) {
    if (e.exponents == exponents) return e;
  }
  throw std::out_of_range("MomentSet::find: no such moment");
}

double MomentSet::leave_one_out(const MomentEntry& entry, std::size_t b) const {
  if (b >= n_batches) throw std::out_of_range("MomentSet::leave_one_out: bad batch index");
  // Batches are equal-sized up to remainder; reconstruct counts from the split.
  const std::size_t base = n_samples / n_batches;
  const std::size_t rem = n_samples % n_batches;
  const std::size_t nb = base + (b < rem ? 1 : 0);
  const double total = entry.value * static_cast<double>(n_samples);
  const double batch_part = entry.batch_values[b] * static_cast<double>(nb);
  return (total - batch_part) / static_cast<double>(n_samples - nb);
}

MomentSet compute_moments(const Eigen::MatrixXd& samples, int max_order, std::size_t n_batches) {
  if (max_order < 2 || max_order > 4) {
    throw std::invalid_argument("compute_moments: max_order must be 2, 3 or 4");
  }
  const std::size_t n = static_cast<std::size_t>(samples.rows());
  const std::size_t dim = static_cast<std::size_t>(samples.cols());
  if (dim == 0 || dim % 2 != 0) {
    throw std::invalid_argument("compute_moments: sample dimension must be even");
  }
  if (n_batches < 1 || n < n_batches) {
    throw std::invalid_argument("compute_moments: need at least one sample per batch");
  }

  MomentSet set;
  set.dim = dim;
  set.n_samples = n;
  set.n_batches = n_batches;
  set.max_order = max_order;
  std::vector<std::vector<int>> exponents;
  enumerate_exponents(dim, max_order, exponents);
  set.entries.resize(exponents.size());
  for (std::size_t e = 0; e < exponents.size(); ++e) {
    set.entries[e].exponents = exponents[e];
    set.entries[e].batch_values.assign(n_batches, 0.0);
  }

  // Contiguous batch ranges: batch b covers [offset_b, offset_{b+1}).
  const std::size_t base = n / n_batches;
  const std::size_t rem = n % n_batches;
  std::vector<double> powers(dim * (max_order + 1), 1.0);
  std::size_t row = 0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    const std::size_t nb = base + (b < rem ? 1 : 0);
    std::vector<double> sums(exponents.size(), 0.0);
    for (std::size_t i = 0; i < nb; ++i, ++row) {
      for (std::size_t d = 0; d < dim; ++d) {
        const double x = samples(row, d);
        double p = 1.0;
        for (int k = 0; k <= max_order; ++k) {
          powers[d * (max_order + 1) + k] = p;
          p *= x;
        }
      }
      for (std::size_t e = 0; e < exponents.size(); ++e) {
        double prod = 1.0;
        const auto& exps = exponents[e];
        for (std::size_t d = 0; d < dim; ++d) {
          if (exps[d] != 0) prod *= powers[d * (max_order + 1) + exps[d]];
        }
        sums[e] += prod;
      }
    }
    for (std::size_t e = 0; e < exponents.size(); ++e) {
      set.entries[e].batch_values[b] = sums[e] / static_cast<double>(nb);
    }
  }
  for (std::size_t e = 0; e < exponents.size(); ++e) {
    double total = 0.0;
    row = 0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t nb = base + (b < rem ? 1 : 0);
      total += set.entries[e].batch_values[b] * static_cast<double>(nb);
      row += nb;
    }
    set.entries[e].value = total / static_cast<double>(n);
  }
  return set;
}

namespace {

std::vector<int> unit_exponent(std::size_t dim, std::size_t i, int power) {
  std::vector<int> e(dim, 0);
  e[i] = power;
  return e;
}

std::vector<int> pair_exponent(std::size_t dim, std::size_t i, std::size_t j) {
  std::vector<int> e(dim, 0);
  e[i] += 1;
  e[j] += 1;
  return e;
}

struct FirstSecond {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Mean and (unbiased-scaled) covariance from raw first and second moments.
FirstSecond moments_to_gaussian(const MomentSet& set,
                                const std::function<double(const MomentEntry&)>& read,
                                double bias_factor) {
  const std::size_t dim = set.dim;
  FirstSecond out{Eigen::VectorXd(dim), Eigen::MatrixXd(dim, dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    out.mean(i) = read(set.find(unit_exponent(dim, i, 1)));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const auto& entry =
          i == j ? set.find(unit_exponent(dim, i, 2)) : set.find(pair_exponent(dim, i, j));
      const double raw = read(entry);
      const double central = raw - out.mean(i) * out.mean(j);
      out.cov(i, j) = out.cov(j, i) = central * bias_factor;
    }
  }
  return out;
}

}  // namespace

ReconstructionResult reconstruct_gaussian(const MomentSet& moments) {
  if (moments.max_order < 2 || moments.entries.empty()) {
    throw std::invalid_argument("reconstruct_gaussian: orders 1-2 are required");
  }
  const std::size_t dim = moments.dim;
  const double n = static_cast<double>(moments.n_samples);
  const double bias = n > 1.5 ? n / (n - 1.0) : 1.0;

  const FirstSecond full = moments_to_gaussian(
      moments, [](const MomentEntry& e) { return e.value; }, bias);

  // Jackknife over batches for per-entry standard errors.
  const std::size_t n_batches = moments.n_batches;
  Eigen::VectorXd mean_acc = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd cov_acc = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<FirstSecond> replicates;
  replicates.reserve(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    replicates.push_back(moments_to_gaussian(
        moments, [&](const MomentEntry& e) { return moments.leave_one_out(e, b); }, bias));
    mean_acc += replicates.back().mean;
    cov_acc += replicates.back().cov;
  }
  mean_acc /= static_cast<double>(n_batches);
  cov_acc /= static_cast<double>(n_batches);
  Eigen::VectorXd mean_var = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd cov_var = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& rep : replicates) {
    mean_var += (rep.mean - mean_acc).cwiseAbs2();
    cov_var += (rep.cov - cov_acc).cwiseAbs2();
  }
  const double jack = (static_cast<double>(n_batches) - 1.0) / static_cast<double>(n_batches);
  mean_var *= jack;
  cov_var *= jack;

  ReconstructionResult result{GaussianState(full.mean, full.cov), mean_var.cwiseSqrt(),
                              cov_var.cwiseSqrt(), true, 0.0};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full.cov);
  result.cov_positive_definite = es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0;
  result.min_symplectic_eig = min_symplectic_eigenvalue(full.cov);
  return result;
}

DiagnosticsWithErrors jackknife_two_mode_diagnostics(const MomentSet& moments) {
  if (moments.dim != 4) {
    throw std::invalid_argument("jackknife_two_mode_diagnostics: need a two-mode moment set");
  }
  const double n = static_cast<double>(moments.n_samples);
  const double bias = n > 1.5 ? n / (n - 1.0) : 1.0;
  const FirstSecond full = moments_to_gaussian(
      moments, [](const MomentEntry& e) { return e.value; }, bias);
  DiagnosticsWithErrors out;
  out.value = two_mode_diagnostics(GaussianState(full.mean, full.cov));

  const std::size_t n_batches = moments.n_batches;
  std::vector<double> neg(n_batches), pur(n_batches);
  double neg_mean = 0.0;
  double pur_mean = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    const FirstSecond rep = moments_to_gaussian(
        moments, [&](const MomentEntry& e) { return moments.leave_one_out(e, b); }, bias);
    const GaussianState s(rep.mean, rep.cov);
    neg[b] = negativity(s);
    pur[b] = purity(s);
    neg_mean += neg[b];
    pur_mean += pur[b];
  }
  neg_mean /= static_cast<double>(n_batches);
  pur_mean /= static_cast<double>(n_batches);
  double neg_var = 0.0;
  double pur_var = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    neg_var += (neg[b] - neg_mean) * (neg[b] - neg_mean);
    pur_var += (pur[b] - pur_mean) * (pur[b] - pur_mean);
  }
  const double jack = (static_cast<double>(n_batches) - 1.0) / static_cast<double>(n_batches);
  out.negativity_stderr = std::sqrt(jack * neg_var);
  out.purity_stderr = std::sqrt(jack * pur_var);
  return out;
}

GaussianityReport gaussianity_test(const MomentSet& moments, double threshold) {
  if (moments.max_order < 4) {
    throw std::invalid_argument("gaussianity_test: fourth-order moments are required");
  }
  GaussianityReport report;
  report.threshold = threshold;

  const std::size_t dim = moments.dim;
  const std::size_t n_batches = moments.n_batches;
  bool degenerate = moments.n_samples < kMinGaussianitySamples || n_batches < 2;

  for (std::size_t q = 0; q < dim && !degenerate; ++q) {
    const auto& m1 = moments.find(unit_exponent(dim, q, 1));
    const auto& m2 = moments.find(unit_exponent(dim, q, 2));
    const auto& m3 = moments.find(unit_exponent(dim, q, 3));
    const auto& m4 = moments.find(unit_exponent(dim, q, 4));
    auto cumulants = [&](double u1, double u2, double u3, double u4) {
      const double c2 = u2 - u1 * u1;
      const double c3 = u3 - 3.0 * u2 * u1 + 2.0 * u1 * u1 * u1;
      const double mu4 = u4 - 4.0 * u3 * u1 + 6.0 * u2 * u1 * u1 - 3.0 * u1 * u1 * u1 * u1;
      const double c4 = mu4 - 3.0 * c2 * c2;
      return std::pair<double, double>(c3, c4);
    };

    // Per-batch cumulants; the spread across batches gives the error bar.
    double c3_sum = 0.0, c3_sq = 0.0, c4_sum = 0.0, c4_sq = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      const auto [c3_b, c4_b] = cumulants(m1.batch_values[b], m2.batch_values[b],
                                          m3.batch_values[b], m4.batch_values[b]);
      c3_sum += c3_b;
      c3_sq += c3_b * c3_b;
      c4_sum += c4_b;
      c4_sq += c4_b * c4_b;
    }
    const double nb = static_cast<double>(n_batches);
    auto push_stat = [&](int order, double sum, double sq) {
      const double mean = sum / nb;
      const double var = std::max(0.0, (sq - nb * mean * mean) / (nb - 1.0));
      const double se = std::sqrt(var / nb);
      CumulantStat stat;
      stat.quadrature = q;
      stat.order = order;
      stat.value = mean;
      stat.stderr_ = se;
      if (se == 0.0) {
        degenerate = degenerate || mean != 0.0;
        stat.standardized = 0.0;
      } else {
        stat.standardized = mean / se;
      }
      report.stats.push_back(stat);
      report.max_abs_statistic = std::max(report.max_abs_statistic, std::abs(stat.standardized));
    };
    push_stat(3, c3_sum, c3_sq);
    push_stat(4, c4_sum, c4_sq);
  }

  if (degenerate) {
    report.verdict = GaussianityVerdict::kInconclusive;
  } else {
    report.verdict = report.max_abs_statistic < threshold ? GaussianityVerdict::kPass
                                                          : GaussianityVerdict::kFail;
  }
  return report;
}

}  // namespace cvqt
