#include "layoutforge/dpc.hpp"

#include "layoutforge/error.hpp"

#include <algorithm>
#include <numbers>
#include <cmath>

namespace layoutforge {

double transform_distance(const Transform& a, const Transform& b, double angle_weight) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  // |a - b| first so the result is exactly symmetric.
  const double turn = std::fmod(std::abs(a.theta - b.theta), 2 * std::numbers::pi);
  const double dt = angle_weight * std::min(turn, 2 * std::numbers::pi - turn);
  return std::sqrt(dx * dx + dy * dy + dz * dz + dt * dt);
}

std::size_t cutoff_rank(std::size_t sample_count, double fraction) {
  const double k = static_cast<double>(sample_count);
  const std::size_t pairs = sample_count * (sample_count - 1);
  // The epsilon keeps 0.015 * 200^2 at 600 rather than 601.
  const double raw = std::ceil(fraction * k * k - 1e-9);
  const std::size_t rank = raw < 1 ? 1 : static_cast<std::size_t>(raw);
  return std::clamp<std::size_t>(rank, 1, std::max<std::size_t>(pairs, 1));
}

std::vector<double> pairwise_distances(std::span<const Transform> samples, double angle_weight) {
  const std::size_t k = samples.size();
  std::vector<double> d(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      d[i * k + j] = d[j * k + i] = transform_distance(samples[i], samples[j], angle_weight);
    }
  }
  return d;
}

namespace {

DpcScores score_with_matrix(const std::vector<double>& d, std::size_t k, double cutoff) {
  DpcScores out;
  out.cutoff = cutoff;
  out.rho.assign(k, 0);
  out.delta.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    int count = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i && d[i * k + j] <= cutoff) ++count;
    }
    out.rho[i] = count;
  }
  for (std::size_t i = 0; i < k; ++i) {
    double nearest_denser = std::numeric_limits<double>::infinity();
    double farthest = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double dij = d[i * k + j];
      farthest = std::max(farthest, dij);
      if (out.rho[j] > out.rho[i]) nearest_denser = std::min(nearest_denser, dij);
    }
    out.delta[i] = std::isfinite(nearest_denser) ? nearest_denser : farthest;
  }
  return out;
}

void require_samples(std::size_t k) {
  if (k < 2) {
    throw InsufficientSamplesError("density scoring needs at least 2 samples, got " +
                                   std::to_string(k));
  }
}

}  // namespace

DpcScores dpc_scores(std::span<const Transform> samples, double angle_weight, CutoffOrder order,
                     double fraction) {
  const std::size_t k = samples.size();
  require_samples(k);
  const std::vector<double> d = pairwise_distances(samples, angle_weight);

  std::vector<double> off_diagonal;
  off_diagonal.reserve(k * (k - 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) off_diagonal.push_back(d[i * k + j]);
    }
  }
  const std::size_t rank = cutoff_rank(k, fraction);
  const std::size_t index =
      order == CutoffOrder::kAscending ? rank - 1 : off_diagonal.size() - rank;
  std::nth_element(off_diagonal.begin(), off_diagonal.begin() + static_cast<std::ptrdiff_t>(index),
                   off_diagonal.end());
  return score_with_matrix(d, k, off_diagonal[index]);
}

DpcScores dpc_scores_with_cutoff(std::span<const Transform> samples, double angle_weight,
                                 double cutoff) {
  require_samples(samples.size());
  return score_with_matrix(pairwise_distances(samples, angle_weight), samples.size(), cutoff);
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) return 0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<std::size_t> dpc_denoise(const DpcScores& scores, double rho_quantile,
                                     double delta_quantile) {
  if (!(rho_quantile > 0 && rho_quantile < 1 && delta_quantile > 0 && delta_quantile < 1)) {
    throw ValidationError("denoising quantiles must lie in (0, 1)");
  }
  const std::size_t k = scores.rho.size();
  std::vector<std::size_t> kept;
  if (k == 0) return kept;
  const std::vector<double> rho(scores.rho.begin(), scores.rho.end());
  const double rho_threshold = quantile(rho, rho_quantile);
  const double delta_threshold = quantile(scores.delta, delta_quantile);
  const int rho_max = *std::max_element(scores.rho.begin(), scores.rho.end());
  for (std::size_t i = 0; i < k; ++i) {
    const bool sparse = scores.rho[i] <= rho_threshold && scores.rho[i] < rho_max;
    const bool isolated = scores.delta[i] >= delta_threshold;
    if (!(sparse && isolated)) kept.push_back(i);
  }
  if (kept.empty()) throw EmptyRelationError("denoising removed every sample");
  return kept;
}

}  // namespace layoutforge
