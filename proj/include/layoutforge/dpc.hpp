#pragma once

// Density-peak scoring of relative poses, used to strip noisy co-occurrence
// samples before they become priors.

#include "layoutforge/transform.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace layoutforge {

/// Euclidean distance between poses in (x, y, z, angle_weight * wrapped dtheta)
/// space. `angle_weight` is in meters per radian.
double transform_distance(const Transform& a, const Transform& b, double angle_weight);

/// Which end of the sorted pairwise distances the cutoff rank counts from.
/// Ascending is the density-peak convention (every sample has on average a
/// `fraction` share of the others as neighbours); descending counts from the
/// greatest distance.
enum class CutoffOrder { kAscending, kDescending };

struct DpcScores {
  std::vector<int> rho;
  std::vector<double> delta;
  double cutoff = 0;
};

/// ceil(fraction * K^2), clamped to [1, K (K - 1)].
std::size_t cutoff_rank(std::size_t sample_count, double fraction = 0.015);

/// Full pairwise distance matrix, row-major K x K.
std::vector<double> pairwise_distances(std::span<const Transform> samples, double angle_weight);

/// rho_k counts the other samples within the cutoff; delta_k is the distance to
/// the nearest sample with strictly greater rho, or for samples of maximal rho
/// the largest distance from that sample to any other. Throws
/// InsufficientSamplesError when fewer than two samples are given.
DpcScores dpc_scores(std::span<const Transform> samples, double angle_weight,
                     CutoffOrder order = CutoffOrder::kAscending, double fraction = 0.015);

/// Same scores with an explicit cutoff distance.
DpcScores dpc_scores_with_cutoff(std::span<const Transform> samples, double angle_weight,
                                 double cutoff);

/// Linear-interpolation quantile (the "type 7" estimator) of `values`.
double quantile(std::span<const double> values, double q);

/// Indices of samples that survive denoising, in input order. A sample is
/// removed when its rho is at or below the `rho_quantile` quantile of all rho
/// (and below the maximum rho) and its delta is at or above the
/// `delta_quantile` quantile of all delta. Throws EmptyRelationError when
/// nothing survives.
std::vector<std::size_t> dpc_denoise(const DpcScores& scores, double rho_quantile,
                                     double delta_quantile);

}  // namespace layoutforge
