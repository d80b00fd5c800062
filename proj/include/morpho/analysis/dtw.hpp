#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "morpho/sim/vehicle.hpp"

namespace morpho {

/// Dynamic time warping with |a_i - b_j| local cost and the symmetric step
/// set {(i-1, j), (i, j-1), (i-1, j-1)}, anchored at both ends, no window.
/// Throws std::invalid_argument if either signal is empty.
double dtw(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kDtwMaxPoints = 500;

/// Every stride-th sample with stride = ceil(len / max_points); signals that
/// already fit are returned unchanged.
std::vector<double> downsample(std::span<const double> signal, std::size_t max_points = kDtwMaxPoints);

/// Mean pairwise DTW over the K(K-1)/2 environment pairs, computed for each
/// sensor's (downsampled) trace and averaged over the two sensors.
/// Lower means the robot experiences the environments more alike.
double aggregate_dtw(std::span<const TrialResult> trials, std::size_t max_points = kDtwMaxPoints);

double aggregate_dtw(const BodyDesign& design, const Policy& policy, const EnvironmentSet& envset,
                     const SimProfile& profile, std::size_t max_points = kDtwMaxPoints);

}  // namespace morpho
