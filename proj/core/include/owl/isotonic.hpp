#pragma once

#include <span>
#include <vector>

namespace owl {

/// Least-squares projection of v onto non-increasing sequences
/// (pool adjacent violators). Runs in O(n).
std::vector<double> isotonic_nonincreasing(std::span<const double> v);

/// Projection onto non-increasing, non-negative sequences: the isotonic fit
/// with negative blocks clamped to zero.
std::vector<double> isotonic_nonincreasing_nonnegative(std::span<const double> v);

}  // namespace owl
