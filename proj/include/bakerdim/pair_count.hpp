#pragma once

#include <cstdint>

#include "bakerdim/cloud.hpp"

namespace bakerdim {

/// #{i<j : |v_i - v_j| < eps}, strict inequality, Euclidean metric.
/// Serial O(N^2) reference.
uint64_t pair_count_brute(const PointCloud& cloud, double eps);

/// Same count via a grid of eps-sided cells anchored at the origin,
/// visiting each unordered cell pair once (OpenMP over occupied cells).
/// Agrees with pair_count_brute exactly: both compare the identical
/// squared-distance expression against eps*eps.
uint64_t pair_count_cells(const PointCloud& cloud, double eps);

}  // namespace bakerdim
