#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qcomplete/features.h"

namespace qcomplete {

struct KMeansOptions {
  std::size_t max_iter = 300;
  // Stop once no centroid moves farther than this (Euclidean).
  double tol = 1e-6;
};

struct ClusterModel {
  std::size_t k = 0;
  Matrix centroids;        // k x m
  std::vector<int> labels; // one per row, in 0..k-1
  double inertia = 0;      // sum of squared distances to the assigned centroid
  std::size_t iterations = 0;
  // Inertia after each Lloyd iteration; non-increasing.
  std::vector<double> inertia_history;
};

// k-means++ seeding from a mt19937_64 stream, then Lloyd iterations. A
// cluster that loses all its points is reseeded at the point farthest from
// its own centroid (taken from a cluster that keeps at least one point).
// Deterministic for a given (X, k, seed). Throws Error(KOutOfRange) unless 1 <= k <= n.
ClusterModel kmeans(const Matrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& opts = {},
                    const Deadline* deadline = nullptr);

double squared_distance(const double* a, const double* b, std::size_t m);

// Working rows paired with a hidden cluster id per row. The id column is never
// part of `columns`, so it cannot leak into rendered queries or result grids.
struct LabeledRows {
  std::vector<ResultColumn> columns;
  std::vector<Row> rows;
  std::vector<int> labels;
};

// Throws Error(SizeMismatch) when model.labels does not have one id per row.
LabeledRows assign_labels(const ResultSet& rs, const ClusterModel& model);
LabeledRows assign_labels(const ResultSet& rs, std::vector<int> labels);

}  // namespace qcomplete
