#include "qcomplete/kmeans.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qcomplete {

double squared_distance(const double* a, const double* b, std::size_t m) {
  double s = 0;
  for (std::size_t j = 0; j < m; ++j) {
    double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

namespace {

double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Matrix seed_plus_plus(const Matrix& x, std::size_t k, std::mt19937_64& gen) {
  const std::size_t n = x.rows(), m = x.cols();
  Matrix centers(k, m);
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t c, std::size_t p) {
    chosen[p] = true;
    std::copy(x.row(p), x.row(p) + m, centers.row(c));
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x.row(i), x.row(p), m));
  };

  take(0, static_cast<std::size_t>(gen() % n));
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) total += d2[i];
    std::size_t pick = n;
    if (total > 0) {
      double r = unit(gen) * total;
      double acc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0) continue;
        acc += d2[i];
        pick = i;
        if (acc > r) break;
      }
    } else {
      // Every remaining point duplicates a center; draw among unchosen indices.
      std::size_t remaining = static_cast<std::size_t>(std::count(chosen.begin(), chosen.end(), false));
      std::size_t target = static_cast<std::size_t>(gen() % remaining);
      for (std::size_t i = 0; i < n; ++i)
        if (!chosen[i] && target-- == 0) {
          pick = i;
          break;
        }
    }
    take(c, pick);
  }
  return centers;
}

}  // namespace

ClusterModel kmeans(const Matrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& opts,
                    const Deadline* deadline) {
  const std::size_t n = x.rows(), m = x.cols();
  if (k < 1 || k > n)
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(k) + " is out of range for " + std::to_string(n) + " rows (need 1 <= k <= n)");
  if (opts.max_iter == 0) throw Error(ErrorCode::BadRequest, "max_iter must be positive");

  std::mt19937_64 gen(seed);
  ClusterModel model;
  model.k = k;
  model.centroids = seed_plus_plus(x, k, gen);
  model.labels.assign(n, 0);

  std::vector<std::size_t> counts(k);
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    if (deadline) deadline->check();
    const Matrix previous = model.centroids;

    // Assignment; ties go to the lower cluster id.
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(x.row(i), model.centroids.row(0), m);
      for (std::size_t c = 1; c < k; ++c) {
        double d = squared_distance(x.row(i), model.centroids.row(c), m);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      model.labels[i] = static_cast<int>(best);
      ++counts[best];
    }

    // Empty-cluster repair.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = n;
      double far_d = -1;
      for (std::size_t i = 0; i < n; ++i) {
        auto own = static_cast<std::size_t>(model.labels[i]);
        if (counts[own] < 2) continue;
        double d = squared_distance(x.row(i), model.centroids.row(own), m);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --counts[static_cast<std::size_t>(model.labels[far])];
      model.labels[far] = static_cast<int>(c);
      counts[c] = 1;
      std::copy(x.row(far), x.row(far) + m, model.centroids.row(c));
    }

    // Update: each centroid becomes the mean of its points, summed in row order.
    Matrix sums(k, m);
    for (std::size_t i = 0; i < n; ++i) {
      double* s = sums.row(static_cast<std::size_t>(model.labels[i]));
      for (std::size_t j = 0; j < m; ++j) s[j] += x(i, j);
    }
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < m; ++j) model.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);

    double inertia = 0;
    for (std::size_t i = 0; i < n; ++i)
      inertia += squared_distance(x.row(i), model.centroids.row(static_cast<std::size_t>(model.labels[i])), m);
    model.inertia = inertia;
    model.inertia_history.push_back(inertia);
    model.iterations = it + 1;

    double shift = 0;
    for (std::size_t c = 0; c < k; ++c)
      shift = std::max(shift, squared_distance(previous.row(c), model.centroids.row(c), m));
    if (std::sqrt(shift) < opts.tol) break;
  }
  return model;
}

LabeledRows assign_labels(const ResultSet& rs, const ClusterModel& model) { return assign_labels(rs, model.labels); }

LabeledRows assign_labels(const ResultSet& rs, std::vector<int> labels) {
  if (labels.size() != rs.rows.size())
    throw Error(ErrorCode::SizeMismatch, "have " + std::to_string(labels.size()) + " labels for " +
                                             std::to_string(rs.rows.size()) + " rows");
  return LabeledRows{rs.columns, rs.rows, std::move(labels)};
}

}  // namespace qcomplete
