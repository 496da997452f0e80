#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qcomplete/eval.h"

namespace qcomplete {

struct FeatureConfig {
  bool encode_categoricals = true;
  std::size_t max_categorical_cardinality = 20;  // >= 2
  // When false, text above the cardinality threshold is one-hot encoded too.
  bool drop_high_cardinality_text = true;
};

enum class Encoding { ZScore, OneHot };

struct FeatureMeta {
  std::size_t source_column;
  std::string column_name;
  Encoding encoding;
  double mean = 0;    // zscore only
  double stddev = 1;  // zscore only, > 0
  // onehot only; nullopt is the NULL category.
  std::optional<std::string> category;
};

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }
  double* row(std::size_t r) { return data_.data() + r * cols_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Row i of `values` encodes ResultSet row i.
struct FeatureMatrix {
  Matrix values;
  std::vector<FeatureMeta> meta;
};

// Numeric columns: NULLs imputed to the column mean, then (x - mean) / stddev
// with the population stddev; constant or all-NULL columns are dropped.
// Text columns with at most max_categorical_cardinality distinct values
// (NULL counts as a value) become one 0/1 feature per value in sorted order
// (NULL first); single-valued text columns are dropped.
// Throws Error(EmptyResult) for an empty input and Error(NoUsableFeatures)
// when nothing survives.
FeatureMatrix prepare(const ResultSet& rs, const FeatureConfig& cfg = {});

}  // namespace qcomplete
