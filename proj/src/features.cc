#include "qcomplete/features.h"

#include <cmath>
#include <map>

namespace qcomplete {

FeatureMatrix prepare(const ResultSet& rs, const FeatureConfig& cfg) {
  if (cfg.max_categorical_cardinality < 2)
    throw Error(ErrorCode::BadRequest, "max_categorical_cardinality must be at least 2");
  if (rs.empty()) throw Error(ErrorCode::EmptyResult, "cannot build features from an empty result");

  const std::size_t n = rs.size();
  std::vector<FeatureMeta> meta;
  std::vector<std::vector<double>> columns;  // feature-major while building

  for (std::size_t c = 0; c < rs.columns.size(); ++c) {
    const std::string& name = rs.columns[c].schema.name;
    if (rs.columns[c].schema.type == ColumnType::Numeric) {
      double sum = 0;
      std::size_t present = 0;
      for (const auto& row : rs.rows)
        if (row[c].is_number()) {
          sum += row[c].as_number();
          ++present;
        }
      if (present == 0) continue;
      double mean = sum / static_cast<double>(present);
      std::vector<double> xs(n);
      double ss = 0;
      for (std::size_t r = 0; r < n; ++r) {
        xs[r] = rs.rows[r][c].is_number() ? rs.rows[r][c].as_number() : mean;
        ss += (xs[r] - mean) * (xs[r] - mean);
      }
      double sd = std::sqrt(ss / static_cast<double>(n));
      if (!(sd > 0) || !std::isfinite(sd)) continue;
      for (double& x : xs) x = (x - mean) / sd;
      meta.push_back({c, name, Encoding::ZScore, mean, sd, std::nullopt});
      columns.push_back(std::move(xs));
      continue;
    }

    // nullopt sorts before every string, so NULL is the first category.
    std::map<std::optional<std::string>, std::size_t> categories;
    for (const auto& row : rs.rows) {
      categories.emplace(row[c].is_null() ? std::nullopt : std::optional<std::string>(row[c].as_text()), 0);
      if (cfg.drop_high_cardinality_text && categories.size() > cfg.max_categorical_cardinality) break;
    }
    bool keep = categories.size() <= cfg.max_categorical_cardinality || !cfg.drop_high_cardinality_text;
    if (!cfg.encode_categoricals || !keep || categories.size() < 2) continue;
    std::size_t slot = 0;
    for (auto& [value, index] : categories) index = slot++;
    std::vector<std::vector<double>> onehots(categories.size(), std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
      const SqlValue& v = rs.rows[r][c];
      auto key = v.is_null() ? std::nullopt : std::optional<std::string>(v.as_text());
      onehots[categories.at(key)][r] = 1.0;
    }
    for (auto& [value, index] : categories) {
      meta.push_back({c, name, Encoding::OneHot, 0.0, 1.0, value});
      columns.push_back(std::move(onehots[index]));
    }
  }

  if (columns.empty())
    throw Error(ErrorCode::NoUsableFeatures, "no usable features: every column is constant, empty or high-cardinality");

  FeatureMatrix out{Matrix(n, columns.size()), std::move(meta)};
  for (std::size_t f = 0; f < columns.size(); ++f)
    for (std::size_t r = 0; r < n; ++r) out.values(r, f) = columns[f][r];
  return out;
}

}  // namespace qcomplete
