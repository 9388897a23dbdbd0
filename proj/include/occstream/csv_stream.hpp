#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "occstream/instance.hpp"

namespace occstream {

// Column mapping for a CSV benchmark file. The first row must be a header.
// The class column is mapped to majority/minority through the two label sets;
// an unlisted class token is a SchemaError.
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string class_column;
  std::optional<std::string> context_column;
  std::vector<std::string> majority_labels;
  std::vector<std::string> minority_labels;
};

// Optional per-feature min/max used to rescale features into [0, 1].
struct CsvNormalization {
  Eigen::VectorXd minimum;
  Eigen::VectorXd maximum;
};

class CsvStream : public InstanceStream {
 public:
  CsvStream(const std::string& path, CsvSchema schema,
            std::optional<CsvNormalization> normalization = std::nullopt);

  int dimension() const override { return static_cast<int>(feature_idx_.size()); }
  bool has_next() override;
  Instance next() override;

 private:
  std::ifstream file_;
  std::string path_;
  CsvSchema schema_;
  std::optional<CsvNormalization> norm_;
  std::vector<int> feature_idx_;
  int class_idx_ = -1;
  int context_idx_ = -1;
  std::size_t column_count_ = 0;
  std::size_t line_number_ = 1;  // header consumed in the constructor
  std::optional<Instance> pending_;

  std::optional<Instance> read_row();
};

}  // namespace occstream
