#include "occstream/csv_stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace occstream {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (auto& tok : out) {
    const auto first = tok.find_first_not_of(" \t");
    const auto last = tok.find_last_not_of(" \t");
    tok = (first == std::string::npos) ? std::string() : tok.substr(first, last - first + 1);
  }
  return out;
}

double parse_double(const std::string& tok, std::size_t line, const std::string& path) {
  double value = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(value))
    throw ParseError(path + ":" + std::to_string(line) + ": bad feature value '" + tok + "'");
  return value;
}

}  // namespace

CsvStream::CsvStream(const std::string& path, CsvSchema schema,
                     std::optional<CsvNormalization> normalization)
    : file_(path), path_(path), schema_(std::move(schema)), norm_(std::move(normalization)) {
  if (!file_) throw ConfigError("cannot open CSV file: " + path);
  if (schema_.feature_columns.empty()) throw SchemaError("CSV schema needs feature columns");
  if (schema_.majority_labels.empty() && schema_.minority_labels.empty())
    throw SchemaError("CSV schema needs at least one label set");

  std::string header;
  if (!std::getline(file_, header)) throw ParseError(path + ":1: missing header row");
  const auto names = split_csv_line(header);
  column_count_ = names.size();
  auto find_col = [&](const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw SchemaError("CSV column '" + name + "' not found in " + path);
    return static_cast<int>(it - names.begin());
  };
  for (const auto& name : schema_.feature_columns) feature_idx_.push_back(find_col(name));
  class_idx_ = find_col(schema_.class_column);
  if (schema_.context_column) context_idx_ = find_col(*schema_.context_column);

  if (norm_) {
    const auto d = static_cast<Eigen::Index>(feature_idx_.size());
    if (norm_->minimum.size() != d || norm_->maximum.size() != d)
      throw SchemaError("normalization vectors must match the feature count");
    if ((norm_->maximum.array() <= norm_->minimum.array()).any())
      throw SchemaError("normalization requires max > min per feature");
  }
}

std::optional<Instance> CsvStream::read_row() {
  std::string line;
  while (std::getline(file_, line)) {
    ++line_number_;
    if (line.empty() || line == "\r") continue;
    const auto toks = split_csv_line(line);
    if (toks.size() != column_count_)
      throw ParseError(path_ + ":" + std::to_string(line_number_) + ": expected " +
                       std::to_string(column_count_) + " columns, got " +
                       std::to_string(toks.size()));
    Instance inst;
    inst.features.resize(static_cast<Eigen::Index>(feature_idx_.size()));
    for (std::size_t q = 0; q < feature_idx_.size(); ++q) {
      double v = parse_double(toks[feature_idx_[q]], line_number_, path_);
      if (norm_) {
        v = (v - norm_->minimum[static_cast<Eigen::Index>(q)]) /
            (norm_->maximum[static_cast<Eigen::Index>(q)] -
             norm_->minimum[static_cast<Eigen::Index>(q)]);
      }
      inst.features[static_cast<Eigen::Index>(q)] = v;
    }
    const std::string& cls = toks[class_idx_];
    const auto& maj = schema_.majority_labels;
    const auto& min = schema_.minority_labels;
    if (std::find(maj.begin(), maj.end(), cls) != maj.end()) {
      inst.label = Label::kMajority;
    } else if (std::find(min.begin(), min.end(), cls) != min.end()) {
      inst.label = Label::kMinority;
    } else {
      throw SchemaError(path_ + ":" + std::to_string(line_number_) + ": class token '" + cls +
                        "' is in neither label set");
    }
    if (context_idx_ >= 0) {
      const std::string& tok = toks[context_idx_];
      int ctx = 0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), ctx);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || ctx < 0)
        throw ParseError(path_ + ":" + std::to_string(line_number_) + ": bad context id '" +
                         tok + "'");
      inst.context = ctx;
    }
    return inst;
  }
  return std::nullopt;
}

bool CsvStream::has_next() {
  if (!pending_) pending_ = read_row();
  return pending_.has_value();
}

Instance CsvStream::next() {
  if (!has_next()) throw StateError("CSV stream exhausted: " + path_);
  Instance inst = std::move(*pending_);
  pending_.reset();
  return inst;
}

}  // namespace occstream
