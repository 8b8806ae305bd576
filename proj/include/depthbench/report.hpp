#pragma once

// Evaluation report records and their JSON / CSV serialization. Numbers are
// printed with 6 significant digits and keys keep insertion order, so equal
// reports serialize to identical bytes.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace depthbench {

using Json = nlohmann::ordered_json;

struct MetricRow {
  std::string name;
  std::vector<std::pair<std::string, std::optional<double>>> metrics;
  std::optional<std::string> error;

  void set(const std::string& key, std::optional<double> value);
  std::optional<double> get(const std::string& key) const;
};

struct EvalReport {
  Json meta = Json::object();
  std::vector<MetricRow> per_image;
  Json aggregate = Json::object();
  std::vector<std::string> warnings;

  std::size_t error_count() const;
};

/// Round to 6 significant digits (NaN / inf stay as they are).
double round6(double v);

/// Column means over rows without error, skipping absent values, in first-
/// appearance key order.
Json mean_aggregate(const std::vector<MetricRow>& rows);

Json to_json(const EvalReport& report);
std::string to_json_string(const EvalReport& report);
std::string to_csv(const EvalReport& report);

}  // namespace depthbench
