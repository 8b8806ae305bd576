#include "depthbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace depthbench {
namespace {

Json number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return round6(*v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void MetricRow::set(const std::string& key, std::optional<double> value) {
  for (auto& [k, v] : metrics) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metrics.emplace_back(key, value);
}

std::optional<double> MetricRow::get(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::size_t EvalReport::error_count() const {
  std::size_t n = 0;
  for (const auto& r : per_image) n += r.error.has_value();
  return n;
}

double round6(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

Json mean_aggregate(const std::vector<MetricRow>& rows) {
  std::vector<std::string> keys;
  for (const auto& row : rows) {
    if (row.error) continue;
    for (const auto& [k, v] : row.metrics) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  Json agg = Json::object();
  for (const auto& k : keys) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : rows) {
      if (row.error) continue;
      const auto v = row.get(k);
      if (!v || !std::isfinite(*v)) continue;
      sum += *v;
      ++n;
    }
    agg[k] = n ? number(sum / static_cast<double>(n)) : Json(nullptr);
  }
  agg["count"] = static_cast<std::int64_t>(
      std::count_if(rows.begin(), rows.end(), [](const MetricRow& r) { return !r.error; }));
  return agg;
}

Json to_json(const EvalReport& report) {
  Json j = Json::object();
  j["meta"] = report.meta;
  if (!report.warnings.empty()) j["meta"]["warnings"] = report.warnings;
  Json rows = Json::array();
  for (const auto& row : report.per_image) {
    Json r = Json::object();
    r["name"] = row.name;
    for (const auto& [k, v] : row.metrics) r[k] = number(v);
    if (row.error) r["error"] = *row.error;
    rows.push_back(std::move(r));
  }
  j["per_image"] = std::move(rows);
  j["aggregate"] = report.aggregate;
  return j;
}

std::string to_json_string(const EvalReport& report) { return to_json(report).dump(2) + "\n"; }

std::string to_csv(const EvalReport& report) {
  std::vector<std::string> keys;
  for (const auto& row : report.per_image) {
    for (const auto& [k, v] : row.metrics) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::ostringstream out;
  out << "name";
  for (const auto& k : keys) out << ',' << csv_escape(k);
  out << ",error\n";
  for (const auto& row : report.per_image) {
    out << csv_escape(row.name);
    for (const auto& k : keys) {
      out << ',';
      const auto v = row.get(k);
      if (v && std::isfinite(*v)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", *v);
        out << buf;
      }
    }
    out << ',' << (row.error ? csv_escape(*row.error) : "") << '\n';
  }
  return out.str();
}

}  // namespace depthbench
