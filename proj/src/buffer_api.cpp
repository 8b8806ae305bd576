#include "depthbench/buffer_api.hpp"

#include <cmath>

#include "depthbench/boundary.hpp"
#include "depthbench/conversion.hpp"
#include "depthbench/depth_metrics.hpp"
#include "depthbench/eval.hpp"
#include "depthbench/objectives.hpp"

namespace depthbench::buffer {
namespace {

void require_same_view_shape(const BufferView& a, const BufferView& b) {
  if (a.width != b.width || a.height != b.height) {
    throw StructuralError("buffer shapes differ: pred " + shape_string(a.width, a.height) + ", gt " +
                          shape_string(b.width, b.height));
  }
}

std::pair<DepthMap, DepthMap> depth_pair(const BufferView& pred, const BufferView& gt,
                                         const ValidityPolicy& policy) {
  require_same_view_shape(pred, gt);
  return {clamp_prediction(DepthMap(to_field(pred)), policy),
          apply_validity(DepthMap(to_field(gt)), policy)};
}

}  // namespace

Field to_field(const BufferView& view) {
  if (view.width <= 0 || view.height <= 0) {
    throw StructuralError("buffer shape " + shape_string(view.width, view.height) + " is empty");
  }
  const std::size_t n = static_cast<std::size_t>(view.width) * static_cast<std::size_t>(view.height);
  if (view.data == nullptr || view.length != n) {
    throw StructuralError("buffer of length " + std::to_string(view.length) + " does not hold " +
                          shape_string(view.width, view.height));
  }
  std::vector<double> values(n);
  std::vector<std::uint8_t> valid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = static_cast<double>(view.data[i]);
    valid[i] = std::isfinite(v) ? 1 : 0;
    values[i] = valid[i] ? v : 0.0;
  }
  return Field(view.width, view.height, std::move(values), std::move(valid));
}

double boundary_f1(const BufferView& pred, const BufferView& gt, double t_min, double t_max, int steps,
                   bool nms, const ValidityPolicy& policy) {
  const ThresholdSchedule schedule{t_min, t_max, steps};
  schedule.validate();
  const auto [p, g] = depth_pair(pred, gt, policy);
  return weighted_boundary_f1(p, g, schedule, nms).f1;
}

std::map<std::string, double> depth_metrics(const BufferView& pred, const BufferView& gt, double min_depth,
                                            double max_depth) {
  require_same_view_shape(pred, gt);
  DepthMap(to_field(pred)).require_positive("depth_metrics pred");
  DepthMap(to_field(gt)).require_positive("depth_metrics gt");
  const auto [p, g] = depth_pair(pred, gt, ValidityPolicy(min_depth, max_depth));
  const auto m = depthbench::depth_metrics(p, g);
  return {{"delta1", m.delta1}, {"delta2", m.delta2}, {"delta3", m.delta3},
          {"abs_rel", m.abs_rel}, {"log10", m.log10},  {"si_log", m.si_log}};
}

std::map<std::string, double> losses(const BufferView& pred, const BufferView& gt,
                                     const std::string& preset_name) {
  const auto preset = parse_preset(preset_name);
  if (!preset) throw UnsupportedConfigError("unknown preset: " + preset_name);
  require_same_view_shape(pred, gt);
  const auto b = curriculum_loss(to_field(gt), to_field(pred), CurriculumPreset::make(*preset));
  std::map<std::string, double> out{{"total", b.total}};
  for (const auto& t : b.terms) out[t.name] = t.value;
  return out;
}

}  // namespace depthbench::buffer
