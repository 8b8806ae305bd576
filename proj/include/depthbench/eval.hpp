#pragma once

// Batch evaluation over prediction / ground-truth directories, the output
// resolution study, and average-rank aggregation across datasets.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depthbench/boundary.hpp"
#include "depthbench/objectives.hpp"
#include "depthbench/raster.hpp"
#include "depthbench/report.hpp"

namespace depthbench {

enum class Task { Depth, BoundaryDepth, BoundaryMask, Focal, Loss };

std::string task_name(Task t);
std::optional<Task> parse_task(const std::string& name);

struct EvalJob {
  std::filesystem::path pred_dir;
  std::filesystem::path gt_dir;
  Task task = Task::Depth;
  ValidityPolicy policy = ValidityPolicy(1e-3, 1e4);
  ThresholdSchedule schedule;
  std::optional<Preset> preset;
  bool nms = true;
  bool pooled = false;
  double tau = 0.1;
  double mask_threshold = 0.1;
  double png_scale = 0.001;             // PNG16 code -> meters
  std::optional<double> focal_px;       // enables point-cloud metrics
  int threads = 1;
};

/// Prediction preprocessing shared by every depth task: the prediction's own
/// invalid pixels stay invalid, valid values are clamped into the policy
/// range. Ground truth goes through apply_validity instead.
DepthMap clamp_prediction(DepthMap pred, const ValidityPolicy& policy);

/// A prediction stem matched to a ground-truth file.
struct FilePair {
  std::string name;
  std::filesystem::path pred;
  std::filesystem::path gt;
};

struct Pairing {
  std::vector<FilePair> pairs;
  std::vector<std::string> warnings;
};

/// Pairs files by stem. Unpaired files become warnings; a stem with several
/// candidates on one side is paired with an empty path and reported per-row.
Pairing pair_directories(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                         Task task);

/// Rows are sorted by name and independent of `threads`. Per-image failures
/// become error rows. Throws UsageError when nothing pairs up.
EvalReport run_eval(const EvalJob& job);

struct ResolutionStudyJob {
  std::filesystem::path gt_dir;
  std::vector<int> resolutions{1536, 768, 518, 384};
  ValidityPolicy policy = ValidityPolicy(1e-3, 1e4);
  ThresholdSchedule schedule;
  bool nms = true;
  double png_scale = 0.001;
  int threads = 1;
};

/// Per resolution, the result of the down-and-up bilinear round trip of one
/// depth map, scored against the original.
MetricRow resolution_row(const DepthMap& gt, int resolution, const ThresholdSchedule& schedule,
                         bool nms);

/// Aggregate "by_resolution" rows are ordered by resolution, descending.
EvalReport resolution_study(const ResolutionStudyJob& job);
EvalReport resolution_study(const std::vector<std::pair<std::string, DepthMap>>& maps,
                            const ResolutionStudyJob& job);

/// method -> dataset -> metric value.
using MethodTable = std::map<std::string, std::map<std::string, double>>;

/// Average rank per method (1 = best). Tied values share the mean of the
/// ranks they cover. Throws StructuralError when a method lacks a dataset.
std::map<std::string, double> rank_methods(const MethodTable& table, bool higher_is_better);

}  // namespace depthbench
