// depthbench command-line front end.
//
//   depthbench eval --task TASK --pred DIR --gt DIR [options]
//   depthbench resolution-study --gt DIR [--resolutions 1536,768,518,384]
//   depthbench patch-plan
//   depthbench convert --focal-px F [--width W] --in FILE --out FILE
//   depthbench rank --table FILE [--higher-is-better]
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "depthbench/conversion.hpp"
#include "depthbench/eval.hpp"
#include "depthbench/image_io.hpp"
#include "depthbench/patchwork.hpp"

namespace db = depthbench;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw db::IoError("cannot write " + out_path);
  out << text;
}

struct EvalArgs {
  std::string task = "depth";
  std::string pred, gt, preset, out, csv;
  double min_depth = 1e-3, max_depth = 1e4;
  double t_min = 5.0, t_max = 25.0;
  int t_steps = 21;
  bool nms = true, pooled = false, keep_going = false, timing = false;
  double tau = 0.1, mask_threshold = 0.1, png_scale = 0.001, focal_px = 0.0;
  int threads = 1;
};

int run_eval(const EvalArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  db::EvalJob job;
  const auto task = db::parse_task(a.task);
  if (!task) throw db::UsageError("unknown task: " + a.task);
  job.task = *task;
  job.pred_dir = a.pred;
  job.gt_dir = a.gt;
  job.policy = db::ValidityPolicy(a.min_depth, a.max_depth);
  job.schedule = {a.t_min, a.t_max, a.t_steps};
  if (!a.preset.empty()) {
    job.preset = db::parse_preset(a.preset);
    if (!job.preset) throw db::UsageError("unknown preset: " + a.preset);
  }
  job.nms = a.nms;
  job.pooled = a.pooled;
  job.tau = a.tau;
  job.mask_threshold = a.mask_threshold;
  job.png_scale = a.png_scale;
  if (a.focal_px > 0.0) job.focal_px = a.focal_px;
  job.threads = a.threads;

  db::EvalReport report = db::run_eval(job);
  if (a.timing) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    report.meta["wall_time_s"] = db::round6(dt.count());
  }
  emit(db::to_json_string(report), a.out);
  if (!a.csv.empty()) emit(db::to_csv(report), a.csv);

  const auto errors = report.error_count();
  for (const auto& row : report.per_image) {
    if (row.error) std::cerr << "depthbench: " << row.name << ": " << *row.error << '\n';
  }
  if (errors == report.per_image.size()) return kExitData;
  if (errors > 0 && !a.keep_going) return kExitData;
  return 0;
}

db::Json plan_json() {
  const auto plan = db::plan_patches(1536);
  db::Json j = db::Json::object();
  j["base"] = plan.base;
  j["patch"] = plan.patch;
  j["feature_side"] = plan.feature_side;
  j["feature_patch_embed"] = plan.feature_patch_embed;
  j["total_patches"] = plan.total_patches();
  db::Json scales = db::Json::array();
  for (std::size_t k = 0; k < plan.scales.size(); ++k) {
    const auto& s = plan.scales[k];
    db::Json e = db::Json::object();
    e["image_side"] = s.image_side;
    e["grid"] = s.grid;
    e["patches"] = s.grid * s.grid;
    e["stride"] = s.stride;
    e["overlap"] = s.grid > 1 ? plan.overlap_px(k) : 0;
    e["merged_side"] = db::merged_side(s.grid, s.stride, plan.feature_side, plan.feature_patch_embed);
    db::Json widths = db::Json::array();
    for (const auto& c : db::voronoi_cells(s.grid, s.stride, plan.feature_side, plan.feature_patch_embed)) {
      widths.push_back(c.length);
    }
    e["cell_widths"] = widths;
    scales.push_back(std::move(e));
  }
  j["scales"] = scales;
  return j;
}

db::MethodTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw db::IoError("cannot open " + path);
  db::Json j;
  try {
    in >> j;
  } catch (const db::Json::parse_error& e) {
    throw db::ParseError(std::string("rank table: ") + e.what(), e.byte);
  }
  if (!j.is_object()) throw db::StructuralError("rank table must map method -> dataset -> value");
  db::MethodTable table;
  for (const auto& [method, cells] : j.items()) {
    if (!cells.is_object()) throw db::StructuralError("rank table entry for " + method + " is not an object");
    for (const auto& [ds, v] : cells.items()) {
      if (!v.is_number()) throw db::StructuralError("rank table value " + method + "/" + ds + " is not a number");
      table[method][ds] = v.get<double>();
    }
  }
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth estimation evaluation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DEPTHBENCH_VERSION);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate a prediction directory against ground truth");
  eval->add_option("--task", ea.task, "depth | boundary-depth | boundary-mask | focal | loss")
      ->check(CLI::IsMember({"depth", "boundary-depth", "boundary-mask", "focal", "loss"}));
  eval->add_option("--pred", ea.pred, "Prediction directory")->required();
  eval->add_option("--gt", ea.gt, "Ground-truth directory")->required();
  eval->add_option("--mask-threshold", ea.mask_threshold, "Alpha matte threshold")->capture_default_str();
  eval->add_option("--t-min", ea.t_min, "Smallest contour threshold (%)")->capture_default_str();
  eval->add_option("--t-max", ea.t_max, "Largest contour threshold (%)")->capture_default_str();
  eval->add_option("--t-steps", ea.t_steps, "Number of thresholds")->capture_default_str();
  eval->add_option("--min-depth", ea.min_depth, "Smallest valid GT depth (m)")->capture_default_str();
  eval->add_option("--max-depth", ea.max_depth, "Largest valid GT depth (m)")->capture_default_str();
  eval->add_option("--preset", ea.preset, "Curriculum preset (task loss)");
  eval->add_flag("--nms,!--no-nms", ea.nms, "Non-maximum suppression of contours");
  eval->add_flag("--pooled", ea.pooled, "Also pool boundary pair counts over the dataset");
  eval->add_option("--tau", ea.tau, "Point-cloud match distance (m)")->capture_default_str();
  eval->add_option("--focal-px", ea.focal_px, "Focal length in pixels; enables point-cloud metrics");
  eval->add_option("--png-scale", ea.png_scale, "Meters per 16-bit PNG code")->capture_default_str();
  eval->add_option("--out", ea.out, "JSON report path (default stdout)");
  eval->add_option("--csv", ea.csv, "Per-image CSV path");
  eval->add_option("--threads", ea.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_flag("--keep-going", ea.keep_going, "Exit 0 when some images fail");
  eval->add_flag("--timing", ea.timing, "Record wall time in the report");

  db::ResolutionStudyJob rs;
  std::vector<int> resolutions{1536, 768, 518, 384};
  std::string rs_out;
  double rs_min = 1e-3, rs_max = 1e4;
  auto* study = app.add_subcommand("resolution-study", "Down/up-sample GT and score it against itself");
  study->add_option("--gt", rs.gt_dir, "Ground-truth directory")->required();
  study->add_option("--resolutions", resolutions, "Longer-side resolutions")->delimiter(',')->capture_default_str();
  study->add_option("--min-depth", rs_min, "Smallest valid depth (m)")->capture_default_str();
  study->add_option("--max-depth", rs_max, "Largest valid depth (m)")->capture_default_str();
  study->add_option("--t-min", rs.schedule.t_min)->capture_default_str();
  study->add_option("--t-max", rs.schedule.t_max)->capture_default_str();
  study->add_option("--t-steps", rs.schedule.steps)->capture_default_str();
  study->add_flag("--nms,!--no-nms", rs.nms);
  study->add_option("--png-scale", rs.png_scale)->capture_default_str();
  study->add_option("--threads", rs.threads)->check(CLI::PositiveNumber)->capture_default_str();
  study->add_option("--out", rs_out, "JSON report path (default stdout)");

  auto* plan = app.add_subcommand("patch-plan", "Print the multi-scale patch plan as JSON");

  double cv_focal = 0.0;
  int cv_width = 0;
  std::string cv_in, cv_out;
  double cv_min = 1e-3, cv_max = 1e4;
  auto* convert = app.add_subcommand("convert", "Canonical inverse depth to metric depth");
  convert->add_option("--focal-px", cv_focal, "Horizontal focal length in pixels")->required();
  convert->add_option("--width", cv_width, "Image width in pixels (default: raster width)");
  convert->add_option("--in", cv_in, "Canonical inverse depth raster")->required();
  convert->add_option("--out", cv_out, "Metric depth raster")->required();
  convert->add_option("--min-depth", cv_min)->capture_default_str();
  convert->add_option("--max-depth", cv_max)->capture_default_str();

  std::string rank_table, rank_out;
  bool higher = false;
  auto* rank = app.add_subcommand("rank", "Average rank of methods across datasets");
  rank->add_option("--table", rank_table, "JSON {method: {dataset: value}}")->required();
  rank->add_flag("--higher-is-better", higher);
  rank->add_option("--out", rank_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*eval) return run_eval(ea);
    if (*study) {
      rs.resolutions = resolutions;
      rs.policy = db::ValidityPolicy(rs_min, rs_max);
      const auto report = db::resolution_study(rs);
      emit(db::to_json_string(report), rs_out);
      return report.error_count() == report.per_image.size() ? kExitData : 0;
    }
    if (*plan) {
      std::cout << plan_json().dump(2) << '\n';
      return 0;
    }
    if (*convert) {
      const auto c = db::io::load_inverse_depth(db::io::RasterFile(cv_in));
      const db::CameraModel cam(cv_focal, cv_width > 0 ? cv_width : c.width());
      const auto d = db::canonical_to_metric(c, cam, db::DepthClamp(cv_min, cv_max));
      db::io::save_raster(d, db::io::RasterFile(cv_out));
      return 0;
    }
    if (*rank) {
      const auto ranks = db::rank_methods(read_table(rank_table), higher);
      db::Json j = db::Json::object();
      for (const auto& [m, r] : ranks) j[m] = db::round6(r);
      emit(j.dump(2) + "\n", rank_out);
      return 0;
    }
  } catch (const db::UsageError& e) {
    std::cerr << "depthbench: " << e.what() << '\n';
    return kExitUsage;
  } catch (const db::UnsupportedConfigError& e) {
    std::cerr << "depthbench: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "depthbench: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
