#include "depthbench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "depthbench/depth_metrics.hpp"
#include "depthbench/image_io.hpp"
#include "depthbench/pointcloud.hpp"
#include "depthbench/resample.hpp"

namespace depthbench {
namespace fs = std::filesystem;

namespace {

bool accepts(const fs::path& p, Task task, bool gt_side) {
  if (task == Task::Focal) return p.extension() == ".txt";
  if (task == Task::BoundaryMask && gt_side) return p.extension() == ".png";
  return io::format_from_extension(p).has_value();
}

std::map<std::string, std::vector<fs::path>> by_stem(const fs::path& dir, Task task, bool gt_side) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw UsageError(std::string(gt_side ? "gt" : "pred") + " directory not readable: " + dir.string());
  }
  std::map<std::string, std::vector<fs::path>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto& p = e.path();
    const auto name = p.filename().string();
    if (name.empty() || name[0] == '.' || !accepts(p, task, gt_side)) continue;
    out[p.stem().string()].push_back(p);
  }
  for (auto& [stem, paths] : out) std::sort(paths.begin(), paths.end());
  return out;
}

double read_focal_mm(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  double v = 0.0;
  if (!(in >> v)) throw ParseError("focal file " + p.filename().string() + " holds no number", 0);
  if (!std::isfinite(v) || v <= 0.0) throw DomainError("focal length must be > 0 in " + p.filename().string());
  return v;
}

// png_scale converts PNG16 codes only; float formats already hold meters.
io::RasterFile depth_file(const fs::path& p, double png_scale) {
  io::RasterFile f(p);
  if (f.format == io::Format::PNG16) f.scale = png_scale;
  return f;
}

DepthMap load_prediction(const fs::path& p, const EvalJob& job) {
  return clamp_prediction(io::load_depth(depth_file(p, job.png_scale), ValidityPolicy::permissive()),
                          job.policy);
}

DepthMap load_reference(const fs::path& p, const EvalJob& job) {
  return io::load_depth(depth_file(p, job.png_scale), job.policy);
}

Field inverse(const DepthMap& d) {
  Field out = d;
  auto v = out.values();
  auto ok = out.valid();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (ok[i]) v[i] = 1.0 / v[i];
  }
  return out;
}

struct RowResult {
  MetricRow row;
  std::vector<PairCounts> counts;  // boundary tasks, for --pooled
  std::optional<FocalPair> focal;
};

RowResult evaluate_pair(const FilePair& pair, const EvalJob& job) {
  RowResult res;
  res.row.name = pair.name;
  if (pair.pred.empty() || pair.gt.empty()) {
    res.row.error = "ambiguous stem: several files share the name " + pair.name;
    return res;
  }
  switch (job.task) {
    case Task::Depth: {
      const DepthMap pred = load_prediction(pair.pred, job);
      const DepthMap gt = load_reference(pair.gt, job);
      auto m = depth_metrics(pred, gt);
      if (job.focal_px) {
        const CameraModel cam(*job.focal_px, gt.width());
        const auto pc = pc_metrics(unproject(pred, cam), unproject(gt, cam), job.tau);
        m.pc_chamfer = pc.chamfer;
        m.pc_f = pc.f_score;
        m.pc_iou = pc.iou;
      }
      auto& r = res.row;
      r.set("delta1", m.delta1);
      r.set("delta2", m.delta2);
      r.set("delta3", m.delta3);
      r.set("abs_rel", m.abs_rel);
      r.set("log10", m.log10);
      r.set("si_log", m.si_log);
      if (job.focal_px) {
        r.set("pc_chamfer", m.pc_chamfer);
        r.set("pc_f", m.pc_f);
        r.set("pc_iou", m.pc_iou);
      }
      break;
    }
    case Task::BoundaryDepth: {
      const DepthMap pred = load_prediction(pair.pred, job);
      const DepthMap gt = load_reference(pair.gt, job);
      res.counts = boundary_counts(pred, gt, job.schedule, job.nms);
      const auto s = score_from_counts(res.counts, job.schedule);
      res.row.set("f1", s.f1);
      res.row.set("precision", s.precision);
      res.row.set("recall", s.recall);
      break;
    }
    case Task::BoundaryMask: {
      const DepthMap pred = load_prediction(pair.pred, job);
      const BinaryMask mask = io::load_mask(io::RasterFile(pair.gt, io::Format::MaskPNG), job.mask_threshold);
      res.counts = mask_counts(pred, mask, job.schedule, job.nms);
      res.row.set("recall", mask_recall_from_counts(res.counts, job.schedule));
      break;
    }
    case Task::Focal: {
      const FocalPair f{read_focal_mm(pair.pred), read_focal_mm(pair.gt)};
      res.focal = f;
      res.row.set("pred_mm", f.predicted_mm);
      res.row.set("gt_mm", f.ground_truth_mm);
      res.row.set("rel_err", std::abs(f.predicted_mm - f.ground_truth_mm) / f.ground_truth_mm);
      break;
    }
    case Task::Loss: {
      const DepthMap pred = load_prediction(pair.pred, job);
      const DepthMap gt = load_reference(pair.gt, job);
      const auto preset = CurriculumPreset::make(*job.preset);
      const auto b = curriculum_loss(inverse(gt), inverse(pred), preset);
      res.row.set("total", b.total);
      for (const auto& term : b.terms) res.row.set(term.name, term.value);
      break;
    }
  }
  return res;
}

Json config_echo(const EvalJob& job) {
  Json c = Json::object();
  c["min_depth"] = round6(job.policy.min_depth);
  c["max_depth"] = round6(job.policy.max_depth);
  if (job.task == Task::BoundaryDepth || job.task == Task::BoundaryMask) {
    c["t_min"] = round6(job.schedule.t_min);
    c["t_max"] = round6(job.schedule.t_max);
    c["t_steps"] = job.schedule.steps;
    c["nms"] = job.nms;
    c["pooled"] = job.pooled;
  }
  if (job.task == Task::BoundaryMask) c["mask_threshold"] = round6(job.mask_threshold);
  if (job.task == Task::Depth && job.focal_px) {
    c["focal_px"] = round6(*job.focal_px);
    c["tau"] = round6(job.tau);
  }
  if (job.task == Task::Loss) c["preset"] = std::string(preset_name(*job.preset));
  c["png_scale"] = round6(job.png_scale);
  return c;
}

}  // namespace

DepthMap clamp_prediction(DepthMap pred, const ValidityPolicy& policy) {
  auto v = pred.values();
  auto ok = pred.valid();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (ok[i]) v[i] = std::clamp(v[i], policy.min_depth, policy.max_depth);
  }
  return pred;
}

std::string task_name(Task t) {
  switch (t) {
    case Task::Depth: return "depth";
    case Task::BoundaryDepth: return "boundary-depth";
    case Task::BoundaryMask: return "boundary-mask";
    case Task::Focal: return "focal";
    case Task::Loss: return "loss";
  }
  return "unknown";
}

std::optional<Task> parse_task(const std::string& name) {
  for (Task t : {Task::Depth, Task::BoundaryDepth, Task::BoundaryMask, Task::Focal, Task::Loss}) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

Pairing pair_directories(const fs::path& pred_dir, const fs::path& gt_dir, Task task) {
  const auto preds = by_stem(pred_dir, task, false);
  const auto gts = by_stem(gt_dir, task, true);
  Pairing out;
  for (const auto& [stem, paths] : preds) {
    const auto it = gts.find(stem);
    if (it == gts.end()) {
      for (const auto& p : paths) out.warnings.push_back("unpaired prediction: " + p.filename().string());
      continue;
    }
    FilePair fp{stem, paths.size() == 1 ? paths.front() : fs::path(),
                it->second.size() == 1 ? it->second.front() : fs::path()};
    out.pairs.push_back(std::move(fp));
  }
  for (const auto& [stem, paths] : gts) {
    if (preds.count(stem)) continue;
    for (const auto& p : paths) out.warnings.push_back("unpaired ground truth: " + p.filename().string());
  }
  return out;
}

EvalReport run_eval(const EvalJob& job) {
  job.schedule.validate();
  if (job.task == Task::Loss && !job.preset) throw UsageError("task loss needs a preset");
  if (job.threads < 1) throw UsageError("threads must be >= 1");
  if (job.task == Task::Depth && job.focal_px && !(*job.focal_px > 0.0)) {
    throw UsageError("focal_px must be > 0");
  }
  if (!(job.tau > 0.0)) throw UsageError("tau must be > 0");

  Pairing pairing = pair_directories(job.pred_dir, job.gt_dir, job.task);
  if (pairing.pairs.empty()) {
    throw UsageError("no prediction file pairs with a ground-truth file by stem");
  }

  std::vector<RowResult> results(pairing.pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairing.pairs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(job.threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& pair = pairing.pairs[static_cast<std::size_t>(i)];
    auto& res = results[static_cast<std::size_t>(i)];
    try {
      res = evaluate_pair(pair, job);
    } catch (const std::exception& e) {
      res = RowResult{};
      res.row.name = pair.name;
      res.row.error = e.what();
    }
  }

  EvalReport report;
  report.meta["tool"] = "depthbench";
  report.meta["version"] = DEPTHBENCH_VERSION;
  report.meta["task"] = task_name(job.task);
  report.meta["config"] = config_echo(job);
  report.meta["pairs"] = pairing.pairs.size();
  report.warnings = std::move(pairing.warnings);

  for (auto& r : results) report.per_image.push_back(r.row);
  report.aggregate = mean_aggregate(report.per_image);

  if (job.task == Task::Focal) {
    std::vector<FocalPair> pairs;
    for (const auto& r : results) {
      if (!r.row.error && r.focal) pairs.push_back(*r.focal);
    }
    if (!pairs.empty()) {
      const std::vector<double> th{0.25, 0.50};
      const auto d = focal_deltas(pairs, th);
      report.aggregate["delta25"] = round6(d[0]);
      report.aggregate["delta50"] = round6(d[1]);
    }
  }

  if (job.pooled && (job.task == Task::BoundaryDepth || job.task == Task::BoundaryMask)) {
    std::vector<PairCounts> total(static_cast<std::size_t>(job.schedule.steps));
    bool any = false;
    for (const auto& r : results) {
      if (r.row.error || r.counts.empty()) continue;
      any = true;
      for (std::size_t k = 0; k < total.size(); ++k) total[k] += r.counts[k];
    }
    Json pooled = Json::object();
    if (any && job.task == Task::BoundaryDepth) {
      const auto s = score_from_counts(total, job.schedule);
      pooled["f1"] = round6(s.f1);
      pooled["precision"] = round6(s.precision);
      pooled["recall"] = round6(s.recall);
    } else if (any) {
      const auto r = mask_recall_from_counts(total, job.schedule);
      pooled["recall"] = r ? Json(round6(*r)) : Json(nullptr);
    }
    report.aggregate["pooled"] = std::move(pooled);
  }
  return report;
}

MetricRow resolution_row(const DepthMap& gt, int resolution, const ThresholdSchedule& schedule,
                         bool nms) {
  if (resolution < 1) throw UsageError("resolution must be >= 1");
  const int longer = std::max(gt.width(), gt.height());
  DepthMap pred = gt;
  if (resolution < longer) {
    const double s = static_cast<double>(resolution) / longer;
    const int w = std::max(1, static_cast<int>(std::lround(gt.width() * s)));
    const int h = std::max(1, static_cast<int>(std::lround(gt.height() * s)));
    pred = DepthMap(resize_bilinear(resize_bilinear(gt, w, h), gt.width(), gt.height()));
  }
  MetricRow row;
  row.set("resolution", resolution);
  row.set("log10", log10_err(pred, gt));
  row.set("abs_rel", abs_rel(pred, gt));
  row.set("f1", weighted_boundary_f1(pred, gt, schedule, nms).f1);
  return row;
}

EvalReport resolution_study(const std::vector<std::pair<std::string, DepthMap>>& maps,
                            const ResolutionStudyJob& job) {
  job.schedule.validate();
  if (job.resolutions.empty()) throw UsageError("no resolutions given");
  if (job.threads < 1) throw UsageError("threads must be >= 1");
  if (maps.empty()) throw UsageError("no ground-truth depth maps");
  std::vector<int> res = job.resolutions;
  std::sort(res.begin(), res.end(), std::greater<>());
  res.erase(std::unique(res.begin(), res.end()), res.end());
  for (int r : res) {
    if (r < 1) throw UsageError("resolution must be >= 1");
  }

  const std::size_t nr = res.size();
  std::vector<MetricRow> rows(maps.size() * nr);
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(job.threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& [name, gt] = maps[static_cast<std::size_t>(i) / nr];
    const int r = res[static_cast<std::size_t>(i) % nr];
    MetricRow& row = rows[static_cast<std::size_t>(i)];
    try {
      row = resolution_row(gt, r, job.schedule, job.nms);
    } catch (const std::exception& e) {
      row = MetricRow{};
      row.error = e.what();
    }
    row.name = name + "@" + std::to_string(r);
  }

  EvalReport report;
  report.meta["tool"] = "depthbench";
  report.meta["version"] = DEPTHBENCH_VERSION;
  report.meta["task"] = "resolution-study";
  Json cfg = Json::object();
  cfg["resolutions"] = res;
  cfg["min_depth"] = round6(job.policy.min_depth);
  cfg["max_depth"] = round6(job.policy.max_depth);
  cfg["t_min"] = round6(job.schedule.t_min);
  cfg["t_max"] = round6(job.schedule.t_max);
  cfg["t_steps"] = job.schedule.steps;
  cfg["nms"] = job.nms;
  cfg["png_scale"] = round6(job.png_scale);
  report.meta["config"] = cfg;
  report.meta["images"] = maps.size();
  report.per_image = rows;

  Json by_res = Json::array();
  for (std::size_t k = 0; k < nr; ++k) {
    std::vector<MetricRow> at_res;
    for (std::size_t m = 0; m < maps.size(); ++m) at_res.push_back(rows[m * nr + k]);
    Json entry = mean_aggregate(at_res);
    entry["resolution"] = res[k];
    by_res.push_back(std::move(entry));
  }
  report.aggregate["by_resolution"] = std::move(by_res);
  return report;
}

EvalReport resolution_study(const ResolutionStudyJob& job) {
  std::error_code ec;
  if (!fs::is_directory(job.gt_dir, ec)) throw UsageError("gt directory not readable: " + job.gt_dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(job.gt_dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && !name.empty() && name[0] != '.' &&
        io::format_from_extension(e.path())) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no depth maps in " + job.gt_dir.string());

  std::vector<std::pair<std::string, DepthMap>> maps;
  std::vector<std::string> failures;
  for (const auto& f : files) {
    try {
      maps.emplace_back(f.stem().string(), io::load_depth(depth_file(f, job.png_scale), job.policy));
    } catch (const std::exception& e) {
      failures.push_back(f.filename().string() + ": " + e.what());
    }
  }
  if (maps.empty()) throw IoError("no readable depth maps in " + job.gt_dir.string());
  EvalReport report = resolution_study(maps, job);
  for (const auto& w : failures) report.warnings.push_back("skipped " + w);
  return report;
}

std::map<std::string, double> rank_methods(const MethodTable& table, bool higher_is_better) {
  if (table.empty()) throw StructuralError("rank_methods: no methods");
  std::set<std::string> datasets;
  for (const auto& [method, cells] : table) {
    for (const auto& [ds, v] : cells) datasets.insert(ds);
  }
  if (datasets.empty()) throw StructuralError("rank_methods: no datasets");
  for (const auto& [method, cells] : table) {
    for (const auto& ds : datasets) {
      if (!cells.count(ds)) throw StructuralError("rank_methods: " + method + " has no value for " + ds);
    }
  }

  std::map<std::string, double> total;
  for (const auto& ds : datasets) {
    std::vector<std::pair<double, std::string>> col;
    for (const auto& [method, cells] : table) {
      const double v = cells.at(ds);
      if (std::isnan(v)) throw DomainError("rank_methods: NaN for " + method + " on " + ds);
      col.emplace_back(higher_is_better ? -v : v, method);
    }
    std::sort(col.begin(), col.end());
    for (std::size_t i = 0; i < col.size();) {
      std::size_t j = i;
      while (j < col.size() && col[j].first == col[i].first) ++j;
      const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
      for (std::size_t k = i; k < j; ++k) total[col[k].second] += rank;
      i = j;
    }
  }
  for (auto& [m, r] : total) r /= static_cast<double>(datasets.size());
  return total;
}

}  // namespace depthbench
