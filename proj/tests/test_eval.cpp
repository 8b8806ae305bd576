#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "support/fixtures.hpp"
#include "depthbench/eval.hpp"
#include "depthbench/image_io.hpp"

namespace db = depthbench;
namespace dt = depthbench::testing;
namespace fs = std::filesystem;

namespace {

struct Dataset {
  fs::path pred;
  fs::path gt;
};

Dataset make_dataset(const std::string& name, int images, int side = 48, std::uint64_t seed = 61) {
  dt::Rng rng(seed);
  const auto root = dt::scratch_dir(name);
  Dataset ds{root / "pred", root / "gt"};
  fs::create_directories(ds.pred);
  fs::create_directories(ds.gt);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int i = 0; i < images; ++i) {
    const auto g = dt::step_edge_map(rng, side, 4);
    auto p = g;
    for (auto& v : p.values()) v *= 1.0 + noise(rng);
    const std::string stem = "im" + std::to_string(i);
    db::io::save_raster(p, db::io::RasterFile(ds.pred / (stem + ".pfm")));
    db::io::save_raster(g, db::io::RasterFile(ds.gt / (stem + ".pfm")));
  }
  return ds;
}

db::EvalJob job_for(const Dataset& ds, db::Task task) {
  db::EvalJob job;
  job.pred_dir = ds.pred;
  job.gt_dir = ds.gt;
  job.task = task;
  return job;
}

}  // namespace

TEST(Tasks, NamesRoundTrip) {
  for (auto t : {db::Task::Depth, db::Task::BoundaryDepth, db::Task::BoundaryMask, db::Task::Focal,
                 db::Task::Loss}) {
    EXPECT_EQ(db::parse_task(db::task_name(t)), t);
  }
  EXPECT_FALSE(db::parse_task("segmentation").has_value());
}

TEST(RunEval, IdentityBatch) {
  const auto ds = make_dataset("eval_identity", 4);
  auto job = job_for(ds, db::Task::Depth);
  job.pred_dir = ds.gt;
  const auto depth = db::run_eval(job);
  EXPECT_EQ(depth.aggregate["delta1"].get<double>(), 100.0);
  EXPECT_EQ(depth.aggregate["abs_rel"].get<double>(), 0.0);
  EXPECT_EQ(depth.aggregate["count"].get<int>(), 4);
  job.task = db::Task::BoundaryDepth;
  const auto boundary = db::run_eval(job);
  EXPECT_EQ(boundary.aggregate["f1"].get<double>(), 1.0);
  for (const auto& r : boundary.per_image) EXPECT_EQ(r.get("f1"), 1.0);
}

TEST(RunEval, CorruptGroundTruthBecomesErrorRow) {
  const auto ds = make_dataset("eval_corrupt", 3);
  std::ofstream(ds.gt / "im1.pfm", std::ios::trunc) << "Pf\n48 48\n-1.0\nshort";
  const auto rep = db::run_eval(job_for(ds, db::Task::Depth));
  ASSERT_EQ(rep.per_image.size(), 3u);
  EXPECT_EQ(rep.error_count(), 1u);
  EXPECT_TRUE(rep.per_image[1].error.has_value());
  EXPECT_EQ(rep.per_image[1].name, "im1");
  EXPECT_EQ(rep.aggregate["count"].get<int>(), 2);
  const auto j = db::to_json(rep);
  EXPECT_TRUE(j["per_image"][1].contains("error"));
}

TEST(RunEval, PairingWarningsAndUsageErrors) {
  const auto ds = make_dataset("eval_pairing", 2);
  db::io::save_raster(db::Field(4, 4, 1.0), db::io::RasterFile(ds.pred / "extra.pfm"));
  db::io::save_raster(db::Field(4, 4, 1.0), db::io::RasterFile(ds.gt / "lonely.pfm"));
  std::ofstream(ds.gt / "notes.txt") << "ignored";
  const auto rep = db::run_eval(job_for(ds, db::Task::Depth));
  EXPECT_EQ(rep.per_image.size(), 2u);
  ASSERT_EQ(rep.warnings.size(), 2u);
  EXPECT_NE(rep.warnings[0].find("extra.pfm"), std::string::npos);
  EXPECT_NE(rep.warnings[1].find("lonely.pfm"), std::string::npos);

  const auto empty = dt::scratch_dir("eval_empty");
  auto job = job_for(ds, db::Task::Depth);
  job.pred_dir = empty;
  EXPECT_THROW(db::run_eval(job), db::UsageError);
  job.pred_dir = empty / "missing";
  EXPECT_THROW(db::run_eval(job), db::UsageError);
  auto loss = job_for(ds, db::Task::Loss);
  EXPECT_THROW(db::run_eval(loss), db::UsageError);
}

TEST(RunEval, AmbiguousStemIsErrorRow) {
  const auto ds = make_dataset("eval_ambiguous", 2);
  db::io::save_raster(db::Field(48, 48, 2.0), db::io::RasterFile(ds.gt / "im0.png", 0.001));
  const auto rep = db::run_eval(job_for(ds, db::Task::Depth));
  ASSERT_EQ(rep.per_image.size(), 2u);
  EXPECT_TRUE(rep.per_image[0].error.has_value());
  EXPECT_FALSE(rep.per_image[1].error.has_value());
}

TEST(RunEval, ThreadCountDoesNotChangeReport) {
  const auto ds = make_dataset("eval_threads", 7);
  for (auto task : {db::Task::Depth, db::Task::BoundaryDepth}) {
    auto job = job_for(ds, task);
    job.pooled = true;
    job.threads = 1;
    const auto a = db::to_json_string(db::run_eval(job));
    job.threads = 8;
    const auto b = db::to_json_string(db::run_eval(job));
    EXPECT_EQ(a, b);
  }
}

TEST(RunEval, ReportShape) {
  const auto ds = make_dataset("eval_shape", 2);
  auto job = job_for(ds, db::Task::BoundaryDepth);
  job.pooled = true;
  const auto j = db::to_json(db::run_eval(job));
  EXPECT_EQ(j["meta"]["tool"], "depthbench");
  EXPECT_EQ(j["meta"]["task"], "boundary-depth");
  EXPECT_EQ(j["meta"]["config"]["t_steps"], 21);
  EXPECT_FALSE(j["meta"].contains("threads"));
  EXPECT_EQ(j["per_image"][0]["name"], "im0");
  for (const char* k : {"f1", "precision", "recall"}) {
    EXPECT_TRUE(j["per_image"][0].contains(k)) << k;
    EXPECT_TRUE(j["aggregate"]["pooled"].contains(k)) << k;
  }
  const auto csv = db::to_csv(db::run_eval(job));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "name,f1,precision,recall,error");
}

TEST(RunEval, PooledEqualsMeanForOneImage) {
  const auto ds = make_dataset("eval_pooled", 1);
  auto job = job_for(ds, db::Task::BoundaryDepth);
  job.pooled = true;
  const auto rep = db::run_eval(job);
  EXPECT_EQ(rep.aggregate["pooled"]["f1"], rep.aggregate["f1"]);
}

TEST(RunEval, DepthWithPointCloud) {
  const auto ds = make_dataset("eval_pc", 2, 24);
  auto job = job_for(ds, db::Task::Depth);
  job.focal_px = 30.0;
  job.pred_dir = ds.gt;
  const auto rep = db::run_eval(job);
  EXPECT_EQ(rep.aggregate["pc_chamfer"].get<double>(), 0.0);
  EXPECT_EQ(rep.aggregate["pc_f"].get<double>(), 1.0);
  EXPECT_EQ(rep.aggregate["pc_iou"].get<double>(), 1.0);
}

TEST(RunEval, ValidityPolicyOnGroundTruthOnly) {
  const auto root = dt::scratch_dir("eval_policy");
  fs::create_directories(root / "p");
  fs::create_directories(root / "g");
  db::io::save_raster(db::Field(3, 1, {1.0, 2.0, 500.0}), db::io::RasterFile(root / "p" / "a.pfm"));
  db::io::save_raster(db::Field(3, 1, {1.0, 2.0, 200.0}), db::io::RasterFile(root / "g" / "a.pfm"));
  db::EvalJob job;
  job.pred_dir = root / "p";
  job.gt_dir = root / "g";
  job.policy = db::ValidityPolicy(0.5, 100.0);
  const auto rep = db::run_eval(job);
  EXPECT_EQ(rep.per_image[0].get("abs_rel"), 0.0);
}

TEST(RunEval, PngScaleAppliesToPngOnly) {
  const auto root = dt::scratch_dir("eval_png_scale");
  fs::create_directories(root / "p");
  fs::create_directories(root / "g");
  const db::Field meters(4, 2, {1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0});
  db::io::save_raster(meters, db::io::RasterFile(root / "p" / "a.pfm"));
  db::io::save_raster(meters, db::io::RasterFile(root / "g" / "a.png", 0.001));
  const auto rep = db::run_eval([&] {
    db::EvalJob job;
    job.pred_dir = root / "p";
    job.gt_dir = root / "g";
    return job;
  }());
  ASSERT_EQ(rep.error_count(), 0u);
  EXPECT_EQ(rep.per_image[0].get("delta1"), 100.0);
  EXPECT_NEAR(*rep.per_image[0].get("abs_rel"), 0.0, 1e-12);
}

TEST(RunEval, MaskTask) {
  const auto root = dt::scratch_dir("eval_mask");
  fs::create_directories(root / "p");
  fs::create_directories(root / "g");
  // Foreground (left half) nearer than background.
  db::Field depth(8, 8, 5.0);
  db::Field matte(8, 8, 0.0);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 4; ++c) {
      depth.at(r, c) = 1.0;
      matte.at(r, c) = 65535.0;
    }
  }
  db::io::save_raster(depth, db::io::RasterFile(root / "p" / "x.pfm"));
  db::io::write_bytes(root / "g" / "x.png", db::io::encode_png16(matte, 1.0));
  db::EvalJob job;
  job.pred_dir = root / "p";
  job.gt_dir = root / "g";
  job.task = db::Task::BoundaryMask;
  const auto rep = db::run_eval(job);
  ASSERT_EQ(rep.error_count(), 0u);
  EXPECT_EQ(rep.per_image[0].get("recall"), 1.0);
}

TEST(RunEval, FocalTask) {
  const auto root = dt::scratch_dir("eval_focal");
  fs::create_directories(root / "p");
  fs::create_directories(root / "g");
  const double pred[] = {110, 130, 160};
  for (int i = 0; i < 3; ++i) {
    std::ofstream(root / "p" / ("f" + std::to_string(i) + ".txt")) << pred[i] << "\n";
    std::ofstream(root / "g" / ("f" + std::to_string(i) + ".txt")) << 100 << "\n";
  }
  db::EvalJob job;
  job.pred_dir = root / "p";
  job.gt_dir = root / "g";
  job.task = db::Task::Focal;
  const auto rep = db::run_eval(job);
  EXPECT_EQ(rep.aggregate["delta25"].get<double>(), db::round6(100.0 / 3.0));
  EXPECT_EQ(rep.aggregate["delta50"].get<double>(), db::round6(200.0 / 3.0));
}

TEST(RunEval, LossTask) {
  const auto ds = make_dataset("eval_loss", 2);
  auto job = job_for(ds, db::Task::Loss);
  job.preset = db::Preset::Stage1NonMetric;
  const auto rep = db::run_eval(job);
  ASSERT_EQ(rep.error_count(), 0u);
  EXPECT_TRUE(rep.per_image[0].get("total").has_value());
  EXPECT_TRUE(rep.per_image[0].get("SSI-MAE").has_value());
  EXPECT_TRUE(rep.per_image[0].get("SSI-MAGE").has_value());
  job.pred_dir = ds.gt;
  EXPECT_EQ(db::run_eval(job).aggregate["total"].get<double>(), 0.0);
}

TEST(ResolutionStudy, NativeIsIdentityAndHalfLosesAccuracy) {
  dt::Rng rng(62);
  const auto gt = dt::step_edge_map(rng, 96, 5);
  const db::ThresholdSchedule s;
  const auto native = db::resolution_row(gt, 96, s, true);
  EXPECT_EQ(native.get("f1"), 1.0);
  EXPECT_EQ(native.get("log10"), 0.0);
  const auto half = db::resolution_row(gt, 48, s, true);
  EXPECT_GT(*half.get("log10"), 0.0);
  EXPECT_LT(*half.get("f1"), 1.0);

  const auto smooth = dt::smooth_random_depth(rng, 40, 30);
  EXPECT_GT(*db::resolution_row(smooth, 20, s, true).get("log10"), 0.0);
}

TEST(ResolutionStudy, RowsOrderedByResolution) {
  dt::Rng rng(63);
  std::vector<std::pair<std::string, db::DepthMap>> maps{{"a", dt::step_edge_map(rng, 64, 4)},
                                                         {"b", dt::step_edge_map(rng, 64, 4)}};
  db::ResolutionStudyJob job;
  job.resolutions = {16, 64, 32};
  const auto rep = db::resolution_study(maps, job);
  const auto& by = rep.aggregate["by_resolution"];
  ASSERT_EQ(by.size(), 3u);
  EXPECT_EQ(by[0]["resolution"], 64);
  EXPECT_EQ(by[1]["resolution"], 32);
  EXPECT_EQ(by[2]["resolution"], 16);
  EXPECT_EQ(by[0]["f1"].get<double>(), 1.0);
  EXPECT_GT(by[0]["f1"].get<double>(), by[1]["f1"].get<double>());
  EXPECT_GT(by[1]["f1"].get<double>(), by[2]["f1"].get<double>());
  EXPECT_EQ(rep.per_image[0].name, "a@64");
}

TEST(ResolutionStudy, FromDirectory) {
  const auto ds = make_dataset("study_dir", 2, 32);
  db::ResolutionStudyJob job;
  job.gt_dir = ds.gt;
  job.resolutions = {32, 16};
  const auto rep = db::resolution_study(job);
  EXPECT_EQ(rep.per_image.size(), 4u);
  job.gt_dir = dt::scratch_dir("study_empty");
  EXPECT_THROW(db::resolution_study(job), db::UsageError);
}

TEST(RankMethods, Examples) {
  EXPECT_EQ(db::rank_methods({{"only", {{"nyu", 0.3}}}}, true).at("only"), 1.0);
  const db::MethodTable two{{"A", {{"d1", 0.9}, {"d2", 0.8}}}, {"B", {{"d1", 0.5}, {"d2", 0.4}}}};
  auto r = db::rank_methods(two, true);
  EXPECT_EQ(r["A"], 1.0);
  EXPECT_EQ(r["B"], 2.0);
  r = db::rank_methods(two, false);
  EXPECT_EQ(r["A"], 2.0);
  const db::MethodTable tied{{"A", {{"d1", 0.5}}}, {"B", {{"d1", 0.5}}}, {"C", {{"d1", 0.1}}}};
  r = db::rank_methods(tied, true);
  EXPECT_EQ(r["A"], 1.5);
  EXPECT_EQ(r["B"], 1.5);
  EXPECT_EQ(r["C"], 3.0);
  const db::MethodTable missing{{"A", {{"d1", 0.5}, {"d2", 0.1}}}, {"B", {{"d1", 0.5}}}};
  EXPECT_THROW(db::rank_methods(missing, true), db::StructuralError);
}

TEST(RankMethods, InvariantUnderMonotoneTransform) {
  dt::Rng rng(64);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  db::MethodTable t, logt;
  for (const char* m : {"a", "b", "c", "d", "e"}) {
    for (const char* d : {"x", "y", "z"}) {
      const double v = std::round(u(rng) * 8) / 8 + 0.01;
      t[m][d] = v;
      logt[m][d] = std::log(v) * 3 - 7;
    }
  }
  EXPECT_EQ(db::rank_methods(t, true), db::rank_methods(logt, true));
}
