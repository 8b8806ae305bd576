#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "depthbench/buffer_api.hpp"
#include "depthbench/eval.hpp"
#include "depthbench/image_io.hpp"

namespace db = depthbench;
namespace dt = depthbench::testing;
namespace fs = std::filesystem;

namespace {

std::vector<float> to_float(const db::Field& f) {
  std::vector<float> out;
  for (double v : f.values()) out.push_back(static_cast<float>(v));
  return out;
}

db::buffer::BufferView view(const std::vector<float>& v, int w, int h) {
  return {v.data(), v.size(), w, h};
}

}  // namespace

TEST(BufferApi, IdentityBuffers) {
  dt::Rng rng(71);
  const auto d = to_float(dt::step_edge_map(rng, 32, 3));
  EXPECT_EQ(db::buffer::boundary_f1(view(d, 32, 32), view(d, 32, 32)), 1.0);
  const auto m = db::buffer::depth_metrics(view(d, 32, 32), view(d, 32, 32));
  EXPECT_EQ(m.at("delta1"), 100.0);
  EXPECT_EQ(m.at("abs_rel"), 0.0);
  EXPECT_EQ(m.size(), 6u);
  const auto l = db::buffer::losses(view(d, 32, 32), view(d, 32, 32), "stage2-synthetic");
  for (const auto& [name, value] : l) EXPECT_EQ(value, 0.0) << name;
}

TEST(BufferApi, Errors) {
  const std::vector<float> a(12, 1.0f), b(16, 1.0f);
  try {
    db::buffer::boundary_f1(view(a, 4, 3), view(b, 4, 4));
    FAIL();
  } catch (const db::StructuralError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("4x3"), std::string::npos);
    EXPECT_NE(msg.find("4x4"), std::string::npos);
  }
  EXPECT_THROW(db::buffer::to_field(view(a, 4, 4)), db::StructuralError);
  std::vector<float> neg(12, 1.0f);
  neg[3] = -2.0f;
  EXPECT_THROW(db::buffer::depth_metrics(view(neg, 4, 3), view(a, 4, 3), 1e-3, 1e4), db::DomainError);
  EXPECT_THROW(db::buffer::losses(view(a, 4, 3), view(a, 4, 3), "nope"), db::UnsupportedConfigError);
}

TEST(BufferApi, NonFiniteIsInvalid) {
  std::vector<float> a{1.0f, 2.0f, std::numeric_limits<float>::quiet_NaN(), 4.0f};
  const auto f = db::buffer::to_field(view(a, 2, 2));
  EXPECT_EQ(f.valid_count(), 3u);
}

TEST(BufferApi, MatchesBatchEvaluationBitForBit) {
  dt::Rng rng(72);
  const auto root = dt::scratch_dir("buffer_consistency");
  fs::create_directories(root / "p");
  fs::create_directories(root / "g");
  auto gt = dt::step_edge_map(rng, 64, 5);
  auto pred = dt::random_depth(rng, 64, 64, 0.05);
  // Float32 on both sides so the files and the buffers hold the same values.
  const auto pf = to_float(pred), gf = to_float(gt);
  db::Field pw(64, 64, std::vector<double>(pf.begin(), pf.end()), std::vector<std::uint8_t>(pred.valid().begin(), pred.valid().end()));
  db::io::save_raster(pw, db::io::RasterFile(root / "p" / "x.pfm"));
  db::io::save_raster(db::Field(64, 64, std::vector<double>(gf.begin(), gf.end())),
                      db::io::RasterFile(root / "g" / "x.pfm"));
  std::vector<float> pbuf = pf;
  for (std::size_t i = 0; i < pbuf.size(); ++i) {
    if (!pred.valid()[i]) pbuf[i] = std::numeric_limits<float>::quiet_NaN();
  }

  db::EvalJob job;
  job.pred_dir = root / "p";
  job.gt_dir = root / "g";
  job.task = db::Task::BoundaryDepth;
  const auto rep = db::run_eval(job);
  const double f1 = db::buffer::boundary_f1(view(pbuf, 64, 64), view(gf, 64, 64));
  EXPECT_EQ(db::round6(f1), rep.aggregate["f1"].get<double>());
  // Unrounded agreement through the same core path.
  const auto p_map = db::clamp_prediction(
      db::io::load_depth(db::io::RasterFile(root / "p" / "x.pfm"), db::ValidityPolicy::permissive()),
      db::ValidityPolicy(1e-3, 1e4));
  const auto g_map = db::io::load_depth(db::io::RasterFile(root / "g" / "x.pfm"), db::ValidityPolicy(1e-3, 1e4));
  EXPECT_EQ(f1, db::weighted_boundary_f1(p_map, g_map, db::ThresholdSchedule{}, true).f1);

  job.task = db::Task::Depth;
  const auto depth = db::run_eval(job);
  const auto m = db::buffer::depth_metrics(view(pbuf, 64, 64), view(gf, 64, 64));
  for (const char* k : {"delta1", "delta2", "delta3", "abs_rel", "log10", "si_log"}) {
    EXPECT_EQ(m.at(k), depth.per_image[0].get(k).value()) << k;
  }
}
