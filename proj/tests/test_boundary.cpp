#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "depthbench/boundary.hpp"

namespace db = depthbench;
namespace dt = depthbench::testing;

namespace {

db::DepthMap row(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  return db::DepthMap(db::Field(n, 1, std::move(v)));
}

db::BinaryMask mask_row(std::vector<std::uint8_t> v) {
  const int n = static_cast<int>(v.size());
  return db::BinaryMask(n, 1, std::move(v));
}

}  // namespace

TEST(Contours, StrictThreshold) {
  const auto d = row({1.0, 1.3});
  EXPECT_EQ(db::contours_from_depth(d, 25).fired_count(), 1u);
  EXPECT_EQ(db::contours_from_depth(d, 25).horizontal[0], db::kFarSecond);
  EXPECT_EQ(db::contours_from_depth(d, 30).fired_count(), 0u);
  EXPECT_EQ(db::contours_from_depth(row({1.3, 1.0}), 25).horizontal[0], db::kFarFirst);
}

TEST(Contours, ConstantMapIsEmpty) {
  const db::DepthMap d(db::Field(7, 5, 4.2));
  for (double t : {0.5, 5.0, 25.0}) EXPECT_EQ(db::contours_from_depth(d, t).fired_count(), 0u);
  EXPECT_THROW(db::contours_from_depth(d, 0.0), db::DomainError);
}

TEST(Contours, InvalidPixelsNeverFire) {
  auto d = row({1.0, 5.0, 1.0});
  d.set_valid(0, 1, false);
  const auto f = db::contours_from_depth(d, 5);
  EXPECT_EQ(f.fired_count(), 0u);
  EXPECT_EQ(f.horizontal_valid[0], 0);
}

TEST(MaskContours, Examples) {
  const auto one = db::contours_from_mask(mask_row({1, 0}));
  EXPECT_EQ(one.fired_count(), 1u);
  EXPECT_EQ(one.horizontal[0], db::kFarSecond);
  EXPECT_EQ(db::contours_from_mask(db::BinaryMask(4, 4, true)).fired_count(), 0u);
  const db::BinaryMask checker(2, 2, {1, 0, 0, 1});
  const auto f = db::contours_from_mask(checker);
  EXPECT_EQ(f.fired_count(), 4u);
  EXPECT_EQ(f.horizontal[0] != 0, true);
  EXPECT_EQ(f.horizontal[1] != 0, true);
  EXPECT_EQ(f.vertical[0] != 0, true);
  EXPECT_EQ(f.vertical[1] != 0, true);
}

TEST(Nms, KeepsRunMaximum) {
  const auto d = row({1.0, 1.3, 1.7, 1.8});
  const auto raw = db::contours_from_depth(d, 25);
  EXPECT_EQ(raw.fired_count(), 2u);
  const auto thin = db::suppress_non_maximum(d, raw);
  EXPECT_EQ(thin.fired_count(), 1u);
  EXPECT_EQ(thin.horizontal[1], db::kFarSecond);
}

TEST(Nms, SingletonsAndStepsUnchanged) {
  const auto step = row({1, 1, 2, 2});
  const auto f = db::contours_from_depth(step, 10);
  EXPECT_EQ(db::suppress_non_maximum(step, f), f);
  const auto single = row({1, 3});
  const auto g = db::contours_from_depth(single, 10);
  EXPECT_EQ(db::suppress_non_maximum(single, g), g);
}

TEST(Nms, OppositeDirectionsAreSeparateRuns) {
  const auto spike = row({1, 2, 1});
  const auto f = db::contours_from_depth(spike, 10);
  EXPECT_EQ(db::suppress_non_maximum(spike, f).fired_count(), 2u);
}

TEST(Nms, TiesKeepFirstPair) {
  const auto d = row({1, 2, 4});
  const auto thin = db::suppress_non_maximum(d, db::contours_from_depth(d, 10));
  EXPECT_EQ(thin.horizontal[0], db::kFarSecond);
  EXPECT_EQ(thin.horizontal[1], 0);
}

TEST(PrecisionRecall, Conventions) {
  const auto both_empty = db::precision_recall({0, 0, 0});
  EXPECT_EQ(both_empty.f1, 1.0);
  const auto no_pred = db::precision_recall({0, 5, 0});
  EXPECT_EQ(no_pred.precision, 0.0);
  EXPECT_EQ(no_pred.recall, 0.0);
  EXPECT_EQ(no_pred.f1, 0.0);
  const auto no_gt = db::precision_recall({3, 0, 0});
  EXPECT_EQ(no_gt.f1, 0.0);
}

TEST(BoundaryPr, IdentityAndEmptyPrediction) {
  dt::Rng rng(41);
  const auto d = dt::random_depth(rng, 12, 9);
  for (double t : {5.0, 15.0, 25.0}) {
    for (bool nms : {false, true}) {
      const auto pr = db::boundary_pr(d, d, t, nms);
      EXPECT_EQ(pr.precision, 1.0);
      EXPECT_EQ(pr.recall, 1.0);
      EXPECT_EQ(pr.f1, 1.0);
    }
  }
  const db::DepthMap flat(db::Field(3, 1, 1.0));
  const auto pr = db::boundary_pr(flat, row({1, 2, 2}), 10, false);
  EXPECT_EQ(pr.precision, 0.0);
  EXPECT_EQ(pr.recall, 0.0);
  EXPECT_EQ(pr.f1, 0.0);
}

TEST(BoundaryPr, CraftedThreeByThree) {
  const db::DepthMap pred(db::Field(3, 3, {2, 1, 1,  //
                                           1, 1, 1,  //
                                           1, 1, 1}));
  const db::DepthMap gt(db::Field(3, 3, {2, 1, 1,  //
                                         2, 1, 1,  //
                                         1, 1, 1}));
  for (bool nms : {false, true}) {
    const auto counts = db::oracle::boundary_counts(pred, gt, 25, nms);
    EXPECT_EQ(counts, (db::PairCounts{2, 3, 1}));
    const auto pr = db::boundary_pr(pred, gt, 25, nms);
    EXPECT_DOUBLE_EQ(pr.precision, 0.5);
    EXPECT_DOUBLE_EQ(pr.recall, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(pr.f1, 0.4);
  }
}

TEST(BoundaryPr, DirectionMustAgree) {
  const auto pr = db::boundary_pr(row({1, 2}), row({2, 1}), 10, false);
  EXPECT_EQ(pr.f1, 0.0);
}

TEST(BoundaryPr, ShapeMismatch) {
  EXPECT_THROW(db::boundary_pr(row({1, 2}), row({1, 2, 3}), 10, false), db::StructuralError);
}

TEST(MaskRecall, Examples) {
  EXPECT_EQ(db::boundary_recall_mask(row({1, 2}), mask_row({1, 0}), 25, false), 1.0);
  EXPECT_EQ(db::boundary_recall_mask(row({2, 1}), mask_row({1, 0}), 25, false), 0.0);
  EXPECT_EQ(db::boundary_recall_mask(row({1, 1, 2}), mask_row({0, 1, 0}), 25, true), 0.5);
  EXPECT_FALSE(db::boundary_recall_mask(row({1, 2}), mask_row({1, 1}), 25, false).has_value());
  auto hidden = row({1, 2});
  hidden.set_valid(0, 1, false);
  EXPECT_FALSE(db::boundary_recall_mask(hidden, mask_row({1, 0}), 25, false).has_value());
}

TEST(Schedule, WeightsAndThresholds) {
  const db::ThresholdSchedule s;
  const auto t = s.thresholds();
  ASSERT_EQ(t.size(), 21u);
  EXPECT_EQ(t.front(), 5.0);
  EXPECT_EQ(t.back(), 25.0);
  const auto w = s.weights();
  EXPECT_DOUBLE_EQ(w.back(), 25.0 / 315.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    sum += w[k];
    if (k) EXPECT_GT(w[k], w[k - 1]);
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_THROW((db::ThresholdSchedule{25, 5, 21}.validate()), db::DomainError);
  EXPECT_THROW((db::ThresholdSchedule{5, 25, 0}.validate()), db::DomainError);
}

TEST(Schedule, WeightedScoreReadouts) {
  const db::ThresholdSchedule s;
  std::vector<db::ThresholdScore> all, one;
  for (double t : s.thresholds()) {
    all.push_back({t, 0.37});
    one.push_back({t, t == 25.0 ? 1.0 : 0.0});
  }
  EXPECT_DOUBLE_EQ(db::weighted_boundary_score(all, s), 0.37);
  EXPECT_DOUBLE_EQ(db::weighted_boundary_score(one, s), 25.0 / 315.0);
  all.pop_back();
  EXPECT_THROW(db::weighted_boundary_score(all, s), db::StructuralError);
}

TEST(ScheduleKernel, MatchesOracleOnSmallMaps) {
  dt::Rng rng(42);
  std::uniform_int_distribution<int> side(1, 12);
  const db::ThresholdSchedule s{5, 25, 5};
  for (int trial = 0; trial < 200; ++trial) {
    const int w = side(rng), h = side(rng);
    const auto pred = dt::random_depth(rng, w, h);
    const auto gt = dt::random_depth(rng, w, h);
    const auto mask = dt::random_mask(rng, w, h);
    for (bool nms : {false, true}) {
      const auto fast = db::boundary_counts(pred, gt, s, nms);
      const auto fast_mask = db::mask_counts(pred, mask, s, nms);
      const auto t = s.thresholds();
      for (std::size_t k = 0; k < t.size(); ++k) {
        ASSERT_EQ(fast[k], db::oracle::boundary_counts(pred, gt, t[k], nms)) << w << "x" << h << " t=" << t[k];
        ASSERT_EQ(fast_mask[k], db::oracle::mask_counts(pred, mask, t[k], nms));
      }
    }
  }
}

TEST(ScheduleKernel, MatchesSerialReferenceOnLargerMaps) {
  dt::Rng rng(43);
  const db::ThresholdSchedule s;
  for (int trial = 0; trial < 6; ++trial) {
    const auto pred = dt::random_depth(rng, 97, 61, 0.05);
    auto gt = dt::step_edge_map(rng, 97, 4);
    gt = db::DepthMap(db::Field(97, 61, std::vector<double>(gt.values().begin(), gt.values().begin() + 97 * 61)));
    const auto mask = dt::random_mask(rng, 97, 61);
    for (bool nms : {false, true}) {
      EXPECT_EQ(db::boundary_counts(pred, gt, s, nms), db::reference::boundary_counts(pred, gt, s, nms));
      EXPECT_EQ(db::mask_counts(pred, mask, s, nms), db::reference::mask_counts(pred, mask, s, nms));
    }
  }
}

TEST(ScheduleKernel, IdentityGivesExactlyOne) {
  dt::Rng rng(44);
  const auto d = dt::step_edge_map(rng, 128, 8);
  for (bool nms : {false, true}) {
    const auto s = db::weighted_boundary_f1(d, d, db::ThresholdSchedule{}, nms);
    EXPECT_EQ(s.f1, 1.0);
    EXPECT_EQ(s.precision, 1.0);
    EXPECT_EQ(s.recall, 1.0);
  }
}

TEST(ScheduleKernel, ScaleInvariant) {
  dt::Rng rng(45);
  const auto pred = dt::step_edge_map(rng, 48, 5);
  const auto gt = dt::step_edge_map(rng, 48, 5);
  const db::ThresholdSchedule s;
  const double base = db::weighted_boundary_f1(pred, gt, s, true).f1;
  for (double a : {0.01, 100.0}) {
    db::DepthMap p = pred, g = gt;
    for (auto& v : p.values()) v *= a;
    for (auto& v : g.values()) v *= 1.0 / a;
    EXPECT_EQ(db::weighted_boundary_f1(p, g, s, true).f1, base);
  }
}

TEST(ScheduleKernel, DegenerateShapes) {
  const db::ThresholdSchedule s;
  const db::DepthMap one(db::Field(1, 1, 2.0));
  const auto c = db::boundary_counts(one, one, s, true);
  ASSERT_EQ(c.size(), 21u);
  for (const auto& x : c) EXPECT_EQ(x, (db::PairCounts{0, 0, 0}));
  EXPECT_EQ(db::weighted_boundary_f1(one, one, s, true).f1, 1.0);
}
