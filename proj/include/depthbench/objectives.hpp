#pragma once

// Training objectives over (prediction, ground truth) canonical inverse depth
// pairs: trimmed MAE, multi-scale derivative losses, scale-and-shift
// invariant (SSI) variants, and the two-stage curriculum presets.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depthbench/raster.hpp"

namespace depthbench {

enum class DerivativeOperator { Identity, Scharr, Laplace };

/// One L_{op, p, M} term, optionally trimmed and/or SSI-normalized.
struct LossSpec {
  DerivativeOperator op = DerivativeOperator::Identity;
  int norm = 1;              // p, 1 or 2
  int scales = 1;            // M
  double trim_fraction = 0;  // Identity only
  bool ssi = false;

  void validate() const;
  /// Short display name, e.g. "SSI-MAE(trim=0.2)", "MAGE".
  std::string name() const;

  static LossSpec mae(double trim = 0.0) { return {DerivativeOperator::Identity, 1, 1, trim, false}; }
  static LossSpec mse() { return {DerivativeOperator::Identity, 2, 1, 0.0, false}; }
  static LossSpec mage() { return {DerivativeOperator::Scharr, 1, 6, 0.0, false}; }
  static LossSpec male() { return {DerivativeOperator::Laplace, 1, 6, 0.0, false}; }
  static LossSpec msge() { return {DerivativeOperator::Scharr, 2, 6, 0.0, false}; }
};

LossSpec ssi(LossSpec spec);

enum class Preset {
  Stage1Metric,            // MAE trimmed 20% (real-world metric data)
  Stage1MetricSynthetic,   // MAE + SSI-MAGE
  Stage1NonMetric,         // SSI-MAE + SSI-MAGE
  Stage1NonMetricTrimmed,  // SSI-MAE trimmed 20%
  Stage2Synthetic,         // MAE + MSE + MAGE + MALE + MSGE
};

struct WeightedLoss {
  LossSpec spec;
  double weight = 1.0;
};

struct CurriculumPreset {
  Preset preset;
  std::vector<WeightedLoss> losses;

  static CurriculumPreset make(Preset p);
};

/// Stable CLI names: "stage1-metric", ..., "stage2-synthetic".
std::string_view preset_name(Preset p);
std::optional<Preset> parse_preset(std::string_view name);
const std::vector<Preset>& all_presets();

/// (x - median) / mean|x - median| over valid pixels; invalid pixels pass
/// through as invalid. Throws DegenerateInputError on zero deviation or fewer
/// than two valid pixels.
Field ssi_normalize(const Field& x);

/// Mean |c_hat - c| over jointly valid pixels after discarding the
/// ceil(trim_fraction * N) largest errors (ties: higher pixel index dropped
/// first, so lower indices are kept). Symmetric in its arguments.
double loss_mae(const Field& c, const Field& c_hat, double trim_fraction = 0.0);

/// (1/M) sum_j (1/N_j) sum_i |op C^j_i - op C_hat^j_i|^p. For Scharr the
/// per-pixel error is |dgx|^p + |dgy|^p.
double loss_derivative(const Field& c, const Field& c_hat, const LossSpec& spec);

/// Dispatches on `spec`: SSI normalization first (if set), then trimmed MAE /
/// MSE for Identity at one scale, else the derivative loss.
double evaluate_loss(const Field& c, const Field& c_hat, const LossSpec& spec);

/// `spec` evaluated on ssi_normalize(c), ssi_normalize(c_hat).
double loss_ssi(const Field& c, const Field& c_hat, const LossSpec& spec);

struct LossTerm {
  std::string name;
  double weight;
  double value;
};

struct LossBreakdown {
  double total = 0.0;
  std::vector<LossTerm> terms;
};

LossBreakdown curriculum_loss(const Field& c, const Field& c_hat, const CurriculumPreset& preset);

}  // namespace depthbench
