#include "depthbench/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "depthbench/pyramid.hpp"

namespace depthbench {
namespace {

double powp(double x, int p) { return p == 1 ? std::abs(x) : x * x; }

Field joint_restrict(const Field& x, const Field& other) {
  Field out = x;
  auto v = out.valid();
  const auto o = other.valid();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] && o[i]) ? 1 : 0;
  return out;
}

// Mean of |a - b|^p over jointly valid pixels after dropping the
// ceil(trim * N) largest errors.
double trimmed_identity_loss(const Field& a, const Field& b, int p, double trim) {
  require_same_shape(a, b, "identity loss");
  const auto av = a.values();
  const auto bv = b.values();
  const auto am = a.valid();
  const auto bm = b.valid();
  struct Entry {
    double err;
    std::size_t index;
  };
  std::vector<Entry> entries;
  entries.reserve(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (am[i] && bm[i]) entries.push_back({powp(bv[i] - av[i], p), i});
  }
  const std::size_t n = entries.size();
  if (n == 0) throw EmptyDomainError("loss: no jointly valid pixels");

  // The epsilon keeps f*N products such as 0.2*5 from rounding up past an
  // integer.
  const auto drop = static_cast<std::size_t>(
      std::max(0.0, std::ceil(trim * static_cast<double>(n) - 1e-9)));
  if (drop >= n) throw EmptyDomainError("loss: trimming leaves no pixels");

  std::vector<std::uint8_t> dropped;
  if (drop > 0) {
    auto larger = [](const Entry& x, const Entry& y) {
      return x.err != y.err ? x.err > y.err : x.index > y.index;
    };
    std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(drop - 1),
                     entries.end(), larger);
    dropped.assign(av.size(), 0);
    for (std::size_t k = 0; k < drop; ++k) dropped[entries[k].index] = 1;
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.index < y.index; });
  }
  double sum = 0.0;
  for (const auto& e : entries) {
    if (drop > 0 && dropped[e.index]) continue;
    sum += e.err;
  }
  return sum / static_cast<double>(n - drop);
}

double level_error(const Field& a, const Field& b, DerivativeOperator op, int p,
                   std::size_t& count) {
  double sum = 0.0;
  count = 0;
  switch (op) {
    case DerivativeOperator::Identity: {
      const auto av = a.values();
      const auto bv = b.values();
      for (std::size_t i = 0; i < av.size(); ++i) {
        if (!a.valid()[i] || !b.valid()[i]) continue;
        sum += powp(av[i] - bv[i], p);
        ++count;
      }
      break;
    }
    case DerivativeOperator::Scharr: {
      const auto ga = scharr(a);
      const auto gb = scharr(b);
      const auto ax = ga.gx.values(), ay = ga.gy.values();
      const auto bx = gb.gx.values(), by = gb.gy.values();
      const auto am = ga.gx.valid(), bm = gb.gx.valid();
      for (std::size_t i = 0; i < ax.size(); ++i) {
        if (!am[i] || !bm[i]) continue;
        sum += powp(ax[i] - bx[i], p) + powp(ay[i] - by[i], p);
        ++count;
      }
      break;
    }
    case DerivativeOperator::Laplace: {
      const auto la = laplace(a);
      const auto lb = laplace(b);
      const auto av = la.values(), bv = lb.values();
      const auto am = la.valid(), bm = lb.valid();
      for (std::size_t i = 0; i < av.size(); ++i) {
        if (!am[i] || !bm[i]) continue;
        sum += powp(av[i] - bv[i], p);
        ++count;
      }
      break;
    }
  }
  return sum;
}

}  // namespace

void LossSpec::validate() const {
  if (norm != 1 && norm != 2) throw DomainError("loss norm must be 1 or 2");
  if (scales < 1) throw DomainError("loss needs at least one scale");
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) {
    throw DomainError("trim fraction must lie in [0, 1)");
  }
  if (trim_fraction > 0.0 && (op != DerivativeOperator::Identity || scales != 1)) {
    throw UnsupportedConfigError("trimming is only defined for the single-scale identity loss");
  }
}

std::string LossSpec::name() const {
  std::string base;
  if (op == DerivativeOperator::Identity && scales == 1) {
    base = norm == 1 ? "MAE" : "MSE";
  } else if (op == DerivativeOperator::Scharr && scales == 6) {
    base = norm == 1 ? "MAGE" : "MSGE";
  } else if (op == DerivativeOperator::Laplace && scales == 6 && norm == 1) {
    base = "MALE";
  } else {
    const char* o = op == DerivativeOperator::Identity ? "I"
                    : op == DerivativeOperator::Scharr ? "S"
                                                       : "L";
    base = std::string("L(") + o + "," + std::to_string(norm) + "," + std::to_string(scales) + ")";
  }
  if (ssi) base = "SSI-" + base;
  if (trim_fraction > 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "(trim=%g)", trim_fraction);
    base += buf;
  }
  return base;
}

LossSpec ssi(LossSpec spec) {
  spec.ssi = true;
  return spec;
}

CurriculumPreset CurriculumPreset::make(Preset p) {
  switch (p) {
    case Preset::Stage1Metric:
      return {p, {{LossSpec::mae(0.2), 1.0}}};
    case Preset::Stage1MetricSynthetic:
      return {p, {{LossSpec::mae(), 1.0}, {ssi(LossSpec::mage()), 1.0}}};
    case Preset::Stage1NonMetric:
      return {p, {{ssi(LossSpec::mae()), 1.0}, {ssi(LossSpec::mage()), 1.0}}};
    case Preset::Stage1NonMetricTrimmed:
      return {p, {{ssi(LossSpec::mae(0.2)), 1.0}}};
    case Preset::Stage2Synthetic:
      return {p,
              {{LossSpec::mae(), 1.0},
               {LossSpec::mse(), 1.0},
               {LossSpec::mage(), 1.0},
               {LossSpec::male(), 1.0},
               {LossSpec::msge(), 1.0}}};
  }
  throw UnsupportedConfigError("unknown preset");
}

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::Stage1Metric: return "stage1-metric";
    case Preset::Stage1MetricSynthetic: return "stage1-metric-synthetic";
    case Preset::Stage1NonMetric: return "stage1-non-metric";
    case Preset::Stage1NonMetricTrimmed: return "stage1-non-metric-trimmed";
    case Preset::Stage2Synthetic: return "stage2-synthetic";
  }
  return "unknown";
}

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> kAll{Preset::Stage1Metric, Preset::Stage1MetricSynthetic,
                                        Preset::Stage1NonMetric, Preset::Stage1NonMetricTrimmed,
                                        Preset::Stage2Synthetic};
  return kAll;
}

std::optional<Preset> parse_preset(std::string_view name) {
  for (auto p : all_presets()) {
    if (preset_name(p) == name) return p;
  }
  return std::nullopt;
}

Field ssi_normalize(const Field& x) {
  std::vector<double> v;
  v.reserve(x.size());
  const auto values = x.values();
  const auto valid = x.valid();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (valid[i]) v.push_back(values[i]);
  }
  if (v.size() < 2) throw DegenerateInputError("ssi_normalize: fewer than two valid pixels");

  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double median = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }

  double dev = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!valid[i]) continue;
    dev += std::abs(values[i] - median);
    ++n;
  }
  dev /= static_cast<double>(n);
  if (!(dev > 0.0)) throw DegenerateInputError("ssi_normalize: zero deviation from the median");

  Field out = x;
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = valid[i] ? (values[i] - median) / dev : 0.0;
  return out;
}

double loss_mae(const Field& c, const Field& c_hat, double trim_fraction) {
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) {
    throw DomainError("trim fraction must lie in [0, 1)");
  }
  return trimmed_identity_loss(c, c_hat, 1, trim_fraction);
}

double loss_derivative(const Field& c, const Field& c_hat, const LossSpec& spec) {
  spec.validate();
  require_same_shape(c, c_hat, "loss_derivative");
  const auto pc = build_pyramid(c, {spec.scales});
  const auto ph = build_pyramid(c_hat, {spec.scales});
  double total = 0.0;
  for (int j = 0; j < spec.scales; ++j) {
    std::size_t count = 0;
    const double sum = level_error(pc[static_cast<std::size_t>(j)],
                                   ph[static_cast<std::size_t>(j)], spec.op, spec.norm, count);
    if (count == 0) {
      throw EmptyDomainError("loss_derivative: no valid pixels at pyramid level " +
                             std::to_string(j));
    }
    total += sum / static_cast<double>(count);
  }
  return total / spec.scales;
}

double loss_ssi(const Field& c, const Field& c_hat, const LossSpec& spec) {
  LossSpec plain = spec;
  plain.ssi = false;
  require_same_shape(c, c_hat, "loss_ssi");
  const auto a = ssi_normalize(joint_restrict(c, c_hat));
  const auto b = ssi_normalize(joint_restrict(c_hat, c));
  return evaluate_loss(a, b, plain);
}

double evaluate_loss(const Field& c, const Field& c_hat, const LossSpec& spec) {
  spec.validate();
  if (spec.ssi) return loss_ssi(c, c_hat, spec);
  if (spec.op == DerivativeOperator::Identity && spec.scales == 1) {
    return trimmed_identity_loss(c, c_hat, spec.norm, spec.trim_fraction);
  }
  return loss_derivative(c, c_hat, spec);
}

LossBreakdown curriculum_loss(const Field& c, const Field& c_hat, const CurriculumPreset& preset) {
  LossBreakdown out;
  for (const auto& term : preset.losses) {
    if (!(term.weight > 0.0)) throw DomainError("preset weights must be > 0");
    const double value = evaluate_loss(c, c_hat, term.spec);
    out.terms.push_back({term.spec.name(), term.weight, value});
    out.total += term.weight * value;
  }
  return out;
}

}  // namespace depthbench
