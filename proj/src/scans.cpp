#include "biphoton/scans.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "biphoton/beamsplitter.hpp"
#include "biphoton/error.hpp"
#include "biphoton/io.hpp"
#include "biphoton/kernels.hpp"

namespace biphoton {
namespace {

struct RowOutput {
  ScanRow row;
  std::vector<std::string> warnings;
};

using RowEvaluator = std::function<RowOutput(double)>;

std::pair<double, double> arm_delays(DelayMode mode, double value) {
  return mode == DelayMode::differential ? std::pair{value, 0.0} : std::pair{value, value};
}

void evaluate_numeric(const Evaluation& eval, const BiphotonSpectrum& s, ScanRow& row) {
  if (!eval.numeric) return;
  row.p_numeric = coincidence_probability(s, BeamSplitterParams::balanced());
  row.w_antisym = antisymmetric_weight(s);
}

void require_dz_sweep(const ScanSpec& spec) {
  if (spec.swept != SweptParameter::dz) {
    throw InvalidArgument("model " + std::string(to_string(spec.model)) + " supports only dz sweeps");
  }
}

std::size_t points_or_default(const GridOptions& g) { return g.n_points.value_or(257); }

void add_unique(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from) {
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
  }
}

RowEvaluator gaussian_pair_rows(const ScanSpec& spec, ScanMetadata& meta) {
  require_dz_sweep(spec);
  const ModelParameters& p = spec.params;
  GaussianPairModel model{p.center, p.sigma,
                          p.sigma_p ? PumpEnvelope::gaussian(*p.sigma_p) : PumpEnvelope::constant()};
  const FrequencyGrid grid =
      model_grid(p.center, p.sigma, spec.grid.span_sigmas, points_or_default(spec.grid));
  meta.grid = grid;
  ModelSpectrum base = gaussian_pair_spectrum(model, grid);
  add_unique(meta.warnings, base.warnings);

  return [spec, p, base = std::move(base.spectrum)](double value) {
    RowOutput out;
    out.row.param = value;
    const auto [z1, z2] = arm_delays(spec.delay_mode, value);
    evaluate_numeric(spec.evaluation, apply_path_delays(base, z1, z2, p.c_light), out.row);
    if (spec.evaluation.closed_form) {
      out.row.p_closed = hom_dip_closed(p.sigma, z1 - z2, p.c_light);
    }
    return out;
  };
}

RowEvaluator shih_rows(const ScanSpec& spec, ScanMetadata& meta) {
  const ModelParameters& p = spec.params;
  if (!p.sigma_p) throw InvalidArgument("shih model requires sigma_p");
  if (spec.delay_mode != DelayMode::differential) {
    throw InvalidArgument("shih model delays are differential (idler vs signal)");
  }
  const bool sweep_dz = spec.swept == SweptParameter::dz;
  const ShihModel fixed = ShihModel::with_offsets(p.center, p.sigma, *p.sigma_p,
                                                  sweep_dz ? p.delta_L : 0.0, p.dz, p.c_light);

  const double widest_dl =
      sweep_dz ? std::abs(p.delta_L) : std::max(std::abs(spec.range.min), std::abs(spec.range.max));
  const double widest_dz =
      sweep_dz ? std::max(std::abs(spec.range.min), std::abs(spec.range.max)) : std::abs(p.dz);
  const std::size_t n = spec.grid.n_points.value_or(shih_recommended_points(
      fixed.with_delta_L(widest_dl), widest_dz, spec.grid.span_sigmas));
  const FrequencyGrid grid = model_grid(p.center, p.sigma, spec.grid.span_sigmas, n);
  meta.grid = grid;

  if (sweep_dz) {
    meta.path_ratio = fixed.path_ratio();
    meta.norm_factor = shih_norm_factor(fixed, NormFactor::quarter);
    meta.norm_factor_unit = shih_norm_factor(fixed, NormFactor::unit);
    if (spec.evaluation.numeric) meta.norm_factor_numeric = shih_norm_factor_numeric(fixed, grid);
    add_unique(meta.warnings, shih_reduced_regime_notes(fixed));
  }

  return [spec, p, fixed, grid, sweep_dz](double value) {
    RowOutput out;
    out.row.param = value;
    const ShihModel m = sweep_dz ? fixed.with_delay(value) : fixed.with_delta_L(value).with_delay(p.dz);
    const double dz = m.delta_z();
    if (spec.evaluation.numeric) {
      ModelSpectrum built = shih_spectrum(m, grid);
      evaluate_numeric(spec.evaluation, built.spectrum, out.row);
      out.warnings = std::move(built.warnings);
    }
    if (spec.evaluation.closed_form) {
      out.row.p_closed = shih_exact(m, dz, spec.norm_factor);
      out.row.p_reduced = shih_reduced(m, dz);
    }
    if (!sweep_dz) {
      out.row.path_ratio_mod2 = std::fmod(std::abs(m.path_ratio()), 2.0);
      auto notes = shih_reduced_regime_notes(m);
      out.warnings.insert(out.warnings.end(), notes.begin(), notes.end());
    }
    return out;
  };
}

RowEvaluator delta_pump_rows(const ScanSpec& spec, ScanMetadata& meta) {
  const ModelParameters& p = spec.params;
  const FrequencyGrid grid =
      model_grid(p.center, p.sigma, spec.grid.span_sigmas, points_or_default(spec.grid));
  meta.grid = grid;
  if (spec.evaluation.closed_form) meta.warnings.push_back("no closed form for model delta_pump");

  if (spec.swept == SweptParameter::dz) {
    ModelSpectrum base = delta_pump_spectrum(p.sigma, p.center, p.delta_L, p.parity, grid, p.c_light);
    add_unique(meta.warnings, base.warnings);
    return [spec, p, base = std::move(base.spectrum)](double value) {
      RowOutput out;
      out.row.param = value;
      const auto [z1, z2] = arm_delays(spec.delay_mode, value);
      evaluate_numeric(spec.evaluation, apply_path_delays(base, z1, z2, p.c_light), out.row);
      return out;
    };
  }
  return [spec, p, grid](double value) {
    RowOutput out;
    out.row.param = value;
    ModelSpectrum built = delta_pump_spectrum(p.sigma, p.center, value, p.parity, grid, p.c_light);
    const auto [z1, z2] = arm_delays(spec.delay_mode, p.dz);
    evaluate_numeric(spec.evaluation, apply_path_delays(built.spectrum, z1, z2, p.c_light), out.row);
    out.warnings = std::move(built.warnings);
    return out;
  };
}

RowEvaluator fixed_spectrum_rows(const ScanSpec& spec, BiphotonSpectrum base) {
  return [spec, base = std::move(base)](double value) {
    RowOutput out;
    out.row.param = value;
    const auto [z1, z2] = arm_delays(spec.delay_mode, value);
    evaluate_numeric(spec.evaluation, apply_path_delays(base, z1, z2, spec.params.c_light), out.row);
    return out;
  };
}

RowEvaluator bell_rows(const ScanSpec& spec, ScanMetadata& meta) {
  require_dz_sweep(spec);
  const ModelParameters& p = spec.params;
  const FrequencyGrid grid =
      model_grid(p.center, p.sigma, spec.grid.span_sigmas, points_or_default(spec.grid));
  meta.grid = grid;
  if (spec.evaluation.closed_form) meta.warnings.push_back("no closed form for model bell");
  ModelSpectrum base = bell_antisymmetric_spectrum(p.omega_a, p.omega_b, grid);
  add_unique(meta.warnings, base.warnings);
  return fixed_spectrum_rows(spec, std::move(base.spectrum));
}

RowEvaluator file_rows(const ScanSpec& spec, ScanMetadata& meta) {
  require_dz_sweep(spec);
  BiphotonSpectrum base = spec.spectrum ? *spec.spectrum : read_spectrum_file(spec.spectrum_path);
  meta.grid = base.grid();
  if (spec.evaluation.closed_form) meta.warnings.push_back("no closed form for a spectrum file");
  return fixed_spectrum_rows(spec, std::move(base));
}

}  // namespace

double ScanRange::value(std::size_t k) const noexcept {
  if (k + 1 == steps) return max;
  return min + (max - min) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

void ScanSpec::validate() const {
  if (range.steps < 2) throw InvalidArgument("steps must be ≥ 2");
  if (!(range.min < range.max)) throw InvalidArgument("scan range needs min < max");
  if (!std::isfinite(range.min) || !std::isfinite(range.max)) {
    throw InvalidArgument("scan range must be finite");
  }
  if (!evaluation.numeric && !evaluation.closed_form) {
    throw InvalidArgument("select at least one evaluation method");
  }
  if (!(params.sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(params.c_light > 0.0)) throw InvalidArgument("speed of light must be positive");
  if (!(grid.span_sigmas > 0.0)) throw InvalidArgument("grid span must be positive");
  if (model == ScanModel::spectrum_file && !spectrum && spectrum_path.empty()) {
    throw InvalidArgument("spectrum_file model needs a spectrum path");
  }
}

std::string_view to_string(ScanModel m) noexcept {
  switch (m) {
    case ScanModel::gaussian_pair: return "gaussian_pair";
    case ScanModel::shih: return "shih";
    case ScanModel::delta_pump: return "delta_pump";
    case ScanModel::bell: return "bell";
    case ScanModel::spectrum_file: return "spectrum_file";
  }
  return "unknown";
}

std::string_view to_string(SweptParameter p) noexcept {
  return p == SweptParameter::dz ? "dz" : "dL";
}

std::optional<ScanModel> parse_scan_model(std::string_view name) noexcept {
  for (ScanModel m : {ScanModel::gaussian_pair, ScanModel::shih, ScanModel::delta_pump,
                      ScanModel::bell, ScanModel::spectrum_file}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

ScanResult run_scan(const ScanSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  ScanResult result;
  result.spec = spec;
  result.metadata.isa = std::string(kernels::to_string(kernels::active().isa));

  RowEvaluator evaluate;
  switch (spec.model) {
    case ScanModel::gaussian_pair: evaluate = gaussian_pair_rows(spec, result.metadata); break;
    case ScanModel::shih: evaluate = shih_rows(spec, result.metadata); break;
    case ScanModel::delta_pump: evaluate = delta_pump_rows(spec, result.metadata); break;
    case ScanModel::bell: evaluate = bell_rows(spec, result.metadata); break;
    case ScanModel::spectrum_file: evaluate = file_rows(spec, result.metadata); break;
  }
  if (!evaluate) throw InvalidArgument("unknown model");

  const std::size_t steps = spec.range.steps;
  std::vector<RowOutput> outputs(steps);
  std::vector<std::exception_ptr> errors(steps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < steps;) {
      try {
        outputs[k] = evaluate(spec.range.value(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };

  unsigned threads = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(steps));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  result.rows.reserve(steps);
  for (auto& out : outputs) {
    add_unique(result.metadata.warnings, out.warnings);
    result.rows.push_back(out.row);
  }
  result.metadata.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

MethodComparison compare_columns(const ScanResult& r,
                                 const std::function<std::optional<double>(const ScanRow&)>& a,
                                 const std::function<std::optional<double>(const ScanRow&)>& b,
                                 std::string_view what) {
  if (r.rows.empty()) throw InvalidArgument("scan result has no rows");
  MethodComparison cmp;
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto x = a(r.rows[k]);
    const auto y = b(r.rows[k]);
    if (!x || !y) throw InvalidArgument("scan result is missing the " + std::string(what) + " column");
    const double d = std::abs(*x - *y);
    if (d > cmp.max_abs_deviation) {
      cmp.max_abs_deviation = d;
      cmp.argmax = k;
    }
    sum_sq += d * d;
  }
  cmp.rms = std::sqrt(sum_sq / static_cast<double>(r.rows.size()));
  return cmp;
}

}  // namespace

MethodComparison compare_methods(const ScanResult& r, ClosedColumn column) {
  const auto closed = [column](const ScanRow& row) {
    return column == ClosedColumn::closed ? row.p_closed : row.p_reduced;
  };
  return compare_columns(
      r, [](const ScanRow& row) { return row.p_numeric; }, closed,
      column == ClosedColumn::closed ? "numeric or closed-form" : "numeric or reduced");
}

MethodComparison compare_closed_forms(const ScanResult& r) {
  return compare_columns(
      r, [](const ScanRow& row) { return row.p_closed; },
      [](const ScanRow& row) { return row.p_reduced; }, "exact or reduced");
}

}  // namespace biphoton
