#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biphoton/grid.hpp"
#include "biphoton/models.hpp"
#include "biphoton/spectrum.hpp"

namespace biphoton {

enum class ScanModel { gaussian_pair, shih, delta_pump, bell, spectrum_file };
enum class SweptParameter { dz, dL };

/// How a swept delay is applied: to arm 1 only (z1 = value, z2 = 0) or to
/// both arms equally (z1 = z2 = value).
enum class DelayMode { differential, common };

struct ScanRange {
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 2;

  /// min + k (max - min) / (steps - 1); the last point is exactly max.
  double value(std::size_t k) const noexcept;
};

/// Flat model parameter set. Only the fields the chosen model reads matter.
struct ModelParameters {
  double center = 0.0;  // Omega
  double sigma = 1.0;
  double c_light = 1.0;
  std::optional<double> sigma_p;  // gaussian pump (gaussian_pair) or pump bandwidth (shih)
  double delta_L = 0.0;           // shih, delta_pump
  double dz = 0.0;                // fixed delay while sweeping dL
  PathParity parity = PathParity::even;
  double omega_a = -1.0;  // bell
  double omega_b = 1.0;
};

struct Evaluation {
  bool numeric = true;
  bool closed_form = true;
};

struct GridOptions {
  double span_sigmas = 6.0;
  std::optional<std::size_t> n_points;  // unset: 257, or the resolved count for shih
};

struct ScanSpec {
  ScanModel model = ScanModel::gaussian_pair;
  SweptParameter swept = SweptParameter::dz;
  ScanRange range;
  ModelParameters params;
  Evaluation evaluation;
  GridOptions grid;
  DelayMode delay_mode = DelayMode::differential;
  NormFactor norm_factor = NormFactor::quarter;  // shih P_closed
  std::optional<BiphotonSpectrum> spectrum;  // spectrum_file, when already loaded
  std::string spectrum_path;                 // spectrum_file, loaded on demand
  unsigned threads = 0;                      // 0: one per hardware thread

  void validate() const;
};

struct ScanRow {
  double param = 0.0;
  std::optional<double> p_numeric;
  std::optional<double> p_closed;   // the model's exact closed form
  std::optional<double> p_reduced;  // shih only
  std::optional<double> w_antisym;
  std::optional<double> path_ratio_mod2;  // shih dL sweeps: (4 dL / lambda) mod 2
};

struct ScanMetadata {
  std::optional<FrequencyGrid> grid;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
  std::string isa;
  // shih only, evaluated at the fixed (dz sweep) model
  std::optional<double> norm_factor;          // exponent coefficient 1/4
  std::optional<double> norm_factor_unit;  // exponent coefficient 1
  std::optional<double> norm_factor_numeric;  // measured on the grid
  std::optional<double> path_ratio;           // 4 dL / lambda
};

struct ScanResult {
  ScanSpec spec;
  std::vector<ScanRow> rows;
  ScanMetadata metadata;
};

std::string_view to_string(ScanModel m) noexcept;
std::string_view to_string(SweptParameter p) noexcept;
std::optional<ScanModel> parse_scan_model(std::string_view name) noexcept;

/// Evaluates every row independently; rows may be computed concurrently and
/// are merged in order, so the table does not depend on the thread count.
ScanResult run_scan(const ScanSpec& spec);

enum class ClosedColumn { closed, reduced };

struct MethodComparison {
  double max_abs_deviation = 0.0;
  std::size_t argmax = 0;
  double rms = 0.0;
};

/// Numeric column against a closed-form column. Throws InvalidArgument when
/// either column is missing from any row.
MethodComparison compare_methods(const ScanResult& r, ClosedColumn column = ClosedColumn::closed);

/// Same statistics for the two closed forms (exact vs reduced).
MethodComparison compare_closed_forms(const ScanResult& r);

}  // namespace biphoton
