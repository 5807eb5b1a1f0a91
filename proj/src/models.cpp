#include "biphoton/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "biphoton/error.hpp"
#include "biphoton/kernels.hpp"

namespace biphoton {
namespace {

constexpr double kMinCoverageSigmas = 4.0;

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check_coverage(const FrequencyGrid& grid, double center, double sigma,
                    std::vector<std::string>& warnings) {
  const double lo = grid.frequency(0);
  const double hi = grid.frequency(grid.size() - 1);
  if (lo > center - kMinCoverageSigmas * sigma || hi < center + kMinCoverageSigmas * sigma) {
    warnings.push_back("grid [" + format_number(lo) + ", " + format_number(hi) +
                       "] does not cover center +- 4 sigma; spectrum is truncated");
  }
}

// Amplitude pump(nu_i + nu_j) * u_i * v_j, unnormalized. The pump factor only
// depends on i + j, so it is tabulated once over the 2n - 1 antidiagonals.
ComplexMatrix separable_with_pump(const FrequencyGrid& grid, const PumpEnvelope& pump,
                                  const std::vector<cplx>& u, const std::vector<cplx>& v) {
  const std::size_t n = grid.size();
  std::vector<cplx> pump_table(2 * n - 1);
  for (std::size_t k = 0; k < pump_table.size(); ++k) {
    const double summed =
        (static_cast<double>(k) - 2.0 * static_cast<double>(grid.center_index())) * grid.spacing();
    pump_table[k] = pump(summed);
  }
  const auto& kern = kernels::active();
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    kern.scaled_product(m.row(i).data(), pump_table.data() + i, v.data(), u[i], n);
  }
  return m;
}

double gaussian(double nu, double sigma) { return std::exp(-nu * nu / (2.0 * sigma * sigma)); }

ComplexMatrix shih_raw(const ShihModel& m, const FrequencyGrid& grid, bool with_fringe) {
  const std::size_t n = grid.size();
  std::vector<cplx> u(n), v(n);
  const double z1 = m.signal_path();
  const double z2 = m.idler_path;
  const double dl = m.delta_L();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = grid.frequency(i);
    const double envelope = gaussian(w - m.center, m.sigma);
    const double fringe = with_fringe ? std::cos(w * dl / m.c_light) : 1.0;
    u[i] = std::polar(envelope * fringe, w * z1 / m.c_light);
    v[i] = std::polar(envelope, w * z2 / m.c_light);
  }
  return separable_with_pump(grid, PumpEnvelope::gaussian(m.sigma_p), u, v);
}

}  // namespace

PumpEnvelope PumpEnvelope::gaussian(double sigma_p) {
  if (!(sigma_p > 0.0) || !std::isfinite(sigma_p)) {
    throw InvalidArgument("pump bandwidth sigma_p must be positive");
  }
  return {Kind::gaussian, sigma_p};
}

double PumpEnvelope::operator()(double summed_detuning) const noexcept {
  if (kind == Kind::constant) return 1.0;
  return std::exp(-summed_detuning * summed_detuning / (2.0 * sigma_p * sigma_p));
}

FrequencyGrid model_grid(double center, double sigma, double span_sigmas, std::size_t n_points) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(span_sigmas > 0.0)) throw InvalidArgument("grid span must be positive");
  return FrequencyGrid::make(center, span_sigmas * sigma, n_points);
}

ModelSpectrum gaussian_pair_spectrum(const GaussianPairModel& m, const FrequencyGrid& grid) {
  if (!(m.sigma > 0.0) || !std::isfinite(m.sigma)) throw InvalidArgument("sigma must be positive");
  if (m.pump.kind == PumpEnvelope::Kind::gaussian && !(m.pump.sigma_p > 0.0)) {
    throw InvalidArgument("pump bandwidth sigma_p must be positive");
  }
  std::vector<std::string> warnings;
  check_coverage(grid, m.center, m.sigma, warnings);

  const std::size_t n = grid.size();
  std::vector<cplx> envelope(n);
  for (std::size_t i = 0; i < n; ++i) envelope[i] = gaussian(grid.frequency(i) - m.center, m.sigma);
  ComplexMatrix raw = separable_with_pump(grid, m.pump, envelope, envelope);
  return {BiphotonSpectrum::from_amplitudes(grid, std::move(raw)), std::move(warnings)};
}

double hom_dip_closed(double sigma, double dz, double c_light) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  const double x = sigma * dz / c_light;
  return 0.5 * (1.0 - std::exp(-0.5 * x * x));
}

ShihModel ShihModel::with_offsets(double center, double sigma, double sigma_p, double delta_l,
                                  double dz, double c_light) {
  ShihModel m;
  m.center = center;
  m.sigma = sigma;
  m.sigma_p = sigma_p;
  m.short_path = -delta_l;
  m.long_path = delta_l;
  m.idler_path = -dz;
  m.c_light = c_light;
  m.validate();
  return m;
}

double ShihModel::wavelength() const noexcept { return 2.0 * std::numbers::pi * c_light / center; }

double ShihModel::path_ratio() const noexcept { return 4.0 * delta_L() / wavelength(); }

ShihModel ShihModel::with_delay(double dz) const noexcept {
  ShihModel m = *this;
  m.idler_path = signal_path() - dz;
  return m;
}

ShihModel ShihModel::with_delta_L(double delta_l) const noexcept {
  ShihModel m = *this;
  const double z1 = signal_path();
  const double dz = delta_z();
  m.short_path = z1 - delta_l;
  m.long_path = z1 + delta_l;
  m.idler_path = m.signal_path() - dz;
  return m;
}

void ShihModel::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
  if (!(sigma_p > 0.0) || !std::isfinite(sigma_p)) throw InvalidArgument("sigma_p must be positive");
  if (!(c_light > 0.0)) throw InvalidArgument("speed of light must be positive");
  if (!(center > 0.0)) throw InvalidArgument("center frequency must be positive (wavelength is 2 pi c / Omega)");
  if (long_path < short_path) throw InvalidArgument("long path must not be shorter than short path");
}

ModelSpectrum shih_spectrum(const ShihModel& m, const FrequencyGrid& grid) {
  m.validate();
  std::vector<std::string> warnings;
  check_coverage(grid, m.center, m.sigma, warnings);
  if (grid.spacing() > 0.6 * m.sigma_p) {
    warnings.push_back("grid spacing " + format_number(grid.spacing()) +
                       " under-resolves the pump bandwidth " + format_number(m.sigma_p));
  }
  ComplexMatrix raw = shih_raw(m, grid, true);
  return {BiphotonSpectrum::from_amplitudes(grid, std::move(raw)), std::move(warnings)};
}

double shih_norm_factor(const ShihModel& m, NormFactor form) {
  m.validate();
  const double b2 = m.beta() * m.beta();
  const double x = m.sigma * m.delta_L() / m.c_light;
  const double coefficient = form == NormFactor::quarter ? 0.25 : 1.0;
  const double phase = 4.0 * std::numbers::pi * m.delta_L() / m.wavelength();
  return 0.5 * (1.0 + std::cos(phase) * std::exp(-coefficient * (1.0 + b2) / (2.0 + b2) * x * x));
}

double shih_norm_factor_numeric(const ShihModel& m, const FrequencyGrid& grid) {
  m.validate();
  const double with_fringe = frobenius_norm2(shih_raw(m, grid, true));
  const double without = frobenius_norm2(shih_raw(m, grid, false));
  if (!(without > 0.0)) throw DegenerateSpectrum("degenerate spectrum: pump envelope vanishes on the grid");
  return with_fringe / without;
}

double shih_exact(const ShihModel& m, double dz, NormFactor form) {
  const double b = shih_norm_factor(m, form);
  if (std::abs(b) < 1e-15) throw NumericError("two-path norm factor B vanished");
  const double b2 = m.beta() * m.beta();
  const double s = m.sigma / m.c_light;
  const double dl = m.delta_L();
  const double phase = 4.0 * std::numbers::pi * dl / m.wavelength();
  const double bracket =
      std::cos(phase) * std::exp(-0.5 * (b2 / (2.0 + b2) * dl * dl + dz * dz) * s * s) +
      0.5 * std::exp(-0.5 * (dl + dz) * (dl + dz) * s * s) +
      0.5 * std::exp(-0.5 * (dl - dz) * (dl - dz) * s * s);
  return 0.5 * (1.0 - bracket / (2.0 * b));
}

double shih_reduced(const ShihModel& m, double dz) {
  m.validate();
  const double s = m.sigma / m.c_light;
  const double dl = m.delta_L();
  const double phase = 4.0 * std::numbers::pi * dl / m.wavelength();
  return 0.5 * (1.0 - std::cos(phase) * std::exp(-0.5 * dz * dz * s * s) -
                0.5 * std::exp(-0.5 * (dl + dz) * (dl + dz) * s * s) -
                0.5 * std::exp(-0.5 * (dl - dz) * (dl - dz) * s * s));
}

std::vector<std::string> shih_reduced_regime_notes(const ShihModel& m) {
  std::vector<std::string> notes;
  const double separation = m.sigma * m.delta_L() / m.c_light;
  if (separation < 5.0) {
    notes.push_back("sigma*dL/c = " + format_number(separation) +
                    " is not large; reduced form assumes dL >> c/sigma");
  }
  if (m.beta() > 0.1) {
    notes.push_back("beta = " + format_number(m.beta()) + " is not small; reduced form assumes beta << 1");
  }
  const double b2 = m.beta() * m.beta();
  const double pump_decay = 0.5 * b2 / (2.0 + b2) * separation * separation;
  if (pump_decay > 1e-3) {
    notes.push_back("pump decoherence exponent beta^2/(2+beta^2) (sigma dL/c)^2 / 2 = " +
                    format_number(pump_decay) + " is dropped by the reduced form");
  }
  return notes;
}

std::size_t shih_recommended_points(const ShihModel& m, double max_abs_dz, double span_sigmas,
                                    std::size_t minimum) {
  m.validate();
  const double fringe = (2.0 * std::abs(m.delta_L()) + std::abs(max_abs_dz)) / m.c_light;
  const double spacing_fringe = 2.0 * std::numbers::pi / (fringe + 12.0 / m.sigma);
  const double spacing = std::min(0.6 * m.sigma_p, spacing_fringe);
  const double needed = 2.0 * span_sigmas * m.sigma / spacing + 1.0;
  std::size_t n = 3;
  while (static_cast<double>(n) < needed || n < minimum) n = 2 * (n - 1) + 1;
  return n;
}

ModelSpectrum delta_pump_spectrum(double sigma, double center, double delta_l, PathParity parity,
                                  const FrequencyGrid& grid, double c_light) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(c_light > 0.0)) throw InvalidArgument("speed of light must be positive");
  if (std::abs(grid.center() - center) > 1e-12 * std::max(1.0, std::abs(center))) {
    throw InvalidArgument("delta-pump spectrum needs a grid centered on Omega");
  }
  if (parity == PathParity::odd && delta_l == 0.0) {
    throw DegenerateSpectrum("degenerate spectrum: sine case with dL = 0 is identically zero");
  }
  std::vector<std::string> warnings;
  check_coverage(grid, center, sigma, warnings);

  const std::size_t n = grid.size();
  ComplexMatrix raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double nu = grid.detuning(i);
    const double arg = nu * delta_l / c_light;
    const double fringe = parity == PathParity::even ? std::cos(arg) : std::sin(arg);
    raw(i, n - 1 - i) = std::exp(-nu * nu / (sigma * sigma)) * fringe;
  }
  return {BiphotonSpectrum::from_amplitudes(grid, std::move(raw)), std::move(warnings)};
}

ModelSpectrum bell_antisymmetric_spectrum(double omega_a, double omega_b,
                                          const FrequencyGrid& grid) {
  const std::size_t a = grid.nearest_index(omega_a);
  const std::size_t b = grid.nearest_index(omega_b);
  if (a == b) {
    throw DegenerateSpectrum("degenerate spectrum: both Bell frequencies fall on the same grid cell (zero state)");
  }
  std::vector<std::string> warnings;
  for (const auto& [w, k] : {std::pair{omega_a, a}, std::pair{omega_b, b}}) {
    if (std::abs(grid.frequency(k) - w) > 1e-9 * grid.spacing()) {
      warnings.push_back("frequency " + format_number(w) + " snapped to grid point " +
                         format_number(grid.frequency(k)));
    }
  }
  ComplexMatrix raw(grid.size());
  raw(a, b) = 1.0;
  raw(b, a) = -1.0;
  return {BiphotonSpectrum::from_amplitudes(grid, std::move(raw)), std::move(warnings)};
}

}  // namespace biphoton
