#include "biphoton/grid.hpp"

#include <cmath>
#include <string>

#include "biphoton/error.hpp"

namespace biphoton {

FrequencyGrid::FrequencyGrid(double center, double half_span, std::size_t n_points)
    : center_(center),
      half_span_(half_span),
      n_points_(n_points),
      spacing_(2.0 * half_span / static_cast<double>(n_points - 1)) {}

FrequencyGrid FrequencyGrid::make(double center, double half_span, std::size_t n_points) {
  if (n_points % 2 == 0) {
    throw InvalidArgument("odd point count required (got " + std::to_string(n_points) + ")");
  }
  if (n_points < 3) {
    throw InvalidArgument("grid needs at least 3 points (got " + std::to_string(n_points) + ")");
  }
  if (!std::isfinite(center)) throw InvalidArgument("grid center must be finite");
  if (!(half_span > 0.0) || !std::isfinite(half_span)) {
    throw InvalidArgument("grid half_span must be positive and finite");
  }
  return FrequencyGrid(center, half_span, n_points);
}

double FrequencyGrid::detuning(std::size_t k) const noexcept {
  const auto offset =
      static_cast<double>(static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(center_index()));
  return offset * spacing_;
}

std::vector<double> FrequencyGrid::frequencies() const {
  std::vector<double> out(n_points_);
  for (std::size_t k = 0; k < n_points_; ++k) out[k] = frequency(k);
  return out;
}

std::size_t FrequencyGrid::nearest_index(double omega) const noexcept {
  const double pos = std::round((omega - center_) / spacing_) + static_cast<double>(center_index());
  if (!(pos > 0.0)) return 0;
  if (pos >= static_cast<double>(n_points_ - 1)) return n_points_ - 1;
  return static_cast<std::size_t>(pos);
}

}  // namespace biphoton
