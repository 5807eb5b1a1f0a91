#pragma once

#include <cstddef>
#include <vector>

namespace biphoton {

/// Uniform grid on one angular-frequency axis, shared by both photons.
///
/// The point count is always odd so the center frequency sits exactly on the
/// grid and every detuning `+nu` has its mirror `-nu` on the grid as well.
class FrequencyGrid {
 public:
  /// Throws InvalidArgument for an even or too-small point count, or a
  /// non-positive / non-finite span.
  static FrequencyGrid make(double center, double half_span, std::size_t n_points);

  double center() const noexcept { return center_; }
  double half_span() const noexcept { return half_span_; }
  std::size_t size() const noexcept { return n_points_; }
  double spacing() const noexcept { return spacing_; }
  std::size_t center_index() const noexcept { return (n_points_ - 1) / 2; }

  /// Offset from the center, computed as (k - center_index) * spacing so that
  /// mirrored indices give exactly negated values.
  double detuning(std::size_t k) const noexcept;
  double frequency(std::size_t k) const noexcept { return center_ + detuning(k); }
  std::vector<double> frequencies() const;

  /// Index of the grid point closest to `omega` (clamped to the grid).
  std::size_t nearest_index(double omega) const noexcept;

  bool operator==(const FrequencyGrid&) const = default;

 private:
  FrequencyGrid(double center, double half_span, std::size_t n_points);

  double center_;
  double half_span_;
  std::size_t n_points_;
  double spacing_;
};

}  // namespace biphoton
