#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "biphoton/scans.hpp"
#include "biphoton/spectrum.hpp"

namespace biphoton {

/// Shortest-safe lossless text for a double: 17 significant digits.
std::string format_double(double v);

/// "re+imj" / "re-imj" with both parts at 17 significant digits.
std::string format_complex(cplx v);

/// Parses "re+imj", "re-imj", "imj" or a bare real. Whitespace around the
/// literal is ignored.
std::optional<cplx> parse_complex(std::string_view text);

// Spectrum files: a CSV matrix whose first row holds the photon-2 grid
// frequencies and whose first column holds the photon-1 grid frequencies,
// the top-left cell being a free-form label. Body cells are complex literals.
// The frequencies must form a uniform grid with an odd point count.

void write_spectrum_csv(std::ostream& os, const BiphotonSpectrum& s);

/// Reads and normalizes. Throws ParseError pointing at the first bad cell.
BiphotonSpectrum read_spectrum_csv(std::istream& is);
BiphotonSpectrum read_spectrum_file(const std::string& path);

/// Output columns of a scan table.
enum class Column { param, p_numeric, p_closed, p_exact, p_reduced, w_antisym, path_ratio_mod2 };

std::string_view column_name(Column c) noexcept;

/// Comma-separated, LF line endings, header row, empty field for a missing value.
void write_scan_csv(std::ostream& os, const ScanResult& r, const std::vector<Column>& columns);

/// {"spec": ..., "rows": [{column: value|null, ...}], "metadata": ...}
nlohmann::json scan_to_json(const ScanResult& r, const std::vector<Column>& columns);

nlohmann::json grid_to_json(const FrequencyGrid& g);

/// A real matrix with axis labels, written with one header row (`col_axis`)
/// and one header column (`row_axis`).
struct LabeledMatrix {
  std::string corner_label;
  std::vector<double> row_axis;
  std::vector<double> col_axis;
  std::vector<double> values;  // row-major, row_axis.size() x col_axis.size()
};

void write_labeled_matrix_csv(std::ostream& os, const LabeledMatrix& m);

}  // namespace biphoton
