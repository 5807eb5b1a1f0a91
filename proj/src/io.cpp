#include "biphoton/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "biphoton/error.hpp"

namespace biphoton {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> field_value(const ScanRow& row, Column c) {
  switch (c) {
    case Column::param: return row.param;
    case Column::p_numeric: return row.p_numeric;
    case Column::p_closed:
    case Column::p_exact: return row.p_closed;
    case Column::p_reduced: return row.p_reduced;
    case Column::w_antisym: return row.w_antisym;
    case Column::path_ratio_mod2: return row.path_ratio_mod2;
  }
  return std::nullopt;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string_view delay_mode_name(DelayMode m) {
  return m == DelayMode::differential ? "differential" : "common";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_complex(cplx v) {
  std::string out = format_double(v.real());
  const std::string im = format_double(v.imag());
  if (im.front() != '-') out += '+';
  out += im;
  out += 'j';
  return out;
}

std::optional<cplx> parse_complex(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) return std::nullopt;
  if (s.back() != 'j' && s.back() != 'J') {
    const auto re = parse_double(s);
    if (!re) return std::nullopt;
    return cplx{*re, 0.0};
  }
  s.remove_suffix(1);
  // The imaginary part starts at the last sign that is neither leading nor
  // part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) {
    const auto im = parse_double(s);
    if (!im) return std::nullopt;
    return cplx{0.0, *im};
  }
  const auto re = parse_double(s.substr(0, split));
  const auto im = parse_double(s.substr(split));
  if (!re || !im) return std::nullopt;
  return cplx{*re, *im};
}

void write_spectrum_csv(std::ostream& os, const BiphotonSpectrum& s) {
  const FrequencyGrid& g = s.grid();
  os << "omega1\\omega2";
  for (std::size_t j = 0; j < g.size(); ++j) os << ',' << format_double(g.frequency(j));
  os << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << format_double(g.frequency(i));
    for (std::size_t j = 0; j < g.size(); ++j) os << ',' << format_complex(s(i, j));
    os << '\n';
  }
}

BiphotonSpectrum read_spectrum_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(is, line)) throw ParseError("empty spectrum file", 1, 0);
  ++line_no;

  const auto header = split_fields(line);
  if (header.size() < 4) throw ParseError("header row needs at least 3 frequencies", 1, 0);
  std::vector<double> freqs;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto v = parse_double(header[c]);
    if (!v) throw ParseError("bad frequency in header row", line_no, c + 1);
    freqs.push_back(*v);
  }
  const std::size_t n = freqs.size();
  if (n % 2 == 0) throw ParseError("odd point count required", 1, 0);

  const double spacing = (freqs.back() - freqs.front()) / static_cast<double>(n - 1);
  const double tol = 1e-9 * std::max(std::abs(spacing), 1e-300) + 1e-12 * std::abs(freqs.front());
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(freqs[k] - (freqs.front() + static_cast<double>(k) * spacing)) > tol) {
      throw ParseError("header frequencies are not uniformly spaced", 1, k + 2);
    }
  }
  if (!(spacing > 0.0)) throw ParseError("header frequencies must increase", 1, 2);
  const FrequencyGrid grid =
      FrequencyGrid::make(freqs[(n - 1) / 2], 0.5 * (freqs.back() - freqs.front()), n);

  ComplexMatrix amp(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(is, line)) {
      throw ParseError("expected " + std::to_string(n) + " data rows", line_no + 1, 0);
    }
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.size() != n + 1) {
      throw ParseError("row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(n + 1),
                       line_no, 0);
    }
    const auto w = parse_double(fields[0]);
    if (!w || std::abs(*w - freqs[i]) > tol) {
      throw ParseError("row frequency does not match the header grid", line_no, 1);
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = parse_complex(fields[j + 1]);
      if (!v) throw ParseError("bad complex literal '" + std::string(trim(fields[j + 1])) + "'", line_no, j + 2);
      amp(i, j) = *v;
    }
  }
  while (std::getline(is, line)) {
    ++line_no;
    if (!trim(line).empty()) throw ParseError("unexpected data after the last row", line_no, 0);
  }
  return BiphotonSpectrum::from_amplitudes(grid, std::move(amp));
}

BiphotonSpectrum read_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open spectrum file '" + path + "'");
  return read_spectrum_csv(in);
}

std::string_view column_name(Column c) noexcept {
  switch (c) {
    case Column::param: return "param";
    case Column::p_numeric: return "P_numeric";
    case Column::p_closed: return "P_closed";
    case Column::p_exact: return "P_exact";
    case Column::p_reduced: return "P_reduced";
    case Column::w_antisym: return "w_antisym";
    case Column::path_ratio_mod2: return "path_ratio_mod2";
  }
  return "";
}

void write_scan_csv(std::ostream& os, const ScanResult& r, const std::vector<Column>& columns) {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k) os << ',';
    os << column_name(columns[k]);
  }
  os << '\n';
  for (const ScanRow& row : r.rows) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (k) os << ',';
      if (const auto v = field_value(row, columns[k])) os << format_double(*v);
    }
    os << '\n';
  }
}

nlohmann::json grid_to_json(const FrequencyGrid& g) {
  return {{"center", g.center()},
          {"half_span", g.half_span()},
          {"n_points", g.size()},
          {"spacing", g.spacing()}};
}

nlohmann::json scan_to_json(const ScanResult& r, const std::vector<Column>& columns) {
  const ScanSpec& s = r.spec;
  nlohmann::json spec = {
      {"model", to_string(s.model)},
      {"swept_parameter", to_string(s.swept)},
      {"range", {{"min", s.range.min}, {"max", s.range.max}, {"steps", s.range.steps}}},
      {"evaluation", {{"numeric", s.evaluation.numeric}, {"closed_form", s.evaluation.closed_form}}},
      {"delay_mode", delay_mode_name(s.delay_mode)},
      {"parameters",
       {{"center", s.params.center},
        {"sigma", s.params.sigma},
        {"c_light", s.params.c_light},
        {"sigma_p", optional_json(s.params.sigma_p)},
        {"delta_L", s.params.delta_L},
        {"dz", s.params.dz},
        {"parity", s.params.parity == PathParity::even ? "even" : "odd"},
        {"omega_a", s.params.omega_a},
        {"omega_b", s.params.omega_b}}},
      {"grid_span_sigmas", s.grid.span_sigmas},
  };
  if (!s.spectrum_path.empty()) spec["spectrum_path"] = s.spectrum_path;

  nlohmann::json rows = nlohmann::json::array();
  for (const ScanRow& row : r.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (Column c : columns) obj[std::string(column_name(c))] = optional_json(field_value(row, c));
    rows.push_back(std::move(obj));
  }

  const ScanMetadata& m = r.metadata;
  nlohmann::json meta = {{"warnings", m.warnings}, {"wall_seconds", m.wall_seconds}, {"isa", m.isa}};
  if (m.grid) meta["grid"] = grid_to_json(*m.grid);
  if (m.norm_factor) meta["B"] = *m.norm_factor;
  if (m.norm_factor_unit) meta["B_unit"] = *m.norm_factor_unit;
  if (m.norm_factor_numeric) meta["B_numeric"] = *m.norm_factor_numeric;
  if (m.path_ratio) {
    meta["path_ratio"] = *m.path_ratio;
    meta["path_ratio_mod2"] = std::fmod(std::abs(*m.path_ratio), 2.0);
  }
  return {{"spec", std::move(spec)}, {"rows", std::move(rows)}, {"metadata", std::move(meta)}};
}

void write_labeled_matrix_csv(std::ostream& os, const LabeledMatrix& m) {
  os << m.corner_label;
  for (double c : m.col_axis) os << ',' << format_double(c);
  os << '\n';
  const std::size_t cols = m.col_axis.size();
  for (std::size_t i = 0; i < m.row_axis.size(); ++i) {
    os << format_double(m.row_axis[i]);
    for (std::size_t j = 0; j < cols; ++j) os << ',' << format_double(m.values[i * cols + j]);
    os << '\n';
  }
}

}  // namespace biphoton
