#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "biphoton/beamsplitter.hpp"
#include "biphoton/error.hpp"
#include "biphoton/io.hpp"
#include "biphoton/models.hpp"
#include "biphoton/scans.hpp"

namespace biphoton::cli {
namespace {

using nlohmann::json;

struct Common {
  std::string units = "natural";
  std::string format;
  std::string output;
  std::string metadata;
  std::string config;  // consumed before parsing; listed for --help
  std::optional<std::size_t> grid_points;
  std::optional<double> grid_span;
  std::optional<double> c_light;
  unsigned threads = 0;
};

struct Source {
  std::string model = "gaussian_pair";
  std::string spectrum;
  double sigma = 1.0;
  std::optional<double> omega;
  std::optional<double> lambda;
  std::optional<double> sigma_p;
  std::optional<double> beta;
  double delta_L = 0.0;
  double dz = 0.0;
  std::string parity = "even";
  double omega_a = -1.0;
  double omega_b = 1.0;
};

struct ScanOpts {
  std::optional<double> dz_min, dz_max, dl_min, dl_max;
  std::size_t steps = 81;
  std::string method = "both";
  std::string norm_factor = "quarter";
};

struct Splitter {
  double theta = std::numbers::pi / 4.0;
  double phi_tau = 0.0;
  double phi_rho = 0.0;
  std::string save_spectrum;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--config", c.config, "JSON object of options; keys are long option names without dashes");
  sub->add_option("--units", c.units, "Unit convention")->check(CLI::IsMember({"natural", "si"}))->capture_default_str();
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("-o,--output", c.output, "Output path (default: standard output)");
  sub->add_option("--metadata", c.metadata, "Also write the metadata object as JSON to this path");
  sub->add_option("--grid-points", c.grid_points, "Grid points per axis (odd)");
  sub->add_option("--grid-span", c.grid_span, "Grid half-span in multiples of sigma")->check(CLI::PositiveNumber);
  sub->add_option("--c-light", c.c_light, "Speed of light (required with --units si)")->check(CLI::PositiveNumber);
  sub->add_option("--threads", c.threads, "Worker threads for scans (0: all cores)");
}

void add_physics(CLI::App* sub, Source& s, bool with_lambda) {
  sub->add_option("--sigma", s.sigma, "Single-photon bandwidth")->check(CLI::PositiveNumber)->capture_default_str();
  auto* omega = sub->add_option("--omega", s.omega, "Center frequency Omega");
  if (with_lambda) {
    sub->add_option("--lambda", s.lambda, "Center wavelength 2 pi c / Omega")->check(CLI::PositiveNumber)->excludes(omega);
  }
  auto* sp = sub->add_option("--sigma-p", s.sigma_p, "Pump bandwidth")->check(CLI::PositiveNumber);
  sub->add_option("--beta", s.beta, "Pump bandwidth relative to sigma")->check(CLI::PositiveNumber)->excludes(sp);
}

void add_source(CLI::App* sub, Source& s) {
  auto* model = sub->add_option("--model", s.model, "Spectrum model")
                    ->check(CLI::IsMember({"gaussian_pair", "shih", "delta_pump", "bell"}))
                    ->capture_default_str();
  sub->add_option("--spectrum", s.spectrum, "Spectrum CSV file")->excludes(model);
  add_physics(sub, s, true);
  sub->add_option("--delta-L", s.delta_L, "Half path difference (shih, delta_pump)");
  sub->add_option("--dz", s.dz, "Path delay z1 - z2");
  sub->add_option("--parity", s.parity, "delta_pump: even (cos) or odd (sin)")
      ->check(CLI::IsMember({"even", "odd"}))
      ->capture_default_str();
  sub->add_option("--omega-a", s.omega_a, "bell: first frequency");
  sub->add_option("--omega-b", s.omega_b, "bell: second frequency");
}

double resolve_c(const Common& c) {
  if (c.units == "si") {
    if (!c.c_light) throw ConfigError("--units si requires --c-light");
    return *c.c_light;
  }
  if (c.c_light) throw ConfigError("--c-light is only accepted with --units si");
  return 1.0;
}

ModelParameters resolve_params(const Source& s, const Common& c, bool need_center, bool need_pump) {
  ModelParameters p;
  p.c_light = resolve_c(c);
  p.sigma = s.sigma;
  if (s.lambda) {
    p.center = 2.0 * std::numbers::pi * p.c_light / *s.lambda;
  } else if (s.omega) {
    p.center = *s.omega;
  } else if (need_center) {
    throw ConfigError("--omega or --lambda is required");
  }
  if (s.beta) p.sigma_p = *s.beta * s.sigma;
  if (s.sigma_p) p.sigma_p = *s.sigma_p;
  if (need_pump && !p.sigma_p) throw ConfigError("--sigma-p or --beta is required");
  p.delta_L = s.delta_L;
  p.dz = s.dz;
  p.parity = s.parity == "odd" ? PathParity::odd : PathParity::even;
  p.omega_a = s.omega_a;
  p.omega_b = s.omega_b;
  return p;
}

GridOptions resolve_grid(const Common& c) {
  GridOptions g;
  if (c.grid_span) g.span_sigmas = *c.grid_span;
  g.n_points = c.grid_points;
  return g;
}

Evaluation resolve_method(const std::string& method) {
  return {method != "closed", method != "numeric"};
}

// Writes to -o when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out) : os_(&out) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void write_metadata(const Common& c, const json& meta, std::ostream& err) {
  if (meta.contains("warnings")) {
    for (const auto& w : meta["warnings"]) err << "warning: " << w.get<std::string>() << '\n';
  }
  if (c.metadata.empty()) return;
  std::ofstream f(c.metadata);
  if (!f) throw ConfigError("cannot open metadata file '" + c.metadata + "'");
  f << meta.dump(2) << '\n';
}

void emit_scan(const Common& c, const ScanResult& r, const std::vector<Column>& cols, std::ostream& out,
               std::ostream& err) {
  json doc = scan_to_json(r, cols);
  doc["spec"]["units"] = c.units;
  Sink sink(c.output, out);
  if (c.format == "json") {
    sink.stream() << doc.dump(2) << '\n';
  } else {
    write_scan_csv(sink.stream(), r, cols);
  }
  write_metadata(c, doc["metadata"], err);
}

ScanRange resolve_range(const std::optional<double>& lo, const std::optional<double>& hi, std::size_t steps,
                        const char* what) {
  if (!lo || !hi) throw ConfigError(std::string("both --") + what + "-min and --" + what + "-max are required");
  return {*lo, *hi, steps};
}

void cmd_dip_scan(const Common& c, const Source& s, const ScanOpts& o, std::ostream& out, std::ostream& err) {
  ScanSpec spec;
  spec.model = ScanModel::gaussian_pair;
  spec.params = resolve_params(s, c, false, false);
  spec.range = resolve_range(o.dz_min, o.dz_max, o.steps, "dz");
  spec.evaluation = resolve_method(o.method);
  spec.grid = resolve_grid(c);
  spec.threads = c.threads;
  emit_scan(c, run_scan(spec), {Column::param, Column::p_numeric, Column::p_closed, Column::w_antisym}, out, err);
}

void cmd_shih_scan(const Common& c, const Source& s, const ScanOpts& o, std::ostream& out, std::ostream& err) {
  ScanSpec spec;
  spec.model = ScanModel::shih;
  spec.params = resolve_params(s, c, true, true);
  const bool dz_sweep = o.dz_min || o.dz_max;
  const bool dl_sweep = o.dl_min || o.dl_max;
  if (dz_sweep == dl_sweep) throw ConfigError("give exactly one of --dz-min/--dz-max or --dL-min/--dL-max");
  spec.swept = dz_sweep ? SweptParameter::dz : SweptParameter::dL;
  spec.range = dz_sweep ? resolve_range(o.dz_min, o.dz_max, o.steps, "dz")
                        : resolve_range(o.dl_min, o.dl_max, o.steps, "dL");
  spec.evaluation = resolve_method(o.method);
  spec.norm_factor = o.norm_factor == "unit" ? NormFactor::unit : NormFactor::quarter;
  spec.grid = resolve_grid(c);
  spec.threads = c.threads;
  std::vector<Column> cols{Column::param, Column::p_numeric, Column::p_exact, Column::p_reduced};
  if (!dz_sweep) cols.push_back(Column::path_ratio_mod2);
  emit_scan(c, run_scan(spec), cols, out, err);
}

struct Loaded {
  BiphotonSpectrum spectrum;
  std::vector<std::string> warnings;
  json spec;
};

Loaded load_source(const Source& s, const Common& c) {
  if (!s.spectrum.empty()) {
    resolve_c(c);
    return {read_spectrum_file(s.spectrum), {}, {{"spectrum_path", s.spectrum}, {"units", c.units}}};
  }
  const bool is_shih = s.model == "shih";
  const bool is_delta = s.model == "delta_pump";
  const ModelParameters p = resolve_params(s, c, is_shih || is_delta, is_shih);
  const double span = c.grid_span.value_or(6.0);
  json spec = {{"model", s.model}, {"units", c.units}, {"sigma", p.sigma}, {"center", p.center},
               {"c_light", p.c_light}};
  if (p.sigma_p) spec["sigma_p"] = *p.sigma_p;

  ModelSpectrum built = [&] {
    if (is_shih) {
      const ShihModel m = ShihModel::with_offsets(p.center, p.sigma, *p.sigma_p, p.delta_L, p.dz, p.c_light);
      const std::size_t n = c.grid_points.value_or(shih_recommended_points(m, std::abs(p.dz), span));
      return shih_spectrum(m, model_grid(p.center, p.sigma, span, n));
    }
    const FrequencyGrid grid = model_grid(p.center, p.sigma, span, c.grid_points.value_or(257));
    if (is_delta) return delta_pump_spectrum(p.sigma, p.center, p.delta_L, p.parity, grid, p.c_light);
    if (s.model == "bell") return bell_antisymmetric_spectrum(p.omega_a, p.omega_b, grid);
    const PumpEnvelope pump = p.sigma_p ? PumpEnvelope::gaussian(*p.sigma_p) : PumpEnvelope::constant();
    ModelSpectrum pair = gaussian_pair_spectrum({p.center, p.sigma, pump}, grid);
    pair.spectrum = apply_path_delays(pair.spectrum, p.dz, 0.0, p.c_light);
    return pair;
  }();
  if (is_shih || is_delta) {
    spec["delta_L"] = p.delta_L;
    spec["parity"] = s.parity;
  }
  if (s.model != "bell" && !is_delta) spec["dz"] = p.dz;
  if (s.model == "bell") {
    spec["omega_a"] = p.omega_a;
    spec["omega_b"] = p.omega_b;
  }
  return {std::move(built.spectrum), std::move(built.warnings), std::move(spec)};
}

void cmd_transform(const Common& c, const Source& s, const Splitter& b, std::ostream& out, std::ostream& err) {
  Loaded src = load_source(s, c);
  if (!b.save_spectrum.empty()) {
    std::ofstream f(b.save_spectrum, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + b.save_spectrum + "'");
    write_spectrum_csv(f, src.spectrum);
  }
  const BeamSplitterParams p{b.theta, b.phi_tau, b.phi_rho};
  const OutputDecomposition d = transform(src.spectrum, p);
  const TwoPhotonState in = TwoPhotonState::from_spectrum(src.spectrum);
  const double deviation =
      max_state_difference(apply_beamsplitter(in, p).canonical(), in.canonical());

  const nlohmann::ordered_json report = {
      {"p_11", d.p_11},
      {"p_22", d.p_22},
      {"p_coinc", d.p_coinc},
      {"w_antisym", antisymmetric_weight(src.spectrum)},
      {"exchange_overlap", exchange_overlap(src.spectrum)},
      {"rank1_fraction", separability_rank1_fraction(src.spectrum)},
      {"trapping_fidelity", trapping_fidelity(src.spectrum)},
      {"output_input_deviation", deviation},
  };
  json spec = src.spec;
  spec["splitter"] = {{"theta", p.theta}, {"phi_tau", p.phi_tau}, {"phi_rho", p.phi_rho}};
  const json meta = {{"grid", grid_to_json(src.spectrum.grid())}, {"warnings", src.warnings}};

  Sink sink(c.output, out);
  if (c.format == "json") {
    nlohmann::ordered_json doc = {{"spec", spec}, {"rows", nlohmann::ordered_json::array({report})}, {"metadata", meta}};
    sink.stream() << doc.dump(2) << '\n';
  } else {
    std::string header, row;
    for (const auto& [key, value] : report.items()) {
      header += (header.empty() ? "" : ",") + key;
      row += (row.empty() ? "" : ",") + format_double(value.get<double>());
    }
    sink.stream() << header << '\n' << row << '\n';
  }
  write_metadata(c, meta, err);
}

void cmd_wavepacket(const Common& c, const Source& s, const std::string& domain, std::ostream& out,
                    std::ostream& err) {
  Loaded src = load_source(s, c);
  const BiphotonSpectrum& spec = src.spectrum;
  const FrequencyGrid& grid = spec.grid();
  const std::size_t n = spec.size();

  LabeledMatrix lm;
  json meta = {{"domain", domain}, {"grid", grid_to_json(grid)}, {"warnings", src.warnings},
               {"rank1_fraction", separability_rank1_fraction(spec)}};
  lm.values.resize(n * n);
  if (domain == "frequency") {
    lm.corner_label = "omega1\\omega2";
    lm.row_axis = grid.frequencies();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) lm.values[i * n + j] = std::abs(spec(i, j));
    }
  } else {
    const TimeWavepacket tw = time_domain(spec);
    lm.corner_label = "t1\\t2";
    lm.row_axis = tw.time_axis;
    // Compare against the product of 1D transforms of the leading Schmidt pair.
    const SchmidtPair pair = leading_schmidt_pair(spec);
    const auto a = time_domain_1d(grid, pair.photon1);
    const auto b = time_domain_1d(grid, pair.photon2);
    const double amp = std::sqrt(pair.weight);
    double peak = 0.0, residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const cplx v = tw.values(i, j);
        lm.values[i * n + j] = std::abs(v);
        peak = std::max(peak, std::abs(v));
        residual = std::max(residual, std::abs(v - amp * a[i] * b[j]));
      }
    }
    meta["time_step"] = tw.time_step;
    meta["parseval_norm"] = tw.parseval_norm();
    meta["factorization_residual"] = residual / peak;
  }
  lm.col_axis = lm.row_axis;

  std::size_t best = 0;
  for (std::size_t k = 1; k < lm.values.size(); ++k) {
    if (lm.values[k] > lm.values[best]) best = k;
  }
  meta["peak"] = {{"row", lm.row_axis[best / n]}, {"col", lm.col_axis[best % n]}, {"value", lm.values[best]}};

  Sink sink(c.output, out);
  if (c.format == "json") {
    const std::string axis = domain == "frequency" ? "omega1" : "t1";
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({{axis, lm.row_axis[i]},
                      {"abs", std::vector<double>(lm.values.begin() + i * n, lm.values.begin() + (i + 1) * n)}});
    }
    meta[domain == "frequency" ? "omega2" : "t2"] = lm.col_axis;
    json spec_json = src.spec;
    spec_json["domain"] = domain;
    sink.stream() << json{{"spec", spec_json}, {"rows", rows}, {"metadata", meta}}.dump(2) << '\n';
  } else {
    write_labeled_matrix_csv(sink.stream(), lm);
  }
  write_metadata(c, meta, err);
}

int cmd_validate(const std::vector<int>& ids_in, std::ostream& out) {
  std::vector<int> ids = ids_in.empty() ? acceptance::criterion_ids() : ids_in;
  const auto known = acceptance::criterion_ids();
  for (int id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw ConfigError("unknown criterion " + std::to_string(id));
    }
  }
  std::size_t passed = 0;
  for (int id : ids) {
    const auto r = acceptance::run_criterion(id);
    acceptance::print(out, r);
    passed += r.passed() ? 1 : 0;
  }
  out << passed << " of " << ids.size() << " criteria passed\n";
  return passed == ids.size() ? ok : numeric_failure;
}

// Expands `--config FILE` (a flat JSON object) into "--key value" tokens
// placed ahead of the remaining arguments. Keys also given on the command
// line are skipped, so explicit flags win.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 == args.size()) throw ConfigError("--config needs a file");
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      rest.push_back(args[k]);
    }
  }
  if (!path) return rest;

  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot open config file '" + *path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + *path + "': " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");

  const auto on_command_line = [&](const std::string& flag) {
    return std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  const auto text = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  std::vector<std::string> from_file;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (on_command_line(flag)) continue;
    for (const json& v : value.is_array() ? value : json::array({value})) {
      if (v.is_object() || v.is_array() || v.is_null()) {
        throw ConfigError("config key '" + key + "' must be a scalar or a list of scalars");
      }
      from_file.push_back(flag);
      from_file.push_back(text(v));
    }
  }
  // Subcommand name first, then the file's options, then the command line.
  if (rest.empty()) return from_file;
  std::vector<std::string> merged{rest.front()};
  merged.insert(merged.end(), from_file.begin(), from_file.end());
  merged.insert(merged.end(), rest.begin() + 1, rest.end());
  return merged;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-photon interference on a discrete frequency grid", "biphoton"};
  app.require_subcommand(1, 1);

  // Separate option sets so each subcommand keeps its own --format default.
  Common dip_common, shih_common, tr_common, wp_common;
  Source source;
  ScanOpts scan;
  Splitter splitter;
  std::string domain = "frequency";
  std::vector<int> criteria;

  auto* dip = app.add_subcommand("dip-scan", "Coincidence probability vs delay for the Gaussian pair model");
  add_common(dip, dip_common, "csv");
  add_physics(dip, source, false);
  dip->add_option("--dz-min", scan.dz_min, "First delay");
  dip->add_option("--dz-max", scan.dz_max, "Last delay");
  dip->add_option("--steps", scan.steps, "Number of delays")->capture_default_str();
  dip->add_option("--method", scan.method, "Evaluation")->check(CLI::IsMember({"both", "numeric", "closed"}))->capture_default_str();

  auto* shih = app.add_subcommand("shih-scan", "Two-path signal arm: scan the delay or the path difference");
  add_common(shih, shih_common, "csv");
  add_physics(shih, source, true);
  shih->add_option("--delta-L", source.delta_L, "Half path difference (dz sweeps)");
  shih->add_option("--dz", source.dz, "Fixed delay (dL sweeps)");
  shih->add_option("--dz-min", scan.dz_min, "First delay");
  shih->add_option("--dz-max", scan.dz_max, "Last delay");
  shih->add_option("--dL-min", scan.dl_min, "First path difference");
  shih->add_option("--dL-max", scan.dl_max, "Last path difference");
  shih->add_option("--steps", scan.steps, "Number of scan points")->capture_default_str();
  shih->add_option("--method", scan.method, "Evaluation")->check(CLI::IsMember({"both", "numeric", "closed"}))->capture_default_str();
  shih->add_option("--norm-factor", scan.norm_factor, "Normalization used in P_exact")
      ->check(CLI::IsMember({"quarter", "unit"}))
      ->capture_default_str();

  auto* tr = app.add_subcommand("transform", "Beam-splitter output report for one spectrum");
  add_common(tr, tr_common, "json");
  add_source(tr, source);
  tr->add_option("--theta", splitter.theta, "Splitting angle (pi/4: balanced)");
  tr->add_option("--phi-tau", splitter.phi_tau, "Transmission phase");
  tr->add_option("--phi-rho", splitter.phi_rho, "Reflection phase");
  tr->add_option("--save-spectrum", splitter.save_spectrum, "Write the input spectrum as a CSV file");

  auto* wp = app.add_subcommand("wavepacket", "Export |c| on the frequency grid or |C| on the time grid");
  add_common(wp, wp_common, "csv");
  add_source(wp, source);
  wp->add_option("--domain", domain, "Which domain to export")->check(CLI::IsMember({"frequency", "time"}))->capture_default_str();

  auto* val = app.add_subcommand("validate", "Run the acceptance criteria");
  val->add_option("-c,--criterion", criteria, "Criterion number (repeatable; default: all)");

  try {
    std::vector<std::string> args;
    try {
      args = expand_config(argc, argv);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return config_error;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }

  try {
    if (dip->parsed()) cmd_dip_scan(dip_common, source, scan, out, err);
    if (shih->parsed()) cmd_shih_scan(shih_common, source, scan, out, err);
    if (tr->parsed()) cmd_transform(tr_common, source, splitter, out, err);
    if (wp->parsed()) cmd_wavepacket(wp_common, source, domain, out, err);
    if (val->parsed()) return cmd_validate(criteria, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return numeric_failure;
  }
  return ok;
}

}  // namespace biphoton::cli
