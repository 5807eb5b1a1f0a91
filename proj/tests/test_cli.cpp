#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "biphoton");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = biphoton::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("biphoton-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("dip-scan writes the documented table") {
  TempDir dir;
  const auto r = cli({"dip-scan", "--sigma", "1", "--dz-min", "-4", "--dz-max", "4", "--steps", "81",
                      "--units", "natural", "-o", dir.file("dip.csv")});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(slurp(dir.file("dip.csv")));
  REQUIRE(rows.size() == 82);
  CHECK(rows[0] == std::vector<std::string>{"param", "P_numeric", "P_closed", "w_antisym"});
  CHECK(rows[41][0] == "0");
  CHECK(rows[41][2] == "0");
  CHECK(slurp(dir.file("dip.csv")).find('\r') == std::string::npos);
}

TEST_CASE("CSV and JSON output carry identical numbers") {
  const std::vector<std::string> base{"dip-scan", "--dz-min", "-3", "--dz-max", "3", "--steps", "13", "--beta", "0.5"};
  auto as_json = base;
  as_json.insert(as_json.end(), {"--format", "json"});
  const auto csv = cli(base);
  const auto js = cli(as_json);
  REQUIRE(csv.code == 0);
  REQUIRE(js.code == 0);
  const auto rows = read_csv(csv.out);
  const json doc = json::parse(js.out);
  CHECK(doc.contains("spec"));
  CHECK(doc.contains("metadata"));
  REQUIRE(doc["rows"].size() == rows.size() - 1);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      CHECK(std::stod(rows[k][c]) == doc["rows"][k - 1][rows[0][c]].get<double>());
    }
  }
}

TEST_CASE("configuration errors exit with 2 before computing") {
  const auto steps = cli({"dip-scan", "--dz-min", "-4", "--dz-max", "4", "--steps", "1"});
  CHECK(steps.code == 2);
  CHECK(steps.err.find("steps must be ≥ 2") != std::string::npos);

  const auto unknown = cli({"dip-scan", "--dz-min", "-4", "--dz-max", "4", "--sigmaa", "2"});
  CHECK(unknown.code == 2);
  CHECK(unknown.out.empty());
  CHECK(unknown.err.find("--sigmaa") != std::string::npos);

  CHECK(cli({"dip-scan", "--dz-min", "-4"}).code == 2);
  CHECK(cli({"dip-scan", "--dz-min", "-1", "--dz-max", "1", "--format", "xml"}).code == 2);
  CHECK(cli({"dip-scan", "--dz-min", "-1", "--dz-max", "1", "--grid-points", "64"}).code == 2);
  CHECK(cli({"shih-scan", "--beta", "0.1", "--dz-min", "-1", "--dz-max", "1"}).code == 2);
  CHECK(cli({"shih-scan", "--omega", "10", "--dz-min", "-1", "--dz-max", "1"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("unit conventions") {
  CHECK(cli({"dip-scan", "--units", "si", "--dz-min", "-1", "--dz-max", "1"}).code == 2);
  CHECK(cli({"dip-scan", "--c-light", "3e8", "--dz-min", "-1", "--dz-max", "1"}).code == 2);

  const auto natural = cli({"dip-scan", "--dz-min", "-2", "--dz-max", "2", "--steps", "5"});
  const auto si = cli({"dip-scan", "--units", "si", "--c-light", "3e8", "--sigma", "1e14", "--dz-min", "-6e-6",
                       "--dz-max", "6e-6", "--steps", "5"});
  REQUIRE(natural.code == 0);
  REQUIRE(si.code == 0);
  const auto a = read_csv(natural.out);
  const auto b = read_csv(si.out);
  for (std::size_t k = 1; k < a.size(); ++k) {
    CHECK(std::abs(std::stod(a[k][2]) - std::stod(b[k][2])) < 1e-14);
    CHECK(std::abs(std::stod(a[k][1]) - std::stod(b[k][1])) < 1e-12);
  }
}

TEST_CASE("config files are strict and yield to explicit flags") {
  TempDir dir;
  std::ofstream(dir.file("ok.json")) << R"({"sigma": 2, "dz-min": -1, "dz-max": 1, "steps": 3})";
  std::ofstream(dir.file("bad.json")) << R"({"sigma": 2, "dz-minn": -1})";
  std::ofstream(dir.file("broken.json")) << R"({"sigma": )";

  const auto from_file = cli({"dip-scan", "--config", dir.file("ok.json")});
  REQUIRE(from_file.code == 0);
  const auto rows = read_csv(from_file.out);
  REQUIRE(rows.size() == 4);
  CHECK(std::abs(std::stod(rows[3][2]) - 0.5 * (1.0 - std::exp(-2.0))) < 1e-15);

  const auto override = cli({"dip-scan", "--config", dir.file("ok.json"), "--sigma", "1"});
  REQUIRE(override.code == 0);
  CHECK(std::abs(std::stod(read_csv(override.out)[3][2]) - 0.5 * (1.0 - std::exp(-0.5))) < 1e-15);

  const auto unknown = cli({"dip-scan", "--config", dir.file("bad.json")});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("dz-minn") != std::string::npos);
  CHECK(cli({"dip-scan", "--config", dir.file("broken.json")}).code == 2);
  CHECK(cli({"dip-scan", "--config", dir.file("missing.json")}).code == 2);
}

TEST_CASE("shih-scan") {
  SUBCASE("dL = 0 reproduces the plain dip") {
    const auto r = cli({"shih-scan", "--omega", "20", "--beta", "0.3", "--delta-L", "0", "--dz-min", "-2",
                        "--dz-max", "2", "--steps", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(std::abs(doc["rows"][2]["P_exact"].get<double>()) < 1e-15);
    CHECK(std::abs(doc["rows"][2]["P_numeric"].get<double>()) < 1e-12);
    CHECK(doc["metadata"].contains("B"));
    CHECK(doc["metadata"].contains("path_ratio_mod2"));
  }
  SUBCASE("odd parity peak at zero delay") {
    // 4 dL / lambda = 1001 at dL = 20 in natural units.
    const auto r = cli({"shih-scan", "--lambda", "0.0799200799200799", "--beta", "0.01", "--delta-L", "20",
                        "--dz-min", "-3", "--dz-max", "3", "--steps", "7", "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(std::abs(doc["metadata"]["path_ratio_mod2"].get<double>() - 1.0) < 1e-6);
    double best = 0.0, best_param = 1.0;
    for (const auto& row : doc["rows"]) {
      if (row["P_numeric"].get<double>() > best) {
        best = row["P_numeric"].get<double>();
        best_param = row["param"].get<double>();
      }
    }
    CHECK(best_param == 0.0);
    CHECK(best > 0.9);
  }
  SUBCASE("dL sweep reports the fringe parity per row") {
    const auto r = cli({"shih-scan", "--omega", "20", "--beta", "0.5", "--dL-min", "0", "--dL-max", "1", "--steps", "3"});
    REQUIRE(r.code == 0);
    CHECK(read_csv(r.out)[0].back() == "path_ratio_mod2");
  }
  CHECK(cli({"shih-scan", "--omega", "20", "--beta", "0.5", "--dL-min", "0", "--dL-max", "1", "--dz-min", "0",
             "--dz-max", "1"}).code == 2);
}

TEST_CASE("transform reports") {
  const auto report = [](std::vector<std::string> args) {
    args.insert(args.begin(), "transform");
    const auto r = cli(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out)["rows"][0];
  };
  const json bell = report({"--model", "bell", "--omega-a", "-0.75", "--omega-b", "0.75"});
  CHECK(std::abs(bell["p_coinc"].get<double>() - 1.0) < 1e-12);
  CHECK(std::abs(bell["trapping_fidelity"].get<double>() - 1.0) < 1e-12);

  const json pair = report({"--model", "gaussian_pair"});
  CHECK(pair["p_coinc"].get<double>() < 1e-12);
  CHECK(std::abs(pair["rank1_fraction"].get<double>() - 1.0) < 1e-12);

  for (const std::vector<std::string>& model :
       {std::vector<std::string>{"--model", "gaussian_pair", "--beta", "0.3", "--dz", "0.7"},
        std::vector<std::string>{"--model", "shih", "--omega", "30", "--beta", "0.3", "--delta-L", "1"},
        std::vector<std::string>{"--model", "delta_pump", "--omega", "30", "--delta-L", "1"},
        std::vector<std::string>{"--model", "bell"}}) {
    auto args = model;
    args.insert(args.end(), {"--theta", "0"});
    const json r = report(args);
    CHECK(r["output_input_deviation"].get<double>() == 0.0);
    CHECK(std::abs(r["p_coinc"].get<double>() - 1.0) < 1e-12);
  }
}

TEST_CASE("transform on spectrum files") {
  TempDir dir;
  REQUIRE(cli({"transform", "--model", "delta_pump", "--parity", "odd", "--omega", "10", "--delta-L", "3",
               "--grid-points", "9", "--save-spectrum", dir.file("sin.csv")}).code == 0);
  const auto reread = cli({"transform", "--spectrum", dir.file("sin.csv")});
  REQUIRE(reread.code == 0);
  CHECK(std::abs(json::parse(reread.out)["rows"][0]["p_coinc"].get<double>() - 1.0) < 1e-12);

  auto lines = read_csv(slurp(dir.file("sin.csv")));
  lines[2][3] = "1+2i";
  std::ofstream bad(dir.file("bad.csv"));
  for (const auto& row : lines) {
    for (std::size_t c = 0; c < row.size(); ++c) bad << (c ? "," : "") << row[c];
    bad << '\n';
  }
  bad.close();
  const auto r = cli({"transform", "--spectrum", dir.file("bad.csv")});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3, column 4") != std::string::npos);

  std::ofstream(dir.file("zero.csv")) << "w,-1,0,1\n-1,0,0,0\n0,0,0,0\n1,0,0,0\n";
  CHECK(cli({"transform", "--spectrum", dir.file("zero.csv")}).code == 3);
  CHECK(cli({"transform", "--spectrum", dir.file("absent.csv")}).code == 2);
  CHECK(cli({"transform", "--spectrum", dir.file("sin.csv"), "--model", "bell"}).code == 2);
}

TEST_CASE("wavepacket export") {
  SUBCASE("odd delta-pump spectrum vanishes on the diagonal") {
    const auto r = cli({"wavepacket", "--model", "delta_pump", "--parity", "odd", "--omega", "10", "--delta-L", "3"});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(r.out);
    REQUIRE(rows.size() == 258);
    CHECK(rows[0][0] == "omega1\\omega2");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][i]) == 0.0);
  }
  SUBCASE("Gaussian pair peaks at the carrier") {
    const auto r = cli({"wavepacket", "--model", "gaussian_pair", "--omega", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    const json peak = json::parse(r.out)["metadata"]["peak"];
    CHECK(peak["row"].get<double>() == 5.0);
    CHECK(peak["col"].get<double>() == 5.0);
  }
  SUBCASE("time domain factorization residual") {
    const auto separable = cli({"wavepacket", "--model", "gaussian_pair", "--domain", "time", "--format", "json"});
    REQUIRE(separable.code == 0);
    const json meta = json::parse(separable.out)["metadata"];
    CHECK(meta["factorization_residual"].get<double>() < 1e-9);
    CHECK(std::abs(meta["parseval_norm"].get<double>() - 1.0) < 1e-12);

    const auto entangled =
        cli({"wavepacket", "--model", "gaussian_pair", "--beta", "0.2", "--domain", "time", "--format", "json"});
    REQUIRE(entangled.code == 0);
    CHECK(json::parse(entangled.out)["metadata"]["factorization_residual"].get<double>() > 1e-3);
  }
}

TEST_CASE("validate") {
  const auto r = cli({"validate", "-c", "4", "-c", "8"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS  criterion 4") != std::string::npos);
  CHECK(r.out.find("2 of 2 criteria passed") != std::string::npos);
  CHECK(cli({"validate", "-c", "99"}).code == 2);
}
