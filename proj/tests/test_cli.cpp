#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "hamlab/cli.hpp"
#include "hamlab/json_io.hpp"

using namespace hamlab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hamlab");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hamlab_cli_test";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

double extent(const std::vector<std::vector<double>>& rows, std::size_t col) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : rows) {
    lo = std::min(lo, r[col]);
    hi = std::max(hi, r[col]);
  }
  return hi - lo;
}

}  // namespace

TEST_CASE("catalog lists every system") {
  const auto r = run_cli({"catalog"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = Json::parse(r.out);
  REQUIRE(j.size() == 4);
  CHECK(j[2]["name"] == "cherry");
  CHECK(j[3]["params"]["g_coeffs"] == "1,1");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"analyze", "jupiter"}).code == cli::kExitUsage);
  CHECK(run_cli({"analyze"}).code == cli::kExitUsage);
  CHECK(run_cli({"probe", "cherry", "--epsilons", "2"}).code == cli::kExitUsage);
  CHECK(run_cli({"probe", "cherry", "--epsilons", "x"}).code == cli::kExitUsage);
  CHECK(run_cli({"certify", "cherry", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(run_cli({"period-scan", "--amplitudes", "0.3,0.1"}).code == cli::kExitUsage);
  CHECK(run_cli({"period-scan", "--amplitudes", "0.6"}).code == cli::kExitUsage);
  CHECK(run_cli({"integrate", "cherry", "--g-coeffs", "1,1"}).code == cli::kExitUsage);
  CHECK(run_cli({"integrate", "cherry", "--step", "-1"}).code == cli::kExitUsage);
  CHECK(run_cli({"catalog", "--out", "/nonexistent/dir/out.json"}).code == cli::kExitUsage);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("numerical failure exits 3 with a json body") {
  // a huge step on a cubic field blows the corrector up
  const auto r = run_cli({"integrate", "cherry", "--state", "5,5,5,5", "--step", "10", "--tmax", "100"});
  CHECK(r.code == cli::kExitNumerical);
  const auto j = Json::parse(r.out);
  CHECK(j["error"]["kind"] == "numerical");
}

TEST_CASE("integrate writes csv by default and json on request") {
  const auto csv = run_cli({"integrate", "free_particle", "--state", "0,1/2", "--t1", "1", "--step", "0.25"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("t,q1,p1,H\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 6);
  const auto js = run_cli({"integrate", "free_particle", "--state", "0,0.5", "--t1", "1", "--format", "json"});
  REQUIRE(js.code == 0);
  const auto j = Json::parse(js.out);
  CHECK(j["method"] == "implicit_midpoint");
  CHECK(j["final_state"][0].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("identical runs are byte-identical") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"analyze", "cherry", "--tmax", "200", "--samples", "200"},
        {"certify", "variation_like", "--seed", "7", "--samples", "300"},
        {"probe", "l4_linear", "--epsilons", "0.5,0.1", "--format", "csv"},
        {"period-scan", "--g-coeffs", "1,1,10/9", "--format", "json"},
        {"integrate", "cherry", "--tmax", "3"}}) {
    const auto a = run_cli(args), b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("seed changes the certificate sample") {
  const auto a = Json::parse(run_cli({"certify", "cherry", "--seed", "1", "--samples", "200"}).out);
  const auto b = Json::parse(run_cli({"certify", "cherry", "--seed", "2", "--samples", "200"}).out);
  CHECK(a["min_sum"] != b["min_sum"]);
}

TEST_CASE("out flag writes the report to a file") {
  const auto p = scratch("probe.json");
  const auto r = run_cli({"probe", "free_particle", "--epsilons", "0.5", "--out", p.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(Json::parse(slurp(p))["verdict"] == "UNSTABLE_WITNESSED");
}

TEST_CASE("plot variation-unbounded: transverse extent dominates") {
  const auto svg = scratch("variation.svg");
  const auto r = run_cli({"plot", "variation-unbounded", "--sigma", "1", "--tmax", "200", "--out", svg.string()});
  REQUIRE(r.code == 0);
  const std::string doc = slurp(svg);
  CHECK(doc.find("<polyline") != std::string::npos);
  CHECK(doc.find(">q1</text>") != std::string::npos);
  CHECK(doc.find(">q2</text>") != std::string::npos);
  const auto rows = read_csv(fs::path(svg).replace_extension(".csv"));
  REQUIRE(rows.size() > 100);
  CHECK(rows.back()[0] == doctest::Approx(200.0));
  CHECK(extent(rows, 2) >= 5 * extent(rows, 1));
  // same run, same bytes
  const auto again = scratch("variation2.svg");
  run_cli({"plot", "variation-unbounded", "--sigma", "1", "--tmax", "200", "--out", again.string()});
  CHECK(slurp(again) == doc);
}

TEST_CASE("plot cherry-asymptotic: radius shrinks toward the past") {
  const auto svg = scratch("cherry.svg");
  const auto r = run_cli({"plot", "cherry-asymptotic", "--sigma", "1", "--t0", "-60", "--t1", "-1", "--out", svg.string()});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(fs::path(svg).replace_extension(".csv"));
  REQUIRE(rows.size() == 4000);
  double prev = 0.0;
  for (const auto& row : rows) {
    const double radius = std::sqrt(row[1] * row[1] + row[2] * row[2] + row[3] * row[3] + row[4] * row[4]);
    CHECK(radius == doctest::Approx(std::sqrt(3.0) / (2 * std::abs(row[0]))).epsilon(1e-12));
    CHECK(radius > prev);  // rows run from t0 = -60 toward t1 = -1
    prev = radius;
    CHECK(std::abs(row[5]) < 1e-12);  // the motion lies on H = 0
  }
  const auto coords = scratch("cherry_p.svg");
  CHECK(run_cli({"plot", "cherry-asymptotic", "--coords", "q1,p2", "--out", coords.string()}).code == 0);
  CHECK(slurp(coords).find(">p2</text>") != std::string::npos);
}

TEST_CASE("plot errors write nothing") {
  const auto svg = scratch("empty.svg");
  CHECK(run_cli({"plot", "cherry-asymptotic", "--t0", "-5", "--t1", "-5", "--out", svg.string()}).code == cli::kExitUsage);
  CHECK_FALSE(fs::exists(svg));
  CHECK(run_cli({"plot", "cherry-asymptotic", "--t0", "-5", "--t1", "1", "--out", svg.string()}).code == cli::kExitUsage);
  CHECK(run_cli({"plot", "cherry-asymptotic", "--coords", "q1,z9", "--out", svg.string()}).code == cli::kExitUsage);
  CHECK(run_cli({"plot", "spiral", "--out", svg.string()}).code == cli::kExitUsage);
  CHECK(run_cli({"plot", "cherry-asymptotic"}).code == cli::kExitUsage);
  CHECK_FALSE(fs::exists(svg));
  CHECK(run_cli({"plot", "cherry-asymptotic", "--out", "/nonexistent/dir/c.svg"}).code == cli::kExitUsage);
}

TEST_CASE("system json round trip") {
  for (const auto& name : catalog_names()) {
    const auto sys = catalog_build(name, {0.75, std::nullopt});
    const auto back = system_from_json(to_json(sys));
    CHECK(back.name() == sys.name());
    CHECK(to_json(back) == to_json(sys));
  }
  const auto v = catalog_build("variation_like", {std::nullopt, GFunction::parse("1,1,10/9")});
  CHECK(system_from_json(to_json(v)).g()->to_string() == "1,1,10/9");
}
