#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgraph/cli.hpp"
#include "qgraph/graph_io.hpp"

using namespace qg;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qgraph");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qgraph_test_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("edge report inside the Dirichlet guard") {
  const Result r = invoke({"edge", "--potential", "zero", "--re", "9.8696044", "--im", "0"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["abs_s"].get<double>() < 1e-6);
  CHECK(j["dtn_matrix"].is_null());
  CHECK(j.contains("note"));
  const Result ok = invoke({"edge", "--potential", "step", "--re", "2.5e0", "--im", "-1E-1"});
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["dtn_matrix"].is_array());
}

TEST_CASE("unknown command prints usage") {
  const Result r = invoke({"frobnicate"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(invoke({"edge", "--no-such-flag"}).code == kExitUsage);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"edge"}).code == kExitDomain);
  CHECK(invoke({"factor", "--builtin", "square_lattice"}).code == kExitDomain);
  CHECK(invoke({"factor", "--builtin", "graphene_bilayer", "--connector", "step", "--connector", "zero", "--re", "1"}).code ==
        kExitDomain);
  CHECK(invoke({"dispersion", "--builtin", "square_lattice", "--re", "9.869604401089358"}).code == kExitPole);
  CHECK(invoke({"edge", "--potential", "zero", "--slices", "0"}).code == kExitDomain);

  const std::string bad = temp_path("bad.json");
  write_file(bad, R"({"rank": 2, "vertices": [{"id": "v"}], "potentials": {}, "edges": [{"tail": "v", "head": "x", "shift": [1,0], "potential": "p"}]})");
  const Result r = invoke({"dispersion", "--graph", bad, "--re", "1"});
  CHECK(r.code == kExitDomain);
  CHECK(r.err.find("edges[0]") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("factor from a bilayer file") {
  const std::string path = temp_path("bilayer_square_zero.json");
  const Result exported = invoke({"export", "--builtin", "bilayer_square", "--out", path});
  REQUIRE(exported.code == 0);
  const Result r = invoke({"factor", "--graph", path, "--re", "1", "--im", "0"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["product_residual"].get<double>() < 1e-8);
  std::remove(path.c_str());
}

TEST_CASE("fermi slice CSV") {
  const std::string path = temp_path("square.json");
  REQUIRE(invoke({"export", "--builtin", "square_lattice", "--out", path}).code == 0);
  const Result r = invoke({"fermi", "--graph", path, "--re", "2.4674011", "--im", "0", "--grid", "64"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k1,k2,absD,log10absD");
  int rows = 0;
  double worst = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    double k1, k2, d, lg;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &k1, &k2, &d, &lg) == 4);
    // |D| = (pi/2)|2 cos k1 + 2 cos k2| up to the rounding of lambda.
    worst = std::max(worst, std::abs(d - 3.141592653589793 * std::abs(std::cos(k1) + std::cos(k2))));
  }
  CHECK(rows == 64 * 64);
  CHECK(worst < 1e-6);
  CHECK(invoke({"fermi", "--graph", path, "--re", "2", "--im", "1"}).code == kExitDomain);
  std::remove(path.c_str());
}

TEST_CASE("other commands run") {
  CHECK(invoke({"afun", "--potential", "step", "--re", "0", "--lambda-max", "10", "--grid", "5"}).code == 0);
  CHECK(invoke({"classes", "--potential", "zero", "--potential", "constant", "--potential", "step"}).code == 0);
  CHECK(invoke({"graphene", "--builtin", "graphene_bilayer", "--connector", "step", "--connector", "zero", "--re", "1"}).code == 0);
  const Result sq = invoke({"square7", "--builtin", "bilayer_double_square_7", "--connector", "step", "--connector", "zero", "--re", "1.3"});
  CHECK(sq.code == 0);
  CHECK(json::parse(sq.out)["reducible"] == false);
  const Result rami = invoke({"rami", "--potential", "step", "--radius", "25"});
  CHECK(rami.code == 0);
  CHECK(json::parse(rami.out)["branch_points"].size() == 2);
  const Result dec = invoke({"decorated", "--builtin", "square_lattice", "--connector", "well", "--re", "1"});
  CHECK(dec.code == 0);
  CHECK(json::parse(dec.out)["passes"] == true);
}

TEST_CASE("output files are written whole and reproducibly") {
  const std::string a = temp_path("a.json");
  const std::string b = temp_path("b.json");
  const std::vector<std::string> base{"graphene", "--builtin", "graphene_bilayer", "--connector", "trig",
                                      "--connector", "table", "--re", "3.25", "--im", "0.5", "--out"};
  auto args_a = base;
  args_a.push_back(a);
  auto args_b = base;
  args_b.push_back(b);
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  CHECK(read_file(a) == read_file(b));
  CHECK(!read_file(a).empty());
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::temp_directory_path()))
    CHECK(entry.path().filename().string().find("qgraph_test_a.json.tmp") == std::string::npos);
  std::remove(a.c_str());
  std::remove(b.c_str());
}
