#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fdens/error.hpp"
#include "fdens/io.hpp"
#include "fdens/pipeline.hpp"
#include "fdens/simulation.hpp"

using namespace fdens;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fdens_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FDENS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kToy =
    "0,0.5,1\n"
    "1,2,3\n"
    "0.5,2.5,2\n"
    "1.5,1,2.5\n";

}  // namespace

TEST_CASE("curve CSV round trip") {
  const auto gen = generate_sample({SimModel::i, 5, 17, 10, 2});
  std::stringstream ss;
  write_curve_csv(ss, gen.sample);
  const FunctionalSample back = read_curve_csv(ss, "mem");
  CHECK(back.values() == gen.sample.values());
  for (std::size_t t = 0; t < 17; ++t) CHECK(back.grid().points()[t] == gen.sample.grid().points()[t]);
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0}) CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("curve CSV errors carry line numbers") {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_curve_csv(in, "f.csv");
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("").find("header") != std::string::npos);
  CHECK(error_of("0,1\n1,2\n3,x\n").find("f.csv:3") != std::string::npos);
  CHECK(error_of("0,1\n1,2,3\n").find("f.csv:2") != std::string::npos);
  CHECK(error_of("0,1\n").find("no curve rows") != std::string::npos);
  CHECK_FALSE(error_of("1,0\n1,2\n").empty());
  CHECK_FALSE(error_of("0,1\n1,nan\n").empty());
}

TEST_CASE("config JSON round trip") {
  AnalysisConfig c;
  c.components = 7;
  c.r = {1, 3, 5};
  c.bandwidth = 0.123456789;
  c.seed = 0xFFFFFFFFFFFFFFF1ull;
  c.radii = {0.3, 0.2, 0.1};
  c.center = {2.0, -1.0 / 3.0};
  c.models = {"i", "iv"};
  c.out = "somewhere/else";
  const std::string text = config_to_json(c);
  const AnalysisConfig back = config_from_json(text);
  CHECK(config_to_json(back) == text);
  CHECK(back.seed == c.seed);
  CHECK(back.center[1] == c.center[1]);
  CHECK_THROWS_AS(config_from_json(R"({"components": 3, "bogus": 1})"), InputError);
  CHECK_THROWS_AS(config_from_json("{not json"), InputError);
  CHECK_THROWS_AS(config_from_json(R"({"components": "three"})"), InputError);
  CHECK(config_from_json(R"({"lambda": 2})").lambda == 2.0);
}

TEST_CASE("analyze on a 3-curve toy writes all artifacts, deterministically") {
  std::istringstream in(kToy);
  const FunctionalSample toy = read_curve_csv(in);
  AnalysisConfig c;
  c.r = {1, 2};
  c.groups = 3;
  c.contour_points = 7;
  c.out = scratch("toy_a").string();
  run_analysis(toy, c);
  AnalysisConfig c2 = c;
  c2.out = scratch("toy_b").string();
  run_analysis(toy, c2);
  for (const auto& name : kAnalysisArtifacts) {
    const fs::path a = fs::path(c.out) / name, b = fs::path(c2.out) / name;
    REQUIRE(fs::exists(a));
    CHECK(slurp(a) == slurp(b));
    if (name.ends_with(".json")) {
      CHECK_NOTHROW((void)nlohmann::json::parse(slurp(a)));
    } else {
      const CsvTable t = read_csv_table(a);
      CHECK_FALSE(t.header.empty());
      CHECK_FALSE(t.rows.empty());
    }
  }
  const CsvTable groups = read_csv_table(fs::path(c.out) / "groups.csv");
  CHECK(groups.rows.size() == 3);
}

TEST_CASE("CLI exit codes") {
  const fs::path dir = scratch("cli");
  const fs::path empty = dir / "empty.csv", toy = dir / "toy.csv", flat = dir / "flat.csv", bad = dir / "bad.csv";
  write_text_file(empty, "");
  write_text_file(toy, kToy);
  write_text_file(flat, "0,1\n1,1\n1,1\n");
  write_text_file(bad, "0,1\n1,abc\n");
  const std::string out = " --out " + (dir / "out").string();

  CHECK(run_cli("analyze " + toy.string() + out) == 0);
  for (const auto& name : kAnalysisArtifacts) CHECK(fs::exists(dir / "out" / name));
  CHECK(run_cli("fpca " + toy.string() + out) == 0);
  CHECK(run_cli("analyze " + empty.string() + out) == 2);
  CHECK(run_cli("analyze " + bad.string() + out) == 2);
  CHECK(run_cli("analyze " + flat.string() + out) == 3);
  CHECK(run_cli("analyze " + (dir / "missing.csv").string() + out) == 2);
  CHECK(run_cli("nonsense") == 2);
  CHECK(run_cli("analyze " + toy.string() + " --kernel triangle" + out) == 2);
  CHECK(run_cli("smallball --decay geometric:0.5 --radii 10" + out) == 2);
  CHECK(run_cli("simulate --model iii --n 20 --m 11" + out) == 0);
  CHECK(fs::exists(dir / "out" / "sample.csv"));
  CHECK(run_cli("analyze " + (dir / "out" / "sample.csv").string() + " --r 2,4" + out) == 0);

  // Flags override the config file.
  write_text_file(dir / "cfg.json", R"({"n": 5, "m": 9, "model": "i"})");
  CHECK(run_cli("simulate --config " + (dir / "cfg.json").string() + " --n 7" + out) == 0);
  const FunctionalSample s = read_curve_csv(dir / "out" / "sample.csv");
  CHECK(s.size() == 7);
  CHECK(s.grid().size() == 9);
  write_text_file(dir / "badcfg.json", R"({"nope": 1})");
  CHECK(run_cli("simulate --config " + (dir / "badcfg.json").string() + out) == 2);
}

TEST_CASE("smallball CLI") {
  const fs::path dir = scratch("sb");
  const std::string base = "smallball --decay geometric:0.5 --mc-samples 20000 --seed 4 --out ";
  CHECK(run_cli(base + (dir / "none").string()) == 0);
  const CsvTable none = read_csv_table(dir / "none" / "smallball.csv");
  CHECK(none.rows.empty());
  CHECK(none.column("p_mc") < none.header.size());

  CHECK(run_cli(base + (dir / "a").string() + " --radii 0.5,0.3,0.2") == 0);
  CHECK(run_cli(base + (dir / "b").string() + " --radii 0.5,0.3,0.2") == 0);
  const CsvTable a = read_csv_table(dir / "a" / "smallball.csv");
  REQUIRE(a.rows.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.number(k, "hits") > 0);
    CHECK(a.number(k, "ci_lower") <= a.number(k, "p_mc"));
  }
  CHECK(slurp(dir / "a" / "smallball.csv") == slurp(dir / "b" / "smallball.csv"));
  CHECK(run_cli(base + (dir / "c").string() + " --radii 0.2,0.3") == 2);
}

TEST_CASE("mode-study CLI") {
  const fs::path dir = scratch("ms");
  CHECK(run_cli("mode-study --models iii --replications 2 --n 40 --m 21 --truncations 1,2 --out " + dir.string()) == 0);
  const CsvTable t = read_csv_table(dir / "imse.csv");
  CHECK(t.rows.size() == 4);
  CHECK_NOTHROW((void)nlohmann::json::parse(slurp(dir / "imse.json")));
  CHECK(run_cli("mode-study --models iii --truncations 5 --out " + dir.string()) == 2);
}
