#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "shapeservo.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() /
                   ("shapeservo_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("config lifecycle and presets") {
  ss_config* cfg = ss_config_new();
  REQUIRE(cfg != nullptr);
  CHECK(ss_config_preset(cfg, "regulation-linear") == SS_OK);
  CHECK(ss_config_preset(cfg, "bogus") != SS_OK);
  CHECK(std::string(ss_last_error()).find("bogus") != std::string::npos);
  ss_config_free(cfg);
}

TEST_CASE("parse errors are reported with codes and messages") {
  ss_config* cfg = ss_config_new();
  CHECK(ss_config_parse_string(cfg, "gains.gamma1 = -1\n") == SS_ERR_PARSE);
  CHECK(std::string(ss_last_error()).find("line 1") != std::string::npos);
  CHECK(ss_config_set(cfg, "nonsense", "1") == SS_ERR_PARSE);
  CHECK(ss_config_parse_file(cfg, "/no/such/file.cfg") == SS_ERR_IO);
  CHECK(ss_config_parse_string(nullptr, "") == SS_ERR_INVALID_ARGUMENT);
  ss_config_free(cfg);
}

TEST_CASE("closed-loop run writes trajectory and report files") {
  TempDir tmp;
  ss_config* cfg = ss_config_new();
  REQUIRE(ss_config_preset(cfg, "regulation-linear") == SS_OK);
  REQUIRE(ss_config_set(cfg, "duration", "0.2") == SS_OK);
  REQUIRE(ss_config_set_seed(cfg, 42) == SS_OK);

  ss_summary sum{};
  REQUIRE(ss_run(cfg, tmp.path.c_str(), &sum) == SS_OK);
  CHECK(sum.steps == 200);
  CHECK(sum.all_finite == 1);
  CHECK(sum.saturation_ok == 1);
  CHECK(fs::exists(tmp.path / "trajectory.csv"));
  CHECK(fs::exists(tmp.path / "report.txt"));
  const std::string report = slurp(tmp.path / "report.txt");
  CHECK(report.find("uub_ball = ") != std::string::npos);
  ss_config_free(cfg);
}

TEST_CASE("seeded runs through the C API are byte-identical") {
  TempDir tmp;
  ss_config* cfg = ss_config_new();
  REQUIRE(ss_config_preset(cfg, "regulation-linear") == SS_OK);
  REQUIRE(ss_config_set(cfg, "duration", "0.1") == SS_OK);
  REQUIRE(ss_run(cfg, (tmp.path / "a").c_str(), nullptr) == SS_OK);
  REQUIRE(ss_run(cfg, (tmp.path / "b").c_str(), nullptr) == SS_OK);
  CHECK(slurp(tmp.path / "a" / "trajectory.csv") ==
        slurp(tmp.path / "b" / "trajectory.csv"));
  ss_config_free(cfg);
}

TEST_CASE("saturation demo CSV") {
  TempDir tmp;
  const fs::path csv = tmp.path / "fig1.csv";
  REQUIRE(ss_demo_saturation(-6.0, 5.0, 10.0, 2.0, 6.2832, 1e-3,
                             csv.c_str()) == SS_OK);
  const std::string text = slurp(csv);
  CHECK(text.rfind("t,v,hard_sat,gauss_sat", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6283 + 2);

  SUBCASE("invalid limits are rejected") {
    CHECK(ss_demo_saturation(1.0, 5.0, 10.0, 2.0, 1.0, 1e-3, csv.c_str()) ==
          SS_ERR_INVALID_ARGUMENT);
  }
}

TEST_CASE("fig1-saturation preset routes ss_run to the demo output") {
  TempDir tmp;
  ss_config* cfg = ss_config_new();
  REQUIRE(ss_config_preset(cfg, "fig1-saturation") == SS_OK);
  REQUIRE(ss_run(cfg, tmp.path.c_str(), nullptr) == SS_OK);
  CHECK(fs::exists(tmp.path / "fig1.csv"));
  ss_config_free(cfg);
}
