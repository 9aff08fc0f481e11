#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nonclass/repro.hpp"

using namespace nonclass;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

GridConfig tiny_grids() {
  GridConfig g;
  g.fock_n = {1};
  g.squeezed_r = {0.3};
  g.cat_beta = {0.8};
  g.thermal_nbar = {0.5};
  g.sqth_nbar = {0.5};
  g.sqth_r = {0.2};
  g.displacements = {cd(0.5, 0.0)};
  g.table3_grid = 8;
  g.fig5_points = 21;
  g.fig6_points = 12;
  g.tau_steps = 64;
  return g;
}

}  // namespace

TEST_CASE("repro jobs byte-reproduce their CSV output") {
  const auto base = std::filesystem::temp_directory_path() / "nonclass_repro_test";
  std::filesystem::remove_all(base);
  for (const std::string target : {"table3", "fig5"}) {
    ReproJob job;
    job.target = target;
    job.grids = tiny_grids();
    job.out_dir = (base / "run_a").string();
    const ReproReport a = run(job);
    job.out_dir = (base / "run_b").string();
    const ReproReport b = run(job);
    CHECK(a.pass);
    CHECK(b.pass);
    CHECK(slurp(a.csv_path) == slurp(b.csv_path));
    CHECK(a.rows == b.rows);
  }
}

TEST_CASE("CSV files carry a header row and summary JSON is well formed") {
  const auto base = std::filesystem::temp_directory_path() / "nonclass_repro_hdr";
  std::filesystem::remove_all(base);
  ReproJob job;
  job.target = "table3";
  job.grids = tiny_grids();
  job.out_dir = base.string();
  const ReproReport report = run(job);
  const std::string csv = slurp(report.csv_path);
  CHECK(csv.rfind("nbar,r,", 0) == 0);

  const auto summary = nlohmann::json::parse(slurp(report.summary_path));
  CHECK(summary.at("target") == "table3");
  CHECK(summary.at("pass").get<bool>());
  CHECK(summary.at("rows").get<int>() == report.rows);
  CHECK(summary.contains("max_abs_err"));
  CHECK(summary.contains("tail_tol"));
}

TEST_CASE("unknown targets are rejected") {
  ReproJob job;
  job.target = "table9";
  CHECK_THROWS_AS(run(job), std::invalid_argument);
}

TEST_CASE("verify_multicopy dumps the observable polynomials as JSON") {
  const auto base = std::filesystem::temp_directory_path() / "nonclass_dump";
  std::filesystem::remove_all(base);
  ReproJob job;
  job.target = "verify_multicopy";
  job.grids = tiny_grids();
  job.out_dir = base.string();
  const ReproReport report = run(job);
  CHECK(report.pass);
  for (const std::string name : {"B_12.json", "B_23.json", "B_1235.json"}) {
    const auto path = base / name;
    REQUIRE(std::filesystem::exists(path));
    const auto parsed = nlohmann::json::parse(slurp(path.string()));
    CHECK(parsed.is_array());
    CHECK(!parsed.empty());
    CHECK(parsed.front().contains("modes"));
    CHECK(parsed.front().contains("re"));
  }
}
