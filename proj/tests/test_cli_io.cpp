#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ridgehunt/csv_io.hpp"
#include "ridgehunt/errors.hpp"
#include "ridgehunt/pipeline.hpp"
#include "ridgehunt/synthdata.hpp"

using namespace ridgehunt;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ridgehunt_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("read_cloud parses plain and decorated CSVs") {
  const fs::path dir = scratch_dir("csv");
  write_text(dir / "plain.csv", "1,2,3\n4,5,6\n");
  const CloudReadResult plain = read_cloud((dir / "plain.csv").string());
  CHECK(plain.cloud.dim() == 3);
  CHECK(plain.cloud.size() == 2);
  CHECK(plain.labels.empty());
  CHECK(plain.header.empty());

  write_text(dir / "decorated.csv",
             "# comment line\nx,y,label\n0.5,1.5,ring\n# another\n2.5,3.5,clutter\n");
  const CloudReadResult dec = read_cloud((dir / "decorated.csv").string());
  CHECK(dec.cloud.dim() == 2);
  CHECK(dec.cloud.size() == 2);
  CHECK(dec.header == std::vector<std::string>{"x", "y", "label"});
  CHECK(dec.labels == std::vector<std::string>{"ring", "clutter"});
  CHECK(dec.cloud.point(1)[1] == 3.5);
}

TEST_CASE("read_cloud reports offending lines") {
  const fs::path dir = scratch_dir("csv_bad");
  write_text(dir / "bad.csv", "1,2\n3,oops\n5,6\n");
  CHECK_THROWS_WITH_AS(read_cloud((dir / "bad.csv").string()), doctest::Contains("line(s) 2"),
                       io_error);
  write_text(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_WITH_AS(read_cloud((dir / "ragged.csv").string()), doctest::Contains("2"),
                       io_error);
  CHECK_THROWS_AS(read_cloud((dir / "missing.csv").string()), io_error);
  write_text(dir / "empty.csv", "# nothing\n");
  CHECK_THROWS_AS(read_cloud((dir / "empty.csv").string()), io_error);
}

TEST_CASE("cloud round trip is exact") {
  const fs::path dir = scratch_dir("roundtrip");
  const LabeledCloud lc = gen_modes_ring_2d(20, 50, 0.17, 15, 123);
  const std::string path = (dir / "cloud.csv").string();
  write_cloud(path, lc.cloud, &lc.labels);
  const CloudReadResult back = read_cloud(path);
  CHECK(back.cloud.matrix() == lc.cloud.matrix());  // %.17g reparses exactly
  CHECK(back.labels == lc.labels);
}

TEST_CASE("transform_column") {
  Eigen::MatrixXd m(3, 2);
  m << 1.0, -std::exp(1.0), 2.0, -1.0, 3.0, -0.5;
  const PointCloud cloud(m);
  const PointCloud t = transform_column(cloud, 1, "neg-log-neg");
  CHECK(t.matrix()(0, 1) == doctest::Approx(-1.0));
  CHECK(t.matrix()(1, 1) == doctest::Approx(0.0));
  CHECK(t.matrix()(0, 0) == 1.0);  // other columns untouched

  CHECK(transform_column(cloud, 1, "identity").matrix() == cloud.matrix());

  Eigen::MatrixXd bad(2, 1);
  bad << -1.0, 1.0;  // +1 not in the domain of -log(-z)
  CHECK_THROWS_WITH_AS(transform_column(PointCloud(bad), 0, "neg-log-neg"),
                       doctest::Contains("row(s) 1"), numeric_error);
  CHECK_THROWS_AS(transform_column(cloud, 5, "identity"), config_error);
  CHECK_THROWS_AS(transform_column(cloud, 0, "nope"), config_error);
}

TEST_CASE("pipeline on a single blob finds one kept mode component") {
  PipelineConfig config;
  config.generator = "uniform-box";  // placeholder, replaced below
  config.generator = "";
  const fs::path dir = scratch_dir("single_blob");
  {
    Eigen::MatrixXd pts(120, 2);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss(0.0, 0.3);
    for (int i = 0; i < 120; ++i) {
      pts(i, 0) = 1.0 + gauss(rng);
      pts(i, 1) = -2.0 + gauss(rng);
    }
    write_cloud((dir / "blob.csv").string(), PointCloud(pts));
  }
  config.input_path = (dir / "blob.csv").string();
  config.dims = {0};
  config.threshold_default.method = ThresholdMethod::fixed;
  config.threshold_default.fixed_value = 0.0;
  config.rips_method = RipsMethod::fixed;
  config.rips_value = 0.5;
  config.min_size_method = MinSizeMethod::fixed;
  config.min_size_value = 30;
  const RunReport report = run_pipeline(config);
  REQUIRE(report.dims.size() == 1);
  const auto& d0 = report.dims[0];
  int kept = 0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (std::size_t c = 0; c < d0.features.components.size(); ++c) {
    if (!d0.features.kept[c]) continue;
    ++kept;
    for (int m : d0.features.components[c]) {
      centroid += d0.features.sharp_points.row(m).transpose() /
                  double(d0.features.components[c].size());
    }
  }
  CHECK(kept == 1);
  CHECK((centroid - Eigen::Vector2d(1.0, -2.0)).norm() < 0.5);
}

TEST_CASE("pipeline table is internally consistent") {
  PipelineConfig config;
  config.generator = "modes-ring-2d";
  config.generator_args = {{"n-per-mode", 40}, {"n-ring", 120}, {"clutter", 40}};
  config.dims = {0, 1};
  config.seed = 5;
  const RunReport report = run_pipeline(config);
  REQUIRE(report.dims.size() == 2);
  for (const auto& dim : report.dims) {
    for (const auto& rec : dim.table) {
      if (rec.kept) CHECK(rec.component >= 0);
      if (rec.component >= 0) {
        CHECK(rec.signature > dim.threshold.value);
        CHECK(rec.converged);
      }
    }
    // every sharp point belongs to exactly one component
    std::size_t members = 0;
    for (const auto& comp : dim.features.components) members += comp.size();
    CHECK(members == dim.features.sharp_origin.size());
  }
}

TEST_CASE("pipeline validates configuration") {
  PipelineConfig config;
  config.input_path = "/nonexistent/file.csv";
  config.dims = {0};
  config.seed = 1;
  CHECK_THROWS_AS(run_pipeline(config), io_error);

  PipelineConfig no_dims;
  no_dims.generator = "modes-ring-2d";
  no_dims.seed = 1;
  CHECK_THROWS_AS(run_pipeline(no_dims), config_error);

  PipelineConfig no_seed;
  no_seed.generator = "modes-ring-2d";
  no_seed.dims = {0};
  CHECK_THROWS_AS(run_pipeline(no_seed), config_error);  // null-mc defaults need a seed

  PipelineConfig bad_dim;
  bad_dim.generator = "modes-ring-2d";
  bad_dim.dims = {2};
  bad_dim.seed = 1;
  CHECK_THROWS_AS(run_pipeline(bad_dim), config_error);
}

TEST_CASE("diagnostics exports are complete and reproducible") {
  const fs::path dir_a = scratch_dir("diag_a");
  const fs::path dir_b = scratch_dir("diag_b");
  PipelineConfig config;
  config.generator = "modes-ring-2d";
  config.generator_args = {{"n-per-mode", 30}, {"n-ring", 90}, {"clutter", 30}};
  config.dims = {1};
  config.seed = 8;
  config.output_dir = dir_a.string();
  run_pipeline(config);
  config.output_dir = dir_b.string();
  run_pipeline(config);

  for (const char* name :
       {"signatures_d1.csv", "cdf_d1.csv", "hist_d1.csv", "features_d1.csv"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir_a / name));
    CHECK(read_text(dir_a / name) == read_text(dir_b / name));  // byte-identical
  }
  // summary matches once the timing field is dropped
  auto summary_without_timing = [](const fs::path& p) {
    nlohmann::json j = nlohmann::json::parse(read_text(p / "summary.json"));
    j.erase("timing_seconds");
    return j;
  };
  CHECK(summary_without_timing(dir_a) == summary_without_timing(dir_b));

  // cdf is non-decreasing; histogram counts conserve the point count
  {
    std::ifstream cdf(dir_a / "cdf_d1.csv");
    std::string line;
    std::getline(cdf, line);  // header
    double prev = -1.0;
    int rows = 0;
    while (std::getline(cdf, line)) {
      const auto comma = line.find(',');
      const double c = std::stod(line.substr(comma + 1));
      CHECK(c >= prev);
      prev = c;
      ++rows;
    }
    std::ifstream hist(dir_a / "hist_d1.csv");
    std::getline(hist, line);
    long total = 0;
    while (std::getline(hist, line)) {
      total += std::stol(line.substr(line.rfind(',') + 1));
    }
    CHECK(total == rows);
  }
}

TEST_CASE("cli end to end") {
  const fs::path dir = scratch_dir("cli");
  const std::string cli = RIDGEHUNT_CLI_PATH;
  auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > " + (dir / "stdout.txt").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
  };

  const std::string csv = (dir / "data.csv").string();
  CHECK(run("gen modes-ring-2d --arg n-per-mode=40 --arg n-ring=120 --arg clutter=40 "
            "--seed 3 --out " + csv) == 0);
  CHECK(fs::exists(csv));
  CHECK(fs::exists(csv + ".truth.json"));

  CHECK(run("run --input " + csv + " --dims 0 --seed 3 --out " + (dir / "run").string()) == 0);
  CHECK(fs::exists(dir / "run" / "summary.json"));
  CHECK(fs::exists(dir / "run" / "features_d0.csv"));

  CHECK(run("eval --input " + csv + " --truth " + csv + ".truth.json --dims 0 --seed 3") == 0);

  CHECK(run("null-calibrate --lo 0,0 --hi 1,1 --n 60 --bandwidth 0.2 --d 0 --reps 20 --seed 1") ==
        0);

  // exit codes: 2 parse, 4 config
  CHECK(run("run --input " + (dir / "missing.csv").string() + " --dims 0 --seed 1 --out " +
            (dir / "x").string()) == 2);
  CHECK(run("run --input " + csv + " --dims 7 --seed 1 --out " + (dir / "y").string()) == 4);
  CHECK(run("run --input " + csv + " --dims 0 --out " + (dir / "z").string()) == 4);  // no seed
  CHECK(run("frobnicate") == 4);
}
