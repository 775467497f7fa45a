#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "carpet/experiments.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace carpet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("carpet_test_" + name);
  fs::remove_all(dir);
  return dir;
}

// Escaping disks on a bounded background, lattice corners at (x, -y).
ClassifiedGrid disks(int res, const std::vector<std::pair<Complex, double>>& list) {
  ClassifiedGrid g;
  g.spec.res_x = g.spec.res_y = res;
  g.spec.width = g.spec.height = res;
  g.spec.center = Complex{res / 2.0, -res / 2.0};
  g.labels.assign(static_cast<std::size_t>(res) * res, kBounded);
  for (int r = 0; r < res; ++r)
    for (int c = 0; c < res; ++c)
      for (const auto& [center, radius] : list)
        if (std::abs(Complex{c + 0.5, r + 0.5} - center) <= radius) g.labels[r * res + c] = 1;
  return g;
}

ExperimentConfig small_config(const std::string& name) {
  ExperimentConfig c;
  c.resolution = 128;
  c.max_iter = 200;
  c.out = scratch(name);
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto kv = parse_key_values("# comment\n d = 4 \nlambda-re=0.5 # trailing\n\nladder = 64, 128\n");
  CHECK(kv.at("d") == "4");
  CHECK(kv.at("lambda-re") == "0.5");
  CHECK(kv.at("ladder") == "64, 128");
  CHECK_ERRC(parse_key_values("no equals sign"), Errc::ParseError);

  ExperimentConfig c;
  for (const auto& [k, v] : kv) apply_setting(c, k, v);
  CHECK(c.degree == 4);
  CHECK(c.lambda == Complex{0.5, 0.0});
  CHECK(c.ladder == std::vector<int>{64, 128});
  CHECK(c.resolutions() == std::vector<int>{64, 128});
  CHECK_NOTHROW(c.validate());

  CHECK_ERRC(apply_setting(c, "colour", "red"), Errc::ParseError);
  CHECK_ERRC(apply_setting(c, "d", "three"), Errc::ParseError);
  CHECK_ERRC(apply_setting(c, "exclude-clipped", "maybe"), Errc::ParseError);

  c.ladder = {128, 64};
  CHECK_ERRC(c.validate(), Errc::InvalidArgument);
  c.ladder = {};
  c.escape_radius = 1.0;
  CHECK_ERRC(c.validate(), Errc::InvalidArgument);
}

TEST_CASE("config files and flag precedence") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.cfg");
    f << "resolution = 256\nmax-iter = 77\nexclude-clipped = false\n";
  }
  ExperimentConfig c = load_config(dir / "run.cfg");
  CHECK(c.resolution == 256);
  CHECK(c.max_iter == 77);
  CHECK_FALSE(c.exclude_clipped);
  apply_setting(c, "resolution", "64");
  CHECK(c.resolution == 64);
  CHECK_ERRC(load_config(dir / "missing.cfg"), Errc::Io);

  // describe_config round-trips through the parser
  ExperimentConfig again;
  for (const auto& [k, v] : parse_key_values(describe_config(c))) apply_setting(again, k, v);
  CHECK(describe_config(again) == describe_config(c));
}

TEST_CASE("ladder verdicts") {
  CHECK(ladder_stable({0.30, 0.29, 0.28}));
  CHECK(ladder_stable({1.0, 1.25}));
  CHECK_FALSE(ladder_stable({1.0, 1.4}));
  CHECK_FALSE(ladder_stable({}));
  CHECK(strictly_increasing({1.0, 1.1, 1.2}));
  CHECK_FALSE(strictly_increasing({1.0, 1.0, 1.2}));
  CHECK_FALSE(strictly_increasing({1.0}));
  CHECK_FALSE(strictly_increasing({1.414213562373098, 1.4142135623731014}));
}

TEST_CASE("render command") {
  SUBCASE("carpet parameter") {
    ExperimentConfig c = small_config("render");
    c.resolution = 512;
    const RenderResult r = cmd_render(c);
    CHECK(r.grid.bounded_fraction() > 0.0);
    CHECK(r.grid.bounded_fraction() < 1.0);
    for (const auto& f : r.files) CHECK(fs::exists(f));
    const std::string manifest = slurp(c.out / "manifest.txt");
    CHECK(manifest.starts_with("# schema: carpet.render.v1\n"));
    CHECK(manifest.find("lambda-re = 0.02772313") != std::string::npos);
    CHECK(slurp(c.out / "julia_twotone.ppm").starts_with("P6\n512 512\n255\n"));
  }
  SUBCASE("escape locus parameter is nearly all escaping") {
    ExperimentConfig c = small_config("render_escape");
    c.lambda = 10.0;
    c.boundary_width = 0.0;
    c.resolution = 256;
    CHECK(cmd_render(c).grid.bounded_fraction() < 0.01);
  }
  SUBCASE("repeated runs are byte identical") {
    ExperimentConfig a = small_config("render_a");
    ExperimentConfig b = small_config("render_b");
    a.threads = 1;
    b.threads = 4;
    cmd_render(a);
    cmd_render(b);
    for (const char* f : {"julia_twotone.ppm", "julia_escape.ppm", "manifest.txt"})
      CHECK(slurp(a.out / f) == slurp(b.out / f));
  }
}

TEST_CASE("component inventory") {
  SUBCASE("three synthetic disks") {
    const ClassifiedGrid g = disks(64, {{{12, 12}, 5.0}, {{40, 15}, 7.0}, {{30, 45}, 10.0}});
    const auto rows = component_inventory(g, 1, true);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      std::int64_t count = 0;
      for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c) {
          const double radius = i == 0 ? 5.0 : i == 1 ? 7.0 : 10.0;
          const Complex center = i == 0 ? Complex{12, 12} : i == 1 ? Complex{40, 15} : Complex{30, 45};
          count += std::abs(Complex{c + 0.5, r + 0.5} - center) <= radius;
        }
      CHECK(rows[i].area == count);
      CHECK_FALSE(rows[i].clipped);
    }
    const std::string csv = components_csv(rows);
    CHECK(csv.starts_with("# schema: carpet.components.v1\nid,area,diameter,clipped,vertices\n"));
  }
  SUBCASE("exclude_clipped drops exactly the clipped components") {
    ExperimentConfig c = small_config("components");
    c.resolution = 256;
    const ClassifiedGrid g = classify_grid(c.map(), c.grid(256));
    const auto all = component_inventory(g, 1, false);
    const auto inner = component_inventory(g, 1, true);
    std::size_t clipped = 0;
    for (const auto& r : all) clipped += r.clipped;
    CHECK(clipped > 0);
    CHECK(inner.size() + clipped == all.size());
    for (const auto& r : inner) CHECK_FALSE(r.clipped);
  }
  SUBCASE("finer grids resolve more carpet holes") {
    ExperimentConfig c = small_config("components_ladder");
    c.max_iter = 500;
    c.resolution = 512;
    const auto coarse = cmd_components(c);
    c.resolution = 1024;
    const auto fine = cmd_components(c);
    CHECK(fine.size() > coarse.size());
    CHECK(fs::exists(c.out / "components.csv"));
  }
}

TEST_CASE("metrics on synthetic circles") {
  const ClassifiedGrid g = disks(200, {{{50, 50}, 30.0}, {{140, 50}, 30.0}, {{95, 140}, 30.0}});
  ExperimentConfig c;
  std::vector<CurveRecord> records;
  const LevelSummary level = measure_level(g, c, records);
  REQUIRE(records.size() == 3);
  for (const auto& r : records) CHECK(r.quasicircle <= 1.1);
  // the two upper disks: centers 90 apart, radius about 30
  CHECK(level.separation.min_delta == doctest::Approx(30.0 / 60.0).epsilon(0.05));
  CHECK(level.max_quasicircle ==
        std::max({records[0].quasicircle, records[1].quasicircle, records[2].quasicircle}));

  const ClassifiedGrid lonely = disks(64, {{{32, 32}, 10.0}});
  std::vector<CurveRecord> none;
  CHECK_ERRC(measure_level(lonely, c, none), Errc::TooFewCurves);
}

TEST_CASE("metrics report") {
  ExperimentConfig c = small_config("metrics");
  c.ladder = {128, 256};
  const MetricsReport report = cmd_metrics(c);
  REQUIRE(report.levels.size() == 2);

  // aggregates recompute from the row-level data
  for (const auto& level : report.levels) {
    double max_k = 0.0;
    std::size_t rows = 0;
    for (const auto& r : report.curves)
      if (r.resolution == level.resolution) {
        ++rows;
        if (!std::isnan(r.quasicircle)) max_k = std::max(max_k, r.quasicircle);
      }
    CHECK(rows == level.components_retained);
    CHECK(rows <= 20);
    CHECK(level.max_quasicircle == max_k);
    double min_delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < level.separation.size(); ++i)
      for (std::size_t j = 0; j < level.separation.size(); ++j)
        if (i != j) min_delta = std::min(min_delta, level.separation.at(i, j));
    CHECK(level.separation.min_delta == min_delta);
    CHECK(level.separation.min_delta > 0.0);
  }

  const auto doc = nlohmann::json::parse(slurp(c.out / "report.json"));
  CHECK(doc["schema"] == "carpet.metrics.v1");
  CHECK(doc["provenance"]["version"] == kVersion);
  CHECK(doc["provenance"]["config"]["ladder"] == "128,256");
  CHECK(doc["levels"].size() == 2);
  CHECK(doc["curves"].size() == report.curves.size());
  CHECK(doc["levels"][1]["min_delta"].get<double>() == report.levels[1].separation.min_delta);
  CHECK(slurp(c.out / "curves.csv").starts_with("# schema: carpet.curves.v1\n"));
  CHECK(slurp(c.out / "separation.csv").starts_with("# schema: carpet.separation.v1\n"));

  ExperimentConfig tiny = c;
  tiny.min_area = 2;
  CHECK_ERRC(compute_metrics(tiny), Errc::InvalidArgument);
}

TEST_CASE("parameter plane command") {
  ExperimentConfig c = small_config("param");
  c.width = c.height = 0.8;
  c.resolution = 129;
  c.max_iter = 500;
  const ClassifiedGrid g = cmd_param_plane(c);
  CHECK(fs::exists(c.out / "param_plane.ppm"));
  std::size_t bounded = 0;
  for (int r = 0; r < 129; ++r)
    for (int col = 0; col < 129; ++col) {
      CHECK(g.at(col, r) == g.at(col, 128 - r));
      bounded += g.at(col, r) == kBounded;
    }
  CHECK(bounded > 0);
  CHECK(g.at(64, 64) == 0);
}

TEST_CASE("angles command") {
  auto run = [](std::string cmd, std::string angle = "", std::string bits = "") {
    AnglesRequest req;
    req.command = std::move(cmd);
    req.angle = std::move(angle);
    req.bits = std::move(bits);
    return cmd_angles(req);
  };
  CHECK(run("classify", "1/7").text == "Periodic(3)\n");
  CHECK(run("classify", "1/6").text == "PrePeriodic(1, 2)\n");
  CHECK(run("inR", "1/3").text == "true\n");
  CHECK(run("inR", "1/7").text == "false\n");
  CHECK(run("conj", "3/8").text == "true\n");
  CHECK(run("ell", "2/3").text == "2/3\n");
  CHECK(run("double", "1/3").text == "2/3\n");
  CHECK(run("theta-prime").text.starts_with("633825300114114700748351602687/1267650600228229401496703205375"));
  CHECK(run("build-theta", "", "10").text == "0.0" + std::string(100, '1') + "001\n");

  std::string bits;
  for (int i = 0; i < 64; ++i) bits.push_back(static_cast<char>('0' + (std::popcount(static_cast<unsigned>(i)) & 1)));
  const CommandOutput ok = run("verify-chain", "", bits);
  CHECK(ok.text == "CERTIFIED\n");
  CHECK(ok.exit_code == 0);

  AnglesRequest short_run;
  short_run.command = "verify-chain";
  short_run.bits = "0";
  short_run.leading_run = 2;
  const CommandOutput bad = cmd_angles(short_run);
  CHECK(bad.exit_code == 2);

  CHECK_ERRC(run("classify", "1/x"), Errc::ParseError);
  CHECK_ERRC(run("bogus", "1/3"), Errc::ParseError);
}
