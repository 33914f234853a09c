#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "jamsim/runner.hpp"
#include "jamsim/scenario.hpp"

using namespace jamsim;

namespace {

Scenario parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in, "inline");
}

std::vector<std::string> csv_lines(const Scenario& sc) {
  std::ostringstream out;
  run_scenario(sc, out);
  std::vector<std::string> lines;
  std::istringstream is(out.str());
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

Scenario tiny_scenario() {
  Scenario sc;
  sc.base = make_uniform_config<double>(12, 1, 3, 40, 1.0, 1.0, 1.0, 1.0, 1.0, 7);
  sc.axis = SweepAxis::jam_power_db;
  sc.sweep_values = {0.0, 6.0};
  sc.tau_values = {3};
  sc.methods = {{EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::monte_carlo},
                {EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::closed_form}};
  sc.n_outer = 24;
  sc.n_inner = 12;
  sc.reproducible = true;
  return sc;
}

}  // namespace

TEST_CASE("a bare preset key expands to the full scenario") {
  const auto sc = parse_text("preset = fig2\n");
  CHECK(sc.base.antennas == 100);
  CHECK(sc.base.users == 1);
  CHECK(sc.base.pilot_len == 3);
  CHECK(sc.base.block_len == 200);
  CHECK(sc.base.pilot_power_user == doctest::Approx(db_to_linear(5.0)).epsilon(1e-12));
  CHECK(sc.axis == SweepAxis::jam_power_db);
  CHECK(sc.sweep_values.front() == 0.0);
  CHECK(sc.sweep_values.back() == 20.0);
  CHECK(sc.methods.size() == 4);
  CHECK(sc.n_outer == 2000);
  CHECK(sc.n_inner == 200);

  const auto f3 = parse_text("preset = fig3\n");
  CHECK(f3.base.users == 2);
  CHECK(f3.tau_values == std::vector<int>{3, 4, 5});
  CHECK(f3.axis == SweepAxis::antennas);
}

TEST_CASE("decibel fields convert to linear at parse time") {
  const auto sc = parse_text(
      "M = 32\nK = 1\ntau = 3\n"
      "p_t_db = 5\np_d_db = 5\nq_t_db = 0\nq_d_db = 0\n"
      "sweep_axis = jam_power_db\nsweep_values = 0, 10\n"
      "methods = mmse_js+zfjs+mc\n");
  CHECK(sc.base.pilot_power_user == doctest::Approx(3.16227766017).epsilon(1e-10));
  CHECK(sc.base.pilot_power_jammer == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sc.base.block_len == 200);  // default
  CHECK(sc.base.seed == 0);         // default
}

TEST_CASE("config invariants are rejected at parse time") {
  CHECK_THROWS_AS(parse_text("M = 32\nK = 2\ntau = 2\n"
                             "sweep_axis = jam_power_db\nsweep_values = 0\n"
                             "methods = mmse_js+zfjs+mc\n"),
                  ConfigError);
}

TEST_CASE("parse errors name the offending line") {
  try {
    parse_text("M = 32\nbogus_key = 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("inline:2") != std::string::npos);
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
  try {
    parse_text("M = twelve\nK = 1\ntau = 3\nsweep_axis = antennas\n"
               "sweep_values = 16\nmethods = lmmse+mf+mc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("non-numeric") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_text("K = 1\ntau = 3\nsweep_axis = antennas\n"
                             "sweep_values = 16\nmethods = lmmse+mf+mc\n"),
                  ParseError);  // missing M
  CHECK_THROWS_AS(parse_text("preset = fig9\n"), ParseError);
}

TEST_CASE("scenario validation rejects degenerate sweeps") {
  auto sc = tiny_scenario();
  sc.methods.clear();
  CHECK_THROWS_AS(sc.validate(), ConfigError);

  sc = tiny_scenario();
  sc.sweep_values = {3.0, 2.0};
  CHECK_THROWS_AS(sc.validate(), ConfigError);

  sc = tiny_scenario();
  sc.sweep_values = {3.0, 3.0};
  CHECK_THROWS_AS(sc.validate(), ConfigError);

  sc = tiny_scenario();
  sc.methods = {{EstimatorKind::lmmse, CombinerKind::zf, SeRoute::closed_form}};
  CHECK_THROWS_AS(sc.validate(), ConfigError);
}

TEST_CASE("runner emits one labeled row per sweep point and method") {
  auto sc = tiny_scenario();
  const auto lines = csv_lines(sc);
  REQUIRE(lines.size() == 1 + sc.sweep_values.size() * sc.methods.size());
  CHECK(lines[0] ==
        "sweep_value,tau,estimator,detector,se_route,sum_se,ci_halfwidth,"
        "n_outer,n_inner,seed,excluded_draws,validity_warning");
  CHECK(lines[1].rfind("0,3,mmse_js,zfjs,monte_carlo,", 0) == 0);
  CHECK(lines[2].rfind("0,3,mmse_js,zfjs,closed_form,", 0) == 0);
  CHECK(lines[3].rfind("6,3,mmse_js,zfjs,monte_carlo,", 0) == 0);
  for (const auto& line : lines) CHECK(line.find("nan") == std::string::npos);
}

TEST_CASE("reproducible runs are byte-identical, serial or parallel") {
  auto sc = tiny_scenario();
  std::ostringstream a, b;
  run_scenario(sc, a);
  run_scenario(sc, b);
  CHECK(a.str() == b.str());

  auto parallel = sc;
  parallel.threads = 4;
  std::ostringstream c;
  run_scenario(parallel, c);
  CHECK(a.str() == c.str());

  auto other_seed = sc;
  other_seed.base.seed = 8;
  std::ostringstream d;
  run_scenario(other_seed, d);
  CHECK(a.str() != d.str());
}

TEST_CASE("timestamp header appears only in non-reproducible mode") {
  auto sc = tiny_scenario();
  sc.methods = {{EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::closed_form}};
  sc.reproducible = false;
  const auto stamped = csv_lines(sc);
  CHECK(stamped.front().rfind("# generated ", 0) == 0);

  sc.reproducible = true;
  const auto bare = csv_lines(sc);
  CHECK(bare.front().rfind("sweep_value,", 0) == 0);
}

TEST_CASE("closed form outside its validity range flags the row") {
  Scenario sc;
  sc.base = make_uniform_config<double>(16, 2, 4, 40, 1.0, 1.0, 1.0, 1.0, 1.0, 3);
  sc.axis = SweepAxis::jam_power_db;
  sc.sweep_values = {0.0};
  sc.tau_values = {4};  // needs tau >= 5 for independence
  sc.methods = {{EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::closed_form}};
  sc.n_outer = 16;
  sc.n_inner = 8;
  sc.reproducible = true;
  const auto lines = csv_lines(sc);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].back() == '1');
}

TEST_CASE("sweep axes reshape the per-point configuration") {
  Scenario sc;
  sc.base = make_uniform_config<double>(10, 1, 2, 40, 1.0, 1.0, 1.0, 1.0, 1.0, 5);
  sc.axis = SweepAxis::pilot_len;
  sc.sweep_values = {2, 4};
  sc.tau_values = {2};  // placeholder, overridden by the axis
  sc.methods = {{EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::closed_form}};
  sc.n_outer = 16;
  sc.n_inner = 8;
  sc.reproducible = true;
  const auto lines = csv_lines(sc);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].rfind("2,2,", 0) == 0);
  CHECK(lines[2].rfind("4,4,", 0) == 0);

  sc.axis = SweepAxis::antennas;
  sc.sweep_values = {8, 16};
  const auto lines2 = csv_lines(sc);
  CHECK(lines2[1].rfind("8,2,", 0) == 0);
  CHECK(lines2[2].rfind("16,2,", 0) == 0);
}

TEST_CASE("unwritable output path raises an I/O error") {
  auto sc = tiny_scenario();
  sc.methods = {{EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::closed_form}};
  sc.out_path = "/nonexistent_dir_for_sure/out.csv";
  CHECK_THROWS_AS(run_scenario(sc), Error);
}

TEST_CASE("asymptotic route writes the unbounded marker when jamming is off") {
  Scenario sc;
  sc.base = make_uniform_config<double>(16, 1, 3, 40, 1.0, 1.0, 0.0, 0.0, 1.0, 2);
  sc.axis = SweepAxis::antennas;
  sc.sweep_values = {16};
  sc.tau_values = {3};
  sc.methods = {{EstimatorKind::mmse_js, CombinerKind::zfjs, SeRoute::asymptotic}};
  sc.n_outer = 8;
  sc.n_inner = 4;
  sc.reproducible = true;
  const auto lines = csv_lines(sc);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].find(",inf,") != std::string::npos);
}
