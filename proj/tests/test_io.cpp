#include <cmath>
#include <stdexcept>
#include <string>

#include "ded/cost.hpp"
#include "ded/instance_io.hpp"
#include "ded/oracle.hpp"
#include "doctest.h"
#include "support/toy.hpp"

using namespace ded;

namespace {

const std::string kDataDir = DED_TEST_DATA_DIR;

void check_parse_error(const std::string& text, const std::string& needle) {
  try {
    parse_instance_text(text, "case.inst");
    FAIL("expected parse failure for: ", needle);
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    INFO("message was: ", msg);
    CHECK(msg.find(needle) != std::string::npos);
    CHECK(msg.rfind("case.inst", 0) == 0);  // origin always leads
  }
}

SystemInstance reserve_pair() {
  SystemInstance sys;
  sys.name = "pair";
  sys.units = {testsupport::toy_unit(), testsupport::toy_unit()};
  sys.units[1].id = 2;
  sys.demand = {60.0, 80.0};
  ReserveProduct rp;
  rp.tau_hours = 0.25;
  rp.requirement = {4.0, 5.0};
  sys.reserves.push_back(rp);
  sys.check();
  return sys;
}

}  // namespace

TEST_CASE("generated instances round-trip byte for byte") {
  for (std::uint64_t seed : {3u, 11u, 27u}) {
    const SystemInstance sys = random_instance(seed, 3, 4);
    const std::string text = instance_to_text(sys);
    const SystemInstance back = parse_instance_text(text, "roundtrip");
    CHECK(instance_to_text(back) == text);
    CHECK(back.name == sys.name);
    CHECK(back.num_units() == sys.num_units());
    CHECK(back.demand == sys.demand);
  }
}

TEST_CASE("the bundled ten-unit system parses as published") {
  const SystemInstance sys = parse_instance(kDataDir + "/ten_unit.inst");
  CHECK(sys.name == "ten-unit");
  REQUIRE(sys.num_units() == 10);
  REQUIRE(sys.num_periods() == 24);
  CHECK(sys.units[0].p_max == 470.0);
  CHECK(sys.units[9].p_min == 10.0);
  CHECK(sys.demand[0] == 1036.0);
  CHECK(sys.demand[11] == 2150.0);
  CHECK(sys.demand[23] == 1184.0);
  CHECK_FALSE(sys.units[0].initial_power.has_value());

  REQUIRE(sys.reserves.size() == 2);
  CHECK(sys.reserves[0].tau_hours == 1.0);
  CHECK(sys.reserves[0].requirement[0] == doctest::Approx(51.8).epsilon(1e-12));
  CHECK(sys.reserves[1].tau_hours == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(sys.reserves[1].requirement[0] ==
        doctest::Approx(1036.0 / 60.0).epsilon(1e-12));
  CHECK(sys.statically_feasible());
}

TEST_CASE("instance parse failures carry the origin, line and offender") {
  const std::string ok_unit =
      "unit id=1 alpha=100 beta=10 gamma=0.05 e=20 f=0.15 pmin=20 pmax=60 "
      "ramp_up=40 ramp_down=40";

  check_parse_error("name t\nperiods 1\n" + ok_unit + " bogus=3\ndemand 30\n",
                    "unknown unit key 'bogus'");
  check_parse_error("name t\nfrobnicate 3\n", "unknown directive 'frobnicate'");
  check_parse_error(
      "name t\nperiods 1\nunit id=1 alpha=100 beta=10 e=20 f=0.15 pmin=20 "
      "pmax=60 ramp_up=40 ramp_down=40\ndemand 30\n",
      "missing required key 'gamma'");
  check_parse_error(
      "name t\nperiods 1\n" + ok_unit + " alpha=7\ndemand 30\n",
      "duplicate unit key 'alpha'");
  check_parse_error("name t\nperiods 3\n" + ok_unit + "\ndemand 30 40\n",
                    "demand has 2 values but periods declares 3");
  check_parse_error("name t\nperiods 1\n" + ok_unit +
                        "\ndemand 30\nreserve tau=1\n",
                    "exactly one of fraction= or requirement=");
  check_parse_error("name t\nperiods 1\n" + ok_unit +
                        "\ndemand 30\nreserve fraction=0.05\n",
                    "missing tau=");
  check_parse_error("name t\nperiods 2\n" + ok_unit +
                        "\ndemand 30 30\nreserve tau=1 requirement=4\n",
                    "requirement has 1 values but periods declares 2");
  check_parse_error(
      "name t\nperiods 1\nunit id=1 alpha=100 beta=10 gamma=0.05 e=20 f=0.15 "
      "pmin=60 pmax=20 ramp_up=40 ramp_down=40\ndemand 30\n",
      "p_min");
  check_parse_error("periods 1\n" + ok_unit + "\ndemand 30\n",
                    "missing name directive");
  check_parse_error("name t\nperiods 1\n" + ok_unit + "\ndemand thirty\n",
                    "expected a number, got 'thirty'");

  // the reported line number points at the offending line
  try {
    parse_instance_text("name t\nperiods 1\n" + ok_unit + "\nwhat 1\ndemand 30\n",
                        "case.inst");
    FAIL("expected parse failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("case.inst:4:") != std::string::npos);
  }
}

TEST_CASE("duplication scales units, demand and reserves together") {
  const SystemInstance sys = reserve_pair();
  const SystemInstance big = duplicate_system(sys, 3);
  CHECK(big.name == "pair-x3");
  REQUIRE(big.num_units() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(big.units[i].id == i + 1);
    CHECK(big.units[i].alpha == sys.units[i % 2].alpha);
    CHECK(big.units[i].p_max == sys.units[i % 2].p_max);
  }
  CHECK(big.demand == std::vector<double>{180.0, 240.0});
  REQUIRE(big.reserves.size() == 1);
  CHECK(big.reserves[0].requirement == std::vector<double>{12.0, 15.0});
  CHECK(big.reserves[0].tau_hours == 0.25);

  SystemInstance once = duplicate_system(sys, 1);
  once.name = sys.name;
  CHECK(instance_to_text(once) == instance_to_text(sys));

  SystemInstance twice_thrice = duplicate_system(duplicate_system(sys, 2), 3);
  SystemInstance six = duplicate_system(sys, 6);
  twice_thrice.name = six.name;
  CHECK(instance_to_text(twice_thrice) == instance_to_text(six));

  CHECK_THROWS_AS(duplicate_system(sys, 0), std::invalid_argument);
}

TEST_CASE("solution files are self-consistent and round-trip byte for byte") {
  const SystemInstance sys = reserve_pair();
  Schedule sched;
  sched.power = Matrix(2, 2);
  sched.power.at(0, 0) = 36.625;  // rounds half away from zero to 36.63
  sched.power.at(1, 0) = 40.0;
  sched.power.at(0, 1) = 45.129;
  sched.power.at(1, 1) = 40.0;  // unit 2 constant -> note line
  sched.reserve.emplace_back(2, 2);
  sched.reserve[0].at(0, 0) = 2.5;
  sched.reserve[0].at(1, 1) = 5.0;

  SolveMeta meta;
  meta.status = "gap-reached";
  meta.objective = 123.0;  // garbage on purpose; the writer recomputes it
  meta.milp_objective = 1234.5;
  meta.best_bound = 500.0;
  meta.rgap = 0.004;
  meta.nodes = 42;
  meta.wall_time = 1.5;
  meta.config = "m=2 rgap=0.01";

  const std::string text = solution_to_text(sys, sched, meta);
  CHECK(text.find("period 1 36.63 40.00\n") != std::string::npos);
  CHECK(text.find("note unit 2 constant at 40.00 MW\n") != std::string::npos);
  CHECK(text.find("reserve 1\n") != std::string::npos);

  const SolutionFile sol = parse_solution_text(text, "roundtrip");
  CHECK(sol.instance == "pair");
  CHECK(sol.meta.status == "gap-reached");
  CHECK(sol.meta.nodes == 42);
  CHECK(sol.meta.config == "m=2 rgap=0.01");
  REQUIRE(sol.schedule.has_value());
  REQUIRE(sol.schedule->reserve.size() == 1);
  CHECK(sol.schedule->power.at(0, 0) == 36.63);
  CHECK(sol.schedule->reserve[0].at(1, 1) == 5.0);

  // the stored objective is the cost of the schedule as written, not as fed in
  Schedule rounded = *sol.schedule;
  CHECK(sol.meta.objective ==
        doctest::Approx(schedule_cost(sys, rounded)).epsilon(1e-12));
  CHECK(sol.meta.ogap ==
        doctest::Approx(optimality_gap(sol.meta.objective, 500.0))
            .epsilon(1e-12));

  CHECK(solution_to_text(sys, sol.schedule, sol.meta) == text);
}

TEST_CASE("metadata-only solution files carry no schedule") {
  const SystemInstance sys = reserve_pair();
  SolveMeta meta;
  meta.status = "infeasible";
  meta.nodes = 4;
  meta.wall_time = 0.25;
  const std::string text = solution_to_text(sys, std::nullopt, meta);
  CHECK(text.find("\nperiod ") == std::string::npos);  // `periods 2` stays
  CHECK(text.find("objective") == std::string::npos);

  const SolutionFile sol = parse_solution_text(text, "meta-only");
  CHECK_FALSE(sol.schedule.has_value());
  CHECK(sol.meta.status == "infeasible");
  CHECK(sol.meta.nodes == 4);
  CHECK(solution_to_text(sys, sol.schedule, sol.meta) == text);
}

TEST_CASE("solution parse failures point at the malformed row") {
  CHECK_THROWS_WITH_AS(
      parse_solution_text("solution x\nunits 2\nperiods 1\nperiod 1 30\n", "s"),
      doctest::Contains("expected 2 values, got 1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_solution_text("solution x\nperiod 1 30\n", "s"),
      doctest::Contains("period rows before units/periods"),
      std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_solution_text(
          "solution x\nunits 1\nperiods 1\nperiod 1 30\nreserve 2\n", "s"),
      doctest::Contains("reserve blocks must appear in order"),
      std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_solution_text("units 1\nperiods 1\n", "s"),
                       doctest::Contains("missing solution directive"),
                       std::runtime_error);
}

TEST_CASE("the published benchmark schedule parses into a full table") {
  const SolutionFile sol = parse_solution(kDataDir + "/table2.sol");
  CHECK(sol.instance == "ten-unit");
  CHECK(sol.meta.status == "external");
  REQUIRE(sol.schedule.has_value());
  const Matrix& p = sol.schedule->power;
  REQUIRE(p.rows == 10);
  REQUIRE(p.cols == 24);

  double first_period = 0.0;
  for (int i = 0; i < 10; ++i) first_period += p.at(i, 0);
  CHECK(first_period == doctest::Approx(1036.0).epsilon(1e-12));

  for (int t = 0; t < 24; ++t) {
    CHECK(p.at(6, t) == 129.59);  // unit 7 never moves in the published table
    CHECK(p.at(9, t) == 55.0);    // nor does unit 10
  }
}
