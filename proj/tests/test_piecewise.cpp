#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ded/cost.hpp"
#include "ded/piecewise.hpp"
#include "doctest.h"
#include "support/toy.hpp"

using namespace ded;
using testsupport::toy_unit;

TEST_CASE("toy unit linearizes to the hand-computed chords at m = 2") {
  const GeneratorUnit u = toy_unit();
  CHECK(segment_count(u, 2) == 4);

  const PiecewiseCost pwc = build_piecewise(u, 2);
  REQUIRE(pwc.num_segments() == 4);
  const double want_a[] = {20.0, 30.0, 40.0, 50.0, 60.0};
  const double want_k[] = {14.5, 11.5, 16.5, 13.5};
  const double want_b[] = {30.0, 120.0, -80.0, 70.0};
  for (int l = 0; l <= 4; ++l)
    CHECK(pwc.breakpoints[l] == doctest::Approx(want_a[l]).epsilon(1e-12));
  for (int l = 0; l < 4; ++l) {
    CHECK(pwc.slopes[l] == doctest::Approx(want_k[l]).epsilon(1e-12));
    CHECK(pwc.intercepts[l] == doctest::Approx(want_b[l]).epsilon(1e-10));
  }

  CHECK(approx_cost(pwc, 25.0) == doctest::Approx(392.5));
  CHECK(approx_cost(pwc, 37.0) == doctest::Approx(545.5));
  CHECK_THROWS_AS(approx_cost(pwc, 19.9), std::domain_error);
  CHECK_THROWS_AS(approx_cost(pwc, 60.1), std::domain_error);
}

TEST_CASE("segment count follows ceil(m f range / pi) with a floor of one") {
  GeneratorUnit u = toy_unit();
  CHECK(segment_count(u, 2) == 4);
  CHECK(segment_count(u, 4) == 8);
  CHECK(segment_count(u, 1) == 2);

  u.f = 0.0;  // no ripple: single chord
  CHECK(segment_count(u, 2) == 1);
  REQUIRE(breakpoints(u, 2).size() == 2);

  u = toy_unit();
  u.f = 1e-4;  // formula rounds to zero -> clamp to one segment
  CHECK(segment_count(u, 2) == 1);

  CHECK_THROWS_AS(segment_count(u, 0), std::invalid_argument);
  u.p_min = u.p_max;
  CHECK_THROWS_AS(breakpoints(u, 2), std::invalid_argument);
}

TEST_CASE("breakpoints are strictly increasing and end at the limits") {
  GeneratorUnit u = toy_unit();
  u.f = 0.37;  // irrational spacing vs the 40 MW range: last cell is short
  for (int m : {1, 2, 3, 4}) {
    const std::vector<double> a = breakpoints(u, m);
    CHECK(static_cast<int>(a.size()) == segment_count(u, m) + 1);
    CHECK(a.front() == u.p_min);
    CHECK(a.back() == u.p_max);
    for (size_t l = 1; l < a.size(); ++l) CHECK(a[l] > a[l - 1]);
  }
}

TEST_CASE("the chord interpolates the true cost exactly at breakpoints") {
  const GeneratorUnit u = toy_unit();
  for (int m : {1, 2, 3, 4, 7}) {
    const PiecewiseCost pwc = build_piecewise(u, m);
    for (double a : pwc.breakpoints)
      CHECK(approx_cost(pwc, a) ==
            doctest::Approx(true_cost(u, a)).epsilon(1e-9));
  }
}

// The usable dominance property: the full-cost chord stays above the
// quadratic part plus the chord of the ripple alone, pointwise.  (The naive
// global claim is false: extending segment 3's line of the toy unit to
// p = 60 gives 16.5 * 60 - 80 = 910 > 880 = c(60).)
TEST_CASE("chord of the sum dominates quadratic plus ripple chord") {
  const GeneratorUnit u = toy_unit();
  for (int m : {2, 4}) {
    const PiecewiseCost pwc = build_piecewise(u, m);
    const std::vector<double>& a = pwc.breakpoints;
    for (int l = 0; l < pwc.num_segments(); ++l) {
      const double v0 = vpe_cost(u, a[l]), v1 = vpe_cost(u, a[l + 1]);
      for (int s = 0; s <= 20; ++s) {
        const double p = a[l] + (a[l + 1] - a[l]) * s / 20.0;
        const double w = (p - a[l]) / (a[l + 1] - a[l]);
        const double ripple_chord = v0 + (v1 - v0) * w;
        CHECK(approx_cost(pwc, p) >=
              quadratic_cost(u, p) + ripple_chord - 1e-9);
      }
    }
  }
}

TEST_CASE("chord decomposition: full chord = quadratic chord + ripple chord") {
  const GeneratorUnit u = toy_unit();
  const PiecewiseCost pwc = build_piecewise(u, 2);
  const std::vector<double>& a = pwc.breakpoints;
  for (int l = 0; l < pwc.num_segments(); ++l) {
    const double q0 = quadratic_cost(u, a[l]), q1 = quadratic_cost(u, a[l + 1]);
    const double v0 = vpe_cost(u, a[l]), v1 = vpe_cost(u, a[l + 1]);
    const double p = 0.5 * (a[l] + a[l + 1]);
    const double w = (p - a[l]) / (a[l + 1] - a[l]);
    CHECK(approx_cost(pwc, p) ==
          doctest::Approx(q0 + (q1 - q0) * w + v0 + (v1 - v0) * w));
  }
}

TEST_CASE("error report certifies the toy lower approximation") {
  const GeneratorUnit u = toy_unit();
  const PiecewiseCost pwc = build_piecewise(u, 2);
  const ApproxErrorReport rep = approx_error_report(u, pwc, 41);
  CHECK(rep.is_lower_approx);
  CHECK(rep.max_over <= 1e-9);
  CHECK(rep.max_under > 0.0);  // chords genuinely cut below the ripple
  CHECK(rep.num_samples == 41);

  CHECK_THROWS_AS(approx_error_report(u, pwc, 1), std::invalid_argument);
}

TEST_CASE("a strongly convex ripple-free unit is NOT a lower approximation") {
  GeneratorUnit u = toy_unit();
  u.e = 0.0;
  u.f = 0.0;  // single chord over a convex curve lies above it
  const PiecewiseCost pwc = build_piecewise(u, 2);
  const ApproxErrorReport rep = approx_error_report(u, pwc, 41);
  CHECK_FALSE(rep.is_lower_approx);
  CHECK(rep.max_over == doctest::Approx(0.05 * 20.0 * 20.0));  // gamma h^2 / 4
  CHECK(rep.max_under == 0.0);
}

TEST_CASE("doubling m refines the approximation upward") {
  const GeneratorUnit u = toy_unit();
  const PiecewiseCost c2 = build_piecewise(u, 2);
  const PiecewiseCost c4 = build_piecewise(u, 4);
  // m = 4 breakpoints contain the m = 2 ones, so each finer chord lies on or
  // above the coarser one everywhere on the shared domain
  for (int s = 0; s <= 400; ++s) {
    const double p = 20.0 + 40.0 * s / 400.0;
    CHECK(approx_cost(c4, p) >= approx_cost(c2, p) - 1e-9);
  }
}
