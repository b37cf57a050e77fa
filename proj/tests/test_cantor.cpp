#include "carnotlab/cantor.hpp"

#include <cmath>
#include <random>

#include "carnotlab/rng.hpp"
#include "doctest.h"

using namespace carnot;

TEST_CASE("cantor membership of classic points") {
  CHECK(cantor_member(0.25, 40) == Tri::In);   // 0.020202... base 3
  CHECK(cantor_member(0.75, 40) == Tri::In);   // 0.202020...
  CHECK(cantor_member(0.5, 40) == Tri::Out);   // 0.111...
  CHECK(cantor_member(0.0, 40) == Tri::In);
  CHECK(cantor_member(1.0, 40) == Tri::In);
  // the double nearest 1/3 carries 0,2,2,... ternary digits until position 43,
  // so the depth-40 cover keeps it; the double nearest 2/3 sits strictly
  // inside the removed middle third (2.5e-16 from its right boundary) and is
  // certified out at depth 40.
  CHECK(cantor_member(1.0 / 3.0, 40) == Tri::In);
  CHECK(cantor_member(2.0 / 3.0, 40) == Tri::Out);
  CHECK(cantor_member(2.0 / 3.0, 30) == Tri::Undecided);  // band 3^-29 is wider
  CHECK(cantor_member(0.4, 40) == Tri::Out);
  CHECK(cantor_member(-0.1, 40) == Tri::Out);
  CHECK(cantor_member(1.1, 40) == Tri::Out);
}

TEST_CASE("cantor membership stability in depth") {
  auto rng = make_rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    double x = u(rng);
    Tri a = cantor_member(x, 30), b = cantor_member(x, 40);
    if (a == Tri::In) CHECK(b == Tri::In);
    if (a == Tri::Out) CHECK(b == Tri::Out);
    if (a == Tri::Undecided) CHECK(b != Tri::In);  // may only resolve outward
  }
  // exactly representable members survive any depth
  for (double x : {0.0, 0.25, 0.75, 1.0}) {
    CHECK(cantor_member(x, 30) == Tri::In);
    CHECK(cantor_member(x, 80) == Tri::In);
  }
}

TEST_CASE("cantor distance against a level cover oracle") {
  // Oracle: distance to the level-10 cover endpoints; true distance lies
  // within 3^-10 of it.
  const int L = 10;
  const double cell = std::pow(3.0, -L);
  std::vector<double> endpoints;
  std::vector<double> starts{0.0};
  for (int l = 0; l < L; ++l) {
    std::vector<double> next;
    double w = std::pow(3.0, -(l + 1));
    for (double s : starts) {
      next.push_back(s);
      next.push_back(s + 2 * w);
    }
    starts.swap(next);
  }
  for (double s : starts) {
    endpoints.push_back(s);
    endpoints.push_back(s + cell);
  }
  auto oracle = [&](double x) {
    double best = 1e9;
    for (double e : endpoints) best = std::min(best, std::abs(x - e));
    return best;
  };
  auto rng = make_rng(42);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int i = 0; i < 2000; ++i) {
    double x = u(rng);
    double ours = cantor_distance(x, 40);
    CHECK(ours <= oracle(x) + 1e-12);
    CHECK(ours >= oracle(x) - cell);
  }
  CHECK(cantor_distance(0.5, 40) == doctest::Approx(1.0 / 6.0));
  CHECK(cantor_distance(0.25, 40) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("interval hit certification") {
  CHECK(cantor_hits_interval(0.3, 0.4, 40));        // contains 1/3
  CHECK(cantor_hits_interval(0.66, 0.67, 40));      // contains 2/3
  CHECK_FALSE(cantor_hits_interval(0.4, 0.45, 40)); // inside the middle gap
  CHECK(cantor_hits_interval(-1.0, 0.0, 40));       // contains 0
  CHECK_FALSE(cantor_hits_interval(1.01, 2.0, 40));
  // a window covering a whole level-5 cell certifies
  double w = std::pow(3.0, -5);
  CHECK(cantor_hits_interval(0.0, w, 40));
}

TEST_CASE("ank envelopes") {
  Interval e10 = ank_envelope({1, 0});
  CHECK(e10.lo == 0.5);
  CHECK(e10.hi == 0.75);
  Interval e11 = ank_envelope({1, 1});
  CHECK(e11.lo == 0.75);
  CHECK(e11.hi == 1.0);
  Interval e23 = ank_envelope({2, 3});
  CHECK(e23.lo == 0.4375);
  CHECK(e23.hi == 0.5);
  CHECK_THROWS_AS(ank_envelope({2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(ank_envelope({1, -1}), std::invalid_argument);

  // tiling of [2^-n, 2^-(n-1)] is exact, interiors disjoint
  for (int n = 1; n <= 10; ++n) {
    double expect = std::ldexp(1.0, -n);
    for (long long k = 0; k < (1ll << n); ++k) {
      Interval e = ank_envelope({n, k});
      CHECK(e.lo == expect);
      expect = e.hi;
    }
    CHECK(expect == std::ldexp(1.0, -(n - 1)));
  }
}

TEST_CASE("ank membership") {
  auto w = ank_member(0.5, 40);
  REQUIRE(w.index.has_value());
  CHECK(w.index->n == 1);
  CHECK(w.index->k == 0);

  CHECK_FALSE(ank_member(0.6, 40).index.has_value());  // rescaled 0.4 not in C

  auto tie = ank_member(0.75, 40);  // endpoint of two envelopes; smaller k wins
  REQUIRE(tie.index.has_value());
  CHECK(tie.index->n == 1);
  CHECK(tie.index->k == 0);

  CHECK_FALSE(ank_member(0.0, 40).index.has_value());
  CHECK_FALSE(ank_member(1.0, 40).index.has_value());
  CHECK_FALSE(ank_member(-0.5, 40).index.has_value());
}

TEST_CASE("gap_window worked examples") {
  LadderIndex a = gap_window(0.5, 40);
  CHECK(a.n == 1);
  CHECK(a.k == 0);
  LadderIndex b = gap_window(0.3, 40);
  CHECK(b.n == 2);
  CHECK(b.k == 1);
  LadderIndex c = gap_window(0.9, 40);
  CHECK(c.n == 1);
  CHECK(c.k == 1);
}

TEST_CASE("gap_window stress: certified hit for random t") {
  auto rng = make_rng(43);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int i = 0; i < 10000; ++i) {
    double t = u(rng);
    LadderIndex idx = gap_window(t, 40);  // throws InternalError on failure
    Interval env = ank_envelope(idx);
    // the certified envelope must overlap the window
    CHECK(env.hi >= t);
    CHECK(env.lo <= t + 4 * t * t);
  }
  CHECK_THROWS_AS(gap_window(0.0, 40), std::invalid_argument);
  CHECK_THROWS_AS(gap_window(1.0, 40), std::invalid_argument);
}

TEST_CASE("ladder distance and gap midpoints") {
  CHECK(ladder_distance(0.5, 40) == 0.0);       // 0.5 = left end of A_{1,0}
  CHECK(ladder_distance(1.25, 40) == doctest::Approx(0.25));
  CHECK(ladder_distance(-0.3, 40) == doctest::Approx(0.3));
  // middle of the central gap of envelope (1,0): 0.5 + 0.25 * 1/2
  double mid = 0.5 + 0.25 * 0.5;
  CHECK(ladder_distance(mid, 40) == doctest::Approx(0.25 / 6.0));

  std::vector<double> mids;
  ladder_gap_midpoints(0.55, 0.2, mids, 40);
  CHECK(!mids.empty());
  for (double g : mids) {
    CHECK(ladder_distance(g, 40) > 0.0);
    CHECK_FALSE(ank_member(g, 40).index.has_value());
  }
}
