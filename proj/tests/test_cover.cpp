#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "leafpress/cover.hpp"
#include "leafpress/dynamics.hpp"
#include "leafpress/errors.hpp"
#include "leafpress/leafgeom.hpp"
#include "leafpress/numerics.hpp"
#include "leafpress/potentials.hpp"

using namespace leafpress;

namespace {
const std::vector<std::vector<std::int64_t>> kCat{{2, 1}, {1, 1}};

LinearPHModel cat() { return build_linear_model(kCat); }

LeafPatch grid_patch(const LinearPHModel& m, int K, double delta = 0.5) {
  return sample_leaf_patch(m, make_point2(0.2, 0.7), delta, K,
                           PatchScheme::UniformGrid, 0);
}

// A hand-built family over a uniform K-sample patch on [-1/2, 1/2]; balls are
// specified as (member range, interval, sup).
BallFamily hand_family(int K) {
  BallFamily fam;
  fam.leaf_lo = -0.5;
  fam.leaf_hi = 0.5;
  fam.t.resize(K);
  fam.w.assign(K, 1.0 / K);
  for (int i = 0; i < K; ++i) {
    fam.t[i] = -0.5 + (i + 0.5) / K;
  }
  return fam;
}

void add_ball(BallFamily& fam, int lo, int hi, double t_lo, double t_hi,
              double sup, int n = 1) {
  CandidateBall b;
  b.center = lo;
  b.n = n;
  b.lo = lo;
  b.hi = hi;
  b.t_lo = t_lo;
  b.t_hi = t_hi;
  b.sup_log_g = sup;
  fam.balls.push_back(b);
}

double weight_union(const BallFamily& fam, const std::vector<int>& chosen) {
  std::vector<char> hit(fam.w.size(), 0);
  for (int idx : chosen) {
    for (int i = fam.balls[idx].lo; i <= fam.balls[idx].hi; ++i) hit[i] = 1;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) s += fam.w[i];
  }
  return s;
}
}  // namespace

TEST_CASE("make_ball_family matches the geometry and potential primitives") {
  auto m = cat();
  auto patch = sample_leaf_patch(m, make_point2(0.17, 0.64), 0.3, 37,
                                 PatchScheme::StratifiedRandom, 5);
  auto P = PotentialSeq::birkhoff(parse_phi("cos1"));
  std::vector<int> depths{1, 2, 4};
  double eps = 0.07;

  auto fam = make_ball_family(m, patch, P, depths, eps);
  CHECK(fam.balls.size() == depths.size() * 37);
  CHECK(fam.leaf_lo == -0.3);
  CHECK(fam.leaf_hi == 0.3);

  for (const auto& b : fam.balls) {
    auto mem = bowen_ball_members(m, patch, b.center, b.n, eps);
    CHECK(b.lo == mem.front());
    CHECK(b.hi == mem.back());
    auto iv = bowen_ball_interval(m, patch, b.center, b.n, eps);
    CHECK(b.t_lo == iv.lo);
    CHECK(b.t_hi == iv.hi);
    double sup = -1e300;
    for (auto i : mem) {
      sup = std::max(sup, P.log_gn(m, patch_point(m, patch, i), b.n));
    }
    CHECK(b.sup_log_g == doctest::Approx(sup).epsilon(1e-13));
  }

  // Explicit centre subset, preserving order and depth-major layout.
  std::vector<int> centers{0, 5, 36};
  auto sub = make_ball_family(m, patch, P, depths, eps, &centers);
  REQUIRE(sub.balls.size() == 9);
  CHECK(sub.balls[0].center == 0);
  CHECK(sub.balls[1].center == 5);
  CHECK(sub.balls[2].center == 36);
  CHECK(sub.balls[0].n == 1);
  CHECK(sub.balls[3].n == 2);
  CHECK(sub.balls[6].n == 4);

  CHECK_THROWS_AS(make_ball_family(m, patch, P, std::vector<int>{}, eps),
                  BadDepth);
  CHECK_THROWS_AS(make_ball_family(m, patch, P, std::vector<int>{2, 2}, eps),
                  BadDepth);
  CHECK_THROWS_AS(make_ball_family(m, patch, P, depths, 0.0), BadRadius);
  std::vector<int> bad{37};
  CHECK_THROWS_AS(make_ball_family(m, patch, P, depths, eps, &bad),
                  OutOfRange);
}

TEST_CASE("greedy leaf-mass cover tiles an interval at the oracle count") {
  auto m = cat();
  auto patch = grid_patch(m, 101);
  auto P = PotentialSeq::parse("zero");
  std::vector<int> depths{3};
  double eps = 0.05;
  auto fam = make_ball_family(m, patch, P, depths, eps);

  auto sol = solve_cover(fam, CoverGoal::leaf_mass(0.95), CoverStrategy::Greedy);
  CHECK(sol.feasible);
  CHECK(sol.strategy == "greedy");
  CHECK(sol.interval_mass >= 0.95 - 1e-9);

  // Ball diameter 2*eps/lambda_u^2 = 0.0145903... = 1.459 * spacing.
  // Greedy first tiles disjoint balls at index stride ceil(1.459) = 2
  // (50 balls, mass 0.7295), then fills the inter-ball gaps of
  // 2h - diam = 0.0054097 each: ceil(0.2205 / 0.0054097) = 41 more.
  double diam = 2 * eps / (m.lambda_u() * m.lambda_u());
  int lower = static_cast<int>(std::ceil(0.95 / diam));
  CHECK(static_cast<int>(sol.chosen.size()) >= lower);
  CHECK(sol.chosen.size() == 91);

  // Zero potential: total cost is exactly log |F|.
  CHECK(sol.total_cost ==
        doctest::Approx(std::log(double(sol.chosen.size()))).epsilon(1e-13));

  // covered_mass is the weight-sum of the member union, recomputable.
  CHECK(sol.covered_mass == doctest::Approx(weight_union(fam, sol.chosen))
                                .epsilon(1e-12));
}

TEST_CASE("greedy ratio rule: cheap split beats expensive blanket") {
  auto fam = hand_family(4);
  // t = {-0.375, -0.125, 0.125, 0.375}
  add_ball(fam, 0, 1, -0.5, 0.0, 1.0);  // A
  add_ball(fam, 2, 3, 0.0, 0.5, 1.0);   // B
  add_ball(fam, 0, 3, -0.5, 0.5, 3.0);  // C

  auto g = solve_cover(fam, CoverGoal::leaf_mass(1.0), CoverStrategy::Greedy);
  REQUIRE(g.feasible);
  CHECK(g.chosen == std::vector<int>{0, 1});
  CHECK(g.total_cost == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-14));
  CHECK(g.covered_mass == doctest::Approx(1.0));
  CHECK(g.interval_mass == doctest::Approx(1.0));

  auto e = solve_cover(fam, CoverGoal::leaf_mass(1.0),
                       CoverStrategy::Exhaustive);
  REQUIRE(e.feasible);
  CHECK(e.chosen == g.chosen);
  CHECK(e.total_cost == g.total_cost);  // same reduction order: bitwise equal
}

TEST_CASE("greedy can be suboptimal but stays within the known gap") {
  auto fam = hand_family(4);
  add_ball(fam, 0, 1, -0.5, 0.0, 1.0);    // B1
  add_ball(fam, 2, 3, 0.0, 0.5, 1.0);     // B2
  add_ball(fam, 1, 2, -0.25, 0.25, -1.0); // B3: cheap overlap bait
  auto goal = CoverGoal::sample_set({0, 1, 2, 3});

  auto g = solve_cover(fam, goal, CoverStrategy::Greedy);
  auto e = solve_cover(fam, goal, CoverStrategy::Exhaustive);
  REQUIRE(g.feasible);
  REQUIRE(e.feasible);
  CHECK(g.chosen == std::vector<int>{2, 0, 1});
  CHECK(e.chosen == std::vector<int>{0, 1});
  CHECK(g.total_cost >= e.total_cost);
  double gap = g.total_cost - e.total_cost;
  CHECK(gap == doctest::Approx(std::log1p(std::exp(-2.0) / 2.0))
                   .epsilon(1e-12));
  CHECK(gap <= 0.1);
}

TEST_CASE("symmetric tiling: greedy equals exhaustive bitwise") {
  auto fam = hand_family(12);
  auto seg = [&](int lo, int hi) {
    add_ball(fam, lo, hi, fam.t[lo] - 0.5 / 12, fam.t[hi] + 0.5 / 12, 0.7);
  };
  seg(0, 2);
  seg(3, 5);
  seg(6, 8);
  seg(9, 11);
  seg(1, 3);  // decoys with identical cost but overlapping placement
  seg(4, 6);
  seg(7, 9);
  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[i] = i;
  auto goal = CoverGoal::sample_set(all);

  auto g = solve_cover(fam, goal, CoverStrategy::Greedy);
  auto e = solve_cover(fam, goal, CoverStrategy::Exhaustive);
  REQUIRE(g.feasible);
  REQUIRE(e.feasible);
  CHECK(g.chosen == std::vector<int>{0, 1, 2, 3});
  CHECK(e.chosen == std::vector<int>{0, 1, 2, 3});
  CHECK(g.total_cost == e.total_cost);
  CHECK(g.covered_mass == e.covered_mass);
}

TEST_CASE("leaf-mass goal unreachable leaves feasible = false") {
  auto m = cat();
  auto patch = grid_patch(m, 101);
  auto P = PotentialSeq::parse("zero");
  std::vector<int> depths{3};
  auto fam = make_ball_family(m, patch, P, depths, 0.001);

  auto sol = solve_cover(fam, CoverGoal::leaf_mass(0.95), CoverStrategy::Greedy);
  CHECK_FALSE(sol.feasible);
  // Every ball is disjoint here, so greedy exhausts all positive gains.
  CHECK(sol.chosen.size() == 101);
  double diam = 2 * 0.001 / (m.lambda_u() * m.lambda_u());
  CHECK(sol.interval_mass == doctest::Approx(100 * diam).epsilon(0.02));
}

TEST_CASE("cost slope prices depth: deeper balls win once slope is positive") {
  auto fam = hand_family(4);
  add_ball(fam, 0, 3, -0.5, 0.5, 0.0, 1);  // shallow
  add_ball(fam, 0, 3, -0.5, 0.5, 0.0, 3);  // deep
  auto goal = CoverGoal::leaf_mass(1.0);

  auto flat = solve_cover(fam, goal, CoverStrategy::Greedy, 0.0);
  CHECK(flat.chosen == std::vector<int>{0});  // tie on cost, lowest index
  CHECK(flat.total_cost == doctest::Approx(0.0));

  auto sloped = solve_cover(fam, goal, CoverStrategy::Greedy, 0.5);
  CHECK(sloped.chosen == std::vector<int>{1});
  CHECK(sloped.total_cost == doctest::Approx(-1.5).epsilon(1e-14));

  auto ex = solve_cover(fam, goal, CoverStrategy::Exhaustive, 0.5);
  CHECK(ex.chosen == std::vector<int>{1});
  CHECK(ex.total_cost == sloped.total_cost);
}

TEST_CASE("exhaustive tie-breaking: fewest balls, then smallest subset") {
  auto fam = hand_family(2);
  add_ball(fam, 0, 1, -0.5, 0.5, 1.0);
  add_ball(fam, 0, 1, -0.5, 0.5, 1.0);
  add_ball(fam, 0, 1, -0.5, 0.5, 1.0);
  auto sol = solve_cover(fam, CoverGoal::sample_set({0, 1}),
                         CoverStrategy::Exhaustive);
  REQUIRE(sol.feasible);
  CHECK(sol.chosen == std::vector<int>{0});
}

TEST_CASE("exhaustive legality limits") {
  auto m = cat();
  auto P = PotentialSeq::parse("zero");
  std::vector<int> depths{2};

  auto big = grid_patch(m, 17);
  auto fam17 = make_ball_family(m, big, P, depths, 0.05);
  CHECK_THROWS_AS(solve_cover(fam17, CoverGoal::leaf_mass(0.5),
                              CoverStrategy::Exhaustive),
                  FixtureTooLarge);

  auto small = grid_patch(m, 16);
  std::vector<int> centers;
  for (int i = 0; i < 16; ++i) centers.push_back(i);
  centers.push_back(0);  // 17 candidate balls over a legal patch
  auto famB = make_ball_family(m, small, P, depths, 0.05, &centers);
  CHECK_THROWS_AS(solve_cover(famB, CoverGoal::leaf_mass(0.5),
                              CoverStrategy::Exhaustive),
                  FixtureTooLarge);

  // Greedy is unaffected by the legality limits.
  auto ok = solve_cover(fam17, CoverGoal::leaf_mass(0.5), CoverStrategy::Greedy);
  CHECK(ok.feasible);
}

TEST_CASE("goal validation") {
  auto fam = hand_family(2);
  add_ball(fam, 0, 1, -0.5, 0.5, 0.0);
  CHECK_THROWS_AS(solve_cover(fam, CoverGoal::leaf_mass(0.0),
                              CoverStrategy::Greedy),
                  OutOfRange);
  CHECK_THROWS_AS(solve_cover(fam, CoverGoal::sample_set({}),
                              CoverStrategy::Greedy),
                  OutOfRange);
  CHECK_THROWS_AS(solve_cover(fam, CoverGoal::sample_set({7}),
                              CoverStrategy::Greedy),
                  OutOfRange);
}

TEST_CASE("range-max matches brute force") {
  num::SplitMix64 rng(42);
  std::vector<double> v(129);
  for (auto& x : v) x = rng.next_unit() * 10.0 - 5.0;
  RangeMax rm(v);
  for (int lo = 0; lo < 129; lo += 3) {
    for (int hi = lo; hi < 129; hi += 2) {
      double brute = v[lo];
      for (int i = lo + 1; i <= hi; ++i) brute = std::max(brute, v[i]);
      CHECK(rm.query(lo, hi) == brute);
    }
  }
  CHECK(rm.query(0, 128) == *std::max_element(v.begin(), v.end()));
  CHECK_THROWS_AS(rm.query(5, 4), OutOfRange);
  CHECK_THROWS_AS(rm.query(-1, 4), OutOfRange);
  CHECK_THROWS_AS(rm.query(0, 129), OutOfRange);
}
