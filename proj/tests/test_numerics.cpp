#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "leafpress/errors.hpp"
#include "leafpress/numerics.hpp"

using namespace leafpress;

TEST_CASE("pairwise_sum matches long double reference") {
  num::SplitMix64 rng(42);
  std::vector<double> v(1000);
  long double ref = 0.0L;
  for (auto& x : v) {
    x = rng.next_unit() * 2.0 - 1.0;
    ref += static_cast<long double>(x);
  }
  double s = num::pairwise_sum(v);
  CHECK(std::fabs(s - static_cast<double>(ref)) < 1e-12);
  CHECK(num::pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(num::pairwise_sum(std::vector<double>{3.5}) == 3.5);
}

TEST_CASE("mean and empty errors") {
  std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(num::mean(v) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK_THROWS_AS(num::mean(std::vector<double>{}), LengthMismatch);
  CHECK_THROWS_AS(num::lower_median(std::vector<double>{}), LengthMismatch);
}

TEST_CASE("logaddexp identities and overflow safety") {
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(num::logaddexp(ninf, 3.0) == 3.0);
  CHECK(num::logaddexp(3.0, ninf) == 3.0);
  CHECK(num::logaddexp(0.0, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // 1000 and 1000 would overflow exp; result must be 1000 + log 2.
  CHECK(num::logaddexp(1000.0, 1000.0) ==
        doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
  CHECK(num::logaddexp(-1000.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("logsumexp two-pass") {
  std::vector<double> v{700.0, 700.0, 700.0, 700.0};
  CHECK(num::logsumexp(v) ==
        doctest::Approx(700.0 + std::log(4.0)).epsilon(1e-15));
  std::vector<double> w{0.0, std::log(2.0), std::log(3.0)};
  CHECK(num::logsumexp(w) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  CHECK(num::logsumexp(std::vector<double>{}) ==
        -std::numeric_limits<double>::infinity());
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(num::logsumexp(std::vector<double>{ninf, ninf}) == ninf);
}

TEST_CASE("fit_line recovers exact lines and rejects degenerate input") {
  std::vector<double> x{6, 7, 8, 9, 10, 11};
  std::vector<double> y;
  for (double xi : x) y.push_back(1.25 * xi - 0.5);
  auto f = num::fit_line(x, y);
  CHECK(f.slope == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-12);
  CHECK(f.points == 6);

  // Noise symmetric about the line leaves the slope intact.
  std::vector<double> y2 = y;
  y2[0] += 0.01;
  y2[5] -= 0.01;
  auto f2 = num::fit_line(x, y2);
  CHECK(std::fabs(f2.slope - 1.25) < 0.01);
  CHECK(f2.rms_residual > 0.0);

  CHECK_THROWS_AS(num::fit_line(std::vector<double>{1.0},
                                std::vector<double>{2.0}),
                  LengthMismatch);
  CHECK_THROWS_AS(num::fit_line(std::vector<double>{1.0, 1.0},
                                std::vector<double>{2.0, 3.0}),
                  LengthMismatch);
  CHECK_THROWS_AS(num::fit_line(std::vector<double>{1.0, 2.0},
                                std::vector<double>{2.0}),
                  LengthMismatch);
}

TEST_CASE("lower median convention") {
  CHECK(num::lower_median({5.0}) == 5.0);
  CHECK(num::lower_median({2.0, 1.0}) == 1.0);           // even: lower of the two
  CHECK(num::lower_median({3.0, 1.0, 2.0}) == 2.0);      // odd: middle
  CHECK(num::lower_median({4.0, 1.0, 3.0, 2.0}) == 2.0); // even: index (n-1)/2
}

TEST_CASE("splitmix64 known stream from seed 0") {
  num::SplitMix64 rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next() == 0x06c45d188009454fULL);
  CHECK(rng.next() == 0xf88bb8a8724c81ecULL);
}

TEST_CASE("splitmix64 unit doubles land in [0,1) and are reproducible") {
  num::SplitMix64 a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) {
    double u = a.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.next_unit());
  }
}

TEST_CASE("halton van der Corput values") {
  CHECK(num::halton(0, 2) == 0.5);
  CHECK(num::halton(1, 2) == 0.25);
  CHECK(num::halton(2, 2) == 0.75);
  CHECK(num::halton(3, 2) == 0.125);
  CHECK(num::halton(0, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(num::halton(1, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(num::halton(0, 1), OutOfRange);
  for (int i = 0; i < 64; ++i) {
    double u = num::halton(static_cast<std::uint64_t>(i), 5);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
