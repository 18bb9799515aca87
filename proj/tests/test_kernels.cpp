#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "leafpress/errors.hpp"
#include "leafpress/kernels.hpp"
#include "leafpress/numerics.hpp"

using namespace leafpress;
namespace kd = leafpress::kernels::detail;

namespace {

std::vector<double> random_doubles(std::size_t n, double lo, double hi,
                                   std::uint64_t seed) {
  num::SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.next_unit();
  return v;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return a.empty() ||
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Sizes straddling every 4- and 8-lane boundary plus a large block.
const std::vector<std::size_t> kSizes = [] {
  std::vector<std::size_t> s;
  for (std::size_t n = 0; n <= 67; ++n) s.push_back(n);
  s.push_back(1024);
  s.push_back(1027);
  return s;
}();

}  // namespace

TEST_CASE("scalar single-value helpers") {
  CHECK(kd::wrap_unit_one(0.0) == 0.0);
  CHECK(kd::wrap_unit_one(2.5) == 0.5);
  CHECK(kd::wrap_unit_one(-0.25) == 0.75);
  CHECK(kd::wrap_unit_one(-1e-17) == 0.0);  // rounds to 1.0, folds to 0.0
  CHECK(kd::wrap_unit_one(1.0) == 0.0);
  for (double x : random_doubles(200, -5.0, 5.0, 7)) {
    double y = kd::wrap_unit_one(x);
    CHECK(y >= 0.0);
    CHECK(y < 1.0);
  }

  CHECK(kd::cos2pi_one(0.0) == 1.0);
  CHECK(kd::cos2pi_one(1.0) == 1.0);
  CHECK(kd::cos2pi_one(-2.0) == 1.0);
  CHECK(kd::cos2pi_one(0.5) == -1.0);
  CHECK(kd::cos2pi_one(-0.5) == -1.0);
  CHECK(std::fabs(kd::cos2pi_one(0.25)) <= 1e-15);
  CHECK(std::fabs(kd::cos2pi_one(0.75)) <= 1e-15);
}

TEST_CASE("cos2pi accuracy against libm") {
  for (double x : random_doubles(5000, -100.0, 100.0, 11)) {
    double got = kd::cos2pi_one(x);
    double want = std::cos(2.0 * M_PI * x);
    CHECK(std::fabs(got - want) <= 5e-13);  // includes libm argument rounding
    CHECK(got >= -1.0);
    CHECK(got <= 1.0);
  }
  // Evenness is exact: the reduction uses |r|.
  for (double x : random_doubles(100, 0.0, 3.0, 13)) {
    CHECK(kd::cos2pi_one(x) == kd::cos2pi_one(-x));
  }
}

TEST_CASE("cell index semantics") {
  const std::int32_t cells = 4;
  std::vector<double> x0{0.0, 0.999999999, 0.25, 0.5};
  std::vector<double> x1{0.0, 0.999999999, 0.75, 0.49};
  std::vector<std::int32_t> out(4);
  kernels::cell_index_2d(x0.data(), x1.data(), 4, cells, out.data());
  CHECK(out[0] == 0);
  CHECK(out[1] == 3 * 4 + 3);
  CHECK(out[2] == 1 * 4 + 3);
  CHECK(out[3] == 2 * 4 + 1);

  std::vector<double> x2{0.1, 0.9, 0.3, 0.7};
  std::vector<std::int32_t> out3(4);
  kernels::cell_index_3d(x0.data(), x1.data(), x2.data(), 4, cells,
                         out3.data());
  CHECK(out3[0] == (0 * 4 + 0) * 4 + 0);
  CHECK(out3[1] == (3 * 4 + 3) * 4 + 3);
}

TEST_CASE("count_mismatch_i32") {
  std::vector<std::int32_t> a{1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<std::int32_t> b{1, 0, 3, 0, 5, 6, 0, 8, 0};
  CHECK(kernels::count_mismatch_i32(a.data(), b.data(), a.size()) == 4);
  CHECK(kernels::count_mismatch_i32(a.data(), a.data(), a.size()) == 0);
  CHECK(kernels::count_mismatch_i32(a.data(), b.data(), 0) == 0);
}

TEST_CASE("du_row matches the elementwise formula") {
  auto t = random_doubles(37, -0.5, 0.5, 17);
  std::vector<double> out(t.size());
  kernels::du_row(t.data(), t.size(), 0.125, 6.854, out.data());
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(out[i] == std::fabs(t[i] - 0.125) * 6.854);
}

TEST_CASE("affine_step_2d agrees with a plain matrix step") {
  const double m[4] = {2.0, 1.0, 1.0, 1.0};
  auto a = random_doubles(50, 0.0, 1.0, 19);
  auto b = random_doubles(50, 0.0, 1.0, 23);
  auto x0 = a, x1 = b;
  kernels::affine_step_2d(x0.data(), x1.data(), x0.size(), m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double r0 = std::fma(m[0], a[i], m[1] * b[i]);
    double r1 = std::fma(m[2], a[i], m[3] * b[i]);
    CHECK(x0[i] == kd::wrap_unit_one(r0));
    CHECK(x1[i] == kd::wrap_unit_one(r1));
  }
}

TEST_CASE("backend switching") {
  auto original = kernels::active_backend();
  kernels::set_backend(kernels::Backend::Scalar);
  CHECK(kernels::backend_name() == "scalar");
  if (kernels::avx2_supported()) {
    kernels::set_backend(kernels::Backend::Avx2);
    CHECK(kernels::backend_name() == "avx2");
  } else {
    CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::Avx2), Error);
  }
  kernels::set_backend(original);
}

TEST_CASE("scalar and avx2 backends are bit-identical") {
  if (!kernels::avx2_supported()) {
    MESSAGE("AVX2 not available; equivalence suite skipped");
    return;
  }
  const double m2[4] = {2.0, 1.0, 1.0, 1.0};
  const double m3[9] = {2.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0};

  for (std::size_t n : kSizes) {
    auto base0 = random_doubles(n, -3.0, 3.0, 100 + n);
    auto base1 = random_doubles(n, 0.0, 1.0, 200 + n);
    auto base2 = random_doubles(n, 0.0, 1.0, 300 + n);
    auto baseT = random_doubles(n, -0.5, 0.5, 400 + n);
    auto baseBig = random_doubles(n, -1e6, 1e6, 500 + n);

    // wrap_unit
    {
      auto s = base0, v = base0;
      kd::wrap_unit_scalar(s.data(), n);
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::wrap_unit(v.data(), n);
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(bits_equal(s, v));
    }
    // affine 2d / 3d
    {
      auto s0 = base1, s1 = base2, v0 = base1, v1 = base2;
      kd::affine_step_2d_scalar(s0.data(), s1.data(), n, m2);
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::affine_step_2d(v0.data(), v1.data(), n, m2);
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(bits_equal(s0, v0));
      CHECK(bits_equal(s1, v1));
    }
    {
      auto s0 = base1, s1 = base2, s2 = base1, v0 = base1, v1 = base2,
           v2 = base1;
      kd::affine_step_3d_scalar(s0.data(), s1.data(), s2.data(), n, m3);
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::affine_step_3d(v0.data(), v1.data(), v2.data(), n, m3);
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(bits_equal(s0, v0));
      CHECK(bits_equal(s1, v1));
      CHECK(bits_equal(s2, v2));
    }
    // cos2pi / accumulate
    {
      std::vector<double> s(n), v(n);
      kd::cos2pi_scalar(baseBig.data(), s.data(), n);
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::cos2pi(baseBig.data(), v.data(), n);
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(bits_equal(s, v));

      auto accS = base0, accV = base0;
      kd::accumulate_cos2pi_scalar(baseBig.data(), accS.data(), n);
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::accumulate_cos2pi(baseBig.data(), accV.data(), n);
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(bits_equal(accS, accV));
    }
    // cell indices
    {
      std::vector<std::int32_t> s(n), v(n);
      kd::cell_index_2d_scalar(base1.data(), base2.data(), n, 7, s.data());
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::cell_index_2d(base1.data(), base2.data(), n, 7, v.data());
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(s == v);

      auto b3 = random_doubles(n, 0.0, 1.0, 600 + n);
      kd::cell_index_3d_scalar(base1.data(), base2.data(), b3.data(), n, 5,
                               s.data());
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::cell_index_3d(base1.data(), base2.data(), b3.data(), n, 5,
                             v.data());
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(s == v);
    }
    // mismatch count
    {
      std::vector<std::int32_t> a(n), b(n);
      num::SplitMix64 rng(700 + n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = static_cast<std::int32_t>(rng.next() % 4);
        b[i] = static_cast<std::int32_t>(rng.next() % 4);
      }
      auto cs = kd::count_mismatch_i32_scalar(a.data(), b.data(), n);
      kernels::set_backend(kernels::Backend::Avx2);
      auto cv = kernels::count_mismatch_i32(a.data(), b.data(), n);
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(cs == cv);
    }
    // du_row
    {
      std::vector<double> s(n), v(n);
      kd::du_row_scalar(baseT.data(), n, 0.1, 2206.9995, s.data());
      kernels::set_backend(kernels::Backend::Avx2);
      kernels::du_row(baseT.data(), n, 0.1, 2206.9995, v.data());
      kernels::set_backend(kernels::Backend::Scalar);
      CHECK(bits_equal(s, v));
    }
  }
  // leave the autodetected backend in place for other tests
  kernels::set_backend(kernels::avx2_supported() ? kernels::Backend::Avx2
                                                 : kernels::Backend::Scalar);
}
