#include "kernels_detail.hpp"
#include "leafpress/kernels.hpp"

#if LEAFPRESS_HAVE_X86

#include <immintrin.h>

// Every function here carries a per-function target attribute, so the file
// builds without global -mavx2 and the binary stays runnable on any x86-64;
// dispatch only routes here after a CPUID check.
#define LEAFPRESS_AVX2 __attribute__((target("avx2,fma")))

namespace leafpress::kernels::detail {

namespace {

LEAFPRESS_AVX2 inline __m256d wrap_unit_v(__m256d x) {
  __m256d y = _mm256_sub_pd(
      x, _mm256_round_pd(x, _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC));
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d ge1 = _mm256_cmp_pd(y, one, _CMP_GE_OQ);
  return _mm256_sub_pd(y, _mm256_and_pd(ge1, one));
}

LEAFPRESS_AVX2 inline __m256d cos2pi_v(__m256d x) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d r = _mm256_sub_pd(
      x, _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
  __m256d a = _mm256_andnot_pd(sign, r);
  __m256d flip = _mm256_cmp_pd(a, _mm256_set1_pd(0.25), _CMP_GT_OQ);
  __m256d u =
      _mm256_blendv_pd(a, _mm256_sub_pd(_mm256_set1_pd(0.5), a), flip);
  __m256d v = _mm256_mul_pd(u, u);
  __m256d p = _mm256_set1_pd(kCos2PiC[12]);
  for (int k = 11; k >= 0; --k)
    p = _mm256_fmadd_pd(p, v, _mm256_set1_pd(kCos2PiC[k]));
  return _mm256_blendv_pd(p, _mm256_xor_pd(p, sign), flip);
}

LEAFPRESS_AVX2 inline __m128i cell_axis_v(__m256d x, __m256d dc,
                                          __m128i cells_m1) {
  __m128i i = _mm256_cvttpd_epi32(_mm256_mul_pd(x, dc));
  i = _mm_max_epi32(i, _mm_setzero_si128());
  return _mm_min_epi32(i, cells_m1);
}

}  // namespace

LEAFPRESS_AVX2 void wrap_unit_avx2(double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, wrap_unit_v(_mm256_loadu_pd(x + i)));
  wrap_unit_scalar(x + i, n - i);
}

LEAFPRESS_AVX2 void affine_step_2d_avx2(double* x0, double* x1, std::size_t n,
                                        const double m[4]) {
  const __m256d m00 = _mm256_set1_pd(m[0]), m01 = _mm256_set1_pd(m[1]);
  const __m256d m10 = _mm256_set1_pd(m[2]), m11 = _mm256_set1_pd(m[3]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(x0 + i), b = _mm256_loadu_pd(x1 + i);
    __m256d r0 = _mm256_fmadd_pd(m00, a, _mm256_mul_pd(m01, b));
    __m256d r1 = _mm256_fmadd_pd(m10, a, _mm256_mul_pd(m11, b));
    _mm256_storeu_pd(x0 + i, wrap_unit_v(r0));
    _mm256_storeu_pd(x1 + i, wrap_unit_v(r1));
  }
  affine_step_2d_scalar(x0 + i, x1 + i, n - i, m);
}

LEAFPRESS_AVX2 void affine_step_3d_avx2(double* x0, double* x1, double* x2,
                                        std::size_t n, const double m[9]) {
  __m256d mv[9];
  for (int k = 0; k < 9; ++k) mv[k] = _mm256_set1_pd(m[k]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(x0 + i), b = _mm256_loadu_pd(x1 + i),
            c = _mm256_loadu_pd(x2 + i);
    __m256d r0 = _mm256_fmadd_pd(
        mv[0], a, _mm256_fmadd_pd(mv[1], b, _mm256_mul_pd(mv[2], c)));
    __m256d r1 = _mm256_fmadd_pd(
        mv[3], a, _mm256_fmadd_pd(mv[4], b, _mm256_mul_pd(mv[5], c)));
    __m256d r2 = _mm256_fmadd_pd(
        mv[6], a, _mm256_fmadd_pd(mv[7], b, _mm256_mul_pd(mv[8], c)));
    _mm256_storeu_pd(x0 + i, wrap_unit_v(r0));
    _mm256_storeu_pd(x1 + i, wrap_unit_v(r1));
    _mm256_storeu_pd(x2 + i, wrap_unit_v(r2));
  }
  affine_step_3d_scalar(x0 + i, x1 + i, x2 + i, n - i, m);
}

LEAFPRESS_AVX2 void cos2pi_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, cos2pi_v(_mm256_loadu_pd(x + i)));
  cos2pi_scalar(x + i, out + i, n - i);
}

LEAFPRESS_AVX2 void accumulate_cos2pi_avx2(const double* x, double* acc,
                                           std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(acc + i),
                              cos2pi_v(_mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(acc + i, s);
  }
  accumulate_cos2pi_scalar(x + i, acc + i, n - i);
}

LEAFPRESS_AVX2 void cell_index_2d_avx2(const double* x0, const double* x1,
                                       std::size_t n, std::int32_t cells,
                                       std::int32_t* out) {
  const __m256d dc = _mm256_set1_pd(static_cast<double>(cells));
  const __m128i cm1 = _mm_set1_epi32(cells - 1);
  const __m128i cv = _mm_set1_epi32(cells);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i i0 = cell_axis_v(_mm256_loadu_pd(x0 + i), dc, cm1);
    __m128i i1 = cell_axis_v(_mm256_loadu_pd(x1 + i), dc, cm1);
    __m128i id = _mm_add_epi32(_mm_mullo_epi32(i0, cv), i1);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), id);
  }
  cell_index_2d_scalar(x0 + i, x1 + i, n - i, cells, out + i);
}

LEAFPRESS_AVX2 void cell_index_3d_avx2(const double* x0, const double* x1,
                                       const double* x2, std::size_t n,
                                       std::int32_t cells, std::int32_t* out) {
  const __m256d dc = _mm256_set1_pd(static_cast<double>(cells));
  const __m128i cm1 = _mm_set1_epi32(cells - 1);
  const __m128i cv = _mm_set1_epi32(cells);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i i0 = cell_axis_v(_mm256_loadu_pd(x0 + i), dc, cm1);
    __m128i i1 = cell_axis_v(_mm256_loadu_pd(x1 + i), dc, cm1);
    __m128i i2 = cell_axis_v(_mm256_loadu_pd(x2 + i), dc, cm1);
    __m128i id = _mm_add_epi32(_mm_mullo_epi32(i0, cv), i1);
    id = _mm_add_epi32(_mm_mullo_epi32(id, cv), i2);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), id);
  }
  cell_index_3d_scalar(x0 + i, x1 + i, x2 + i, n - i, cells, out + i);
}

LEAFPRESS_AVX2 std::size_t count_mismatch_i32_avx2(const std::int32_t* a,
                                                   const std::int32_t* b,
                                                   std::size_t n) {
  std::size_t c = 0, i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    int eq = _mm256_movemask_ps(
        _mm256_castsi256_ps(_mm256_cmpeq_epi32(va, vb)));
    c += 8 - static_cast<std::size_t>(__builtin_popcount(eq & 0xff));
  }
  return c + count_mismatch_i32_scalar(a + i, b + i, n - i);
}

LEAFPRESS_AVX2 void du_row_avx2(const double* t, std::size_t n, double tc,
                                double scale, double* out) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d tcv = _mm256_set1_pd(tc);
  const __m256d sv = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(t + i), tcv);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_andnot_pd(sign, d), sv));
  }
  du_row_scalar(t + i, n - i, tc, scale, out + i);
}

}  // namespace leafpress::kernels::detail

#endif  // LEAFPRESS_HAVE_X86
