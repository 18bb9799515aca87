#pragma once

// Shared internals for the kernel variants. The scalar cores below are the
// single source of truth for per-element semantics; the AVX2 translation
// unit mirrors each operation instruction-for-instruction (same fma
// contraction, same rounding) so both backends agree bitwise.

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace leafpress::kernels::detail {

// Degree-12 Taylor polynomial of cos(2*pi*u) in v = u^2, valid on u in
// [0, 1/4]; truncation tail at u = 1/4 is ~3.1e-22, far below double
// rounding. Coefficients c_k = (-1)^k (2*pi)^(2k) / (2k)! rounded to nearest
// double, frozen as hex literals.
inline constexpr double kCos2PiC[13] = {
    0x1.0000000000000p+0,   //  1.0
    -0x1.3bd3cc9be45dep+4,  // -19.73920880217871723767
    0x1.03c1f081b5ac4p+6,   //  64.93939402266829149096
    -0x1.55d3c7e3cbffap+6,  // -85.45681720669372773602
    0x1.e1f506891babbp+5,   //  60.24464137187666036272
    -0x1.a6d1f2a204a8cp+4,  // -26.4262567833743974529
    0x1.f9d38a3763cc3p+2,   //  7.903536371318468804212
    -0x1.b6e24f44b128fp+0,  // -1.714390711088672065422
    0x1.20c62c2f2d7f5p-2,   //  0.2820059684557912150703
    -0x1.2a0c591af8314p-5,  // -0.03638284114254567077175
    0x1.ef6e308d6d1c4p-9,   //  0.003779834200680039379223
    -0x1.52ae4120fde27p-12, // -0.0003229910672070977888626
    0x1.838d8f4321800p-16,  //  0.0000230999569450704431236
};

inline double wrap1(double x) {
  double y = x - std::floor(x);
  // x slightly below an integer can round y up to exactly 1.0; fold it back.
  if (y >= 1.0) y -= 1.0;
  return y;
}

inline double cos1(double x) {
  // Range-reduce to r in [-0.5, 0.5] (round-half-even), fold to [0, 0.25].
  double r = x - std::nearbyint(x);
  double a = std::fabs(r);
  bool flip = a > 0.25;
  double u = flip ? 0.5 - a : a;  // 0.5 - a is exact (Sterbenz) for a in (1/4, 1/2]
  double v = u * u;
  double p = kCos2PiC[12];
  for (int k = 11; k >= 0; --k) p = std::fma(p, v, kCos2PiC[k]);
  return flip ? -p : p;
}

inline void affine_row_2d(double m0, double m1, double x0, double x1,
                          double& out) {
  out = wrap1(std::fma(m0, x0, m1 * x1));
}

inline void affine_row_3d(double m0, double m1, double m2, double x0,
                          double x1, double x2, double& out) {
  out = wrap1(std::fma(m0, x0, std::fma(m1, x1, m2 * x2)));
}

inline std::int32_t cell_axis(double x, double dcells, std::int32_t cells) {
  // Inputs live in [0,1); truncation equals floor for non-negative values.
  auto i = static_cast<std::int32_t>(x * dcells);
  if (i < 0) i = 0;
  if (i > cells - 1) i = cells - 1;
  return i;
}

}  // namespace leafpress::kernels::detail

// AVX2 entry points, compiled with per-function target attributes on x86-64.
#if defined(__x86_64__) || defined(__i386__)
#define LEAFPRESS_HAVE_X86 1
namespace leafpress::kernels::detail {
void wrap_unit_avx2(double* x, std::size_t n);
void affine_step_2d_avx2(double* x0, double* x1, std::size_t n,
                         const double m[4]);
void affine_step_3d_avx2(double* x0, double* x1, double* x2, std::size_t n,
                         const double m[9]);
void cos2pi_avx2(const double* x, double* out, std::size_t n);
void accumulate_cos2pi_avx2(const double* x, double* acc, std::size_t n);
void cell_index_2d_avx2(const double* x0, const double* x1, std::size_t n,
                        std::int32_t cells, std::int32_t* out);
void cell_index_3d_avx2(const double* x0, const double* x1, const double* x2,
                        std::size_t n, std::int32_t cells, std::int32_t* out);
std::size_t count_mismatch_i32_avx2(const std::int32_t* a,
                                    const std::int32_t* b, std::size_t n);
void du_row_avx2(const double* t, std::size_t n, double tc, double scale,
                 double* out);
}  // namespace leafpress::kernels::detail
#else
#define LEAFPRESS_HAVE_X86 0
#endif
