#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace leafpress::kernels {

// Batch kernels over contiguous arrays (structure-of-arrays layout). Each has
// a scalar reference implementation and, on x86-64 with AVX2+FMA, a vector
// implementation selected at runtime. The two variants are bit-identical per
// element by construction (same polynomial, same fma contraction, same
// rounding modes), which the test suite checks exhaustively across
// lane-boundary sizes.

enum class Backend { Scalar, Avx2 };

// True when the running CPU supports the AVX2+FMA variants.
bool avx2_supported();

// Currently active backend / its printable name.
Backend active_backend();
std::string backend_name();

// Force a backend (throws leafpress::Error if unsupported on this CPU).
// The environment variable LEAFPRESS_KERNEL=scalar|avx2 applies the same
// override at startup.
void set_backend(Backend b);

// x[i] <- x[i] - floor(x[i]), result in [0,1). Values that round up to 1.0
// are folded back to 0.0.
void wrap_unit(double* x, std::size_t n);

// One linear step on the 2-torus: (x0,x1) <- M*(x0,x1) mod 1 with M given
// row-major. Uses fma(m00, x0, m01*x1) per row.
void affine_step_2d(double* x0, double* x1, std::size_t n, const double m[4]);

// Same on the 3-torus with row-major 3x3 matrix:
// row = fma(m0, x0, fma(m1, x1, m2*x2)), then wrap.
void affine_step_3d(double* x0, double* x1, double* x2, std::size_t n,
                    const double m[9]);

// out[i] = cos(2*pi*x[i]) via exact range reduction to [0,1/4] and a fixed
// degree-24 Taylor polynomial; error a few ulp over the whole line, exact at
// integers and half-integers, |result| <= ~1e-16 at quarter-integers.
void cos2pi(const double* x, double* out, std::size_t n);

// acc[i] += cos(2*pi*x[i]).
void accumulate_cos2pi(const double* x, double* acc, std::size_t n);

// Flattened cell index of points on the unit 2-/3-torus for an axis-aligned
// grid with `cells` cells per axis: id = (i0*cells + i1) [*cells + i2],
// i_k = clamp(trunc(x_k*cells), 0, cells-1). Inputs must lie in [0,1).
void cell_index_2d(const double* x0, const double* x1, std::size_t n,
                   std::int32_t cells, std::int32_t* out);
void cell_index_3d(const double* x0, const double* x1, const double* x2,
                   std::size_t n, std::int32_t cells, std::int32_t* out);

// Number of positions i with a[i] != b[i].
std::size_t count_mismatch_i32(const std::int32_t* a, const std::int32_t* b,
                               std::size_t n);

// out[i] = |t[i] - tc| * scale  (leaf-chart distance row at a fixed depth).
void du_row(const double* t, std::size_t n, double tc, double scale,
            double* out);

namespace detail {
// Scalar reference entry points (always available; used for vector tails and
// by single-point call sites that must agree bit-for-bit with batch runs).
void wrap_unit_scalar(double* x, std::size_t n);
void affine_step_2d_scalar(double* x0, double* x1, std::size_t n,
                           const double m[4]);
void affine_step_3d_scalar(double* x0, double* x1, double* x2, std::size_t n,
                           const double m[9]);
void cos2pi_scalar(const double* x, double* out, std::size_t n);
void accumulate_cos2pi_scalar(const double* x, double* acc, std::size_t n);
void cell_index_2d_scalar(const double* x0, const double* x1, std::size_t n,
                          std::int32_t cells, std::int32_t* out);
void cell_index_3d_scalar(const double* x0, const double* x1, const double* x2,
                          std::size_t n, std::int32_t cells, std::int32_t* out);
std::size_t count_mismatch_i32_scalar(const std::int32_t* a,
                                      const std::int32_t* b, std::size_t n);
void du_row_scalar(const double* t, std::size_t n, double tc, double scale,
                   double* out);

double wrap_unit_one(double x);
double cos2pi_one(double x);
}  // namespace detail

}  // namespace leafpress::kernels
