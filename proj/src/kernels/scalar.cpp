#include "leafpress/kernels.hpp"

#include "kernels_detail.hpp"

namespace leafpress::kernels::detail {

void wrap_unit_scalar(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = wrap1(x[i]);
}

void affine_step_2d_scalar(double* x0, double* x1, std::size_t n,
                           const double m[4]) {
  for (std::size_t i = 0; i < n; ++i) {
    double a = x0[i], b = x1[i], r0, r1;
    affine_row_2d(m[0], m[1], a, b, r0);
    affine_row_2d(m[2], m[3], a, b, r1);
    x0[i] = r0;
    x1[i] = r1;
  }
}

void affine_step_3d_scalar(double* x0, double* x1, double* x2, std::size_t n,
                           const double m[9]) {
  for (std::size_t i = 0; i < n; ++i) {
    double a = x0[i], b = x1[i], c = x2[i], r0, r1, r2;
    affine_row_3d(m[0], m[1], m[2], a, b, c, r0);
    affine_row_3d(m[3], m[4], m[5], a, b, c, r1);
    affine_row_3d(m[6], m[7], m[8], a, b, c, r2);
    x0[i] = r0;
    x1[i] = r1;
    x2[i] = r2;
  }
}

void cos2pi_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = cos1(x[i]);
}

void accumulate_cos2pi_scalar(const double* x, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + cos1(x[i]);
}

void cell_index_2d_scalar(const double* x0, const double* x1, std::size_t n,
                          std::int32_t cells, std::int32_t* out) {
  const double dc = static_cast<double>(cells);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = cell_axis(x0[i], dc, cells) * cells + cell_axis(x1[i], dc, cells);
}

void cell_index_3d_scalar(const double* x0, const double* x1, const double* x2,
                          std::size_t n, std::int32_t cells,
                          std::int32_t* out) {
  const double dc = static_cast<double>(cells);
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t id = cell_axis(x0[i], dc, cells);
    id = id * cells + cell_axis(x1[i], dc, cells);
    id = id * cells + cell_axis(x2[i], dc, cells);
    out[i] = id;
  }
}

std::size_t count_mismatch_i32_scalar(const std::int32_t* a,
                                      const std::int32_t* b, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (a[i] != b[i]) ? 1 : 0;
  return c;
}

void du_row_scalar(const double* t, std::size_t n, double tc, double scale,
                   double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(t[i] - tc) * scale;
}

double wrap_unit_one(double x) { return wrap1(x); }
double cos2pi_one(double x) { return cos1(x); }

}  // namespace leafpress::kernels::detail
