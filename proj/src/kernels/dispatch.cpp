#include "leafpress/kernels.hpp"

#include <cstdlib>
#include <string>

#include "kernels_detail.hpp"
#include "leafpress/errors.hpp"

namespace leafpress::kernels {

namespace {

struct VTable {
  Backend backend;
  void (*wrap_unit)(double*, std::size_t);
  void (*affine_step_2d)(double*, double*, std::size_t, const double*);
  void (*affine_step_3d)(double*, double*, double*, std::size_t,
                         const double*);
  void (*cos2pi)(const double*, double*, std::size_t);
  void (*accumulate_cos2pi)(const double*, double*, std::size_t);
  void (*cell_index_2d)(const double*, const double*, std::size_t,
                        std::int32_t, std::int32_t*);
  void (*cell_index_3d)(const double*, const double*, const double*,
                        std::size_t, std::int32_t, std::int32_t*);
  std::size_t (*count_mismatch_i32)(const std::int32_t*, const std::int32_t*,
                                    std::size_t);
  void (*du_row)(const double*, std::size_t, double, double, double*);
};

VTable scalar_vtable() {
  using namespace detail;
  return {Backend::Scalar,        wrap_unit_scalar,
          affine_step_2d_scalar,  affine_step_3d_scalar,
          cos2pi_scalar,          accumulate_cos2pi_scalar,
          cell_index_2d_scalar,   cell_index_3d_scalar,
          count_mismatch_i32_scalar, du_row_scalar};
}

#if LEAFPRESS_HAVE_X86
VTable avx2_vtable() {
  using namespace detail;
  return {Backend::Avx2,        wrap_unit_avx2,
          affine_step_2d_avx2,  affine_step_3d_avx2,
          cos2pi_avx2,          accumulate_cos2pi_avx2,
          cell_index_2d_avx2,   cell_index_3d_avx2,
          count_mismatch_i32_avx2, du_row_avx2};
}
#endif

VTable initial_vtable() {
  bool want_avx2 = avx2_supported();
  // LEAFPRESS_KERNEL=scalar|avx2 overrides autodetection; an unsupported
  // request falls back to scalar rather than aborting at startup.
  if (const char* env = std::getenv("LEAFPRESS_KERNEL")) {
    std::string s(env);
    if (s == "scalar") want_avx2 = false;
    else if (s == "avx2") want_avx2 = want_avx2 && true;
  }
#if LEAFPRESS_HAVE_X86
  if (want_avx2) return avx2_vtable();
#endif
  return scalar_vtable();
}

VTable& vt() {
  static VTable table = initial_vtable();
  return table;
}

}  // namespace

bool avx2_supported() {
#if LEAFPRESS_HAVE_X86
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return vt().backend; }

std::string backend_name() {
  return vt().backend == Backend::Avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
  if (b == Backend::Avx2) {
    if (!avx2_supported())
      throw Error("kernel backend avx2 not supported on this CPU");
#if LEAFPRESS_HAVE_X86
    vt() = avx2_vtable();
#endif
    return;
  }
  vt() = scalar_vtable();
}

void wrap_unit(double* x, std::size_t n) { vt().wrap_unit(x, n); }

void affine_step_2d(double* x0, double* x1, std::size_t n, const double m[4]) {
  vt().affine_step_2d(x0, x1, n, m);
}

void affine_step_3d(double* x0, double* x1, double* x2, std::size_t n,
                    const double m[9]) {
  vt().affine_step_3d(x0, x1, x2, n, m);
}

void cos2pi(const double* x, double* out, std::size_t n) {
  vt().cos2pi(x, out, n);
}

void accumulate_cos2pi(const double* x, double* acc, std::size_t n) {
  vt().accumulate_cos2pi(x, acc, n);
}

void cell_index_2d(const double* x0, const double* x1, std::size_t n,
                   std::int32_t cells, std::int32_t* out) {
  vt().cell_index_2d(x0, x1, n, cells, out);
}

void cell_index_3d(const double* x0, const double* x1, const double* x2,
                   std::size_t n, std::int32_t cells, std::int32_t* out) {
  vt().cell_index_3d(x0, x1, x2, n, cells, out);
}

std::size_t count_mismatch_i32(const std::int32_t* a, const std::int32_t* b,
                               std::size_t n) {
  return vt().count_mismatch_i32(a, b, n);
}

void du_row(const double* t, std::size_t n, double tc, double scale,
            double* out) {
  vt().du_row(t, n, tc, scale, out);
}

}  // namespace leafpress::kernels
