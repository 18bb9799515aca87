#include "leafpress/dynamics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "leafpress/errors.hpp"
#include "leafpress/kernels.hpp"
#include "leafpress/numerics.hpp"

namespace leafpress {

namespace {

constexpr double kSepTol = 1e-9;

std::int64_t int_det(const std::vector<std::vector<std::int64_t>>& m) {
  if (m.size() == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::array<double, 3> unit_signed(Eigen::VectorXd v) {
  v.normalize();
  int arg = 0;
  for (int i = 1; i < v.size(); ++i)
    if (std::fabs(v[i]) > std::fabs(v[arg])) arg = i;
  if (v[arg] < 0.0) v = -v;
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
  return out;
}

}  // namespace

double LinearPHModel::unstable_stretch(int k) const {
  if (k < 0) throw OutOfRange("unstable_stretch: negative power");
  double s = 1.0;
  for (int i = 0; i < k; ++i) s *= lambda_u_;
  return s;
}

LinearPHModel build_linear_model(
    const std::vector<std::vector<std::int64_t>>& matrix) {
  const int d = static_cast<int>(matrix.size());
  if (d != 2 && d != 3)
    throw UnsupportedDimension("matrix must be 2x2 or 3x3, got " +
                               std::to_string(d) + " rows");
  for (const auto& row : matrix)
    if (static_cast<int>(row.size()) != d)
      throw LengthMismatch("matrix row length differs from row count");

  std::int64_t det = int_det(matrix);
  if (det != 1 && det != -1)
    throw NotUnimodular("determinant is " + std::to_string(det) +
                        ", must be +1 or -1");

  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      A(i, j) = static_cast<double>(matrix[static_cast<std::size_t>(i)]
                                          [static_cast<std::size_t>(j)]);

  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw Error("eigendecomposition failed to converge");

  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  auto modulus = [&](int i) { return std::abs(es.eigenvalues()[i]); };
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return modulus(a) < modulus(b); });

  const int top = order.back();
  const auto lam_top = es.eigenvalues()[top];
  if (std::fabs(lam_top.imag()) > kSepTol * std::abs(lam_top))
    throw ComplexUnstable("dominant eigenvalue " +
                          std::to_string(lam_top.real()) + " + " +
                          std::to_string(lam_top.imag()) +
                          "i is not real");

  for (int i = 0; i + 1 < d; ++i)
    if (modulus(order[static_cast<std::size_t>(i + 1)]) -
            modulus(order[static_cast<std::size_t>(i)]) <=
        kSepTol)
      throw NotPartiallyHyperbolic(
          "eigenvalue moduli are not strictly separated");
  if (modulus(order.back()) <= 1.0 + kSepTol)
    throw NotPartiallyHyperbolic("no expanding direction: largest modulus " +
                                 std::to_string(modulus(order.back())));
  if (modulus(order.front()) >= 1.0 - kSepTol)
    throw NotPartiallyHyperbolic("no contracting direction: smallest modulus " +
                                 std::to_string(modulus(order.front())));

  LinearPHModel m;
  m.dim_ = d;
  m.rows_ = matrix;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m.dmat_[static_cast<std::size_t>(i * d + j)] = A(i, j);

  m.lambda_u_ = modulus(order.back());
  m.lambda_s_ = modulus(order.front());
  m.lambda_c_ = d == 3 ? modulus(order[1])
                       : std::numeric_limits<double>::quiet_NaN();
  m.log_lambda_u_ = std::log(m.lambda_u_);

  auto pick_dir = [&](int which) {
    Eigen::VectorXcd vc = es.eigenvectors().col(which);
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = vc[i].real();
    auto dir = unit_signed(v);
    // Residual check |A v - lambda v|_inf; all retained eigenvalues are real.
    double lam = es.eigenvalues()[which].real();
    Eigen::VectorXd vv(d);
    for (int i = 0; i < d; ++i) vv[i] = dir[static_cast<std::size_t>(i)];
    double resid = (A * vv - lam * vv).cwiseAbs().maxCoeff();
    if (resid > 1e-9)
      throw Error("eigenvector residual too large: " + std::to_string(resid));
    return dir;
  };
  m.dir_u_ = pick_dir(order.back());
  m.dir_s_ = pick_dir(order.front());
  if (d == 3) m.dir_c_ = pick_dir(order[1]);
  return m;
}

TorusPoint make_point2(double a, double b) {
  namespace kd = kernels::detail;
  TorusPoint p;
  p.dim = 2;
  p.x = {kd::wrap_unit_one(a), kd::wrap_unit_one(b), 0.0};
  return p;
}

TorusPoint make_point3(double a, double b, double c) {
  namespace kd = kernels::detail;
  TorusPoint p;
  p.dim = 3;
  p.x = {kd::wrap_unit_one(a), kd::wrap_unit_one(b), kd::wrap_unit_one(c)};
  return p;
}

TorusPoint iterate(const LinearPHModel& model, TorusPoint p, int k) {
  if (k < 0) throw OutOfRange("iterate: negative step count");
  if (p.dim != model.dim())
    throw LengthMismatch("point dimension differs from model dimension");
  // Runs through the batch kernels with n == 1, so a point orbit agrees
  // bit-for-bit with the same point inside a batched array.
  if (model.dim() == 2) {
    for (int s = 0; s < k; ++s)
      kernels::affine_step_2d(&p.x[0], &p.x[1], 1, model.dmatrix());
  } else {
    for (int s = 0; s < k; ++s)
      kernels::affine_step_3d(&p.x[0], &p.x[1], &p.x[2], 1, model.dmatrix());
  }
  return p;
}

double unstable_cocycle_norm(const LinearPHModel& model, const TorusPoint& p,
                             int n) {
  if (n < 0) throw OutOfRange("unstable_cocycle_norm: negative depth");
  if (p.dim != model.dim())
    throw LengthMismatch("point dimension differs from model dimension");
  return static_cast<double>(n) * model.log_lambda_u();
}

LeafPatch sample_leaf_patch(const LinearPHModel& model, const TorusPoint& base,
                            double delta, int K, PatchScheme scheme,
                            std::uint64_t seed) {
  if (!(delta > 0.0) || delta > 0.5)
    throw BadRadius("patch half-length must lie in (0, 1/2], got " +
                    std::to_string(delta));
  if (K < 2) throw BadPatch("patch needs at least 2 samples, got " +
                            std::to_string(K));
  if (base.dim != model.dim())
    throw LengthMismatch("base dimension differs from model dimension");

  LeafPatch patch;
  patch.base = base;
  patch.dir = model.unstable_dir();
  patch.delta = delta;
  patch.scheme = scheme;
  patch.seed = seed;
  patch.t.resize(static_cast<std::size_t>(K));
  patch.w.assign(static_cast<std::size_t>(K), 1.0 / static_cast<double>(K));
  if (scheme == PatchScheme::UniformGrid) {
    for (int i = 0; i < K; ++i)
      patch.t[static_cast<std::size_t>(i)] =
          -delta + (2.0 * delta * static_cast<double>(i)) /
                       static_cast<double>(K - 1);
  } else {
    num::SplitMix64 rng(seed);
    for (int i = 0; i < K; ++i)
      patch.t[static_cast<std::size_t>(i)] =
          -delta + (2.0 * delta) * (static_cast<double>(i) + rng.next_unit()) /
                       static_cast<double>(K);
  }
  return patch;
}

TorusPoint patch_point(const LinearPHModel& model, const LeafPatch& patch,
                       int i) {
  if (i < 0 || i >= patch.K())
    throw OutOfRange("patch_point: sample index " + std::to_string(i));
  namespace kd = kernels::detail;
  TorusPoint p;
  p.dim = model.dim();
  double ti = patch.t[static_cast<std::size_t>(i)];
  for (int j = 0; j < model.dim(); ++j)
    p.x[static_cast<std::size_t>(j)] = kd::wrap_unit_one(
        patch.base.x[static_cast<std::size_t>(j)] +
        ti * patch.dir[static_cast<std::size_t>(j)]);
  return p;
}

void patch_coords(const LinearPHModel& model, const LeafPatch& patch,
                  std::vector<double>& x0, std::vector<double>& x1,
                  std::vector<double>& x2) {
  const auto K = static_cast<std::size_t>(patch.K());
  x0.resize(K);
  x1.resize(K);
  x2.clear();
  if (model.dim() == 3) x2.resize(K);
  for (std::size_t i = 0; i < K; ++i) {
    TorusPoint p = patch_point(model, patch, static_cast<int>(i));
    x0[i] = p.x[0];
    x1[i] = p.x[1];
    if (model.dim() == 3) x2[i] = p.x[2];
  }
}

}  // namespace leafpress
