#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace leafpress {

// A point on the unit 2- or 3-torus; coordinates always kept in [0,1).
// x[2] is unused (zero) when dim == 2.
struct TorusPoint {
  int dim = 2;
  std::array<double, 3> x{0.0, 0.0, 0.0};
};

TorusPoint make_point2(double a, double b);
TorusPoint make_point3(double a, double b, double c);

// A linear toral automorphism with a one-dimensional dominant expanding
// direction: an integer matrix M with |det M| = 1 acting on T^d, d in {2,3},
// whose eigenvalue moduli are strictly separated, with the largest real,
// simple and > 1 and the smallest < 1. Construction validates all of this and
// precomputes the eigenstructure.
class LinearPHModel {
 public:
  int dim() const { return dim_; }
  const std::vector<std::vector<std::int64_t>>& matrix_rows() const {
    return rows_;
  }
  // Row-major double matrix: 4 entries for d=2, 9 for d=3.
  const double* dmatrix() const { return dmat_.data(); }

  double lambda_u() const { return lambda_u_; }      // modulus, > 1
  double lambda_s() const { return lambda_s_; }      // modulus, < 1
  double lambda_c() const { return lambda_c_; }      // NaN when d == 2
  bool has_center() const { return dim_ == 3; }
  double log_lambda_u() const { return log_lambda_u_; }

  // Unit eigenvectors (z component zero when d == 2), sign-normalized so the
  // largest-magnitude component is positive.
  const std::array<double, 3>& unstable_dir() const { return dir_u_; }
  const std::array<double, 3>& stable_dir() const { return dir_s_; }
  const std::array<double, 3>& center_dir() const { return dir_c_; }

  // lambda_u^k by repeated multiplication (the same convention every leaf
  // distance in the package uses, so scales agree to the last bit).
  double unstable_stretch(int k) const;

 private:
  friend LinearPHModel build_linear_model(
      const std::vector<std::vector<std::int64_t>>& matrix);
  int dim_ = 2;
  std::vector<std::vector<std::int64_t>> rows_;
  std::array<double, 9> dmat_{};
  double lambda_u_ = 0, lambda_s_ = 0, lambda_c_ = 0, log_lambda_u_ = 0;
  std::array<double, 3> dir_u_{}, dir_s_{}, dir_c_{};
};

// Validates and builds a model. Throws UnsupportedDimension, LengthMismatch,
// NotUnimodular, ComplexUnstable or NotPartiallyHyperbolic.
LinearPHModel build_linear_model(
    const std::vector<std::vector<std::int64_t>>& matrix);

// k forward steps of the map (k >= 0), each step one matrix-multiply mod 1.
TorusPoint iterate(const LinearPHModel& model, TorusPoint p, int k);

// log of the norm of the n-step derivative restricted to the unstable line;
// for a linear model this is exactly n * log(lambda_u). n >= 0.
double unstable_cocycle_norm(const LinearPHModel& model, const TorusPoint& p,
                             int n);

enum class PatchScheme { UniformGrid, StratifiedRandom };

// A sampled local unstable-leaf patch: the segment
//   { base + t * dir : t in [-delta, delta] }  (mod 1)
// carrying K weighted samples at parameters t[0] < ... < t[K-1].
struct LeafPatch {
  TorusPoint base;
  std::array<double, 3> dir{};  // unit unstable direction
  double delta = 0.0;
  std::vector<double> t;   // sorted sample parameters in [-delta, delta]
  std::vector<double> w;   // sample weights, each 1/K
  PatchScheme scheme = PatchScheme::UniformGrid;
  std::uint64_t seed = 0;
  int K() const { return static_cast<int>(t.size()); }
};

// Samples a patch. UniformGrid: t_i = -delta + 2*delta*i/(K-1) (deterministic,
// seed ignored). StratifiedRandom: one uniform draw per stratum of width
// 2*delta/K. Throws BadRadius (delta outside (0, 1/2]) or BadPatch (K < 2).
LeafPatch sample_leaf_patch(const LinearPHModel& model, const TorusPoint& base,
                            double delta, int K, PatchScheme scheme,
                            std::uint64_t seed);

// Ambient position of sample i of the patch.
TorusPoint patch_point(const LinearPHModel& model, const LeafPatch& patch,
                       int i);

// All patch sample coordinates in structure-of-arrays layout for the batch
// kernels; x2 is left empty for 2-d models.
void patch_coords(const LinearPHModel& model, const LeafPatch& patch,
                  std::vector<double>& x0, std::vector<double>& x1,
                  std::vector<double>& x2);

}  // namespace leafpress
