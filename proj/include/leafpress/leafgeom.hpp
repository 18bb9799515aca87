#pragma once

#include <cstdint>
#include <vector>

#include "leafpress/dynamics.hpp"

namespace leafpress {

// Dynamical distance along the unstable leaf between patch samples i and j at
// depth n >= 1: the maximum over 0 <= k < n of the leaf distance between the
// k-th images, which for a linear model is |t_i - t_j| * lambda_u^(n-1).
double du_n(const LinearPHModel& model, const LeafPatch& patch, int i, int j,
            int n);

// Indices of the samples inside the depth-n leaf ball of radius eps centred
// at sample `center`: a contiguous, sorted index range (binary search on the
// sorted parameters, using the same rounding as du_n). eps > 0, n >= 1.
std::vector<std::int32_t> bowen_ball_members(const LinearPHModel& model,
                                             const LeafPatch& patch,
                                             int center, int n, double eps);

// Half-open parameter interval of the same ball intersected with the patch:
// [t_c - r, t_c + r] ∩ [-delta, delta] with r = eps / lambda_u^(n-1).
struct LeafInterval {
  double lo, hi;
};
LeafInterval bowen_ball_interval(const LinearPHModel& model,
                                 const LeafPatch& patch, int center, int n,
                                 double eps);

// ---- coding partitions --------------------------------------------------------

// Axis-aligned partition of the torus with ceil(1/cell_side) cells per axis
// (so each actual cell has side 1/m <= cell_side). Ids are row-major with
// axis 0 major: id = i0*m + i1 (*m + i2 in dimension 3).
struct Partition {
  int dim = 2;
  int cells_per_axis = 1;
  double cell_side = 1.0;  // as requested
  std::int64_t cell_count = 1;
};

// Requires 0 < cell_side <= 1 and a resulting cell count that fits a 32-bit
// id; throws BadCellSide otherwise.
Partition build_partition(int dim, double cell_side);

// Same, with the dimension taken from the model.
Partition build_partition(const LinearPHModel& model, double cell_side);

std::int32_t cell_of(const Partition& part, const TorusPoint& p);

struct ItineraryCode {
  std::vector<std::int32_t> w;
};

// Cells visited by the first n points of the orbit of y (n >= 1 symbols).
ItineraryCode itinerary(const LinearPHModel& model, const Partition& part,
                        const TorusPoint& y, int n);

// Normalized Hamming distance between equal-length codes: mismatches / length.
double hamming_distance(const ItineraryCode& a, const ItineraryCode& b);

// ---- Hamming ball counting -----------------------------------------------------

// log of B(r, N, n) = sum_{m <= floor(r n)} C(n, m) (N-1)^m, the number of
// length-n words over N symbols within normalized Hamming radius r of a fixed
// word. Requires N >= 2, n >= 1, 0 <= r <= 1. Exact in log-space via lgamma
// and a streaming log-sum-exp.
double hamming_ball_log_count(double r, int N, std::int64_t n);

// Asymptotic exponential rate lim (1/n) log B(r, N, n) for 0 < r <= (N-1)/N:
//   r log(N-1) - r log r - (1-r) log(1-r).
double hamming_asymptotic_rate(double r, int N);

}  // namespace leafpress
