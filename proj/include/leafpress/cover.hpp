#pragma once

#include <span>
#include <string>
#include <vector>

#include "leafpress/dynamics.hpp"
#include "leafpress/potentials.hpp"

namespace leafpress {

// One candidate depth-n leaf ball, reduced to its footprint on the sampled
// patch: the contiguous member index range, the clipped parameter interval,
// and the potential sup over the members.
struct CandidateBall {
  int center = 0;          // sample index of the centre
  int n = 1;               // depth
  int lo = 0;              // members are the contiguous sample range [lo, hi]
  int hi = 0;
  double t_lo = 0.0;       // parameter interval, clipped to [-delta, delta]
  double t_hi = 0.0;
  double sup_log_g = 0.0;  // max of log g_n over the member samples
};

// A candidate family over one patch, possibly mixing depths. Balls are
// ordered depth-major (in the order depths were supplied), then by centre
// index; solver tie-breaking refers to this ordering.
struct BallFamily {
  std::vector<CandidateBall> balls;
  std::vector<double> t;  // patch sample parameters (sorted)
  std::vector<double> w;  // patch sample weights
  double leaf_lo = 0.0;   // parameter window, [-delta, delta] for real patches
  double leaf_hi = 0.0;
};

// Builds the family of balls B^u_n(y_c, eps) for every requested depth and
// centre (default: every sample). Depths must be strictly increasing and
// >= 1; centre indices must be valid.
BallFamily make_ball_family(const LinearPHModel& model, const LeafPatch& patch,
                            const PotentialSeq& P, std::span<const int> depths,
                            double eps,
                            const std::vector<int>* centers = nullptr);

enum class CoverStrategy { Greedy, Exhaustive };

// What a cover must achieve. LeafMass: the union of the chosen parameter
// intervals must cover at least mass_fraction of the leaf window (continuum
// surrogate of the conditional-measure constraint). SampleSet: every listed
// sample index must lie in some chosen ball.
struct CoverGoal {
  enum class Kind { LeafMass, SampleSet };
  Kind kind = Kind::LeafMass;
  double mass_fraction = 1.0;
  std::vector<int> targets;

  static CoverGoal leaf_mass(double fraction);
  static CoverGoal sample_set(std::vector<int> targets);
};

struct CoverSolution {
  std::vector<int> chosen;     // indices into the family, in selection order
  double total_cost = 0.0;     // log sum over chosen of exp(sup_log_g - s*n)
  double covered_mass = 0.0;   // weight-sum of the union of member sets
  double interval_mass = 0.0;  // covered fraction of the leaf window
  bool feasible = false;
  std::string strategy;        // "greedy" | "exhaustive"
};

// Minimises the total cost subject to the goal. A depth-n ball costs
// exp(sup_log_g - cost_slope * n); cost_slope = 0 gives plain partition-sum
// costs. Greedy selects, at each step, the ball with the best ratio of newly
// covered mass to cost, breaking ties towards the lowest ball index; the
// final cost/mass reductions run in ascending ball-index order so results
// are reproducible. Exhaustive enumerates all subsets and is legal only for
// patches with K <= 16 and at most 16 candidate balls (FixtureTooLarge
// otherwise); cost ties prefer fewer balls, then the lexicographically
// smallest subset. When the goal cannot be met the best-effort solution is
// returned with feasible = false.
CoverSolution solve_cover(const BallFamily& family, const CoverGoal& goal,
                          CoverStrategy strategy, double cost_slope = 0.0);

// Range-maximum over a fixed array: O(n log n) build, O(1) query.
class RangeMax {
 public:
  RangeMax() = default;
  explicit RangeMax(std::span<const double> values);
  double query(int lo, int hi) const;  // inclusive ends, 0 <= lo <= hi < size

 private:
  std::vector<std::vector<double>> rows_;
};

}  // namespace leafpress
