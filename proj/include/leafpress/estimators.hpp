#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leafpress/cover.hpp"
#include "leafpress/dynamics.hpp"
#include "leafpress/leafgeom.hpp"
#include "leafpress/numerics.hpp"
#include "leafpress/potentials.hpp"

namespace leafpress {

// Inclusive integer depth window.
struct IntRange {
  int lo = 0;
  int hi = 0;
  int count() const { return hi - lo + 1; }
};

// One evaluated grid cell of an estimator run.
struct GridPoint {
  int n = 0;
  double eps = 0.0;
  double gamma = 0.0;
  double raw = 0.0;     // per-cell statistic (log cover cost, entropy, ...)
  bool in_fit = false;  // entered the winning reduction
  std::string note;     // "" or e.g. "infeasible"
};

struct FitDiag {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms residual of the winning fit
  int points = 0;
};

// A finished estimate plus everything needed to recompute it: the full
// evaluated grid, the ladders it walked, and the winning fit.
struct PressureEstimate {
  double value = 0.0;
  std::string kind;  // spanning | bowen | capacity-lower | capacity-upper |
                     // entropy-partition | entropy-brinkatok | lyapunov
  IntRange n_window{};
  std::vector<double> eps_ladder;
  std::vector<double> gamma_ladder;
  std::vector<GridPoint> grid;
  FitDiag fit;
  std::string method;              // reduction notes ("greedy+ls", "chord", ...)
  std::vector<std::string> flags;  // non-fatal quality flags
};

// ---- spanning (partition-sum) pressure -----------------------------------------

// Minimal-cost cover of a (1-gamma) mass fraction of the leaf window by
// depth-n balls; throws Infeasible when even the full candidate family cannot
// reach the goal. `candidates` restricts the ball centres (default: all).
CoverSolution spanning_cost(const LinearPHModel& model, const LeafPatch& patch,
                            const PotentialSeq& P, int n, double eps,
                            double gamma,
                            CoverStrategy strategy = CoverStrategy::Greedy,
                            const std::vector<int>* candidates = nullptr);

// Least-squares slope of log cover cost against depth over the window, per
// (eps, gamma); the value is taken at the smallest eps and gamma. Depths
// whose candidate family cannot reach the mass goal are excluded from the
// fit; if fewer than two depths survive at the winning rung the run is
// Infeasible. Window must have >= 3 depths; ladders must be non-empty and
// strictly decreasing.
PressureEstimate spanning_pressure(const LinearPHModel& model,
                                   const LeafPatch& patch,
                                   const PotentialSeq& P, IntRange n_window,
                                   std::span<const double> eps_ladder,
                                   std::span<const double> gamma_ladder);

// ---- unstable entropy -----------------------------------------------------------

// H_n = -sum over itinerary classes of mass * log mass, fitted against n.
// Depths where the classes have split so far that fewer than two samples
// share a class on average (class count > K/2) are excluded from the fit. A
// single-cell partition returns 0 exactly with a "degenerate-partition" flag.
PressureEstimate entropy_partition(const LinearPHModel& model,
                                   const LeafPatch& patch,
                                   const Partition& partition,
                                   IntRange n_window);

// Local-entropy estimator: mean over samples of -log(leaf mass of the
// depth-n ball), fitted against n, evaluated at the smallest eps. Ball mass
// is the window-clipped parameter-interval fraction, so it keeps decaying
// geometrically below the sample spacing instead of flattening at 1/K.
PressureEstimate entropy_brinkatok(const LinearPHModel& model,
                                   const LeafPatch& patch, IntRange n_window,
                                   std::span<const double> eps_ladder);

// ---- Bowen (critical-exponent) pressure ------------------------------------------

// Critical exponent by bisection: for candidate s, greedily cover the target
// samples (default: all) by variable-depth balls, n in [N_min, n_max], with
// per-ball cost exp(sup log g_n - s*n); s* is where the minimal total cost
// crosses 1. The bracket auto-widens up to 40 times (BracketFailure); the
// reported value is the low end of the final bracket, |bracket| <= 1e-3.
PressureEstimate bowen_pressure(
    const LinearPHModel& model, const LeafPatch& patch, const PotentialSeq& P,
    double eps, int N_min, int n_max,
    std::optional<std::pair<double, double>> s_bracket = std::nullopt,
    CoverStrategy strategy = CoverStrategy::Greedy,
    const std::vector<int>* targets = nullptr);

// Metric variant used by the coincidence checks: per-depth minimal cover
// costs L(n) of a (1-gamma) leaf-mass goal, then the critical s where the
// tail profile y(N) = min over n >= N of (L(n) - s*n) stops growing in N;
// bisection plus a one-step least-squares polish on the active path.
PressureEstimate bowen_metric_pressure(const LinearPHModel& model,
                                       const LeafPatch& patch,
                                       const PotentialSeq& P, double eps,
                                       IntRange n_window, double gamma);

// ---- capacity pressure -----------------------------------------------------------

enum class CapacityReduction {
  Chord,  // min/max of (L(n2)-L(n1))/(n2-n1) over pairs spanning >= 2 depths
  Ratio   // min/max of (1/n) L(n) over the window (literal liminf/limsup)
};

// Per-depth minimal cover costs L(n) = log Lambda_n of the same (1-gamma)
// goal (or of an explicit target sample set); returns the (lower, upper)
// capacity pair under the chosen reduction. Chord cancels the O(1) offset
// that plain ratios carry at finite depth and is the default; Ratio is kept
// for the exhaustively checkable ordering fixtures.
std::pair<PressureEstimate, PressureEstimate> capacity_pressure(
    const LinearPHModel& model, const LeafPatch& patch, const PotentialSeq& P,
    double eps, IntRange n_window, double gamma,
    CapacityReduction reduction = CapacityReduction::Chord,
    CoverStrategy strategy = CoverStrategy::Greedy,
    const std::vector<int>* targets = nullptr);

// ---- regular-set restriction -------------------------------------------------

struct RegularRestriction {
  LeafPatch patch;           // surviving samples, weights renormalised
  double survivor_fraction;  // original-weight mass of the survivors
  std::vector<int> kept;     // surviving sample indices
};

// Keeps samples whose depth-n0 local-entropy rate and (1/n0) log g_{n0} both
// lie within tol of the patch lower medians; n0 >= 4, tol >= 0. The ball
// mass uses the unclipped interval so edge samples are not penalised for
// sitting near the window boundary.
RegularRestriction restrict_to_regular_set(const LinearPHModel& model,
                                           const LeafPatch& patch,
                                           const PotentialSeq& P, int n0,
                                           double eps, double tol);

}  // namespace leafpress
