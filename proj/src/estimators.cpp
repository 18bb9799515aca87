#include "leafpress/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "leafpress/errors.hpp"
#include "leafpress/numerics.hpp"

namespace leafpress {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> window_depths(IntRange w, const char* who) {
  if (w.lo < 1 || w.hi < w.lo) {
    std::ostringstream os;
    os << who << ": depth window [" << w.lo << ", " << w.hi
       << "] must satisfy 1 <= lo <= hi";
    throw BadWindow(os.str());
  }
  if (w.count() < 3) {
    std::ostringstream os;
    os << who << ": depth window needs >= 3 points, got " << w.count();
    throw BadWindow(os.str());
  }
  std::vector<int> depths(static_cast<std::size_t>(w.count()));
  std::iota(depths.begin(), depths.end(), w.lo);
  return depths;
}

void check_ladder(std::span<const double> ladder, const char* name,
                  double upper) {
  if (ladder.empty()) throw BadLadder(std::string(name) + ": empty ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || !(ladder[i] < upper)) {
      std::ostringstream os;
      os << name << ": rung " << i << " = " << ladder[i] << " outside (0, "
         << upper << ")";
      throw BadLadder(os.str());
    }
    if (i > 0 && !(ladder[i] < ladder[i - 1])) {
      throw BadLadder(std::string(name) + ": must be strictly decreasing");
    }
  }
}

void check_gamma(double gamma, const char* who) {
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    std::ostringstream os;
    os << who << ": gamma = " << gamma << " outside [0, 1)";
    throw OutOfRange(os.str());
  }
}

// Single-depth view of a depth-major multi-depth family.
BallFamily slice_family(const BallFamily& fam, int n) {
  BallFamily out;
  out.t = fam.t;
  out.w = fam.w;
  out.leaf_lo = fam.leaf_lo;
  out.leaf_hi = fam.leaf_hi;
  for (const auto& b : fam.balls) {
    if (b.n == n) out.balls.push_back(b);
  }
  return out;
}

struct DepthCost {
  int n = 0;
  bool feasible = false;
  double log_cost = kNaN;
  CoverSolution sol;
};

// Minimal fixed-depth cover cost per window depth, sharing one candidate
// family (one batched orbit) across depths.
std::vector<DepthCost> cost_ladder(const LinearPHModel& model,
                                   const LeafPatch& patch,
                                   const PotentialSeq& P,
                                   std::span<const int> depths, double eps,
                                   const CoverGoal& goal,
                                   CoverStrategy strategy) {
  BallFamily fam = make_ball_family(model, patch, P, depths, eps);
  std::vector<DepthCost> out;
  out.reserve(depths.size());
  for (int n : depths) {
    DepthCost dc;
    dc.n = n;
    dc.sol = solve_cover(slice_family(fam, n), goal, strategy);
    dc.feasible = dc.sol.feasible;
    if (dc.feasible) dc.log_cost = dc.sol.total_cost;
    out.push_back(std::move(dc));
  }
  return out;
}

FitDiag to_diag(const num::LineFit& f) {
  return FitDiag{f.slope, f.intercept, f.rms_residual, f.points};
}

CoverGoal all_samples_goal(int K) {
  std::vector<int> all(static_cast<std::size_t>(K));
  std::iota(all.begin(), all.end(), 0);
  return CoverGoal::sample_set(std::move(all));
}

// Exact minimal cover cost of a sample-target goal over a (possibly mixed
// depth) family, by subset dynamic programming over covered-target masks.
// Returns the log total cost. Legal only for K <= 16.
double exhaustive_target_cost(const BallFamily& fam, const CoverGoal& goal,
                              double cost_slope) {
  const int K = static_cast<int>(fam.t.size());
  if (K > 16) {
    throw FixtureTooLarge(
        "exhaustive sample-target cover: patch K must be <= 16, got " +
        std::to_string(K));
  }
  std::uint32_t want = 0;
  for (int idx : goal.targets) {
    if (idx < 0 || idx >= K) {
      throw OutOfRange("cover goal: target sample index " +
                       std::to_string(idx) + " outside the patch");
    }
    want |= 1u << idx;
  }
  if (want == 0) throw OutOfRange("cover goal: empty target set");

  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& b : fam.balls) {
    shift = std::max(shift, b.sup_log_g - cost_slope * b.n);
  }
  std::vector<double> cost;
  std::vector<std::uint32_t> mask;
  cost.reserve(fam.balls.size());
  mask.reserve(fam.balls.size());
  for (const auto& b : fam.balls) {
    std::uint32_t m = 0;
    for (int i = b.lo; i <= b.hi; ++i) m |= 1u << i;
    m &= want;
    if (m == 0) continue;  // contributes nothing to the goal
    cost.push_back(std::exp(b.sup_log_g - cost_slope * b.n - shift));
    mask.push_back(m);
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(1u << K, inf);
  dp[0] = 0.0;
  for (std::uint32_t state = 0; state < dp.size(); ++state) {
    if (!(dp[state] < inf)) continue;
    for (std::size_t b = 0; b < mask.size(); ++b) {
      const std::uint32_t next = state | mask[b];
      if (next == state) continue;
      dp[next] = std::min(dp[next], dp[state] + cost[b]);
    }
  }
  double best = inf;
  for (std::uint32_t state = 0; state < dp.size(); ++state) {
    if ((state & want) == want) best = std::min(best, dp[state]);
  }
  if (!(best < inf)) {
    throw Infeasible("exhaustive sample-target cover: no ball family subset "
                     "covers the target set");
  }
  return std::log(best) + shift;
}

}  // namespace

// ---- spanning -------------------------------------------------------------------

CoverSolution spanning_cost(const LinearPHModel& model, const LeafPatch& patch,
                            const PotentialSeq& P, int n, double eps,
                            double gamma, CoverStrategy strategy,
                            const std::vector<int>* candidates) {
  if (n < 1) throw BadDepth("spanning_cost: depth must be >= 1");
  check_gamma(gamma, "spanning_cost");
  const int depths[] = {n};
  BallFamily fam = make_ball_family(model, patch, P, depths, eps, candidates);
  CoverSolution sol =
      solve_cover(fam, CoverGoal::leaf_mass(1.0 - gamma), strategy);
  if (!sol.feasible) {
    std::ostringstream os;
    os << "spanning_cost: candidate balls reach leaf fraction "
       << sol.interval_mass << " < " << (1.0 - gamma) << " at n = " << n
       << ", eps = " << eps;
    throw Infeasible(os.str());
  }
  return sol;
}

PressureEstimate spanning_pressure(const LinearPHModel& model,
                                   const LeafPatch& patch,
                                   const PotentialSeq& P, IntRange n_window,
                                   std::span<const double> eps_ladder,
                                   std::span<const double> gamma_ladder) {
  const auto depths = window_depths(n_window, "spanning_pressure");
  check_ladder(eps_ladder, "spanning_pressure eps_ladder",
               std::numeric_limits<double>::infinity());
  check_ladder(gamma_ladder, "spanning_pressure gamma_ladder", 1.0);

  PressureEstimate est;
  est.kind = "spanning";
  est.method = "greedy (1-gamma)-mass cover per depth; least-squares slope of "
               "log cost in n; value at the smallest (eps, gamma)";
  est.n_window = n_window;
  est.eps_ladder.assign(eps_ladder.begin(), eps_ladder.end());
  est.gamma_ladder.assign(gamma_ladder.begin(), gamma_ladder.end());

  const double win_eps = eps_ladder.back();
  const double win_gamma = gamma_ladder.back();

  for (double eps : eps_ladder) {
    BallFamily fam = make_ball_family(model, patch, P, depths, eps);
    std::vector<BallFamily> slices;
    slices.reserve(depths.size());
    for (int n : depths) slices.push_back(slice_family(fam, n));

    for (double gamma : gamma_ladder) {
      const CoverGoal goal = CoverGoal::leaf_mass(1.0 - gamma);
      std::vector<double> xs, ys;
      const std::size_t first_row = est.grid.size();
      for (std::size_t k = 0; k < depths.size(); ++k) {
        CoverSolution sol = solve_cover(slices[k], goal, CoverStrategy::Greedy);
        GridPoint gp;
        gp.n = depths[k];
        gp.eps = eps;
        gp.gamma = gamma;
        if (sol.feasible) {
          gp.raw = sol.total_cost;
          xs.push_back(static_cast<double>(depths[k]));
          ys.push_back(sol.total_cost);
        } else {
          gp.raw = kNaN;
          gp.note = "infeasible";
        }
        est.grid.push_back(std::move(gp));
      }
      if (eps == win_eps && gamma == win_gamma) {
        if (xs.size() < 2) {
          std::ostringstream os;
          os << "spanning_pressure: only " << xs.size()
             << " feasible depth(s) at eps = " << eps << ", gamma = " << gamma
             << "; need >= 2 for a slope";
          throw Infeasible(os.str());
        }
        const num::LineFit fit = num::fit_line(xs, ys);
        est.value = fit.slope;
        est.fit = to_diag(fit);
        if (xs.size() < depths.size()) est.flags.push_back("partial-window");
        for (std::size_t k = first_row; k < est.grid.size(); ++k) {
          if (est.grid[k].note.empty()) est.grid[k].in_fit = true;
        }
      }
    }
  }
  return est;
}

// ---- entropy --------------------------------------------------------------------

PressureEstimate entropy_partition(const LinearPHModel& model,
                                   const LeafPatch& patch,
                                   const Partition& partition,
                                   IntRange n_window) {
  const auto depths = window_depths(n_window, "entropy_partition");
  const int n_hi = n_window.hi;
  const int K = patch.K();

  // Orbit codes for every sample, plus cell-boundary proximity bookkeeping.
  std::vector<std::int32_t> codes(static_cast<std::size_t>(K) * n_hi);
  const double side = 1.0 / partition.cells_per_axis;
  int boundary_samples = 0;
  for (int i = 0; i < K; ++i) {
    TorusPoint p = patch_point(model, patch, i);
    bool touched = false;
    for (int k = 0; k < n_hi; ++k) {
      codes[static_cast<std::size_t>(i) * n_hi + k] = cell_of(partition, p);
      for (int a = 0; a < partition.dim; ++a) {
        const double v = p.x[a] / side;
        if (std::abs(v - std::round(v)) * side < 1e-9) touched = true;
      }
      p = iterate(model, p, 1);
    }
    if (touched) ++boundary_samples;
  }

  // Sort samples by full code; div[i] = first symbol where the sorted order's
  // i-th code differs from its predecessor (so sample order[i] starts a new
  // depth-n class iff div[i] < n).
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  const auto row = [&](int i) {
    return codes.data() + static_cast<std::size_t>(i) * n_hi;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::lexicographical_compare(row(a), row(a) + n_hi, row(b),
                                        row(b) + n_hi);
  });
  std::vector<int> div(static_cast<std::size_t>(K), -1);
  for (int i = 1; i < K; ++i) {
    const std::int32_t* a = row(order[i - 1]);
    const std::int32_t* b = row(order[i]);
    int k = 0;
    while (k < n_hi && a[k] == b[k]) ++k;
    div[static_cast<std::size_t>(i)] = k;
  }

  PressureEstimate est;
  est.kind = "entropy-partition";
  est.method = "itinerary-class information H_n; least-squares slope over the "
               "depths whose class count stays <= K/2";
  est.n_window = n_window;
  est.eps_ladder = {partition.cell_side};

  std::vector<double> xs, ys;
  std::vector<std::size_t> fit_rows;
  bool all_single_class = true;
  for (int n : depths) {
    std::vector<double> terms;
    double run = 0.0;
    for (int i = 0; i < K; ++i) {
      if (i == 0 || div[static_cast<std::size_t>(i)] < n) {
        if (run > 0.0) terms.push_back(-run * std::log(run));
        run = patch.w[static_cast<std::size_t>(order[i])];
      } else {
        run += patch.w[static_cast<std::size_t>(order[i])];
      }
    }
    if (run > 0.0) terms.push_back(-run * std::log(run));
    const double H = num::pairwise_sum(terms);
    const auto classes = static_cast<int>(terms.size());
    if (classes > 1) all_single_class = false;

    GridPoint gp;
    gp.n = n;
    gp.eps = partition.cell_side;
    gp.raw = H;
    if (2 * classes <= K) {
      fit_rows.push_back(est.grid.size());
      xs.push_back(static_cast<double>(n));
      ys.push_back(H);
    } else {
      gp.note = "classes > K/2";
    }
    est.grid.push_back(std::move(gp));
  }

  if (xs.size() < 2) {
    // The coding splits too fast for this window: fall back to the two
    // shallowest depths, flagged so the caller sees the weak basis.
    est.flags.push_back("unresolved-window");
    xs = {static_cast<double>(depths[0]), static_cast<double>(depths[1])};
    ys = {est.grid[0].raw, est.grid[1].raw};
    fit_rows = {0, 1};
  }
  for (std::size_t r : fit_rows) est.grid[r].in_fit = true;
  const num::LineFit fit = num::fit_line(xs, ys);
  est.value = fit.slope;
  est.fit = to_diag(fit);
  if (all_single_class) est.flags.push_back("degenerate-partition");
  if (boundary_samples > K / 5) est.flags.push_back("boundary-sensitive");
  return est;
}

PressureEstimate entropy_brinkatok(const LinearPHModel& model,
                                   const LeafPatch& patch, IntRange n_window,
                                   std::span<const double> eps_ladder) {
  const auto depths = window_depths(n_window, "entropy_brinkatok");
  check_ladder(eps_ladder, "entropy_brinkatok eps_ladder",
               std::numeric_limits<double>::infinity());

  PressureEstimate est;
  est.kind = "entropy-brinkatok";
  est.method = "mean -log(window-clipped ball interval mass); least-squares "
               "slope in n; value at the smallest eps";
  est.n_window = n_window;
  est.eps_ladder.assign(eps_ladder.begin(), eps_ladder.end());

  const int K = patch.K();
  const double delta = patch.delta;
  const double window = 2.0 * delta;
  std::vector<double> terms(static_cast<std::size_t>(K));

  for (double eps : eps_ladder) {
    std::vector<double> xs, ys;
    const std::size_t first_row = est.grid.size();
    for (int n : depths) {
      const double r = eps / model.unstable_stretch(n - 1);
      for (int i = 0; i < K; ++i) {
        const double t = patch.t[static_cast<std::size_t>(i)];
        const double lo = std::max(t - r, -delta);
        const double hi = std::min(t + r, delta);
        terms[static_cast<std::size_t>(i)] =
            -patch.w[static_cast<std::size_t>(i)] *
            std::log((hi - lo) / window);
      }
      const double raw = num::pairwise_sum(terms);
      GridPoint gp;
      gp.n = n;
      gp.eps = eps;
      gp.raw = raw;
      est.grid.push_back(std::move(gp));
      xs.push_back(static_cast<double>(n));
      ys.push_back(raw);
    }
    if (eps == eps_ladder.back()) {
      const num::LineFit fit = num::fit_line(xs, ys);
      est.value = fit.slope;
      est.fit = to_diag(fit);
      for (std::size_t k = first_row; k < est.grid.size(); ++k) {
        est.grid[k].in_fit = true;
      }
    }
  }
  return est;
}

// ---- Bowen ----------------------------------------------------------------------

PressureEstimate bowen_pressure(
    const LinearPHModel& model, const LeafPatch& patch, const PotentialSeq& P,
    double eps, int N_min, int n_max,
    std::optional<std::pair<double, double>> s_bracket, CoverStrategy strategy,
    const std::vector<int>* targets) {
  if (N_min < 1) throw BadDepth("bowen_pressure: N_min must be >= 1");
  if (!(N_min < n_max)) {
    throw BadWindow("bowen_pressure: requires N_min < n_max");
  }
  std::vector<int> depths(static_cast<std::size_t>(n_max - N_min + 1));
  std::iota(depths.begin(), depths.end(), N_min);

  const BallFamily fam = make_ball_family(model, patch, P, depths, eps);
  const CoverGoal goal =
      targets ? CoverGoal::sample_set(*targets) : all_samples_goal(patch.K());

  const auto log_cost = [&](double s) {
    if (strategy == CoverStrategy::Exhaustive) {
      return exhaustive_target_cost(fam, goal, s);
    }
    return solve_cover(fam, goal, CoverStrategy::Greedy, s).total_cost;
  };

  double lo = s_bracket ? s_bracket->first : 0.0;
  double hi = s_bracket ? s_bracket->second : 2.0;
  if (!(lo < hi)) {
    throw OutOfRange("bowen_pressure: bracket must satisfy s_lo < s_hi");
  }
  double flo = log_cost(lo);
  double fhi = log_cost(hi);
  bool widened = false;
  int widenings = 0;
  while (flo < 0.0 || fhi > 0.0) {
    if (++widenings > 40) {
      std::ostringstream os;
      os << "bowen_pressure: no cost crossing inside [" << lo << ", " << hi
         << "] after 40 widenings";
      throw BracketFailure(os.str());
    }
    widened = true;
    const double span = hi - lo;
    if (flo < 0.0) {
      hi = lo;
      fhi = flo;
      lo -= 2.0 * span;
      flo = log_cost(lo);
    } else {
      lo = hi;
      flo = fhi;
      hi += 2.0 * span;
      fhi = log_cost(hi);
    }
  }
  const double bracket_lo = lo;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (log_cost(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  PressureEstimate est;
  est.kind = "bowen";
  est.method = "variable-depth target cover; bisection on the slope where the "
               "minimal cost crosses 1; lower bracket end reported";
  est.n_window = IntRange{N_min, n_max};
  est.eps_ladder = {eps};
  est.value = lo;
  est.fit = FitDiag{lo, 0.0, hi - lo, 0};
  if (widened) est.flags.push_back("widened-bracket");
  if (lo == bracket_lo) est.flags.push_back("at-bracket-edge");

  // Diagnostics: depth profile of the final greedy cover at the reported s.
  const CoverSolution final_sol =
      solve_cover(fam, goal, CoverStrategy::Greedy, lo);
  std::vector<int> per_depth(depths.size(), 0);
  for (int idx : final_sol.chosen) {
    const int n = fam.balls[static_cast<std::size_t>(idx)].n;
    ++per_depth[static_cast<std::size_t>(n - N_min)];
  }
  for (std::size_t k = 0; k < depths.size(); ++k) {
    GridPoint gp;
    gp.n = depths[k];
    gp.eps = eps;
    gp.raw = static_cast<double>(per_depth[k]);
    gp.in_fit = per_depth[k] > 0;
    gp.note = "balls-at-depth";
    est.grid.push_back(std::move(gp));
  }
  return est;
}

PressureEstimate bowen_metric_pressure(const LinearPHModel& model,
                                       const LeafPatch& patch,
                                       const PotentialSeq& P, double eps,
                                       IntRange n_window, double gamma) {
  const auto depths = window_depths(n_window, "bowen_metric_pressure");
  check_gamma(gamma, "bowen_metric_pressure");
  const CoverGoal goal = CoverGoal::leaf_mass(1.0 - gamma);
  const auto ladder = cost_ladder(model, patch, P, depths, eps, goal,
                                  CoverStrategy::Greedy);

  std::vector<int> fn;     // feasible depths
  std::vector<double> fL;  // their minimal log costs
  for (const auto& dc : ladder) {
    if (dc.feasible) {
      fn.push_back(dc.n);
      fL.push_back(dc.log_cost);
    }
  }
  if (fn.size() < 2) {
    throw Infeasible("bowen_metric_pressure: fewer than two feasible depths");
  }

  // Tail profile y(N) = min over feasible n >= N of (L(n) - s n), evaluated
  // at the feasible depths; its least-squares slope in N is positive while s
  // is below the critical exponent and flattens to zero above it.
  const auto profile_slope = [&](double s, std::vector<int>* path) {
    const std::size_t m = fn.size();
    std::vector<double> y(m);
    std::vector<int> arg(m);
    double best = std::numeric_limits<double>::infinity();
    int best_n = fn.back();
    for (std::size_t j = m; j-- > 0;) {
      const double v = fL[j] - s * fn[j];
      if (v < best) {
        best = v;
        best_n = fn[j];
      }
      y[j] = best;
      arg[j] = best_n;
    }
    std::vector<double> xs(m);
    for (std::size_t j = 0; j < m; ++j) xs[j] = static_cast<double>(fn[j]);
    if (path) path->assign(arg.begin(), arg.end());
    return num::fit_line(xs, y);
  };

  double min_chord = std::numeric_limits<double>::infinity();
  double max_chord = -min_chord;
  for (std::size_t j = 1; j < fn.size(); ++j) {
    const double c = (fL[j] - fL[j - 1]) / (fn[j] - fn[j - 1]);
    min_chord = std::min(min_chord, c);
    max_chord = std::max(max_chord, c);
  }
  double lo = min_chord - 1.0;
  double hi = max_chord + 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (profile_slope(mid, nullptr).slope > 1e-12) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // One least-squares polish on the active path: with the path frozen the
  // profile slope is linear in s, so its root is a weighted chord of L. This
  // removes the bisection granularity (and makes constant-rate shifts exact).
  double value = 0.5 * (lo + hi);
  std::vector<int> path;
  profile_slope(value, &path);
  double chord_num = 0.0, chord_den = 0.0;
  {
    double nbar = 0.0;
    for (int n : fn) nbar += n;
    nbar /= static_cast<double>(fn.size());
    for (std::size_t j = 0; j < fn.size(); ++j) {
      const double cj = fn[j] - nbar;
      const std::size_t src = static_cast<std::size_t>(
          std::find(fn.begin(), fn.end(), path[j]) - fn.begin());
      chord_num += cj * fL[src];
      chord_den += cj * path[j];
    }
  }
  bool polished = false;
  if (chord_den > 0.0) {
    std::vector<int> path2;
    profile_slope(chord_num / chord_den, &path2);
    if (path2 == path) {
      value = chord_num / chord_den;
      polished = true;
    }
  }

  PressureEstimate est;
  est.kind = "bowen";
  est.method = "per-depth (1-gamma)-mass cover costs; critical slope where "
               "the tail profile min_{n>=N}(L(n)-sn) stops growing";
  est.n_window = n_window;
  est.eps_ladder = {eps};
  est.gamma_ladder = {gamma};
  est.value = value;
  const num::LineFit at_value = profile_slope(value, nullptr);
  est.fit = FitDiag{value, at_value.intercept, at_value.rms_residual,
                    static_cast<int>(fn.size())};
  if (!polished) est.flags.push_back("polish-rejected");
  if (fn.size() < depths.size()) est.flags.push_back("partial-window");
  for (const auto& dc : ladder) {
    GridPoint gp;
    gp.n = dc.n;
    gp.eps = eps;
    gp.gamma = gamma;
    gp.raw = dc.log_cost;
    if (dc.feasible) {
      gp.in_fit =
          std::find(path.begin(), path.end(), dc.n) != path.end();
    } else {
      gp.note = "infeasible";
    }
    est.grid.push_back(std::move(gp));
  }
  return est;
}

// ---- capacity -------------------------------------------------------------------

std::pair<PressureEstimate, PressureEstimate> capacity_pressure(
    const LinearPHModel& model, const LeafPatch& patch, const PotentialSeq& P,
    double eps, IntRange n_window, double gamma, CapacityReduction reduction,
    CoverStrategy strategy, const std::vector<int>* targets) {
  const auto depths = window_depths(n_window, "capacity_pressure");
  check_gamma(gamma, "capacity_pressure");
  const CoverGoal goal =
      targets ? CoverGoal::sample_set(*targets)
              : CoverGoal::leaf_mass(1.0 - gamma);
  const auto ladder = cost_ladder(model, patch, P, depths, eps, goal, strategy);

  std::vector<int> fn;
  std::vector<double> fL;
  std::vector<std::size_t> frow;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (ladder[k].feasible) {
      fn.push_back(ladder[k].n);
      fL.push_back(ladder[k].log_cost);
      frow.push_back(k);
    }
  }

  PressureEstimate lower, upper;
  lower.kind = "capacity-lower";
  upper.kind = "capacity-upper";
  lower.n_window = upper.n_window = n_window;
  lower.eps_ladder = upper.eps_ladder = {eps};
  lower.gamma_ladder = upper.gamma_ladder = {gamma};
  for (const auto& dc : ladder) {
    GridPoint gp;
    gp.n = dc.n;
    gp.eps = eps;
    gp.gamma = gamma;
    gp.raw = dc.log_cost;
    if (!dc.feasible) gp.note = "infeasible";
    lower.grid.push_back(gp);
    upper.grid.push_back(gp);
  }
  std::vector<std::string> shared_flags;
  if (fn.size() < depths.size()) shared_flags.push_back("partial-window");

  if (reduction == CapacityReduction::Ratio) {
    if (fn.empty()) {
      throw Infeasible("capacity_pressure: no feasible depth in the window");
    }
    std::size_t imin = 0, imax = 0;
    for (std::size_t j = 1; j < fn.size(); ++j) {
      if (fL[j] / fn[j] < fL[imin] / fn[imin]) imin = j;
      if (fL[j] / fn[j] > fL[imax] / fn[imax]) imax = j;
    }
    lower.method = upper.method = "min/max over the window of (1/n) log cost";
    lower.value = fL[imin] / fn[imin];
    upper.value = fL[imax] / fn[imax];
    lower.fit = FitDiag{lower.value, 0.0, 0.0, 1};
    upper.fit = FitDiag{upper.value, 0.0, 0.0, 1};
    lower.grid[frow[imin]].in_fit = true;
    upper.grid[frow[imax]].in_fit = true;
  } else {
    if (fn.size() < 2) {
      throw Infeasible(
          "capacity_pressure: fewer than two feasible depths in the window");
    }
    int min_span = 2;
    bool have_span2 = false;
    for (std::size_t i = 0; i < fn.size() && !have_span2; ++i) {
      for (std::size_t j = i + 1; j < fn.size(); ++j) {
        if (fn[j] - fn[i] >= 2) {
          have_span2 = true;
          break;
        }
      }
    }
    if (!have_span2) {
      min_span = 1;
      shared_flags.push_back("short-window");
    }
    std::pair<std::size_t, std::size_t> amin{0, 1}, amax{0, 1};
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = -cmin;
    for (std::size_t i = 0; i < fn.size(); ++i) {
      for (std::size_t j = i + 1; j < fn.size(); ++j) {
        if (fn[j] - fn[i] < min_span) continue;
        const double c = (fL[j] - fL[i]) / (fn[j] - fn[i]);
        if (c < cmin) {
          cmin = c;
          amin = {i, j};
        }
        if (c > cmax) {
          cmax = c;
          amax = {i, j};
        }
      }
    }
    lower.method = upper.method =
        "min/max chord slope of log cost across the window (span >= 2)";
    lower.value = cmin;
    upper.value = cmax;
    lower.fit = FitDiag{cmin, fL[amin.first] - cmin * fn[amin.first], 0.0, 2};
    upper.fit = FitDiag{cmax, fL[amax.first] - cmax * fn[amax.first], 0.0, 2};
    lower.grid[frow[amin.first]].in_fit = true;
    lower.grid[frow[amin.second]].in_fit = true;
    upper.grid[frow[amax.first]].in_fit = true;
    upper.grid[frow[amax.second]].in_fit = true;
  }
  lower.flags = shared_flags;
  upper.flags = shared_flags;
  return {std::move(lower), std::move(upper)};
}

// ---- regular-set restriction ---------------------------------------------------

RegularRestriction restrict_to_regular_set(const LinearPHModel& model,
                                           const LeafPatch& patch,
                                           const PotentialSeq& P, int n0,
                                           double eps, double tol) {
  if (n0 < 4) throw BadDepth("restrict_to_regular_set: n0 must be >= 4");
  if (!(eps > 0.0)) throw BadRadius("restrict_to_regular_set: eps must be > 0");
  if (!(tol >= 0.0)) {
    throw OutOfRange("restrict_to_regular_set: tol must be >= 0");
  }
  const int K = patch.K();
  const double window = 2.0 * patch.delta;

  // Depth-n0 local-entropy rate per sample, from the unclipped ball diameter
  // so samples near the window edge are not spuriously atypical.
  const double diam =
      std::min(2.0 * eps / model.unstable_stretch(n0 - 1), window);
  const double bk_all = -std::log(diam / window) / n0;
  std::vector<double> bk(static_cast<std::size_t>(K), bk_all);

  const int depths[] = {n0};
  const auto table = P.log_gn_table(model, patch, depths);
  std::vector<double> g(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    g[static_cast<std::size_t>(i)] = table[0][static_cast<std::size_t>(i)] / n0;
  }

  const double med_bk = num::lower_median(bk);
  const double med_g = num::lower_median(g);
  std::vector<int> kept;
  for (int i = 0; i < K; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (std::abs(bk[u] - med_bk) <= tol && std::abs(g[u] - med_g) <= tol) {
      kept.push_back(i);
    }
  }
  if (kept.empty()) {
    throw EmptySurvivors("restrict_to_regular_set: no sample within tol of "
                         "both medians");
  }

  RegularRestriction out;
  out.kept = kept;
  std::vector<double> kept_w;
  kept_w.reserve(kept.size());
  for (int i : kept) kept_w.push_back(patch.w[static_cast<std::size_t>(i)]);
  out.survivor_fraction = num::pairwise_sum(kept_w);

  out.patch.base = patch.base;
  out.patch.dir = patch.dir;
  out.patch.delta = patch.delta;
  out.patch.scheme = patch.scheme;
  out.patch.seed = patch.seed;
  out.patch.t.reserve(kept.size());
  out.patch.w.reserve(kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    out.patch.t.push_back(patch.t[static_cast<std::size_t>(kept[j])]);
    out.patch.w.push_back(kept_w[j] / out.survivor_fraction);
  }
  return out;
}

}  // namespace leafpress
