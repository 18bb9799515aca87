#include "leafpress/cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <utility>

#include "leafpress/errors.hpp"
#include "leafpress/leafgeom.hpp"
#include "leafpress/numerics.hpp"

namespace leafpress {

namespace {

// Disjoint sorted segments keyed by left end; tracks total covered length.
class IntervalUnion {
 public:
  // Length of [lo, hi] not currently covered.
  double gain(double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    double overlap = 0.0;
    auto it = seg_.upper_bound(lo);
    if (it != seg_.begin()) {
      auto prev = std::prev(it);
      if (prev->second > lo) {
        overlap += std::min(prev->second, hi) - lo;
      }
    }
    for (; it != seg_.end() && it->first < hi; ++it) {
      overlap += std::min(it->second, hi) - it->first;
    }
    double g = (hi - lo) - overlap;
    return g > 0.0 ? g : 0.0;
  }

  // Inserts [lo, hi], merging as needed; returns the newly covered length.
  double insert(double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    double added = gain(lo, hi);
    auto it = seg_.upper_bound(lo);
    if (it != seg_.begin()) {
      auto prev = std::prev(it);
      if (prev->second >= lo) {
        lo = prev->first;
        hi = std::max(hi, prev->second);
        it = seg_.erase(prev);
      }
    }
    while (it != seg_.end() && it->first <= hi) {
      hi = std::max(hi, it->second);
      it = seg_.erase(it);
    }
    seg_.emplace(lo, hi);
    total_ += added;
    return added;
  }

  double total() const { return total_; }

 private:
  std::map<double, double> seg_;
  double total_ = 0.0;
};

double ball_cost(const CandidateBall& b, double s) {
  return b.sup_log_g - s * static_cast<double>(b.n);
}

// log sum of exp(cost) over the chosen balls, reduced in ascending ball-index
// order for reproducibility.
double chosen_log_cost(const BallFamily& fam, std::vector<int> chosen,
                       double s) {
  std::sort(chosen.begin(), chosen.end());
  std::vector<double> costs;
  costs.reserve(chosen.size());
  for (int idx : chosen) costs.push_back(ball_cost(fam.balls[idx], s));
  return num::logsumexp(costs);
}

// Weight-sum of the union of member sets of the chosen balls.
double chosen_member_mass(const BallFamily& fam,
                          const std::vector<int>& chosen) {
  std::vector<char> hit(fam.w.size(), 0);
  for (int idx : chosen) {
    const CandidateBall& b = fam.balls[idx];
    for (int i = b.lo; i <= b.hi; ++i) hit[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<double> parts;
  for (std::size_t i = 0; i < fam.w.size(); ++i) {
    if (hit[i]) parts.push_back(fam.w[i]);
  }
  return num::pairwise_sum(parts);
}

double chosen_interval_fraction(const BallFamily& fam,
                                std::vector<int> chosen) {
  double window = fam.leaf_hi - fam.leaf_lo;
  if (!(window > 0.0)) return 0.0;
  std::sort(chosen.begin(), chosen.end());
  IntervalUnion iu;
  for (int idx : chosen) {
    const CandidateBall& b = fam.balls[idx];
    iu.insert(b.t_lo, b.t_hi);
  }
  return iu.total() / window;
}

CoverSolution greedy_cover(const BallFamily& fam, const CoverGoal& goal,
                           double s) {
  const int B = static_cast<int>(fam.balls.size());
  const int K = static_cast<int>(fam.w.size());
  const bool by_mass = goal.kind == CoverGoal::Kind::LeafMass;
  const double window = fam.leaf_hi - fam.leaf_lo;

  // SampleSet state: which samples are wanted and still uncovered.
  std::vector<char> wanted(static_cast<std::size_t>(K), 0);
  long remaining = 0;
  if (!by_mass) {
    for (int idx : goal.targets) {
      if (idx < 0 || idx >= K) {
        throw OutOfRange("cover target index out of range");
      }
      if (!wanted[static_cast<std::size_t>(idx)]) {
        wanted[static_cast<std::size_t>(idx)] = 1;
        ++remaining;
      }
    }
  }
  std::vector<char> covered(static_cast<std::size_t>(K), 0);

  IntervalUnion iu;
  const double need =
      by_mass ? goal.mass_fraction * window - 1e-12 * std::max(window, 1.0)
              : 0.0;

  auto current_gain = [&](int idx) -> double {
    const CandidateBall& b = fam.balls[idx];
    if (by_mass) return iu.gain(b.t_lo, b.t_hi);
    double g = 0.0;
    for (int i = b.lo; i <= b.hi; ++i) {
      auto u = static_cast<std::size_t>(i);
      if (wanted[u] && !covered[u]) g += fam.w[u];
    }
    return g;
  };
  auto remaining_in = [&](int idx) -> long {
    const CandidateBall& b = fam.balls[idx];
    long c = 0;
    for (int i = b.lo; i <= b.hi; ++i) {
      auto u = static_cast<std::size_t>(i);
      if (wanted[u] && !covered[u]) ++c;
    }
    return c;
  };

  // Lazy greedy: priority (log gain - cost, -index); stale entries are
  // re-scored on pop, which is safe because gains only shrink.
  using Entry = std::pair<double, int>;  // (ratio, -index)
  std::priority_queue<Entry> heap;
  for (int i = 0; i < B; ++i) {
    double g = current_gain(i);
    if (g > 0.0) {
      heap.emplace(std::log(g) - ball_cost(fam.balls[i], s), -i);
    }
  }

  CoverSolution sol;
  sol.strategy = "greedy";
  auto done = [&]() {
    return by_mass ? iu.total() >= need : remaining == 0;
  };
  while (!done() && !heap.empty()) {
    auto [ratio, neg] = heap.top();
    heap.pop();
    int idx = -neg;
    double g = current_gain(idx);
    if (!(g > 0.0)) continue;  // stale and now useless
    double fresh = std::log(g) - ball_cost(fam.balls[idx], s);
    if (!heap.empty() && std::pair(fresh, neg) < heap.top()) {
      heap.emplace(fresh, neg);  // stale; retry later
      continue;
    }
    // Select.
    const CandidateBall& b = fam.balls[idx];
    if (by_mass) {
      iu.insert(b.t_lo, b.t_hi);
    } else {
      remaining -= remaining_in(idx);
    }
    for (int i = b.lo; i <= b.hi; ++i) covered[static_cast<std::size_t>(i)] = 1;
    sol.chosen.push_back(idx);
  }

  sol.feasible = done();
  sol.total_cost = chosen_log_cost(fam, sol.chosen, s);
  sol.covered_mass = chosen_member_mass(fam, sol.chosen);
  sol.interval_mass = chosen_interval_fraction(fam, sol.chosen);
  return sol;
}

CoverSolution exhaustive_cover(const BallFamily& fam, const CoverGoal& goal,
                               double s) {
  const int B = static_cast<int>(fam.balls.size());
  const int K = static_cast<int>(fam.w.size());
  if (K > 16) {
    throw FixtureTooLarge("exhaustive covers require K <= 16, got K = " +
                          std::to_string(K));
  }
  if (B > 16) {
    throw FixtureTooLarge(
        "exhaustive covers require at most 16 candidate balls, got " +
        std::to_string(B));
  }
  const bool by_mass = goal.kind == CoverGoal::Kind::LeafMass;
  const double window = fam.leaf_hi - fam.leaf_lo;
  const double need =
      by_mass ? goal.mass_fraction * window - 1e-12 * std::max(window, 1.0)
              : 0.0;

  std::uint32_t target_mask = 0;
  for (int idx : goal.targets) {
    if (idx < 0 || idx >= K) {
      throw OutOfRange("cover target index out of range");
    }
    target_mask |= (1u << idx);
  }

  std::vector<std::uint32_t> members(static_cast<std::size_t>(B), 0);
  std::vector<double> costs(static_cast<std::size_t>(B), 0.0);
  std::vector<int> by_tlo(static_cast<std::size_t>(B));
  for (int i = 0; i < B; ++i) {
    const CandidateBall& b = fam.balls[i];
    for (int m = b.lo; m <= b.hi; ++m) {
      members[static_cast<std::size_t>(i)] |= (1u << m);
    }
    costs[static_cast<std::size_t>(i)] = ball_cost(b, s);
    by_tlo[static_cast<std::size_t>(i)] = i;
  }
  std::stable_sort(by_tlo.begin(), by_tlo.end(), [&](int a, int b) {
    return fam.balls[a].t_lo < fam.balls[b].t_lo;
  });

  auto subset_feasible = [&](std::uint32_t mask) -> bool {
    if (!by_mass) {
      std::uint32_t u = 0;
      for (int i = 0; i < B; ++i) {
        if (mask & (1u << i)) u |= members[static_cast<std::size_t>(i)];
      }
      return (u & target_mask) == target_mask;
    }
    // Sweep the subset's intervals in t_lo order.
    double covered = 0.0;
    double cur_lo = 0.0, cur_hi = 0.0;
    bool open = false;
    for (int pos = 0; pos < B; ++pos) {
      int i = by_tlo[static_cast<std::size_t>(pos)];
      if (!(mask & (1u << i))) continue;
      const CandidateBall& b = fam.balls[i];
      if (!(b.t_hi > b.t_lo)) continue;
      if (!open) {
        cur_lo = b.t_lo;
        cur_hi = b.t_hi;
        open = true;
      } else if (b.t_lo <= cur_hi) {
        cur_hi = std::max(cur_hi, b.t_hi);
      } else {
        covered += cur_hi - cur_lo;
        cur_lo = b.t_lo;
        cur_hi = b.t_hi;
      }
    }
    if (open) covered += cur_hi - cur_lo;
    return covered >= need;
  };

  bool found = false;
  double best_cost = 0.0;
  int best_count = 0;
  std::uint32_t best_mask = 0;
  const std::uint32_t limit = B >= 31 ? 0 : (1u << B);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    if (!subset_feasible(mask)) continue;
    double arr[16];
    int cnt = 0;
    for (int i = 0; i < B; ++i) {
      if (mask & (1u << i)) arr[cnt++] = costs[static_cast<std::size_t>(i)];
    }
    double c = num::logsumexp(std::span<const double>(arr, static_cast<std::size_t>(cnt)));
    bool better = !found || c < best_cost ||
                  (c == best_cost && (cnt < best_count ||
                                      (cnt == best_count && mask < best_mask)));
    if (better) {
      found = true;
      best_cost = c;
      best_count = cnt;
      best_mask = mask;
    }
  }

  CoverSolution sol;
  sol.strategy = "exhaustive";
  sol.feasible = found;
  if (!found) {
    // Best effort: take everything, mirroring greedy's exhausted state.
    for (int i = 0; i < B; ++i) {
      if (fam.balls[i].hi >= fam.balls[i].lo) sol.chosen.push_back(i);
    }
  } else {
    for (int i = 0; i < B; ++i) {
      if (best_mask & (1u << i)) sol.chosen.push_back(i);
    }
  }
  sol.total_cost = chosen_log_cost(fam, sol.chosen, s);
  sol.covered_mass = chosen_member_mass(fam, sol.chosen);
  sol.interval_mass = chosen_interval_fraction(fam, sol.chosen);
  return sol;
}

}  // namespace

CoverGoal CoverGoal::leaf_mass(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw OutOfRange("cover mass fraction must lie in (0, 1]");
  }
  CoverGoal g;
  g.kind = Kind::LeafMass;
  g.mass_fraction = fraction;
  return g;
}

CoverGoal CoverGoal::sample_set(std::vector<int> targets) {
  CoverGoal g;
  g.kind = Kind::SampleSet;
  g.targets = std::move(targets);
  return g;
}

BallFamily make_ball_family(const LinearPHModel& model, const LeafPatch& patch,
                            const PotentialSeq& P, std::span<const int> depths,
                            double eps, const std::vector<int>* centers) {
  if (depths.empty()) throw BadDepth("ball family needs at least one depth");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1 || (i > 0 && depths[i] <= depths[i - 1])) {
      throw BadDepth("ball family depths must be strictly increasing, >= 1");
    }
  }
  if (!(eps > 0.0)) throw BadRadius("ball radius must be positive");
  const int K = patch.K();
  std::vector<int> all;
  if (centers == nullptr) {
    all.resize(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) all[static_cast<std::size_t>(i)] = i;
    centers = &all;
  }
  for (int c : *centers) {
    if (c < 0 || c >= K) throw OutOfRange("ball centre index out of range");
  }

  std::vector<std::vector<double>> rows = P.log_gn_table(model, patch, depths);

  BallFamily fam;
  fam.t = patch.t;
  fam.w = patch.w;
  fam.leaf_lo = -patch.delta;
  fam.leaf_hi = patch.delta;
  fam.balls.reserve(depths.size() * centers->size());
  for (std::size_t di = 0; di < depths.size(); ++di) {
    const int n = depths[di];
    RangeMax rmq(rows[di]);
    for (int c : *centers) {
      std::vector<std::int32_t> mem =
          bowen_ball_members(model, patch, c, n, eps);
      LeafInterval iv = bowen_ball_interval(model, patch, c, n, eps);
      CandidateBall b;
      b.center = c;
      b.n = n;
      b.lo = static_cast<int>(mem.front());
      b.hi = static_cast<int>(mem.back());
      b.t_lo = iv.lo;
      b.t_hi = iv.hi;
      b.sup_log_g = rmq.query(b.lo, b.hi);
      fam.balls.push_back(b);
    }
  }
  return fam;
}

CoverSolution solve_cover(const BallFamily& family, const CoverGoal& goal,
                          CoverStrategy strategy, double cost_slope) {
  if (goal.kind == CoverGoal::Kind::LeafMass &&
      !(goal.mass_fraction > 0.0 && goal.mass_fraction <= 1.0)) {
    throw OutOfRange("cover mass fraction must lie in (0, 1]");
  }
  if (goal.kind == CoverGoal::Kind::SampleSet && goal.targets.empty()) {
    throw OutOfRange("sample-set cover goal needs at least one target");
  }
  for (const CandidateBall& b : family.balls) {
    if (b.lo < 0 || b.hi >= static_cast<int>(family.w.size()) || b.lo > b.hi) {
      throw OutOfRange("candidate ball member range out of bounds");
    }
  }
  if (strategy == CoverStrategy::Exhaustive) {
    return exhaustive_cover(family, goal, cost_slope);
  }
  return greedy_cover(family, goal, cost_slope);
}

RangeMax::RangeMax(std::span<const double> values) {
  if (values.empty()) return;
  rows_.emplace_back(values.begin(), values.end());
  for (std::size_t len = 1; 2 * len <= values.size(); len *= 2) {
    const std::vector<double>& prev = rows_.back();
    std::vector<double> next(values.size() - 2 * len + 1);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = std::max(prev[i], prev[i + len]);
    }
    rows_.push_back(std::move(next));
  }
}

double RangeMax::query(int lo, int hi) const {
  if (rows_.empty() || lo < 0 || lo > hi ||
      hi >= static_cast<int>(rows_[0].size())) {
    throw OutOfRange("range-max query out of bounds");
  }
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  const int k = std::bit_width(len) - 1;
  const std::size_t span = std::size_t{1} << k;
  const auto& row = rows_[static_cast<std::size_t>(k)];
  return std::max(row[static_cast<std::size_t>(lo)],
                  row[static_cast<std::size_t>(hi + 1) - span]);
}

}  // namespace leafpress
