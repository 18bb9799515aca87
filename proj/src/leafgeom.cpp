#include "leafpress/leafgeom.hpp"

#include <algorithm>
#include <cmath>

#include "leafpress/errors.hpp"
#include "leafpress/kernels.hpp"
#include "leafpress/numerics.hpp"

namespace leafpress {

namespace {
void check_sample(const LeafPatch& patch, int i, const char* who) {
  if (i < 0 || i >= patch.K())
    throw OutOfRange(std::string(who) + ": sample index " + std::to_string(i) +
                     " outside patch of size " + std::to_string(patch.K()));
}
}  // namespace

double du_n(const LinearPHModel& model, const LeafPatch& patch, int i, int j,
            int n) {
  if (n < 1) throw BadDepth("du_n: depth must be >= 1");
  check_sample(patch, i, "du_n");
  check_sample(patch, j, "du_n");
  const double scale = model.unstable_stretch(n - 1);
  return std::fabs(patch.t[static_cast<std::size_t>(i)] -
                   patch.t[static_cast<std::size_t>(j)]) *
         scale;
}

std::vector<std::int32_t> bowen_ball_members(const LinearPHModel& model,
                                             const LeafPatch& patch,
                                             int center, int n, double eps) {
  if (n < 1) throw BadDepth("bowen_ball_members: depth must be >= 1");
  if (!(eps > 0.0)) throw BadRadius("bowen_ball_members: eps must be > 0");
  check_sample(patch, center, "bowen_ball_members");
  const double tc = patch.t[static_cast<std::size_t>(center)];
  const double scale = model.unstable_stretch(n - 1);
  // Membership predicate fl(|t - tc| * scale) <= eps, evaluated with exactly
  // the same rounding as du_n. The parameters are sorted, so members form a
  // contiguous range located by binary search on each side of the center.
  auto outside = [&](double tv) {
    return std::fabs(tv - tc) * scale > eps;
  };
  const auto& t = patch.t;
  auto lo_it = std::partition_point(
      t.begin(), t.begin() + center,
      [&](double tv) { return outside(tv); });
  auto hi_it = std::partition_point(
      t.begin() + center, t.end(),
      [&](double tv) { return !outside(tv); });
  std::vector<std::int32_t> out;
  out.reserve(static_cast<std::size_t>(hi_it - lo_it));
  for (auto it = lo_it; it != hi_it; ++it)
    out.push_back(static_cast<std::int32_t>(it - t.begin()));
  return out;
}

LeafInterval bowen_ball_interval(const LinearPHModel& model,
                                 const LeafPatch& patch, int center, int n,
                                 double eps) {
  if (n < 1) throw BadDepth("bowen_ball_interval: depth must be >= 1");
  if (!(eps > 0.0)) throw BadRadius("bowen_ball_interval: eps must be > 0");
  check_sample(patch, center, "bowen_ball_interval");
  const double tc = patch.t[static_cast<std::size_t>(center)];
  const double r = eps / model.unstable_stretch(n - 1);
  return {std::max(tc - r, -patch.delta), std::min(tc + r, patch.delta)};
}

Partition build_partition(int dim, double cell_side) {
  if (dim != 2 && dim != 3)
    throw UnsupportedDimension("partition dimension must be 2 or 3");
  if (!(cell_side > 0.0) || cell_side > 1.0)
    throw BadCellSide("cell side must lie in (0, 1], got " +
                      std::to_string(cell_side));
  // ceil(1/side), robust to 1/side landing a few ulp above an integer.
  auto m = static_cast<std::int64_t>(std::ceil(1.0 / cell_side - 1e-9));
  if (m < 1) m = 1;
  std::int64_t count = m;
  for (int k = 1; k < dim; ++k) count *= m;
  if (count > 0x7fffffffLL)
    throw BadCellSide("cell count " + std::to_string(count) +
                      " does not fit a 32-bit id");
  Partition p;
  p.dim = dim;
  p.cells_per_axis = static_cast<int>(m);
  p.cell_side = cell_side;
  p.cell_count = count;
  return p;
}

Partition build_partition(const LinearPHModel& model, double cell_side) {
  return build_partition(model.dim(), cell_side);
}

std::int32_t cell_of(const Partition& part, const TorusPoint& p) {
  if (p.dim != part.dim)
    throw LengthMismatch("cell_of: point dimension differs from partition");
  std::int32_t out = 0;
  if (part.dim == 2) {
    kernels::cell_index_2d(&p.x[0], &p.x[1], 1, part.cells_per_axis, &out);
  } else {
    kernels::cell_index_3d(&p.x[0], &p.x[1], &p.x[2], 1, part.cells_per_axis,
                           &out);
  }
  return out;
}

ItineraryCode itinerary(const LinearPHModel& model, const Partition& part,
                        const TorusPoint& y, int n) {
  if (n < 1) throw BadDepth("itinerary: need at least one symbol");
  if (y.dim != model.dim() || part.dim != model.dim())
    throw LengthMismatch("itinerary: dimension mismatch");
  ItineraryCode code;
  code.w.reserve(static_cast<std::size_t>(n));
  TorusPoint q = y;
  for (int i = 0; i < n; ++i) {
    code.w.push_back(cell_of(part, q));
    if (i + 1 < n) q = iterate(model, q, 1);
  }
  return code;
}

double hamming_distance(const ItineraryCode& a, const ItineraryCode& b) {
  if (a.w.size() != b.w.size())
    throw LengthMismatch("hamming_distance: code lengths differ");
  if (a.w.empty()) throw LengthMismatch("hamming_distance: empty codes");
  std::size_t mism =
      kernels::count_mismatch_i32(a.w.data(), b.w.data(), a.w.size());
  return static_cast<double>(mism) / static_cast<double>(a.w.size());
}

double hamming_ball_log_count(double r, int N, std::int64_t n) {
  if (N < 2) throw OutOfRange("hamming_ball_log_count: N must be >= 2");
  if (n < 1) throw OutOfRange("hamming_ball_log_count: n must be >= 1");
  if (!(r >= 0.0) || r > 1.0)
    throw OutOfRange("hamming_ball_log_count: r must lie in [0, 1]");
  const double dn = static_cast<double>(n);
  auto m_max = static_cast<std::int64_t>(std::floor(r * dn));
  m_max = std::min(m_max, n);
  const double logNm1 = std::log(static_cast<double>(N - 1));
  auto log_term = [&](std::int64_t m) {
    const double dm = static_cast<double>(m);
    return dm * logNm1 + std::lgamma(dn + 1.0) - std::lgamma(dm + 1.0) -
           std::lgamma(dn - dm + 1.0);
  };
  // Streaming two-pass log-sum-exp: max first, then the shifted sum.
  double hi = log_term(0);
  for (std::int64_t m = 1; m <= m_max; ++m) hi = std::max(hi, log_term(m));
  double s = 0.0;
  for (std::int64_t m = 0; m <= m_max; ++m) s += std::exp(log_term(m) - hi);
  return hi + std::log(s);
}

double hamming_asymptotic_rate(double r, int N) {
  if (N < 2) throw OutOfRange("hamming_asymptotic_rate: N must be >= 2");
  const double top = (static_cast<double>(N) - 1.0) / static_cast<double>(N);
  if (!(r > 0.0) || r > top)
    throw OutOfRange(
        "hamming_asymptotic_rate: r must lie in (0, (N-1)/N], got " +
        std::to_string(r));
  return r * std::log(static_cast<double>(N - 1)) - r * std::log(r) -
         (1.0 - r) * std::log1p(-r);
}

}  // namespace leafpress
