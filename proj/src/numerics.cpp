#include "leafpress/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leafpress/errors.hpp"

namespace leafpress::num {

namespace {
double pairwise_rec(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_rec(v, half) + pairwise_rec(v + half, n - half);
}
}  // namespace

double pairwise_sum(std::span<const double> v) {
  return pairwise_rec(v.data(), v.size());
}

double mean(std::span<const double> v) {
  if (v.empty()) throw LengthMismatch("mean of empty sequence");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double logaddexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double logsumexp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : v) hi = std::max(hi, x);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  if (std::isinf(hi)) return hi;
  std::vector<double> shifted(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) shifted[i] = std::exp(v[i] - hi);
  return hi + std::log(pairwise_sum(shifted));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw LengthMismatch("fit_line: x and y lengths differ");
  if (x.size() < 2) throw LengthMismatch("fit_line: need at least 2 points");
  const std::size_t n = x.size();
  double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  if (sxx <= 0.0) throw LengthMismatch("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = static_cast<int>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return f;
}

double lower_median(std::vector<double> v) {
  if (v.empty()) throw LengthMismatch("lower_median of empty sequence");
  std::size_t k = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

double halton(std::uint64_t i, std::uint32_t base) {
  if (base < 2) throw OutOfRange("halton base must be >= 2");
  double f = 1.0, r = 0.0;
  std::uint64_t k = i + 1;  // skip the 0 term so the sequence starts inside (0,1)
  while (k > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(k % base);
    k /= base;
  }
  return r;
}

}  // namespace leafpress::num
