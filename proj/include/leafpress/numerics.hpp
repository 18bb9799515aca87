#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace leafpress::num {

// Deterministic pairwise (tree) summation. Same result for the same input on
// every platform; much better conditioned than left-to-right accumulation.
double pairwise_sum(std::span<const double> v);
double mean(std::span<const double> v);

// log(exp(a) + exp(b)) without overflow; handles -inf identities.
double logaddexp(double a, double b);

// log(sum_i exp(v[i])) via two passes (max shift, then pairwise sum).
double logsumexp(std::span<const double> v);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  int points = 0;
};

// Ordinary least squares fit y ~ intercept + slope*x. Requires >= 2 points
// with non-degenerate x spread.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Lower median: element at index (n-1)/2 of the sorted sequence. Always an
// element of the input, so at least one sample attains it exactly.
double lower_median(std::vector<double> v);

// SplitMix64: tiny, splittable, reproducible PRNG used for all sampling.
// next_unit() maps the top 53 bits to [0,1).
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return z;
  }
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// i-th element (i >= 0) of the van der Corput sequence in the given base.
double halton(std::uint64_t i, std::uint32_t base);

}  // namespace leafpress::num
