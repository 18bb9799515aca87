#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "leafpress/dynamics.hpp"

namespace leafpress {

// ---- pointwise potentials for Birkhoff sums ---------------------------------

enum class PhiKind { Zero, Const, Cos1 };

struct PhiFn {
  PhiKind kind = PhiKind::Zero;
  double c = 0.0;  // the constant for Const
};

// "zero" | "const:<value>" | "cos1" (cos of 2*pi times the first coordinate).
// Throws UnknownFlavor otherwise.
PhiFn parse_phi(const std::string& spec);
double phi_eval(const PhiFn& phi, const TorusPoint& p);
std::string phi_name(const PhiFn& phi);

// ---- sub-additive potential sequences  G = { log g_n } ----------------------

// A family of functions log g_n indexed by depth n >= 1. Built-in flavors:
//   birkhoff(phi)             log g_n(x) = sum_{i<n} phi(f^i x)
//   unstable-norm-power(t)    log g_n(x) = t * log |Df^n|_u|  ( = t n log lu )
//   constant-rate(c)          log g_n(x) = n c
//   custom(name, fn)          arbitrary callback (used by test fixtures)
// Any sequence can be shifted: log g_n -> log g_n + n * rate.
class PotentialSeq {
 public:
  enum class Flavor { Additive, UnstableNormPower, ConstantRate, Custom };
  using CustomFn =
      std::function<double(const LinearPHModel&, const TorusPoint&, int)>;

  static PotentialSeq birkhoff(PhiFn phi);
  static PotentialSeq unstable_norm_power(double t);
  static PotentialSeq constant_rate(double c);
  static PotentialSeq custom(std::string name, CustomFn fn);

  // Parses "zero", "const:<c>", "cos1" (Birkhoff flavors),
  // "unstable-norm-power:<t>" (or bare for t=1), "constant-rate:<c>".
  static PotentialSeq parse(const std::string& spec);

  PotentialSeq shifted(double rate) const;

  Flavor flavor() const { return flavor_; }
  double shift_rate() const { return shift_; }
  const PhiFn& phi() const { return phi_; }
  double power() const { return power_; }  // t for UnstableNormPower
  double rate() const { return rate_; }    // c for ConstantRate
  std::string describe() const;

  // log g_n at a single point, n >= 1 (throws BadDepth otherwise).
  double log_gn(const LinearPHModel& model, const TorusPoint& p, int n) const;

  // Table of log g_n values: one row per requested depth (ns strictly
  // increasing, all >= 1), one column per point. Runs a single batched orbit
  // for additive flavors.
  std::vector<std::vector<double>> log_gn_points(
      const LinearPHModel& model, std::span<const TorusPoint> pts,
      std::span<const int> ns) const;
  std::vector<std::vector<double>> log_gn_table(const LinearPHModel& model,
                                                const LeafPatch& patch,
                                                std::span<const int> ns) const;

 private:
  Flavor flavor_ = Flavor::Additive;
  PhiFn phi_{};
  double power_ = 1.0;
  double rate_ = 0.0;
  double shift_ = 0.0;
  std::string name_;
  CustomFn fn_;
};

// Convenience constructors mirroring the two canonical families.
PotentialSeq birkhoff_potential(PhiFn phi);
PotentialSeq unstable_norm_potential(const LinearPHModel& model, double t);

// ---- diagnostics -------------------------------------------------------------

struct SubadditivityReport {
  struct Violation {
    int point;
    int m;
    int n;
    double slack;  // log g_{m+n}(x) - log g_m(x) - log g_n(f^m x), positive
  };
  std::vector<Violation> violations;
  double max_violation = 0.0;
  int checked = 0;
  bool ok() const { return violations.empty(); }
};

// Checks log g_{m+n}(x) <= log g_m(x) + log g_n(f^m x) + tol for all
// 1 <= m, n with m + n <= max_n at each supplied point.
SubadditivityReport check_subadditive(const PotentialSeq& seq,
                                      const LinearPHModel& model,
                                      std::span<const TorusPoint> pts,
                                      int max_n, double tol = 1e-9);

// ---- asymptotic exponent ------------------------------------------------------

enum class SamplerKind { Uniform, Halton };

struct LyapunovEstimate {
  double value = 0.0;      // mean over samples of (1/n_max) log g_{n_max}
  int n_used = 0;          // n_max
  int samples = 0;
  double spread = 0.0;     // sample standard deviation at n_max
  // Means at depths ~n_max/4, ~n_max/2, n_max for convergence inspection.
  std::array<std::pair<int, double>, 3> checkpoints{};
  bool degenerate = false;  // some sample hit the -1e6 rate floor
};

// Monte-Carlo / low-discrepancy estimate of the sub-additive growth exponent
// G* = lim (1/n) log g_n. Per-sample rates are floored at -1e6 (flagged).
LyapunovEstimate lyapunov_exponent(const PotentialSeq& seq,
                                   const LinearPHModel& model,
                                   SamplerKind sampler, int n_max, int samples,
                                   std::uint64_t seed);

}  // namespace leafpress
