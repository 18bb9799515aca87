#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "leafpress/dynamics.hpp"
#include "leafpress/estimators.hpp"
#include "leafpress/potentials.hpp"

namespace leafpress {

// Outcome of one theorem-level check: the named quantities that were
// computed, the named absolute gaps that were tested, and the verdict
// (pass iff every gap <= tolerance). Quantities and discrepancies keep
// insertion order so reports serialize stably.
struct TheoremReport {
  std::string theorem;
  std::vector<std::pair<std::string, double>> quantities;
  std::vector<std::pair<std::string, double>> discrepancies;
  double tolerance = 0.10;
  bool pass = false;
  double runtime_seconds = 0.0;
  std::vector<std::string> notes;
};

// Patch and grid parameters shared by the theorem checks. One canonical
// leaf patch at a seeded base point stands in for the measure-theoretic
// sup/integral; the insensitivity check probes that reduction.
struct VerifyConfig {
  TorusPoint base = make_point2(0.1, 0.2);
  double delta = 0.5;
  int K = 8192;
  PatchScheme scheme = PatchScheme::UniformGrid;
  std::uint64_t seed = 0;
  IntRange n_window{6, 14};
  std::vector<double> eps_ladder{0.2, 0.1, 0.05};
  std::vector<double> gamma_ladder{0.05};
  double partition_side = 0.25;
  SamplerKind lyap_sampler = SamplerKind::Halton;
  int lyap_n_max = 64;
  int lyap_samples = 256;
  double tolerance = 0.10;
  double insensitivity_tolerance = 0.05;
};

// Pressure = entropy + asymptotic potential rate: spanning pressure vs the
// mean of the two entropy estimators plus the Lyapunov exponent of P.
TheoremReport verify_thm_1_1(const LinearPHModel& model, const PotentialSeq& P,
                             const VerifyConfig& config);

// Four-way coincidence of the metric pressures: spanning, trend Bowen,
// capacity lower and upper; all pairwise gaps reported. Shares the patch,
// ladders and seed with verify_thm_1_1, so the spanning entries of the two
// reports are identical numbers.
TheoremReport verify_thm_1_3(const LinearPHModel& model, const PotentialSeq& P,
                             const VerifyConfig& config);

// Finite-scale cover-pressure properties on small exhaustively solvable
// patches (every fixture must have K <= 12): target-set monotonicity,
// union/max rule, and the ordering chain s* <= capacity-lower <=
// capacity-upper. Gaps are one-sided violations, tested against 1e-9.
TheoremReport verify_prop_4_6(const LinearPHModel& model,
                              const PotentialSeq& P,
                              const std::vector<LeafPatch>& fixtures);

// Block-sum bound: reports the minimal constant C with
//   sup over the ball of log g_n  <=  sum_{i<n} (1/l) log g_l(f^i y) + n rho + C
// across sampled y and n <= n_max, at eps and two refinements; pass iff C is
// finite and non-increasing as eps shrinks. A potential that fails the
// sub-additivity precheck is reported as inapplicable, not failed.
TheoremReport verify_sup_bound_lemma(const LinearPHModel& model,
                                     const PotentialSeq& P, int l, double rho,
                                     double eps, int samples, int n_max);

// Spanning pressure across a gamma ladder at one base point, and across
// base points at the smallest gamma; reports the max pairwise gap
// (default tolerance 0.05). gamma values need not be sorted and may repeat.
TheoremReport verify_gamma_eta_insensitivity(
    const LinearPHModel& model, const PotentialSeq& P,
    std::span<const double> gamma_ladder,
    std::span<const TorusPoint> base_points, const VerifyConfig& config);

}  // namespace leafpress
