#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "leafpress/dynamics.hpp"
#include "leafpress/errors.hpp"
#include "leafpress/potentials.hpp"
#include "leafpress/verify.hpp"

using namespace leafpress;

namespace {

LinearPHModel cat() { return build_linear_model({{2, 1}, {1, 1}}); }

// A fast configuration: all per-depth covers stay in the pure tiling regime,
// so the estimates land near log(lambda_u) per unit of potential rate.
VerifyConfig small_config() {
  VerifyConfig c;
  c.K = 2048;
  c.n_window = IntRange{3, 5};
  c.eps_ladder = {0.2, 0.1};
  c.gamma_ladder = {0.05};
  c.lyap_n_max = 32;
  c.lyap_samples = 64;
  return c;
}

double get(const TheoremReport& rep, const std::string& name) {
  for (const auto& [k, v] : rep.quantities) {
    if (k == name) return v;
  }
  for (const auto& [k, v] : rep.discrepancies) {
    if (k == name) return v;
  }
  REQUIRE_MESSAGE(false, "missing report entry: " << name);
  return 0.0;
}

bool has_note(const TheoremReport& rep, const std::string& needle) {
  return std::any_of(rep.notes.begin(), rep.notes.end(),
                     [&](const std::string& s) {
                       return s.find(needle) != std::string::npos;
                     });
}

}  // namespace

TEST_CASE("verify_thm_1_1: pressure balances entropy plus rate") {
  const auto m = cat();
  const auto cfg = small_config();
  const double loglam = m.log_lambda_u();

  const auto rep = verify_thm_1_1(m, PotentialSeq::unstable_norm_power(1.0), cfg);
  CHECK(rep.theorem == "1.1");
  CHECK(rep.pass);
  CHECK(rep.tolerance == doctest::Approx(0.10));
  CHECK(rep.runtime_seconds > 0.0);
  CHECK(rep.quantities.size() == 5);
  CHECK(rep.discrepancies.size() == 1);
  // On this grid the spanning estimate is rate + tiling slope ~= 1.9201.
  CHECK(std::fabs(get(rep, "spanning_pressure") - 1.9201) < 0.01);
  CHECK(std::fabs(get(rep, "potential_rate") - loglam) < 1e-9);
  CHECK(get(rep, "pressure_vs_entropy_plus_rate") < 0.05);
  CHECK(std::fabs(get(rep, "entropy_mean") - loglam) < 0.05);
  CHECK(has_note(rep, "almost-every base point"));

  // Zero potential: the rate vanishes identically.
  const auto rep0 = verify_thm_1_1(m, PotentialSeq::parse("zero"), cfg);
  CHECK(rep0.pass);
  CHECK(get(rep0, "potential_rate") == 0.0);
  CHECK(std::fabs(get(rep0, "spanning_pressure") - 0.9576) < 0.01);

  // t = -1: pressure collapses to roughly zero.
  const auto repn = verify_thm_1_1(m, PotentialSeq::unstable_norm_power(-1.0), cfg);
  CHECK(repn.pass);
  CHECK(std::fabs(get(repn, "spanning_pressure")) < 0.05);
  CHECK(std::fabs(get(repn, "potential_rate") + loglam) < 1e-9);
}

TEST_CASE("verify_thm_1_3: four pressures coincide; spanning shared with 1.1") {
  const auto m = cat();
  const auto cfg = small_config();
  const auto P = PotentialSeq::unstable_norm_power(1.0);

  const auto r11 = verify_thm_1_1(m, P, cfg);
  const auto r13 = verify_thm_1_3(m, P, cfg);
  CHECK(r13.theorem == "1.3");
  CHECK(r13.pass);
  CHECK(r13.quantities.size() == 4);
  CHECK(r13.discrepancies.size() == 6);

  // Same config => same patch and ladders => identical spanning numbers.
  CHECK(get(r13, "spanning") == get(r11, "spanning_pressure"));

  // All pairwise gaps are far inside the tolerance on this grid; the three
  // least-squares-flavoured reductions coincide to rounding.
  for (const auto& [name, gap] : r13.discrepancies) CHECK(gap < 0.01);
  CHECK(get(r13, "spanning_vs_bowen") < 1e-9);

  // Adding a constant rate shifts every quantity by exactly that rate.
  const auto r13s = verify_thm_1_3(m, P.shifted(0.3), cfg);
  REQUIRE(r13s.quantities.size() == r13.quantities.size());
  for (std::size_t i = 0; i < r13.quantities.size(); ++i) {
    CHECK(r13s.quantities[i].first == r13.quantities[i].first);
    CHECK(std::fabs(r13s.quantities[i].second -
                    (r13.quantities[i].second + 0.3)) < 1e-9);
  }
}

TEST_CASE("verify_prop_4_6: exhaustive fixtures satisfy all three laws") {
  const auto m = cat();
  std::vector<LeafPatch> fixtures;
  fixtures.push_back(sample_leaf_patch(m, make_point2(0.3, 0.7), 0.01, 12,
                                       PatchScheme::UniformGrid, 0));
  fixtures.push_back(sample_leaf_patch(m, make_point2(0.6, 0.25), 0.01, 11,
                                       PatchScheme::StratifiedRandom, 3));

  for (const char* spec : {"unstable-norm-power:1", "zero"}) {
    const auto rep = verify_prop_4_6(m, PotentialSeq::parse(spec), fixtures);
    CHECK(rep.theorem == "4.6");
    CHECK(rep.pass);
    CHECK(rep.tolerance == doctest::Approx(1e-9));
    for (const auto& [name, gap] : rep.discrepancies) CHECK(gap <= 1e-9);
    // Identical target sets reproduce bitwise.
    CHECK(get(rep, "equal_sets_gap") == 0.0);
    // The dominant-side construction makes union/max exact.
    CHECK(get(rep, "union_max_gap") == 0.0);
    CHECK(rep.quantities.size() == 6 * fixtures.size());
    CHECK(get(rep, "f0_crossing_half") <= get(rep, "f0_crossing_full"));
    CHECK(get(rep, "f0_crossing_full") <=
          get(rep, "f0_capacity_lower") + 1e-9);
    CHECK(get(rep, "f0_capacity_lower") <=
          get(rep, "f0_capacity_upper") + 1e-12);
    CHECK(has_note(rep, "split potential"));
  }

  // Guard rails.
  const auto P = PotentialSeq::parse("zero");
  CHECK_THROWS_AS(verify_prop_4_6(m, P, {}), OutOfRange);
  std::vector<LeafPatch> big;
  big.push_back(sample_leaf_patch(m, make_point2(0.3, 0.7), 0.01, 17,
                                  PatchScheme::UniformGrid, 0));
  CHECK_THROWS_AS(verify_prop_4_6(m, P, big), FixtureTooLarge);
  std::vector<LeafPatch> wrapped;
  wrapped.push_back(sample_leaf_patch(m, make_point2(0.001, 0.5), 0.01, 12,
                                      PatchScheme::UniformGrid, 0));
  CHECK_THROWS_AS(verify_prop_4_6(m, P, wrapped), BadPatch);
}

TEST_CASE("verify_sup_bound_lemma: constants, monotonicity, applicability") {
  const auto m = cat();

  // Exact cocycle potential: both sides of the bound agree, so the minimal
  // constant is exactly -rho at every radius.
  const auto rep =
      verify_sup_bound_lemma(m, PotentialSeq::unstable_norm_power(1.0), 2,
                             0.01, 0.05, 64, 12);
  CHECK(rep.theorem == "sup-bound-lemma");
  CHECK(rep.pass);
  CHECK(std::fabs(get(rep, "minimal_C") + 0.01) < 1e-9);
  CHECK(std::fabs(get(rep, "C_at_half_radius") + 0.01) < 1e-9);
  CHECK(std::fabs(get(rep, "C_at_quarter_radius") + 0.01) < 1e-9);
  CHECK(get(rep, "radius_monotonicity_violation") == 0.0);
  CHECK(get(rep, "finite_check") == 0.0);

  // A genuinely varying Birkhoff potential still yields a finite,
  // non-increasing constant.
  const auto repc = verify_sup_bound_lemma(m, PotentialSeq::parse("cos1"), 1,
                                           0.01, 0.05, 64, 10);
  CHECK(repc.pass);
  CHECK(std::isfinite(get(repc, "minimal_C")));
  CHECK(get(repc, "radius_monotonicity_violation") == 0.0);
  CHECK(get(repc, "minimal_C") >= get(repc, "C_at_half_radius") - 1e-12);

  // A super-additive sequence is reported as inapplicable, not failed.
  const auto nsq = PotentialSeq::custom(
      "quadratic-growth",
      [](const LinearPHModel&, const TorusPoint&, int n) {
        return 0.01 * n * n;
      });
  const auto repq = verify_sup_bound_lemma(m, nsq, 1, 0.01, 0.05, 16, 8);
  CHECK(repq.pass);
  CHECK(repq.discrepancies.empty());
  CHECK(has_note(repq, "inapplicable"));
  CHECK(get(repq, "subadditivity_max_violation") > 0.0);

  // Input validation.
  const auto P = PotentialSeq::parse("zero");
  CHECK_THROWS_AS(verify_sup_bound_lemma(m, P, 0, 0.01, 0.05, 16, 8),
                  BadDepth);
  CHECK_THROWS_AS(verify_sup_bound_lemma(m, P, 1, 0.0, 0.05, 16, 8),
                  OutOfRange);
  CHECK_THROWS_AS(verify_sup_bound_lemma(m, P, 1, 0.01, -0.05, 16, 8),
                  BadRadius);
  CHECK_THROWS_AS(verify_sup_bound_lemma(m, P, 1, 0.01, 0.05, 1, 8),
                  OutOfRange);
  CHECK_THROWS_AS(verify_sup_bound_lemma(m, P, 1, 0.01, 0.05, 16, 1),
                  BadWindow);
}

TEST_CASE("verify_gamma_eta_insensitivity: stable across gamma and base") {
  const auto m = cat();
  auto cfg = small_config();
  cfg.eps_ladder = {0.1};
  const auto P = PotentialSeq::unstable_norm_power(1.0);

  const std::vector<double> gammas{0.2, 0.05};
  const std::vector<TorusPoint> bases{make_point2(0.1, 0.2),
                                      make_point2(0.4, 0.8)};
  const auto rep = verify_gamma_eta_insensitivity(m, P, gammas, bases, cfg);
  CHECK(rep.theorem == "gamma-eta-insensitivity");
  CHECK(rep.pass);
  CHECK(rep.tolerance == doctest::Approx(0.05));
  CHECK(rep.quantities.size() == 3);  // two gammas + one extra base point
  CHECK(get(rep, "max_pairwise_gap") < 0.02);
  CHECK(std::fabs(get(rep, "gamma[0]=0.2") - get(rep, "gamma[1]=0.05")) <
        0.02);
  CHECK(has_note(rep, "almost every base point"));

  // Repeating a gamma is allowed and contributes a zero gap.
  const std::vector<double> twice{0.1, 0.1};
  const auto rep2 = verify_gamma_eta_insensitivity(m, P, twice, bases, cfg);
  CHECK(rep2.pass);
  CHECK(get(rep2, "gamma[0]=0.1") == get(rep2, "gamma[1]=0.1"));

  // Preconditions.
  const std::vector<double> one_gamma{0.1};
  CHECK_THROWS_AS(verify_gamma_eta_insensitivity(m, P, one_gamma, bases, cfg),
                  BadLadder);
  const std::vector<TorusPoint> one_base{make_point2(0.1, 0.2)};
  CHECK_THROWS_AS(verify_gamma_eta_insensitivity(m, P, gammas, one_base, cfg),
                  OutOfRange);
  const std::vector<double> bad_gamma{0.2, 1.0};
  CHECK_THROWS_AS(verify_gamma_eta_insensitivity(m, P, bad_gamma, bases, cfg),
                  OutOfRange);
}
