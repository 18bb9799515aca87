#include "leafpress/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "leafpress/errors.hpp"
#include "leafpress/kernels.hpp"
#include "leafpress/numerics.hpp"

namespace leafpress {

namespace {
constexpr double kRateFloor = -1e6;

double parse_number(const std::string& spec, std::size_t colon) {
  try {
    std::size_t used = 0;
    double v = std::stod(spec.substr(colon + 1), &used);
    if (colon + 1 + used != spec.size())
      throw UnknownFlavor("trailing characters in '" + spec + "'");
    return v;
  } catch (const UnknownFlavor&) {
    throw;
  } catch (const std::exception&) {
    throw UnknownFlavor("bad numeric parameter in '" + spec + "'");
  }
}
}  // namespace

PhiFn parse_phi(const std::string& spec) {
  if (spec == "zero") return {PhiKind::Zero, 0.0};
  if (spec == "cos1") return {PhiKind::Cos1, 0.0};
  if (spec.rfind("const:", 0) == 0)
    return {PhiKind::Const, parse_number(spec, 5)};
  throw UnknownFlavor("unknown pointwise potential '" + spec +
                      "' (expected zero | const:<c> | cos1)");
}

double phi_eval(const PhiFn& phi, const TorusPoint& p) {
  switch (phi.kind) {
    case PhiKind::Zero: return 0.0;
    case PhiKind::Const: return phi.c;
    case PhiKind::Cos1: return kernels::detail::cos2pi_one(p.x[0]);
  }
  return 0.0;
}

std::string phi_name(const PhiFn& phi) {
  switch (phi.kind) {
    case PhiKind::Zero: return "zero";
    case PhiKind::Const: return "const:" + std::to_string(phi.c);
    case PhiKind::Cos1: return "cos1";
  }
  return "?";
}

PotentialSeq PotentialSeq::birkhoff(PhiFn phi) {
  PotentialSeq s;
  s.flavor_ = Flavor::Additive;
  s.phi_ = phi;
  s.name_ = "birkhoff(" + phi_name(phi) + ")";
  return s;
}

PotentialSeq PotentialSeq::unstable_norm_power(double t) {
  PotentialSeq s;
  s.flavor_ = Flavor::UnstableNormPower;
  s.power_ = t;
  s.name_ = "unstable-norm-power(t=" + std::to_string(t) + ")";
  return s;
}

PotentialSeq birkhoff_potential(PhiFn phi) {
  return PotentialSeq::birkhoff(phi);
}

PotentialSeq unstable_norm_potential(const LinearPHModel& model, double t) {
  (void)model;  // the cocycle norm is evaluated against the model at call time
  return PotentialSeq::unstable_norm_power(t);
}

PotentialSeq PotentialSeq::constant_rate(double c) {
  PotentialSeq s;
  s.flavor_ = Flavor::ConstantRate;
  s.rate_ = c;
  s.name_ = "constant-rate(" + std::to_string(c) + ")";
  return s;
}

PotentialSeq PotentialSeq::custom(std::string name, CustomFn fn) {
  PotentialSeq s;
  s.flavor_ = Flavor::Custom;
  s.name_ = "custom(" + std::move(name) + ")";
  s.fn_ = std::move(fn);
  return s;
}

PotentialSeq PotentialSeq::parse(const std::string& spec) {
  if (spec == "unstable-norm-power") return unstable_norm_power(1.0);
  if (spec.rfind("unstable-norm-power:", 0) == 0)
    return unstable_norm_power(parse_number(spec, 19));
  if (spec.rfind("constant-rate:", 0) == 0)
    return constant_rate(parse_number(spec, 13));
  return birkhoff(parse_phi(spec));  // throws UnknownFlavor if unrecognized
}

PotentialSeq PotentialSeq::shifted(double rate) const {
  PotentialSeq s = *this;
  s.shift_ += rate;
  return s;
}

std::string PotentialSeq::describe() const {
  if (shift_ == 0.0) return name_;
  return name_ + "+shift(" + std::to_string(shift_) + ")";
}

double PotentialSeq::log_gn(const LinearPHModel& model, const TorusPoint& p,
                            int n) const {
  if (n < 1) throw BadDepth("log_gn: depth must be >= 1");
  const double dn = static_cast<double>(n);
  double base = 0.0;
  switch (flavor_) {
    case Flavor::Additive:
      switch (phi_.kind) {
        case PhiKind::Zero: base = 0.0; break;
        case PhiKind::Const: base = dn * phi_.c; break;
        case PhiKind::Cos1: {
          TorusPoint q = p;
          double acc = 0.0;
          for (int i = 0; i < n; ++i) {
            acc = acc + kernels::detail::cos2pi_one(q.x[0]);
            q = iterate(model, q, 1);
          }
          base = acc;
          break;
        }
      }
      break;
    case Flavor::UnstableNormPower:
      base = power_ * unstable_cocycle_norm(model, p, n);
      break;
    case Flavor::ConstantRate:
      base = dn * rate_;
      break;
    case Flavor::Custom:
      base = fn_(model, p, n);
      break;
  }
  return shift_ == 0.0 ? base : base + dn * shift_;
}

std::vector<std::vector<double>> PotentialSeq::log_gn_points(
    const LinearPHModel& model, std::span<const TorusPoint> pts,
    std::span<const int> ns) const {
  for (std::size_t r = 0; r < ns.size(); ++r) {
    if (ns[r] < 1) throw BadDepth("log_gn_points: depth must be >= 1");
    if (r > 0 && ns[r] <= ns[r - 1])
      throw BadDepth("log_gn_points: depths must be strictly increasing");
  }
  const std::size_t K = pts.size();
  std::vector<std::vector<double>> table(ns.size(),
                                         std::vector<double>(K, 0.0));
  if (ns.empty() || K == 0) return table;

  const bool needs_orbit =
      flavor_ == Flavor::Additive && phi_.kind == PhiKind::Cos1;
  if (needs_orbit) {
    std::vector<double> x0(K), x1(K), x2;
    if (model.dim() == 3) x2.resize(K);
    for (std::size_t i = 0; i < K; ++i) {
      x0[i] = pts[i].x[0];
      x1[i] = pts[i].x[1];
      if (model.dim() == 3) x2[i] = pts[i].x[2];
    }
    std::vector<double> acc(K, 0.0);
    std::size_t row = 0;
    const int n_max = ns.back();
    for (int n = 1; n <= n_max; ++n) {
      kernels::accumulate_cos2pi(x0.data(), acc.data(), K);
      if (row < ns.size() && ns[row] == n) table[row++] = acc;
      if (n < n_max) {
        if (model.dim() == 2)
          kernels::affine_step_2d(x0.data(), x1.data(), K, model.dmatrix());
        else
          kernels::affine_step_3d(x0.data(), x1.data(), x2.data(), K,
                                  model.dmatrix());
      }
    }
  } else if (flavor_ == Flavor::Custom) {
    for (std::size_t r = 0; r < ns.size(); ++r)
      for (std::size_t i = 0; i < K; ++i)
        table[r][i] = fn_(model, pts[i], ns[r]);
  } else {
    // Analytic flavors: every column is identical.
    for (std::size_t r = 0; r < ns.size(); ++r) {
      const double dn = static_cast<double>(ns[r]);
      double v = 0.0;
      if (flavor_ == Flavor::UnstableNormPower)
        v = power_ * (dn * model.log_lambda_u());
      else if (flavor_ == Flavor::ConstantRate)
        v = dn * rate_;
      else if (phi_.kind == PhiKind::Const)
        v = dn * phi_.c;
      std::fill(table[r].begin(), table[r].end(), v);
    }
  }
  if (shift_ != 0.0) {
    for (std::size_t r = 0; r < ns.size(); ++r) {
      const double add = static_cast<double>(ns[r]) * shift_;
      for (double& v : table[r]) v += add;
    }
  }
  return table;
}

std::vector<std::vector<double>> PotentialSeq::log_gn_table(
    const LinearPHModel& model, const LeafPatch& patch,
    std::span<const int> ns) const {
  std::vector<TorusPoint> pts(static_cast<std::size_t>(patch.K()));
  for (int i = 0; i < patch.K(); ++i)
    pts[static_cast<std::size_t>(i)] = patch_point(model, patch, i);
  return log_gn_points(model, pts, ns);
}

SubadditivityReport check_subadditive(const PotentialSeq& seq,
                                      const LinearPHModel& model,
                                      std::span<const TorusPoint> pts,
                                      int max_n, double tol) {
  if (max_n < 2) throw BadDepth("check_subadditive: max_n must be >= 2");
  SubadditivityReport rep;
  for (std::size_t pi = 0; pi < pts.size(); ++pi) {
    const TorusPoint& x = pts[pi];
    for (int m = 1; m < max_n; ++m) {
      TorusPoint fmx = iterate(model, x, m);
      for (int n = 1; m + n <= max_n; ++n) {
        double lhs = seq.log_gn(model, x, m + n);
        double rhs = seq.log_gn(model, x, m) + seq.log_gn(model, fmx, n);
        ++rep.checked;
        double slack = lhs - rhs;
        if (slack > tol) {
          rep.violations.push_back(
              {static_cast<int>(pi), m, n, slack});
          rep.max_violation = std::max(rep.max_violation, slack);
        }
      }
    }
  }
  return rep;
}

LyapunovEstimate lyapunov_exponent(const PotentialSeq& seq,
                                   const LinearPHModel& model,
                                   SamplerKind sampler, int n_max, int samples,
                                   std::uint64_t seed) {
  if (n_max < 1) throw OutOfRange("lyapunov_exponent: n_max must be >= 1");
  if (samples < 1) throw OutOfRange("lyapunov_exponent: samples must be >= 1");

  std::vector<TorusPoint> pts(static_cast<std::size_t>(samples));
  const int d = model.dim();
  if (sampler == SamplerKind::Uniform) {
    num::SplitMix64 rng(seed);
    for (auto& p : pts) {
      double a = rng.next_unit(), b = rng.next_unit();
      p = d == 2 ? make_point2(a, b) : make_point3(a, b, rng.next_unit());
    }
  } else {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::uint64_t k = seed + i;  // seed offsets into the sequence
      double a = num::halton(k, 2), b = num::halton(k, 3);
      pts[i] = d == 2 ? make_point2(a, b)
                      : make_point3(a, b, num::halton(k, 5));
    }
  }

  std::array<int, 3> depths{std::max(1, n_max / 4), std::max(1, n_max / 2),
                            n_max};
  std::vector<int> ns;
  for (int n : depths)
    if (ns.empty() || n > ns.back()) ns.push_back(n);
  auto table = seq.log_gn_points(model, pts, ns);

  LyapunovEstimate est;
  est.n_used = n_max;
  est.samples = samples;
  std::size_t row_of_depth[3];
  for (int c = 0; c < 3; ++c) {
    std::size_t r = 0;
    while (ns[r] != depths[static_cast<std::size_t>(c)]) ++r;
    row_of_depth[c] = r;
  }
  std::vector<double> rates(static_cast<std::size_t>(samples));
  for (int c = 0; c < 3; ++c) {
    const int n = depths[static_cast<std::size_t>(c)];
    const auto& row = table[row_of_depth[c]];
    for (std::size_t i = 0; i < rates.size(); ++i) {
      double r = row[i] / static_cast<double>(n);
      if (!(r >= kRateFloor)) {  // also catches NaN and -inf
        r = kRateFloor;
        est.degenerate = true;
      }
      rates[i] = r;
    }
    est.checkpoints[static_cast<std::size_t>(c)] = {n, num::mean(rates)};
  }
  // `rates` now holds the n_max row.
  est.value = est.checkpoints[2].second;
  double ss = 0.0;
  for (double r : rates) {
    double d2 = r - est.value;
    ss += d2 * d2;
  }
  est.spread = samples > 1
                   ? std::sqrt(ss / static_cast<double>(samples - 1))
                   : 0.0;
  return est;
}

}  // namespace leafpress
