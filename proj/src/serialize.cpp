#include "leafpress/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "leafpress/errors.hpp"

namespace leafpress {

namespace {

std::string num17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void csv_row(std::string& out, const std::string& kind, double n, double eps,
             double gamma, double raw, double slope, double value,
             std::uint64_t seed) {
  out += kind;
  out += ',';
  out += num17(n);
  out += ',';
  out += num17(eps);
  out += ',';
  out += num17(gamma);
  out += ',';
  out += num17(raw);
  out += ',';
  out += num17(slope);
  out += ',';
  out += num17(value);
  out += ',';
  out += std::to_string(seed);
  out += '\n';
}

Json fit_json(const FitDiag& fit) {
  Json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["residual"] = fit.residual;
  j["points"] = fit.points;
  return j;
}

}  // namespace

Json to_json(const PressureEstimate& est) {
  Json j;
  j["kind"] = est.kind;
  j["value"] = est.value;
  j["method"] = est.method;
  j["n_window"] = {{"lo", est.n_window.lo}, {"hi", est.n_window.hi}};
  j["eps_ladder"] = est.eps_ladder;
  j["gamma_ladder"] = est.gamma_ladder;
  j["fit"] = fit_json(est.fit);
  j["flags"] = est.flags;
  Json rows = Json::array();
  for (const auto& gp : est.grid) {
    Json r;
    r["n"] = gp.n;
    r["eps"] = gp.eps;
    r["gamma"] = gp.gamma;
    r["raw"] = gp.raw;
    r["in_fit"] = gp.in_fit;
    if (!gp.note.empty()) r["note"] = gp.note;
    rows.push_back(std::move(r));
  }
  j["grid"] = std::move(rows);
  return j;
}

Json to_json(const LyapunovEstimate& est) {
  Json j;
  j["kind"] = "lyapunov";
  j["value"] = est.value;
  j["n_used"] = est.n_used;
  j["samples"] = est.samples;
  j["spread"] = est.spread;
  j["degenerate"] = est.degenerate;
  Json rows = Json::array();
  for (const auto& [n, mean] : est.checkpoints) {
    rows.push_back(Json{{"n", n}, {"mean", mean}});
  }
  j["checkpoints"] = std::move(rows);
  return j;
}

Json to_json(const TheoremReport& rep) {
  Json j;
  j["theorem"] = rep.theorem;
  j["pass"] = rep.pass;
  j["tolerance"] = rep.tolerance;
  Json q = Json::object();
  for (const auto& [k, v] : rep.quantities) q[k] = v;
  j["quantities"] = std::move(q);
  Json d = Json::object();
  for (const auto& [k, v] : rep.discrepancies) d[k] = v;
  j["discrepancies"] = std::move(d);
  j["notes"] = rep.notes;
  return j;
}

Json config_echo_json(const ExperimentConfig& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : cfg.echo()) j[k] = v;
  return j;
}

std::string csv_header() { return "kind,n,eps,gamma,raw,slope,value,seed\n"; }

std::string estimate_csv_rows(const PressureEstimate& est,
                              std::uint64_t seed) {
  std::string out;
  for (const auto& gp : est.grid) {
    csv_row(out, est.kind, gp.n, gp.eps, gp.gamma, gp.raw, est.fit.slope,
            est.value, seed);
  }
  return out;
}

std::string lyapunov_csv_rows(const LyapunovEstimate& est,
                              std::uint64_t seed) {
  const double nan = std::nan("");
  std::string out;
  for (const auto& [n, mean] : est.checkpoints) {
    csv_row(out, "lyapunov", n, nan, nan, mean, est.spread, est.value, seed);
  }
  return out;
}

std::string report_csv_rows(const TheoremReport& rep, std::uint64_t seed) {
  const double nan = std::nan("");
  std::string out;
  for (const auto& [k, v] : rep.quantities) {
    csv_row(out, rep.theorem + "/" + k, nan, nan, nan, v, nan,
            rep.pass ? 1.0 : 0.0, seed);
  }
  for (const auto& [k, v] : rep.discrepancies) {
    csv_row(out, rep.theorem + "/gap:" + k, nan, nan, nan, v, nan,
            rep.pass ? 1.0 : 0.0, seed);
  }
  return out;
}

std::string estimate_text(const PressureEstimate& est) {
  std::ostringstream os;
  os << est.kind << " = " << num6(est.value) << "\n";
  os << "  method: " << est.method << "\n";
  os << "  window: " << est.n_window.lo << ".." << est.n_window.hi
     << "  fit slope " << num6(est.fit.slope) << ", intercept "
     << num6(est.fit.intercept) << ", residual " << num6(est.fit.residual)
     << ", points " << est.fit.points << "\n";
  if (!est.flags.empty()) {
    os << "  flags:";
    for (const auto& f : est.flags) os << " " << f;
    os << "\n";
  }
  for (const auto& gp : est.grid) {
    os << "    n=" << gp.n << " eps=" << num6(gp.eps)
       << " gamma=" << num6(gp.gamma) << " raw=" << num6(gp.raw)
       << (gp.in_fit ? " *" : "");
    if (!gp.note.empty()) os << "  (" << gp.note << ")";
    os << "\n";
  }
  return os.str();
}

std::string lyapunov_text(const LyapunovEstimate& est) {
  std::ostringstream os;
  os << "lyapunov = " << num6(est.value) << "\n";
  os << "  n_used: " << est.n_used << "  samples: " << est.samples
     << "  spread: " << num6(est.spread)
     << (est.degenerate ? "  [degenerate]" : "") << "\n";
  for (const auto& [n, mean] : est.checkpoints) {
    os << "    n=" << n << " mean=" << num6(mean) << "\n";
  }
  return os.str();
}

std::string report_text(const TheoremReport& rep) {
  std::ostringstream os;
  os << "[" << (rep.pass ? "PASS" : "FAIL") << "] theorem " << rep.theorem
     << " (tolerance " << num6(rep.tolerance) << ")\n";
  os << "  quantities:\n";
  for (const auto& [k, v] : rep.quantities) {
    os << "    " << k << " = " << num6(v) << "\n";
  }
  os << "  discrepancies:\n";
  for (const auto& [k, v] : rep.discrepancies) {
    os << "    " << k << " = " << num6(v)
       << (v <= rep.tolerance ? "" : "  <-- exceeds tolerance") << "\n";
  }
  for (const auto& n : rep.notes) os << "  note: " << n << "\n";
  return os.str();
}

std::string config_echo_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.echo()) {
    out += "# " + k + " = " + v + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  out << content;
  if (!out) throw ConfigError("failed while writing '" + path + "'");
}

}  // namespace leafpress
