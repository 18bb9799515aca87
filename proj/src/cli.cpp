#include "leafpress/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "leafpress/config.hpp"
#include "leafpress/dynamics.hpp"
#include "leafpress/errors.hpp"
#include "leafpress/estimators.hpp"
#include "leafpress/leafgeom.hpp"
#include "leafpress/potentials.hpp"
#include "leafpress/serialize.hpp"
#include "leafpress/verify.hpp"

namespace leafpress::cli {

namespace {

using Clock = std::chrono::steady_clock;

constexpr const char* kPotentialCatalog =
    "zero, const:<c>, cos1, unstable-norm-power:<t> (or bare), "
    "constant-rate:<c>";

std::string now_iso8601_utc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

TorusPoint base_point_from(const ExperimentConfig& cfg,
                           const LinearPHModel& model) {
  if (static_cast<int>(cfg.base.size()) != model.dim()) {
    throw ConfigError("base needs exactly " + std::to_string(model.dim()) +
                      " coordinates for this model, got " +
                      std::to_string(cfg.base.size()));
  }
  return model.dim() == 2 ? make_point2(cfg.base[0], cfg.base[1])
                          : make_point3(cfg.base[0], cfg.base[1], cfg.base[2]);
}

PatchScheme scheme_from(const ExperimentConfig& cfg) {
  return cfg.scheme == "uniform" ? PatchScheme::UniformGrid
                                 : PatchScheme::StratifiedRandom;
}

SamplerKind sampler_from(const ExperimentConfig& cfg) {
  return cfg.lyap_sampler == "halton" ? SamplerKind::Halton
                                      : SamplerKind::Uniform;
}

PotentialSeq potential_from(const ExperimentConfig& cfg) {
  try {
    return PotentialSeq::parse(cfg.potential);
  } catch (const UnknownFlavor& e) {
    throw ConfigError(std::string("potential: ") + e.what() +
                      "; the catalog is: " + kPotentialCatalog);
  }
}

struct Loaded {
  ExperimentConfig cfg;
  LinearPHModel model;
  PotentialSeq P;
  LeafPatch patch;
};

Loaded load_all(const std::string& config_path,
                const std::string& out_override) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (!out_override.empty()) cfg.out = out_override;
  LinearPHModel model = resolve_model(cfg);
  PotentialSeq P = potential_from(cfg);
  LeafPatch patch =
      sample_leaf_patch(model, base_point_from(cfg, model), cfg.delta, cfg.K,
                        scheme_from(cfg), cfg.seed);
  return {std::move(cfg), std::move(model), std::move(P), std::move(patch)};
}

void write_meta(const ExperimentConfig& cfg, const char* command,
                double runtime_seconds, Json extra = Json::object()) {
  Json j;
  j["command"] = command;
  j["timestamp_utc"] = now_iso8601_utc();
  j["runtime_seconds"] = runtime_seconds;
  for (auto& [k, v] : extra.items()) j[k] = v;
  write_file(cfg.out + ".meta.json", j.dump(2) + "\n");
}

// The three reproducible artifacts: JSON (config echo + result), CSV
// (config echo as comments + fixed columns), report text.
void emit(const ExperimentConfig& cfg, Json result, const std::string& csv,
          const std::string& text) {
  Json j;
  j["config"] = config_echo_json(cfg);
  j["result"] = std::move(result);
  write_file(cfg.out + ".json", j.dump(2) + "\n");
  write_file(cfg.out + ".csv", config_echo_text(cfg) + csv_header() + csv);
  write_file(cfg.out + ".report.txt", config_echo_text(cfg) + text);
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dir_text(const std::array<double, 3>& d, int dim) {
  std::string s = "[" + fmt17(d[0]) + ", " + fmt17(d[1]);
  if (dim == 3) s += ", " + fmt17(d[2]);
  return s + "]";
}

int cmd_model_info(const std::string& matrix_str,
                   const std::string& model_path,
                   const std::string& config_path) {
  LinearPHModel model = [&] {
    if (!matrix_str.empty()) {
      const ExperimentConfig tmp =
          parse_config_text("matrix = " + matrix_str + "\n", "--matrix");
      return build_linear_model(tmp.matrix);
    }
    if (!model_path.empty()) {
      ExperimentConfig tmp;
      tmp.model_path = model_path;
      return resolve_model(tmp);
    }
    if (!config_path.empty()) {
      return resolve_model(load_config_file(config_path));
    }
    throw ConfigError("model-info needs --matrix, --model or --config");
  }();

  std::ostringstream os;
  os << "dimension: " << model.dim() << "\n";
  os << "matrix:";
  for (const auto& row : model.matrix_rows()) {
    os << " [";
    for (std::size_t j = 0; j < row.size(); ++j) {
      os << (j ? ", " : "") << row[j];
    }
    os << "]";
  }
  os << "\n";
  os << "lambda_u: " << fmt17(model.lambda_u()) << "\n";
  os << "log_lambda_u: " << fmt17(model.log_lambda_u()) << "\n";
  os << "lambda_s: " << fmt17(model.lambda_s()) << "\n";
  if (model.has_center()) {
    os << "lambda_c: " << fmt17(model.lambda_c()) << "\n";
  } else {
    os << "lambda_c: none\n";
  }
  os << "unstable_dir: " << dir_text(model.unstable_dir(), model.dim()) << "\n";
  os << "stable_dir: " << dir_text(model.stable_dir(), model.dim()) << "\n";
  if (model.has_center()) {
    os << "center_dir: " << dir_text(model.center_dir(), model.dim()) << "\n";
  }
  std::cout << os.str();
  return 0;
}

int cmd_lyapunov(const std::string& config_path,
                 const std::string& out_override) {
  const auto t0 = Clock::now();
  const Loaded L = load_all(config_path, out_override);
  const LyapunovEstimate est =
      lyapunov_exponent(L.P, L.model, sampler_from(L.cfg), L.cfg.lyap_n_max,
                        L.cfg.lyap_samples, L.cfg.seed);
  emit(L.cfg, to_json(est), lyapunov_csv_rows(est, L.cfg.seed),
       lyapunov_text(est));
  write_meta(L.cfg, "lyapunov",
             std::chrono::duration<double>(Clock::now() - t0).count());
  std::cout << "lyapunov = " << fmt17(est.value) << " -> " << L.cfg.out
            << ".{json,csv,report.txt}\n";
  return 0;
}

int cmd_entropy(const std::string& config_path,
                const std::string& out_override) {
  const auto t0 = Clock::now();
  const Loaded L = load_all(config_path, out_override);
  const std::string which =
      L.cfg.estimator.empty() ? "partition" : L.cfg.estimator;
  PressureEstimate est;
  if (which == "partition") {
    est = entropy_partition(L.model, L.patch,
                            build_partition(L.model, L.cfg.partition_side),
                            L.cfg.n_window);
  } else if (which == "brin-katok") {
    est = entropy_brinkatok(L.model, L.patch, L.cfg.n_window,
                            L.cfg.eps_ladder);
  } else {
    throw ConfigError("estimator '" + which +
                      "' is not an entropy estimator (use partition or "
                      "brin-katok)");
  }
  emit(L.cfg, to_json(est), estimate_csv_rows(est, L.cfg.seed),
       estimate_text(est));
  write_meta(L.cfg, "entropy",
             std::chrono::duration<double>(Clock::now() - t0).count());
  std::cout << est.kind << " = " << fmt17(est.value) << " -> " << L.cfg.out
            << ".{json,csv,report.txt}\n";
  return 0;
}

int cmd_pressure(const std::string& config_path,
                 const std::string& out_override) {
  const auto t0 = Clock::now();
  const Loaded L = load_all(config_path, out_override);
  const std::string which =
      L.cfg.estimator.empty() ? "spanning" : L.cfg.estimator;
  Json result;
  std::string csv, text, headline;
  if (which == "spanning") {
    const PressureEstimate est =
        spanning_pressure(L.model, L.patch, L.P, L.cfg.n_window,
                          L.cfg.eps_ladder, L.cfg.gamma_ladder);
    result = to_json(est);
    csv = estimate_csv_rows(est, L.cfg.seed);
    text = estimate_text(est);
    headline = est.kind + " = " + fmt17(est.value);
  } else if (which == "bowen") {
    const PressureEstimate est = bowen_metric_pressure(
        L.model, L.patch, L.P, L.cfg.eps_ladder.back(), L.cfg.n_window,
        L.cfg.gamma_ladder.back());
    result = to_json(est);
    csv = estimate_csv_rows(est, L.cfg.seed);
    text = estimate_text(est);
    headline = est.kind + " = " + fmt17(est.value);
  } else if (which == "capacity") {
    const auto [lo, hi] =
        capacity_pressure(L.model, L.patch, L.P, L.cfg.eps_ladder.back(),
                          L.cfg.n_window, L.cfg.gamma_ladder.back());
    result = Json{{"kind", "capacity"},
                  {"lower", to_json(lo)},
                  {"upper", to_json(hi)}};
    csv = estimate_csv_rows(lo, L.cfg.seed) +
          estimate_csv_rows(hi, L.cfg.seed);
    text = estimate_text(lo) + estimate_text(hi);
    headline = "capacity = [" + fmt17(lo.value) + ", " + fmt17(hi.value) + "]";
  } else {
    throw ConfigError("estimator '" + which +
                      "' is not a pressure estimator (use spanning, bowen or "
                      "capacity)");
  }
  emit(L.cfg, std::move(result), csv, text);
  write_meta(L.cfg, "pressure",
             std::chrono::duration<double>(Clock::now() - t0).count());
  std::cout << headline << " -> " << L.cfg.out << ".{json,csv,report.txt}\n";
  return 0;
}

TorusPoint shifted_base(const TorusPoint& base, double d0, double d1,
                        double d2) {
  const auto wrap = [](double v) {
    v = std::fmod(v, 1.0);
    return v < 0.0 ? v + 1.0 : v;
  };
  return base.dim == 2
             ? make_point2(wrap(base.x[0] + d0), wrap(base.x[1] + d1))
             : make_point3(wrap(base.x[0] + d0), wrap(base.x[1] + d1),
                           wrap(base.x[2] + d2));
}

VerifyConfig to_verify_config(const ExperimentConfig& cfg,
                              const LinearPHModel& model) {
  VerifyConfig vc;
  vc.base = base_point_from(cfg, model);
  vc.delta = cfg.delta;
  vc.K = cfg.K;
  vc.scheme = scheme_from(cfg);
  vc.seed = cfg.seed;
  vc.n_window = cfg.n_window;
  vc.eps_ladder = cfg.eps_ladder;
  vc.gamma_ladder = cfg.gamma_ladder;
  vc.partition_side = cfg.partition_side;
  vc.lyap_sampler = sampler_from(cfg);
  vc.lyap_n_max = cfg.lyap_n_max;
  vc.lyap_samples = cfg.lyap_samples;
  vc.tolerance = cfg.tolerance;
  vc.insensitivity_tolerance = cfg.insensitivity_tolerance;
  return vc;
}

std::vector<LeafPatch> bundled_fixtures(const LinearPHModel& model,
                                        std::uint64_t seed) {
  const TorusPoint b1 = model.dim() == 2 ? make_point2(0.3, 0.7)
                                         : make_point3(0.3, 0.7, 0.2);
  const TorusPoint b2 = model.dim() == 2 ? make_point2(0.6, 0.25)
                                         : make_point3(0.6, 0.25, 0.8);
  std::vector<LeafPatch> fixtures;
  fixtures.push_back(
      sample_leaf_patch(model, b1, 0.01, 12, PatchScheme::UniformGrid, seed));
  fixtures.push_back(sample_leaf_patch(model, b2, 0.01, 11,
                                       PatchScheme::StratifiedRandom,
                                       seed + 3));
  return fixtures;
}

int cmd_verify(const std::string& config_path, const std::string& out_override,
               const std::string& theorems_flag) {
  const auto t0 = Clock::now();
  const Loaded L = load_all(config_path, out_override);
  const std::string list =
      theorems_flag.empty() ? L.cfg.theorems : theorems_flag;

  std::vector<std::string> tokens;
  {
    std::istringstream in(list);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      std::size_t b = tok.find_first_not_of(" \t");
      std::size_t e = tok.find_last_not_of(" \t");
      if (b == std::string::npos) continue;
      tokens.push_back(tok.substr(b, e - b + 1));
    }
  }
  if (tokens.empty()) {
    throw ConfigError("verify: no theorems selected (use e.g. 1.1,1.3)");
  }

  const VerifyConfig vc = to_verify_config(L.cfg, L.model);
  std::vector<TheoremReport> reports;
  for (const auto& tok : tokens) {
    if (tok == "1.1") {
      reports.push_back(verify_thm_1_1(L.model, L.P, vc));
    } else if (tok == "1.3") {
      reports.push_back(verify_thm_1_3(L.model, L.P, vc));
    } else if (tok == "4.6") {
      reports.push_back(
          verify_prop_4_6(L.model, L.P, bundled_fixtures(L.model, L.cfg.seed)));
    } else if (tok == "lemma") {
      const int samples = std::max(2, std::min(L.cfg.K, 256));
      reports.push_back(verify_sup_bound_lemma(
          L.model, L.P, 2, 0.01, L.cfg.eps_ladder.back(), samples, 12));
    } else if (tok == "gamma-eta") {
      const std::vector<double> gammas =
          L.cfg.gamma_ladder.size() >= 2 ? L.cfg.gamma_ladder
                                         : std::vector<double>{0.2, 0.1, 0.05};
      const std::vector<TorusPoint> bases{
          vc.base, shifted_base(vc.base, 0.23, 0.11, 0.07),
          shifted_base(vc.base, 0.41, 0.37, 0.19)};
      reports.push_back(
          verify_gamma_eta_insensitivity(L.model, L.P, gammas, bases, vc));
    } else {
      throw ConfigError("verify: unknown theorem '" + tok +
                        "' (valid: 1.1, 1.3, 4.6, lemma, gamma-eta)");
    }
  }

  bool all_pass = true;
  Json jreports = Json::array();
  std::string csv, text;
  Json runtimes = Json::object();
  for (const auto& rep : reports) {
    all_pass = all_pass && rep.pass;
    jreports.push_back(to_json(rep));
    csv += report_csv_rows(rep, L.cfg.seed);
    text += report_text(rep) + "\n";
    runtimes[rep.theorem] = rep.runtime_seconds;
  }
  text += std::string("overall: ") + (all_pass ? "PASS" : "FAIL") + "\n";
  emit(L.cfg, Json{{"kind", "verify"}, {"reports", std::move(jreports)}},
       csv, text);
  write_meta(L.cfg, "verify",
             std::chrono::duration<double>(Clock::now() - t0).count(),
             Json{{"theorem_runtimes_seconds", std::move(runtimes)}});
  std::cout << "verify: " << (all_pass ? "PASS" : "FAIL") << " -> "
            << L.cfg.out << ".{json,csv,report.txt}\n";
  return all_pass ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              int jobs) {
  const auto t0 = Clock::now();
  const Loaded L = load_all(config_path, out_override);
  const std::string which =
      L.cfg.estimator.empty() ? "spanning" : L.cfg.estimator;
  if (which != "spanning" && which != "bowen" && which != "capacity") {
    throw ConfigError("sweep supports estimator = spanning, bowen or "
                      "capacity; got '" +
                      which + "'");
  }

  struct Entry {
    double eps;
    double gamma;
  };
  std::vector<Entry> entries;
  for (const double e : L.cfg.eps_ladder) {
    for (const double g : L.cfg.gamma_ladder) entries.push_back({e, g});
  }

  std::vector<std::vector<PressureEstimate>> results(entries.size());
  std::vector<std::exception_ptr> failures(entries.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      try {
        const auto [eps, gamma] = entries[i];
        if (which == "spanning") {
          const std::array<double, 1> el{eps}, gl{gamma};
          results[i].push_back(spanning_pressure(L.model, L.patch, L.P,
                                                 L.cfg.n_window, el, gl));
        } else if (which == "bowen") {
          results[i].push_back(bowen_metric_pressure(
              L.model, L.patch, L.P, eps, L.cfg.n_window, gamma));
        } else {
          const auto [lo, hi] = capacity_pressure(L.model, L.patch, L.P, eps,
                                                  L.cfg.n_window, gamma);
          results[i].push_back(lo);
          results[i].push_back(hi);
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const int nthreads = std::max(
      1, std::min<int>(jobs, static_cast<int>(entries.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);  // first failing entry, in grid order
  }

  Json jentries = Json::array();
  std::string csv, text;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Json je;
    je["eps"] = entries[i].eps;
    je["gamma"] = entries[i].gamma;
    Json ests = Json::array();
    for (const auto& est : results[i]) {
      ests.push_back(to_json(est));
      csv += estimate_csv_rows(est, L.cfg.seed);
      std::ostringstream line;
      line << est.kind << " eps=" << entries[i].eps
           << " gamma=" << entries[i].gamma << " value=" << fmt17(est.value)
           << "\n";
      text += line.str();
    }
    je["estimates"] = std::move(ests);
    jentries.push_back(std::move(je));
  }
  emit(L.cfg, Json{{"kind", "sweep"}, {"entries", std::move(jentries)}}, csv,
       text);
  write_meta(L.cfg, "sweep",
             std::chrono::duration<double>(Clock::now() - t0).count(),
             Json{{"jobs", nthreads}});
  std::cout << "sweep: " << entries.size() << " entries -> " << L.cfg.out
            << ".{json,csv,report.txt}\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{
      "leafpress: pressure, entropy and Lyapunov-exponent estimators on "
      "unstable leaves of linear toral models"};
  app.name("leafpress");
  app.require_subcommand(1);

  std::string mi_matrix, mi_model, mi_config;
  auto* mi = app.add_subcommand("model-info",
                                "print the splitting and moduli of a model");
  mi->add_option("--matrix", mi_matrix, "inline integer matrix [[a,b],[c,d]]");
  mi->add_option("--model", mi_model, "model file path");
  mi->add_option("--config", mi_config, "config file naming the model");

  std::string ly_config, ly_out;
  auto* ly = app.add_subcommand("lyapunov",
                                "estimate the asymptotic potential rate");
  ly->add_option("--config", ly_config, "experiment config file")->required();
  ly->add_option("--out", ly_out, "output base name (overrides config)");

  std::string en_config, en_out;
  auto* en = app.add_subcommand("entropy", "estimate unstable entropy");
  en->add_option("--config", en_config, "experiment config file")->required();
  en->add_option("--out", en_out, "output base name (overrides config)");

  std::string pr_config, pr_out;
  auto* pr = app.add_subcommand("pressure", "estimate unstable pressure");
  pr->add_option("--config", pr_config, "experiment config file")->required();
  pr->add_option("--out", pr_out, "output base name (overrides config)");

  std::string ve_config, ve_out, ve_theorems;
  auto* ve = app.add_subcommand("verify", "run theorem-level checks");
  ve->add_option("--config", ve_config, "experiment config file")->required();
  ve->add_option("--out", ve_out, "output base name (overrides config)");
  ve->add_option("--theorems", ve_theorems,
                 "comma list: 1.1, 1.3, 4.6, lemma, gamma-eta");

  std::string sw_config, sw_out;
  int sw_jobs = 1;
  auto* sw = app.add_subcommand(
      "sweep", "run one estimator over the eps x gamma ladder grid");
  sw->add_option("--config", sw_config, "experiment config file")->required();
  sw->add_option("--out", sw_out, "output base name (overrides config)");
  sw->add_option("--jobs", sw_jobs, "parallel workers (default 1)")
      ->check(CLI::Range(1, 256));

  std::vector<const char*> argv;
  argv.push_back("leafpress");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()),
              const_cast<char**>(argv.data()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;  // bad flags are configuration errors
  }

  try {
    if (mi->parsed()) return cmd_model_info(mi_matrix, mi_model, mi_config);
    if (ly->parsed()) return cmd_lyapunov(ly_config, ly_out);
    if (en->parsed()) return cmd_entropy(en_config, en_out);
    if (pr->parsed()) return cmd_pressure(pr_config, pr_out);
    if (ve->parsed()) return cmd_verify(ve_config, ve_out, ve_theorems);
    if (sw->parsed()) return cmd_sweep(sw_config, sw_out, sw_jobs);
    throw ConfigError("no subcommand selected");
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace leafpress::cli
