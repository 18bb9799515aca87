#include "leafpress/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

#include "leafpress/errors.hpp"

namespace leafpress {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Where {
  const std::string& name;
  int line;
};

[[noreturn]] void fail(const Where& at, const std::string& msg) {
  throw ConfigError(at.name + ":" + std::to_string(at.line) + ": " + msg);
}

double parse_double_tok(const std::string& tok, const Where& at) {
  const std::string t = trim(tok);
  if (t.empty()) fail(at, "expected a number, got an empty token");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    fail(at, "'" + t + "' is not a number");
  }
  return v;
}

std::int64_t parse_int_tok(const std::string& tok, const Where& at) {
  const std::string t = trim(tok);
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    fail(at, "'" + t + "' is not an integer");
  }
  return v;
}

std::uint64_t parse_uint_tok(const std::string& tok, const Where& at) {
  const std::string t = trim(tok);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    fail(at, "'" + t + "' is not an unsigned integer");
  }
  return v;
}

// Splits "a, b, c" at top-level commas (no nesting here).
std::vector<std::string> split_commas(const std::string& body) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char ch : body) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty() || !parts.empty()) parts.push_back(cur);
  return parts;
}

std::string strip_brackets(const std::string& tok, const Where& at) {
  const std::string t = trim(tok);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
    fail(at, "expected a bracketed list, got '" + t + "'");
  }
  return t.substr(1, t.size() - 2);
}

std::vector<double> parse_double_list(const std::string& tok,
                                      const Where& at) {
  std::vector<double> out;
  for (const auto& part : split_commas(strip_brackets(tok, at))) {
    out.push_back(parse_double_tok(part, at));
  }
  if (out.empty()) fail(at, "list must not be empty");
  return out;
}

std::vector<std::vector<std::int64_t>> parse_matrix_tok(const std::string& tok,
                                                        const Where& at) {
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& row : split_commas(strip_brackets(tok, at))) {
    std::vector<std::int64_t> r;
    for (const auto& cell : split_commas(strip_brackets(row, at))) {
      r.push_back(parse_int_tok(cell, at));
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) fail(at, "matrix must not be empty");
  return rows;
}

IntRange parse_range_tok(const std::string& tok, const Where& at) {
  const std::string t = trim(tok);
  const std::size_t dots = t.find("..");
  if (dots == std::string::npos) {
    fail(at, "expected a range 'lo..hi', got '" + t + "'");
  }
  IntRange r;
  r.lo = static_cast<int>(parse_int_tok(t.substr(0, dots), at));
  r.hi = static_cast<int>(parse_int_tok(t.substr(dots + 2), at));
  return r;
}

void check_token(const std::string& value, const Where& at, const char* key,
                 std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  std::ostringstream os;
  os << "'" << value << "' is not a valid " << key << " (expected one of:";
  for (const char* a : allowed) os << " " << a;
  os << ")";
  fail(at, os.str());
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt_double(v[i]);
  }
  return s + "]";
}

std::string fmt_matrix(const std::vector<std::vector<std::int64_t>>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += ", ";
    s += "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) s += ", ";
      s += std::to_string(m[i][j]);
    }
    s += "]";
  }
  return s + "]";
}

void apply_env_seed(ExperimentConfig& cfg) {
  const char* env = std::getenv("LEAFPRESS_SEED");
  if (env == nullptr || *env == '\0') return;
  std::uint64_t v = 0;
  const std::string t(env);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw ConfigError("LEAFPRESS_SEED: '" + t +
                      "' is not a decimal unsigned integer");
  }
  cfg.seed = v;
  cfg.seed_from_env = true;
}

}  // namespace

const std::vector<std::string>& config_key_catalog() {
  static const std::vector<std::string> keys{
      "model",          "matrix",       "potential",
      "base",           "delta",        "K",
      "scheme",         "seed",         "n_window",
      "eps_ladder",     "gamma_ladder", "estimator",
      "partition_side", "lyap_sampler", "lyap_n_max",
      "lyap_samples",   "theorems",     "tolerance",
      "insensitivity_tolerance",        "out",
  };
  return keys;
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const Where at{name, lineno};
    std::string line = raw;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(at, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(at, "missing key before '='");
    if (value.empty()) fail(at, "missing value for key '" + key + "'");

    if (key == "model") {
      cfg.model_path = value;
    } else if (key == "matrix") {
      cfg.matrix = parse_matrix_tok(value, at);
    } else if (key == "potential") {
      cfg.potential = value;
    } else if (key == "base") {
      cfg.base = parse_double_list(value, at);
    } else if (key == "delta") {
      cfg.delta = parse_double_tok(value, at);
    } else if (key == "K") {
      cfg.K = static_cast<int>(parse_int_tok(value, at));
    } else if (key == "scheme") {
      check_token(value, at, "scheme", {"uniform", "stratified"});
      cfg.scheme = value;
    } else if (key == "seed") {
      cfg.seed = parse_uint_tok(value, at);
    } else if (key == "n_window") {
      cfg.n_window = parse_range_tok(value, at);
    } else if (key == "eps_ladder") {
      cfg.eps_ladder = parse_double_list(value, at);
    } else if (key == "gamma_ladder") {
      cfg.gamma_ladder = parse_double_list(value, at);
    } else if (key == "estimator") {
      check_token(value, at, "estimator",
                  {"spanning", "bowen", "capacity", "partition", "brin-katok"});
      cfg.estimator = value;
    } else if (key == "partition_side") {
      cfg.partition_side = parse_double_tok(value, at);
    } else if (key == "lyap_sampler") {
      check_token(value, at, "lyap_sampler", {"halton", "uniform"});
      cfg.lyap_sampler = value;
    } else if (key == "lyap_n_max") {
      cfg.lyap_n_max = static_cast<int>(parse_int_tok(value, at));
    } else if (key == "lyap_samples") {
      cfg.lyap_samples = static_cast<int>(parse_int_tok(value, at));
    } else if (key == "theorems") {
      cfg.theorems = value;
    } else if (key == "tolerance") {
      cfg.tolerance = parse_double_tok(value, at);
    } else if (key == "insensitivity_tolerance") {
      cfg.insensitivity_tolerance = parse_double_tok(value, at);
    } else if (key == "out") {
      cfg.out = value;
    } else {
      std::ostringstream os;
      os << at.name << ":" << at.line << ": '" << key
         << "'; known keys are:";
      for (const auto& k : config_key_catalog()) os << " " << k;
      throw UnknownKey(os.str());
    }
  }
  apply_env_seed(cfg);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_config_text(buf.str(), path);
  if (!cfg.model_path.empty()) {
    const std::filesystem::path mp(cfg.model_path);
    if (mp.is_relative()) {
      cfg.model_path =
          (std::filesystem::path(path).parent_path() / mp).string();
    }
  }
  return cfg;
}

LinearPHModel resolve_model(const ExperimentConfig& cfg) {
  if (!cfg.matrix.empty()) return build_linear_model(cfg.matrix);
  if (cfg.model_path.empty()) {
    throw ConfigError(
        "the config needs either an inline 'matrix' or a 'model' file path");
  }
  std::ifstream in(cfg.model_path);
  if (!in) {
    throw ConfigError("cannot open model file '" + cfg.model_path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::istringstream lines(buf.str());
  std::string raw;
  int lineno = 0;
  std::vector<std::vector<std::int64_t>> matrix;
  while (std::getline(lines, raw)) {
    ++lineno;
    const Where at{cfg.model_path, lineno};
    std::string line = raw;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(at, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "matrix") {
      matrix = parse_matrix_tok(value, at);
    } else if (key == "name") {
      // informational only
    } else {
      fail(at, "model files accept only 'matrix' and 'name', got '" + key +
                   "'");
    }
  }
  if (matrix.empty()) {
    throw ConfigError("model file '" + cfg.model_path +
                      "' does not define 'matrix'");
  }
  return build_linear_model(matrix);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo()
    const {
  std::vector<std::pair<std::string, std::string>> kv;
  if (!model_path.empty()) kv.emplace_back("model", model_path);
  if (!matrix.empty()) kv.emplace_back("matrix", fmt_matrix(matrix));
  kv.emplace_back("potential", potential);
  kv.emplace_back("base", fmt_list(base));
  kv.emplace_back("delta", fmt_double(delta));
  kv.emplace_back("K", std::to_string(K));
  kv.emplace_back("scheme", scheme);
  kv.emplace_back("seed", std::to_string(seed) +
                              (seed_from_env ? " (from LEAFPRESS_SEED)" : ""));
  kv.emplace_back("n_window", std::to_string(n_window.lo) + ".." +
                                  std::to_string(n_window.hi));
  kv.emplace_back("eps_ladder", fmt_list(eps_ladder));
  kv.emplace_back("gamma_ladder", fmt_list(gamma_ladder));
  if (!estimator.empty()) kv.emplace_back("estimator", estimator);
  kv.emplace_back("partition_side", fmt_double(partition_side));
  kv.emplace_back("lyap_sampler", lyap_sampler);
  kv.emplace_back("lyap_n_max", std::to_string(lyap_n_max));
  kv.emplace_back("lyap_samples", std::to_string(lyap_samples));
  kv.emplace_back("theorems", theorems);
  kv.emplace_back("tolerance", fmt_double(tolerance));
  kv.emplace_back("insensitivity_tolerance",
                  fmt_double(insensitivity_tolerance));
  kv.emplace_back("out", out);
  return kv;
}

}  // namespace leafpress
