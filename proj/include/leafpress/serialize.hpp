#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "leafpress/config.hpp"
#include "leafpress/estimators.hpp"
#include "leafpress/potentials.hpp"
#include "leafpress/verify.hpp"

namespace leafpress {

using Json = nlohmann::ordered_json;

// JSON values with stable (insertion-ordered) keys. Timestamps and runtimes
// are deliberately absent: the artifacts below byte-reproduce across runs of
// the same config, and wall-clock data lives in the `.meta.json` sidecar.
Json to_json(const PressureEstimate& est);
Json to_json(const LyapunovEstimate& est);
Json to_json(const TheoremReport& rep);
Json config_echo_json(const ExperimentConfig& cfg);

// CSV with the fixed column set `kind,n,eps,gamma,raw,slope,value,seed`:
// one row per grid point (estimates), per checkpoint depth (exponents), or
// per named quantity (theorem reports). Doubles print as %.17g.
std::string csv_header();
std::string estimate_csv_rows(const PressureEstimate& est, std::uint64_t seed);
std::string lyapunov_csv_rows(const LyapunovEstimate& est, std::uint64_t seed);
std::string report_csv_rows(const TheoremReport& rep, std::uint64_t seed);

// Human-readable report blocks.
std::string estimate_text(const PressureEstimate& est);
std::string lyapunov_text(const LyapunovEstimate& est);
std::string report_text(const TheoremReport& rep);
std::string config_echo_text(const ExperimentConfig& cfg);

// Writes `content` to `path`, creating parent directories as needed; throws
// ConfigError when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace leafpress
