#pragma once

#include <stdexcept>
#include <string>

namespace leafpress {

// Base class for every error raised by the library. The CLI maps anything
// deriving from Error to exit code 1 unless it derives from ConfigError
// (exit code 3). Verification failures are not exceptions; they are reported
// results and map to exit code 2 in the CLI.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- model construction -----------------------------------------------------
struct NotUnimodular final : Error {
  explicit NotUnimodular(const std::string& w) : Error("NotUnimodular: " + w) {}
};
struct NotPartiallyHyperbolic final : Error {
  explicit NotPartiallyHyperbolic(const std::string& w)
      : Error("NotPartiallyHyperbolic: " + w) {}
};
struct ComplexUnstable final : Error {
  explicit ComplexUnstable(const std::string& w) : Error("ComplexUnstable: " + w) {}
};
struct UnsupportedDimension final : Error {
  explicit UnsupportedDimension(const std::string& w)
      : Error("UnsupportedDimension: " + w) {}
};

// ---- geometry / sampling ----------------------------------------------------
struct BadRadius final : Error {
  explicit BadRadius(const std::string& w) : Error("BadRadius: " + w) {}
};
struct BadDepth final : Error {
  explicit BadDepth(const std::string& w) : Error("BadDepth: " + w) {}
};
struct BadCellSide final : Error {
  explicit BadCellSide(const std::string& w) : Error("BadCellSide: " + w) {}
};
struct BadPatch final : Error {
  explicit BadPatch(const std::string& w) : Error("BadPatch: " + w) {}
};
struct LengthMismatch final : Error {
  explicit LengthMismatch(const std::string& w) : Error("LengthMismatch: " + w) {}
};
struct OutOfRange final : Error {
  explicit OutOfRange(const std::string& w) : Error("OutOfRange: " + w) {}
};

// ---- potentials -------------------------------------------------------------
struct UnknownFlavor final : Error {
  explicit UnknownFlavor(const std::string& w) : Error("UnknownFlavor: " + w) {}
};
struct DegenerateSample final : Error {
  explicit DegenerateSample(const std::string& w)
      : Error("DegenerateSample: " + w) {}
};

// ---- estimators -------------------------------------------------------------
struct BadWindow final : Error {
  explicit BadWindow(const std::string& w) : Error("BadWindow: " + w) {}
};
struct BadLadder final : Error {
  explicit BadLadder(const std::string& w) : Error("BadLadder: " + w) {}
};
struct Infeasible final : Error {
  explicit Infeasible(const std::string& w) : Error("Infeasible: " + w) {}
};
struct BracketFailure final : Error {
  explicit BracketFailure(const std::string& w) : Error("BracketFailure: " + w) {}
};
struct EmptySurvivors final : Error {
  explicit EmptySurvivors(const std::string& w) : Error("EmptySurvivors: " + w) {}
};
struct FixtureTooLarge final : Error {
  explicit FixtureTooLarge(const std::string& w)
      : Error("FixtureTooLarge: " + w) {}
};

// ---- configuration / CLI ----------------------------------------------------
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("ConfigError: " + w) {}
};
struct UnknownKey final : ConfigError {
  explicit UnknownKey(const std::string& w) : ConfigError("unknown key: " + w) {}
};

}  // namespace leafpress
