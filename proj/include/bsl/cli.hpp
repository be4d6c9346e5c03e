#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bsl::cli {

inline constexpr const char* kToolName = "bsl";
inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchema = 1;

/// Exit codes of the command-line tool.
enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kNotCohomogeneityOne = 2,
  kSolverFailure = 3,
  kExpectationFailed = 4,
  kMalformedInput = 5,
};

struct RunConfig {
  std::string command;
  std::string diagram = "hopf";
  std::string side = "M";
  int grid = 512;
  int modes = 4;
  std::vector<double> scales;
  int samples = 1000;
  std::uint64_t seed = 7;
  std::string format;  // json | csv; empty means the command default
  std::string out;
  std::string expect;  // isospectral | distinct
  std::optional<double> tolerance;
  bool include_zero = false;
  std::optional<double> fiber_scale;
  std::optional<double> base_radius;
  std::string input;
  std::string svg;
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bsl::cli
