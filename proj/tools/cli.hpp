#pragma once

// Command-line front end: parsing, validation and the run/emit pipeline.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qcholder::cli {

enum class Command { extremal, solve, flow, verify, sweep, constants };
enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitViolation = 4;
inline constexpr int kExitIo = 5;

inline constexpr const char* kOutDirEnv = "QCHOLDER_OUT_DIR";

struct RunConfig {
  Command command = Command::constants;
  std::vector<double> K;
  std::vector<double> R;
  std::size_t n = 512;
  double L = 4.0;
  std::uint64_t seed = 7;
  std::optional<std::filesystem::path> output;
  Format format = Format::csv;

  /// Tolerance overrides; unset means the provenance default.
  std::optional<double> tolerance;
  std::optional<double> solver_tolerance;
  int max_iterations = 200;

  /// verify: identity | extremal | radial | solver.
  std::string map = "extremal";
  /// solve / flow coefficient: random | constant | radial | extremal | file.
  std::string mu = "random";
  std::optional<std::filesystem::path> mu_file;
  double k = 0.3;
  std::optional<double> kinf;
  int modes = 6;

  int radii = 64;
  int angles = 128;
  int lambdas = 8;
  /// sweep: run the pair search instead of the closed-form quotient.
  bool search = false;
  /// extremal: points per axis of the tabulation grid on [-1, 1]^2.
  int samples = 21;
  /// solve: also write the grid samples of f - z here.
  std::optional<std::filesystem::path> dump;
};

/// Throws ParameterError on the first invalid setting.
void validate(const RunConfig& config);

struct RunResult {
  int exit_code = kExitOk;
  std::string artifact;
  /// Set when the artifact went to a file rather than the returned text.
  std::optional<std::filesystem::path> written_to;
  std::string diagnostic;
};

/// Validates, computes and emits. Errors become exit codes with a one-line
/// diagnostic; nothing is thrown.
RunResult run(const RunConfig& config);

/// --output, else $QCHOLDER_OUT_DIR/<command>.<csv|json>, else none (stdout).
std::optional<std::filesystem::path> resolve_output(const RunConfig& config);

const char* command_name(Command c);

/// Full entry point: parses argv (flags override --config key=value files),
/// runs, prints the artifact to out unless it went to a file, diagnostics to
/// err. Returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcholder::cli
