#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dephcap/capacity.hpp"

namespace dephcap::cli {

enum class Command { Bounds, Capacity, QubitSquash, Saturation, Verify };

std::optional<Command> parse_command(const std::string& name);
const char* command_name(Command c);

/// MIN:MAX:STEP or a single value.
struct GammaSpec {
  double min = 0.0;
  double max = 12.0;
  double step = 0.1;

  static GammaSpec parse(const std::string& text);
  /// min + i step for i = 0..floor((max - min) / step + 1e-9).
  std::vector<double> grid() const;
};

struct RunConfig {
  Command command = Command::Bounds;
  GammaSpec gamma;
  std::size_t dim = 10;
  std::optional<double> energy_cap;
  std::string out_path;  // empty: stdout
  OptimizerConfig optimizer;
  unsigned threads = 1;

  /// step > 0, min <= max, dim >= 2, optimizer fields positive. Negative
  /// gamma is rejected except for verify, which reports it as a failed suite.
  void validate() const;
};

/// "inf" (any case) or a non-negative number.
std::optional<double> parse_energy(const std::string& text);

/// Flat key=value lines; '#' starts a comment, blank lines are skipped.
/// Throws std::invalid_argument with the line number on malformed input.
std::map<std::string, std::string> parse_config_text(std::istream& in);

/// Applies keys gamma, dim, energy, out, seed, max_iters, objective_tol,
/// multistarts. Unknown keys throw std::invalid_argument.
void apply_entries(RunConfig& cfg, const std::map<std::string, std::string>& entries);

/// min(hardware threads, DEPHCAP_THREADS when set), at least 1.
unsigned default_threads();

/// Fixed-format number: %.15g, with "inf"/"nan" spelled out.
std::string format_number(double v);

struct RunOutput {
  int exit_code = 0;  // 0 ok, 2 numerical failure
  std::string csv;
  std::string summary;
};

RunOutput run_bounds(const RunConfig& cfg);
RunOutput run_capacity(const RunConfig& cfg);
RunOutput run_qubit_squash(const RunConfig& cfg);
RunOutput run_saturation(const RunConfig& cfg);
RunOutput run_verify(const RunConfig& cfg);

/// Runs the command and routes its output: with an out path the CSV goes to
/// the file and the summary to `out`; otherwise CSV to `out`, summary to
/// `err`. Returns the process exit code (1 when the file cannot be written).
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace dephcap::cli
