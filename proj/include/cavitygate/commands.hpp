#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cavitygate/config.hpp"
#include "cavitygate/verifier.hpp"

namespace cavitygate {

// Process exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Superposition written as kets with unit-modulus coefficients shown as
/// "", "-", "i", "-i"; amplitudes below `threshold` are dropped.
std::string describe_state(const StateVector<double>& state, double threshold = 1e-12);

struct Evaluation {
  Schedule schedule;
  ComputationalGate<double> gate;
  GateDistance<double> distance;
  Residues<double> residues;
  std::vector<double> per_state_error;  // max |U|b>|0> - ideal| over the full space, per b
  double max_error = 0;                 // max of per_state_error
  bool pass = false;
};

/// Compiles, propagates every computational basis state and compares with
/// the ideal controlled-U. Resonant couplings of the played schedule are
/// multiplied by `coupling_scale`.
Evaluation evaluate(const RunConfig& config, const ResolvedRun& run, double coupling_scale = 1.0);

std::string verify_report(const RunConfig& config, bool with_trace, bool csv, int& exit_code);
std::string trace_report(const RunConfig& config);
std::string timing_report(const RunConfig& config, bool csv);
std::string counts_csv(int n_min, int n_max);

struct SweepRange {
  std::string parameter;  // alpha beta gamma delta g coupling_error fock_cutoff n
  double from = 0;
  double to = 0;
  int points = 0;
};

const std::vector<std::string>& sweepable_parameters();
/// One CSV row per point, in sweep order; throws std::invalid_argument for
/// an unknown parameter name.
std::string sweep_csv(const RunConfig& config, const SweepRange& range);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cavitygate
