#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "cavitygate/compiler.hpp"
#include "cavitygate/device.hpp"

namespace cavitygate {

/// Configuration problem, reported with file, 1-based line and field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

/// Parses "135 fF", "0.65 pH/um", "200 um^2", "5.8e9 rad/s" into SI, checking
/// that the unit has the dimension `expected_unit` ("F", "H/m", "m^2", "1/s",
/// "1" for dimensionless). Throws std::invalid_argument.
double parse_quantity(const std::string& text, const std::string& expected_unit);

struct DeviceBundle {
  device::DeviceParams squid;
  device::CavityParams cavity;
};

DeviceBundle load_device_text(const std::string& yaml, const std::string& source_name);
DeviceBundle load_device_file(const std::filesystem::path& path);

enum class CouplingSource { Nominal, Device, Explicit };
enum class Propagation { ClosedForm, Oracle };

// A duration given either in seconds or as a multiple of tau_c1 = pi / g.
struct DurationSetting {
  double value = 0;
  bool in_tau_c1 = false;

  double resolve(double tau_c1) const { return in_tau_c1 ? value * tau_c1 : value; }
};

struct RunConfig {
  int n = 2;
  GateParams params;  // radians
  Mode mode = Mode::Squid;
  int fock_cutoff = 2;

  CouplingSource source = CouplingSource::Nominal;
  CouplingTable explicit_couplings;          // used when source == Explicit
  std::optional<double> resonant_12;         // g'_n override (atom mode)
  std::optional<DispersivePair> phase_12;    // (g^', Delta') override (atom mode)
  std::optional<double> position;            // m; default first antinode
  std::optional<double> guard_ratio;
  std::optional<bool> enforce_guard;
  std::optional<bool> signed_detuning;

  std::optional<std::filesystem::path> device_path;
  DurationSetting drive_duration;
  DurationSetting adjustment_time;

  double tolerance = 1e-9;
  Propagation propagation = Propagation::ClosedForm;
  std::optional<std::string> seed;  // echoed verbatim in reports
};

inline constexpr double kNominalCoupling = 5.8e9;  // rad/s, used when nothing else is given

/// Angles in the file are in units of pi. Relative device paths resolve
/// against `base_dir`.
RunConfig load_run_config_text(const std::string& yaml, const std::string& source_name,
                               const std::filesystem::path& base_dir = {});
RunConfig load_run_config_file(const std::filesystem::path& path);

struct ResolvedRun {
  CouplingTable couplings;
  PulseTiming timing;
  double g = 0;  // resonant coupling used for tau_c1 (target's 0<->2)
  std::optional<DeviceBundle> device;
};

ResolvedRun resolve(const RunConfig& config);

}  // namespace cavitygate
