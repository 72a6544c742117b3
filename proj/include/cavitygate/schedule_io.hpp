#pragma once

#include <stdexcept>
#include <string>

#include "cavitygate/compiler.hpp"

namespace cavitygate {

/// Line-oriented text form of a Schedule, one `step` record per pulse:
///
///   cavitygate-schedule 1
///   mode squid
///   qubits 2
///   adjustments 13 time_ns=0
///   guard min_ratio=5 enforce=1
///   step label=U_1 group=U_1 kind=drive system=1 transition=1-2 phase=-1.5707963267948966 area=3.141592653589793 duration_ns=0
///   ...
///   end
///
/// Systems are numbered from 1. Reals use the shortest representation that
/// reads back to the same double; durations are in ns and recover the exact
/// seconds value. serialize -> parse -> serialize is byte-identical.
std::string serialize_schedule(const Schedule& schedule);

class ScheduleParseError : public std::runtime_error {
 public:
  ScheduleParseError(int line, const std::string& what)
      : std::runtime_error("schedule line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Schedule parse_schedule(const std::string& text);

// Shortest round-trip decimal form of a double.
std::string format_real(double value);

}  // namespace cavitygate
