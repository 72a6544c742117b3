#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavitygate/propagators.hpp"

namespace cavitygate {

/// Euler angles of U = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta), radians.
struct GateParams {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
  double delta = 0;
};

// alpha in [-pi, pi], beta and delta in [-2pi, 2pi], gamma in [0, 4pi].
void validate(const GateParams& params);

enum class Mode { Squid, Atom };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& text);

/// Off-resonant coupling strength and detuning magnitude; the compiler picks
/// the detuning sign from the sign of the angle being realised.
struct DispersivePair {
  double g = 0;         // rad/s
  double detuning = 0;  // rad/s, > 0
};

struct CouplingTable {
  std::vector<double> resonant;  // g_l on 0<->2, one per system

  // Target 1<->2 couplings. SQUID mode reuses the 0<->2 values (flux-bias
  // flip); atom mode takes g'_n and (g^'_n, Delta') from here when present.
  std::optional<double> target_resonant_12;
  std::optional<DispersivePair> phase_pair_12;

  DispersivePair rz_pair;     // (g~, Delta~) on 0<->2, realises Rz(beta), Rz(delta)
  DispersivePair phase_pair;  // (g^, Delta) on 0<->2, half of the e^{i alpha} phase

  bool signed_detuning = true;  // red and blue detuning both reachable
  DispersiveGuard guard;

  /// n identical couplings g with g^ = g~ = g/2 and Delta = Delta~ = 10 g^.
  static CouplingTable uniform(int n, double g);
};

/// Timing metadata that does not change the dynamics.
struct PulseTiming {
  double drive_duration = 0;   // microwave pi-pulse length (s)
  double adjustment_time = 0;  // one level-spacing / cavity-frequency adjustment (s)
};

struct PulseOp {
  std::string label;  // e.g. "U_1", "U_2c", "U_3c.vii", "U_2c+"
  std::string group;  // grouped operator of the product formula this step belongs to
  PulseSpec spec;

  double duration() const { return duration_of(spec); }
};

struct Schedule {
  Mode mode = Mode::Squid;
  int n = 0;
  std::vector<PulseOp> steps;
  int adjustment_count = 0;
  double adjustment_time = 0;
  DispersiveGuard guard;

  double pulse_time() const;
  double total_duration() const { return pulse_time() + adjustment_count * adjustment_time; }
  std::vector<std::string> groups() const;
};

/// Compiles the n-qubit controlled-U into its 2n + 11 elementary operations.
/// Systems 0..n-2 are controls, system n-1 is the target.
Schedule compile_controlled_u(int n, const GateParams& params, const CouplingTable& couplings, Mode mode,
                              const PulseTiming& timing = {});

/// Same schedule played on hardware whose resonant couplings are `factor`
/// times the calibrated ones (durations unchanged).
Schedule with_resonant_coupling_scale(const Schedule& schedule, double factor);

std::string group_name_control(int l);      // "U_{l}c"
std::string group_name_control_inv(int l);  // "U_{l}c+"

// ---------------------------------------------------------------------------

template <typename Real = double>
std::vector<OperatorMatrix<Real>> step_matrices(const Schedule& schedule, const HilbertLayout& layout) {
  if (layout.n_systems() != schedule.n)
    throw std::invalid_argument("step_matrices: layout has " + std::to_string(layout.n_systems()) +
                                " systems, schedule has " + std::to_string(schedule.n));
  std::vector<OperatorMatrix<Real>> out;
  out.reserve(schedule.steps.size());
  for (const PulseOp& op : schedule.steps) out.push_back(propagator<Real>(layout, op.spec, schedule.guard));
  return out;
}

/// Dense product of all step matrices, last step leftmost.
template <typename Real = double>
OperatorMatrix<Real> schedule_unitary(const Schedule& schedule, const HilbertLayout& layout) {
  auto total = OperatorMatrix<Real>::identity(layout);
  for (const auto& m : step_matrices<Real>(schedule, layout)) total = m * total;
  return total;
}

/// Propagates each column of `states` through the schedule using the
/// system-cavity blocks directly; cost is linear in the Hilbert dimension.
template <typename Real = double>
void evolve_in_place(const Schedule& schedule, const HilbertLayout& layout, CMatrix<Real>& states) {
  if (layout.n_systems() != schedule.n) throw std::invalid_argument("evolve_in_place: layout mismatch");
  for (const PulseOp& op : schedule.steps)
    apply_in_place(layout, local_propagator<Real>(layout.fock_cutoff(), op.spec, schedule.guard), states);
}

/// Full-space index of |b_1 ... b_n>|0>_c, with b_1 the most significant bit.
inline Index computational_index(const HilbertLayout& layout, unsigned bits) {
  std::vector<int> levels(layout.n_systems());
  for (int k = 0; k < layout.n_systems(); ++k) levels[k] = (bits >> (layout.n_systems() - 1 - k)) & 1u;
  return layout.index_of(levels, 0);
}

/// Columns U|b>|0>_c for every computational basis state b.
template <typename Real = double>
CMatrix<Real> computational_images(const Schedule& schedule, const HilbertLayout& layout) {
  const Index count = Index{1} << layout.n_systems();
  CMatrix<Real> states = CMatrix<Real>::Zero(layout.dimension(), count);
  for (Index b = 0; b < count; ++b) states(computational_index(layout, static_cast<unsigned>(b)), b) = Real(1);
  evolve_in_place(schedule, layout, states);
  return states;
}

template <typename Real = double>
struct TraceSnapshot {
  std::string after;  // group name, "initial" for the input state
  StateVector<Real> state;
};

/// State after each grouped operator (U_1, U_1c, ..., U_nc, ..., U_1+).
template <typename Real = double>
std::vector<TraceSnapshot<Real>> replay_trace(const Schedule& schedule, const StateVector<Real>& initial) {
  const HilbertLayout& layout = initial.layout();
  if (layout.n_systems() != schedule.n) throw std::invalid_argument("replay_trace: layout mismatch");
  std::vector<TraceSnapshot<Real>> out{{"initial", initial}};
  CMatrix<Real> psi = initial.amplitudes();
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    const PulseOp& op = schedule.steps[k];
    apply_in_place(layout, local_propagator<Real>(layout.fock_cutoff(), op.spec, schedule.guard), psi);
    const bool group_ends = k + 1 == schedule.steps.size() || schedule.steps[k + 1].group != op.group;
    if (group_ends) out.push_back({op.group, StateVector<Real>(layout, CVector<Real>(psi.col(0)))});
  }
  return out;
}

}  // namespace cavitygate
