#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "cavitygate/hilbert.hpp"

namespace cavitygate {

// Cavity and microwave couplings only ever address a transition into |2>;
// the 0<->1 transition is treated as exactly decoupled.
enum class Transition { ZeroTwo, OneTwo };

constexpr int lower_level(Transition t) { return t == Transition::ZeroTwo ? 0 : 1; }
constexpr int spectator_level(Transition t) { return t == Transition::ZeroTwo ? 1 : 0; }
inline const char* to_string(Transition t) { return t == Transition::ZeroTwo ? "0-2" : "1-2"; }

/// Resonant Jaynes-Cummings exchange g (a^+ |lower><2| + h.c.) for time t.
struct ResonantSpec {
  int system = 0;
  Transition transition = Transition::ZeroTwo;
  double g = 0;  // rad/s
  double t = 0;  // s
};

/// Dispersive (far-detuned) coupling, effective Hamiltonian
/// (g^2/detuning)(|2><2| - |lower><lower|) a^+ a. detuning = w_transition - w_c.
struct DispersiveSpec {
  int system = 0;
  Transition transition = Transition::ZeroTwo;
  double g = 0;         // rad/s
  double detuning = 0;  // rad/s, signed
  double t = 0;         // s
};

/// Classical pulse (Omega/2)(e^{i phase}|lower><2| + h.c.) with area Omega*t.
/// A zero duration denotes an idealised pulse; its Hamiltonian is then quoted
/// per unit time so that exp(-iH) still delivers the requested area.
struct DriveSpec {
  int system = 0;
  Transition transition = Transition::OneTwo;
  double phase = 0;     // rad
  double area = 0;      // rad
  double duration = 0;  // s

  double evolution_time() const { return duration > 0 ? duration : 1.0; }
  double rabi_frequency() const { return area / evolution_time(); }
};

using PulseSpec = std::variant<ResonantSpec, DispersiveSpec, DriveSpec>;

struct DispersiveGuard {
  double min_ratio = 5.0;  // |detuning| >= min_ratio * g
  bool enforce = true;
};

inline void validate(const ResonantSpec& s) {
  if (!(s.g > 0)) throw std::invalid_argument("ResonantSpec: g must be > 0");
  if (!(s.t >= 0)) throw std::invalid_argument("ResonantSpec: t must be >= 0");
}

inline void validate(const DispersiveSpec& s, const DispersiveGuard& guard = {}) {
  if (!(s.g > 0)) throw std::invalid_argument("DispersiveSpec: g must be > 0");
  if (!(s.t >= 0)) throw std::invalid_argument("DispersiveSpec: t must be >= 0");
  if (s.detuning == 0 || !std::isfinite(s.detuning))
    throw std::invalid_argument("DispersiveSpec: detuning must be finite and nonzero");
  if (guard.enforce && std::abs(s.detuning) < guard.min_ratio * s.g)
    throw std::domain_error("DispersiveSpec: |detuning| = " + std::to_string(std::abs(s.detuning)) +
                            " is below " + std::to_string(guard.min_ratio) + " g = " +
                            std::to_string(guard.min_ratio * s.g) + "; dispersive model not valid");
}

inline void validate(const DriveSpec& s) {
  if (!(s.area >= 0)) throw std::invalid_argument("DriveSpec: area must be >= 0");
  if (!(s.duration >= 0)) throw std::invalid_argument("DriveSpec: duration must be >= 0");
}

inline double duration_of(const PulseSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, DriveSpec>)
          return s.duration;
        else
          return s.t;
      },
      spec);
}

inline int system_of(const PulseSpec& spec) {
  return std::visit([](const auto& s) { return s.system; }, spec);
}

// ---------------------------------------------------------------------------
// Closed forms on the system (x) cavity block.

template <typename Real = double>
SystemCavityOperator<Real> resonant_local(int fock_cutoff, const ResonantSpec& spec) {
  validate(spec);
  const Index c = fock_cutoff + 1;
  const Index lo = lower_level(spec.transition), hi = 2;
  const Complex<Real> minus_i(0, -1);
  SystemCavityOperator<Real> op{spec.system, CMatrix<Real>::Identity(3 * c, 3 * c)};
  const Real gt = Real(spec.g) * Real(spec.t);
  // |lower>|n> <-> |2>|n-1>, rotation angle sqrt(n) g t.
  for (Index n = 1; n < c; ++n) {
    const Real angle = std::sqrt(Real(n)) * gt;
    const Index a = lo * c + n, b = hi * c + n - 1;
    op.block(a, a) = std::cos(angle);
    op.block(b, b) = std::cos(angle);
    op.block(a, b) = minus_i * std::sin(angle);
    op.block(b, a) = minus_i * std::sin(angle);
  }
  // |2>|N_max> would exchange with |lower>|N_max+1>, which is not represented.
  op.touches_truncation_edge = gt != Real(0);
  return op;
}

template <typename Real = double>
SystemCavityOperator<Real> dispersive_local(int fock_cutoff, const DispersiveSpec& spec,
                                            const DispersiveGuard& guard = {}) {
  validate(spec, guard);
  const Index c = fock_cutoff + 1;
  const Index lo = lower_level(spec.transition), hi = 2;
  const Real chi_t = Real(spec.g) * Real(spec.g) / Real(spec.detuning) * Real(spec.t);
  SystemCavityOperator<Real> op{spec.system, CMatrix<Real>::Identity(3 * c, 3 * c)};
  for (Index n = 1; n < c; ++n) {
    const Real phase = chi_t * Real(n);
    op.block(lo * c + n, lo * c + n) = std::polar(Real(1), phase);
    op.block(hi * c + n, hi * c + n) = std::polar(Real(1), -phase);
  }
  return op;
}

template <typename Real = double>
SystemCavityOperator<Real> drive_local(int fock_cutoff, const DriveSpec& spec) {
  validate(spec);
  const Index c = fock_cutoff + 1;
  const Index lo = lower_level(spec.transition), hi = 2;
  const Real half = Real(spec.area) / 2;
  const Complex<Real> minus_i(0, -1);
  const Real phi = spec.phase;
  SystemCavityOperator<Real> op{spec.system, CMatrix<Real>::Identity(3 * c, 3 * c)};
  for (Index n = 0; n < c; ++n) {
    const Index a = lo * c + n, b = hi * c + n;
    op.block(a, a) = std::cos(half);
    op.block(b, b) = std::cos(half);
    op.block(b, a) = minus_i * std::polar(Real(1), -phi) * std::sin(half);  // <2|U|lower>
    op.block(a, b) = minus_i * std::polar(Real(1), phi) * std::sin(half);   // <lower|U|2>
  }
  return op;
}

template <typename Real = double>
SystemCavityOperator<Real> local_propagator(int fock_cutoff, const PulseSpec& spec,
                                            const DispersiveGuard& guard = {}) {
  return std::visit(
      [&](const auto& s) -> SystemCavityOperator<Real> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ResonantSpec>)
          return resonant_local<Real>(fock_cutoff, s);
        else if constexpr (std::is_same_v<S, DispersiveSpec>)
          return dispersive_local<Real>(fock_cutoff, s, guard);
        else
          return drive_local<Real>(fock_cutoff, s);
      },
      spec);
}

template <typename Real = double>
OperatorMatrix<Real> resonant_propagator(const HilbertLayout& layout, const ResonantSpec& spec) {
  layout.check_system(spec.system);
  return embed(layout, resonant_local<Real>(layout.fock_cutoff(), spec), true);
}

template <typename Real = double>
OperatorMatrix<Real> dispersive_propagator(const HilbertLayout& layout, const DispersiveSpec& spec,
                                           const DispersiveGuard& guard = {}) {
  layout.check_system(spec.system);
  return embed(layout, dispersive_local<Real>(layout.fock_cutoff(), spec, guard), true);
}

template <typename Real = double>
OperatorMatrix<Real> drive_propagator(const HilbertLayout& layout, const DriveSpec& spec) {
  layout.check_system(spec.system);
  return embed(layout, drive_local<Real>(layout.fock_cutoff(), spec), true);
}

template <typename Real = double>
OperatorMatrix<Real> propagator(const HilbertLayout& layout, const PulseSpec& spec,
                                const DispersiveGuard& guard = {}) {
  layout.check_system(system_of(spec));
  return embed(layout, local_propagator<Real>(layout.fock_cutoff(), spec, guard), true);
}

// ---------------------------------------------------------------------------
// Interaction-picture Hamiltonians (hbar = 1), assembled from embedded
// single-site operators rather than from the closed forms above.

namespace detail {

template <typename Real>
CMatrix<Real> level_op(int row, int col) {
  CMatrix<Real> m = CMatrix<Real>::Zero(kLevels, kLevels);
  m(row, col) = Real(1);
  return m;
}

template <typename Real>
CMatrix<Real> creation_op(int cavity_dim) {
  CMatrix<Real> m = CMatrix<Real>::Zero(cavity_dim, cavity_dim);
  for (int n = 0; n + 1 < cavity_dim; ++n) m(n + 1, n) = std::sqrt(Real(n + 1));
  return m;
}

}  // namespace detail

template <typename Real = double>
OperatorMatrix<Real> hamiltonian_of(const HilbertLayout& layout, const ResonantSpec& spec) {
  validate(spec);
  const int lo = lower_level(spec.transition);
  const auto sigma = embed_local<Real>(layout, Site::system(spec.system), detail::level_op<Real>(lo, 2));
  const auto adag = embed_local<Real>(layout, Site::cavity(), detail::creation_op<Real>(layout.cavity_dim()));
  const CMatrix<Real> coupling = Real(spec.g) * (adag.entries() * sigma.entries());
  return {layout, coupling + coupling.adjoint()};
}

template <typename Real = double>
OperatorMatrix<Real> hamiltonian_of(const HilbertLayout& layout, const DispersiveSpec& spec) {
  validate(spec, DispersiveGuard{0, false});
  const int lo = lower_level(spec.transition);
  const CMatrix<Real> z = detail::level_op<Real>(2, 2) - detail::level_op<Real>(lo, lo);
  const CMatrix<Real> adag = detail::creation_op<Real>(layout.cavity_dim());
  const CMatrix<Real> number = adag * adag.adjoint();
  const auto zs = embed_local<Real>(layout, Site::system(spec.system), z);
  const auto ns = embed_local<Real>(layout, Site::cavity(), number);
  const Real chi = Real(spec.g) * Real(spec.g) / Real(spec.detuning);
  return {layout, chi * (zs.entries() * ns.entries())};
}

template <typename Real = double>
OperatorMatrix<Real> hamiltonian_of(const HilbertLayout& layout, const DriveSpec& spec) {
  validate(spec);
  const int lo = lower_level(spec.transition);
  const auto sigma = embed_local<Real>(layout, Site::system(spec.system), detail::level_op<Real>(lo, 2));
  const CMatrix<Real> term =
      (Real(spec.rabi_frequency()) / 2) * std::polar(Real(1), Real(spec.phase)) * sigma.entries();
  return {layout, term + term.adjoint()};
}

template <typename Real = double>
OperatorMatrix<Real> hamiltonian_of(const HilbertLayout& layout, const PulseSpec& spec) {
  return std::visit([&](const auto& s) { return hamiltonian_of<Real>(layout, s); }, spec);
}

/// exp(-i H t) by Hermitian eigendecomposition. Serves as the reference
/// against which the closed forms are checked.
template <typename Real = double>
OperatorMatrix<Real> exponentiate_hamiltonian(const OperatorMatrix<Real>& h, double t) {
  const CMatrix<Real> scaled = h.entries() * Real(t);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(scaled);
  if (solver.info() != Eigen::Success) throw std::runtime_error("exponentiate_hamiltonian: eigensolver failed");
  CVector<Real> phases(scaled.rows());
  for (Index k = 0; k < phases.size(); ++k) phases[k] = std::polar(Real(1), -solver.eigenvalues()[k]);
  const CMatrix<Real>& v = solver.eigenvectors();
  return {h.layout(), v * phases.asDiagonal() * v.adjoint(), true};
}

template <typename Real = double, typename Spec>
OperatorMatrix<Real> oracle_propagator(const HilbertLayout& layout, const Spec& spec, double t) {
  return exponentiate_hamiltonian<Real>(hamiltonian_of<Real>(layout, spec), t);
}

template <typename Real = double>
OperatorMatrix<Real> oracle_propagator(const HilbertLayout& layout, const PulseSpec& spec) {
  return std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DriveSpec>)
          return oracle_propagator<Real>(layout, s, s.evolution_time());
        else
          return oracle_propagator<Real>(layout, s, s.t);
      },
      spec);
}

}  // namespace cavitygate
