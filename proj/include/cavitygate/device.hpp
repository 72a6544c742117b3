#pragma once

#include <string>
#include <vector>

#include "cavitygate/compiler.hpp"

namespace cavitygate::device {

// CODATA 2018 exact values.
inline constexpr double kPlanck = 6.62607015e-34;                  // J s
inline constexpr double kHbar = kPlanck / (2 * kPi);               // J s
inline constexpr double kFluxQuantum = kPlanck / (2 * 1.602176634e-19);  // Wb
inline constexpr double kMu0 = 1.25663706212e-6;                   // H/m

/// rf-SQUID parameters. Level structure is an input, not computed.
struct DeviceParams {
  double C = 0;           // F
  double L = 0;           // H
  double beta_L = 0;      // 1
  double Phi_x = 0;       // units of Phi_0
  double R = 0;           // Ohm
  double loop_area = 0;   // m^2
  double nu_20 = 0;       // Hz
  double nu_21 = 0;       // Hz
  double phi_10 = 0;      // <1|Phi|0> / Phi_0
  double phi_20 = 0;
  double phi_21 = 0;
  double gamma2_inv = 0;  // s, relaxation time of |2>
  double gamma1_inv = 0;  // s, relaxation time of |1>
};

struct CavityParams {
  double nu_c = 0;        // Hz
  double wavelength = 0;  // m
  double length = 0;      // m
  double L0 = 0;          // H/m
  double M_sc = 0;        // H
  double Q = 0;           // 1
  // Geometry and dielectric, carried for documentation only.
  double epsilon_e = 0;
  double gap_d = 0;        // m
  double width_w = 0;      // m
  double ground_t = 0;     // m

  double kappa_inv() const { return Q / (2 * kPi * nu_c); }
};

// Throws std::invalid_argument naming every offending field.
void validate(const DeviceParams& d);
void validate(const CavityParams& c);

struct TimingParams {
  double tau_c1 = 0;  // pi / g
  double tau_c2 = 0;  // Delta / g^2
  double tau_c3 = 0;  // Delta~ / g~^2
  double tau_a = 0;
  double tau_uw = 0;
};

/// Resonant coupling of the 0<->2 transition at position x along the cavity,
/// hbar g = (M_sc / L) sqrt(h nu_c / (L0 l)) phi_20 Phi_0 sin(2 pi x / lambda).
double coupling_g(const DeviceParams& d, const CavityParams& c, double x);

double antinode_position(const CavityParams& c, int k = 0);

/// Omega = phi_21 Phi_0 / (L hbar) * integral B.dS
double rabi_frequency(const DeviceParams& d, double integrated_flux);
double flux_for_rabi(const DeviceParams& d, double omega);

/// tau_c1 from g; tau_c2, tau_c3 from the dispersive pairs of `couplings`.
TimingParams timing_from_couplings(double g, const CouplingTable& couplings, double tau_a, double tau_uw);

/// Closed-form operation time assuming identical couplings:
/// [2n + gamma/(2pi)] tau_c1 + 2|alpha| tau_c2 + (|beta| + |delta|) tau_c3
///   + (2n + 9) tau_a + 4 tau_uw.
double total_time(int n, const GateParams& params, const TimingParams& timing);

struct TimeBreakdown {
  double resonant;     // [2n + gamma/2pi] tau_c1
  double phase;        // 2|alpha| tau_c2
  double rotation;     // (|beta| + |delta|) tau_c3
  double adjustments;  // (2n + 9) tau_a
  double pulses;       // 4 tau_uw
  double total() const { return resonant + phase + rotation + adjustments + pulses; }
};
TimeBreakdown time_breakdown(int n, const GateParams& params, const TimingParams& timing);

/// Duration the compiled schedule actually takes for the same inputs. Two terms
/// differ from total_time(): the Rz interactions last half as long (the shelved
/// level gains the full e^{+i theta/2}, |0> the full e^{-i theta/2}), and six
/// microwave pulses are played, not four.
double schedule_time(int n, const GateParams& params, const TimingParams& timing);

struct StepCounts {
  int n;
  long long this_work;  // 2n + 11
  long long barenco;    // 2^n - 3
  long long bergholm;   // 2^n
};
StepCounts step_counts(int n);
// Smallest n in [n_min, n_max] with 2n + 11 < 2^n - 3, or 0 if none.
int crossover(int n_min, int n_max);

/// Off-resonant excitation estimate g^2 / (g^2 + Delta^2).
double leakage_estimate(double g, double detuning);

enum class LoopGeometry { Coplanar, Coaxial };
/// Far-field mutual inductance of two small loops: mu0 S1 S2 / (4 pi D^3),
/// doubled for coaxial loops.
double mutual_inductance_dipole(double s1, double s2, double separation, LoopGeometry geometry);

struct DecoherenceMargin {
  double ratio_gamma2;  // tau / gamma2^{-1}
  double ratio_kappa;   // tau / kappa^{-1}
  bool pass;
};
DecoherenceMargin decoherence_margin(double tau, const DeviceParams& d, const CavityParams& c,
                                     double threshold = 0.1);

}  // namespace cavitygate::device
