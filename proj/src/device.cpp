#include "cavitygate/device.hpp"

#include <cmath>
#include <stdexcept>

namespace cavitygate::device {

namespace {

void require_positive(std::vector<std::string>& bad, const char* name, double v) {
  if (!(v > 0) || !std::isfinite(v)) bad.emplace_back(name);
}

[[noreturn]] void report(const char* what, const std::vector<std::string>& bad) {
  std::string msg = std::string(what) + ": invalid or missing field(s):";
  for (const auto& b : bad) msg += " " + b;
  throw std::invalid_argument(msg);
}

}  // namespace

void validate(const DeviceParams& d) {
  std::vector<std::string> bad;
  require_positive(bad, "C", d.C);
  require_positive(bad, "L", d.L);
  require_positive(bad, "beta_L", d.beta_L);
  require_positive(bad, "Phi_x", d.Phi_x);
  require_positive(bad, "R", d.R);
  require_positive(bad, "loop_area", d.loop_area);
  require_positive(bad, "nu_20", d.nu_20);
  require_positive(bad, "nu_21", d.nu_21);
  require_positive(bad, "phi_10", d.phi_10);
  require_positive(bad, "phi_20", d.phi_20);
  require_positive(bad, "phi_21", d.phi_21);
  require_positive(bad, "gamma2_inv", d.gamma2_inv);
  require_positive(bad, "gamma1_inv", d.gamma1_inv);
  if (bad.empty() && !(d.nu_20 > d.nu_21)) bad.emplace_back("nu_20 (must exceed nu_21)");
  if (!bad.empty()) report("DeviceParams", bad);
}

void validate(const CavityParams& c) {
  std::vector<std::string> bad;
  require_positive(bad, "nu_c", c.nu_c);
  require_positive(bad, "wavelength", c.wavelength);
  require_positive(bad, "length", c.length);
  require_positive(bad, "L0", c.L0);
  require_positive(bad, "M_sc", c.M_sc);
  require_positive(bad, "Q", c.Q);
  if (!bad.empty()) report("CavityParams", bad);
}

double coupling_g(const DeviceParams& d, const CavityParams& c, double x) {
  if (x < 0 || x > c.length) throw std::invalid_argument("coupling_g: position outside the cavity");
  // Energy quantum taken as h nu_c (= hbar omega_c).
  const double field = std::sqrt(kPlanck * c.nu_c / (c.L0 * c.length));
  const double hbar_g = (c.M_sc / d.L) * field * d.phi_20 * kFluxQuantum * std::sin(2 * kPi * x / c.wavelength);
  return hbar_g / kHbar;
}

double antinode_position(const CavityParams& c, int k) { return c.wavelength / 4 + k * c.wavelength / 2; }

double rabi_frequency(const DeviceParams& d, double integrated_flux) {
  return d.phi_21 * kFluxQuantum / (d.L * kHbar) * integrated_flux;
}

double flux_for_rabi(const DeviceParams& d, double omega) {
  return omega * d.L * kHbar / (d.phi_21 * kFluxQuantum);
}

TimingParams timing_from_couplings(double g, const CouplingTable& couplings, double tau_a, double tau_uw) {
  if (!(g > 0)) throw std::invalid_argument("timing_from_couplings: g must be > 0");
  const auto& hat = couplings.phase_pair;
  const auto& tilde = couplings.rz_pair;
  return {kPi / g, hat.detuning / (hat.g * hat.g), tilde.detuning / (tilde.g * tilde.g), tau_a, tau_uw};
}

TimeBreakdown time_breakdown(int n, const GateParams& p, const TimingParams& t) {
  if (n < 2) throw std::invalid_argument("total_time: n must be >= 2");
  return {
      (2.0 * n + std::abs(p.gamma) / (2 * kPi)) * t.tau_c1,
      2 * std::abs(p.alpha) * t.tau_c2,
      (std::abs(p.beta) + std::abs(p.delta)) * t.tau_c3,
      (2.0 * n + 9) * t.tau_a,
      4 * t.tau_uw,
  };
}

double total_time(int n, const GateParams& params, const TimingParams& timing) {
  return time_breakdown(n, params, timing).total();
}

double schedule_time(int n, const GateParams& params, const TimingParams& timing) {
  TimeBreakdown b = time_breakdown(n, params, timing);
  b.rotation /= 2;
  b.pulses = 6 * timing.tau_uw;
  return b.total();
}

StepCounts step_counts(int n) {
  if (n < 3) throw std::invalid_argument("step_counts: the Barenco count is stated for n >= 3");
  if (n > 62) throw std::invalid_argument("step_counts: n too large");
  const long long pow2 = 1LL << n;
  return {n, 2LL * n + 11, pow2 - 3, pow2};
}

int crossover(int n_min, int n_max) {
  for (int n = n_min; n <= n_max; ++n) {
    const StepCounts c = step_counts(n);
    if (c.this_work < c.barenco) return n;
  }
  return 0;
}

double leakage_estimate(double g, double detuning) {
  if (!(g > 0)) throw std::invalid_argument("leakage_estimate: g must be > 0");
  return g * g / (g * g + detuning * detuning);
}

double mutual_inductance_dipole(double s1, double s2, double separation, LoopGeometry geometry) {
  if (!(s1 > 0) || !(s2 > 0) || !(separation > 0))
    throw std::invalid_argument("mutual_inductance_dipole: inputs must be positive");
  if (separation * separation < 10 * std::max(s1, s2))
    throw std::domain_error("mutual_inductance_dipole: loops too close for the dipole approximation");
  const double coplanar = kMu0 * s1 * s2 / (4 * kPi * separation * separation * separation);
  return geometry == LoopGeometry::Coaxial ? 2 * coplanar : coplanar;
}

DecoherenceMargin decoherence_margin(double tau, const DeviceParams& d, const CavityParams& c, double threshold) {
  if (!(tau >= 0)) throw std::invalid_argument("decoherence_margin: tau must be >= 0");
  if (!(d.gamma2_inv > 0) || !(c.Q > 0) || !(c.nu_c > 0))
    throw std::invalid_argument("decoherence_margin: gamma2_inv, Q and nu_c must be positive");
  const double r2 = tau / d.gamma2_inv;
  const double rk = tau / c.kappa_inv();
  return {r2, rk, r2 < threshold && rk < threshold};
}

}  // namespace cavitygate::device
