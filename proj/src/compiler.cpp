#include "cavitygate/compiler.hpp"

#include <algorithm>
#include <cmath>

namespace cavitygate {

namespace {

constexpr double kAngleSlack = 1e-9;

void check_range(const char* name, double value, double lo, double hi) {
  if (!std::isfinite(value) || value < lo - kAngleSlack || value > hi + kAngleSlack)
    throw std::invalid_argument(std::string("GateParams: ") + name + " = " + std::to_string(value) +
                                " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void check_pair(const char* name, const DispersivePair& p, const DispersiveGuard& guard) {
  if (!(p.g > 0) || !(p.detuning > 0))
    throw std::invalid_argument(std::string("CouplingTable: ") + name + " needs g > 0 and detuning > 0");
  validate(DispersiveSpec{0, Transition::ZeroTwo, p.g, p.detuning, 0}, guard);
}

bool same_pair(const DispersivePair& a, const DispersivePair& b) { return a.g == b.g && a.detuning == b.detuning; }

}  // namespace

void validate(const GateParams& p) {
  check_range("alpha", p.alpha, -kPi, kPi);
  check_range("beta", p.beta, -2 * kPi, 2 * kPi);
  check_range("gamma", p.gamma, 0, 4 * kPi);
  check_range("delta", p.delta, -2 * kPi, 2 * kPi);
}

const char* to_string(Mode mode) { return mode == Mode::Squid ? "squid" : "atom"; }

Mode mode_from_string(const std::string& text) {
  if (text == "squid") return Mode::Squid;
  if (text == "atom") return Mode::Atom;
  throw std::invalid_argument("unknown mode '" + text + "' (expected squid or atom)");
}

CouplingTable CouplingTable::uniform(int n, double g) {
  CouplingTable table;
  table.resonant.assign(static_cast<std::size_t>(std::max(n, 0)), g);
  const double offres = 0.5 * g;
  table.rz_pair = {offres, 10 * offres};
  table.phase_pair = {offres, 10 * offres};
  return table;
}

double Schedule::pulse_time() const {
  double total = 0;
  for (const PulseOp& op : steps) total += op.duration();
  return total;
}

std::vector<std::string> Schedule::groups() const {
  std::vector<std::string> out;
  for (const PulseOp& op : steps)
    if (out.empty() || out.back() != op.group) out.push_back(op.group);
  return out;
}

std::string group_name_control(int l) { return "U_" + std::to_string(l) + "c"; }
std::string group_name_control_inv(int l) { return "U_" + std::to_string(l) + "c+"; }

Schedule compile_controlled_u(int n, const GateParams& params, const CouplingTable& couplings, Mode mode,
                              const PulseTiming& timing) {
  if (n < 2) throw std::invalid_argument("compile_controlled_u: n must be >= 2");
  validate(params);
  if (static_cast<int>(couplings.resonant.size()) != n)
    throw std::invalid_argument("CouplingTable: expected " + std::to_string(n) + " resonant couplings, got " +
                                std::to_string(couplings.resonant.size()));
  for (std::size_t k = 0; k < couplings.resonant.size(); ++k)
    if (!(couplings.resonant[k] > 0))
      throw std::invalid_argument("CouplingTable: resonant coupling of system " + std::to_string(k + 1) +
                                  " must be > 0");
  if (!(timing.drive_duration >= 0) || !(timing.adjustment_time >= 0))
    throw std::invalid_argument("PulseTiming: durations must be >= 0");

  const int target = n - 1;
  const double g_target = couplings.resonant[target];
  double g_target_12 = g_target;
  DispersivePair phase_12 = couplings.phase_pair;
  if (mode == Mode::Squid) {
    if (couplings.target_resonant_12 && *couplings.target_resonant_12 != g_target)
      throw std::invalid_argument("CouplingTable: SQUID mode uses one coupling for both target transitions");
    if (couplings.phase_pair_12 && !same_pair(*couplings.phase_pair_12, couplings.phase_pair))
      throw std::invalid_argument("CouplingTable: SQUID mode uses one dispersive pair for both transitions");
  } else {
    g_target_12 = couplings.target_resonant_12.value_or(g_target);
    phase_12 = couplings.phase_pair_12.value_or(couplings.phase_pair);
    if (!(g_target_12 > 0)) throw std::invalid_argument("CouplingTable: g'_n must be > 0");
  }
  check_pair("rz_pair", couplings.rz_pair, couplings.guard);
  check_pair("phase_pair", couplings.phase_pair, couplings.guard);
  check_pair("phase_pair_12", phase_12, couplings.guard);
  if (!couplings.signed_detuning && (params.alpha < 0 || params.beta < 0 || params.delta < 0))
    throw std::invalid_argument("negative angle requested but the coupling table has no detuning-sign support");

  Schedule s;
  s.mode = mode;
  s.n = n;
  s.adjustment_count = 2 * n + 9;
  s.adjustment_time = timing.adjustment_time;
  s.guard = couplings.guard;

  const double tau_uw = timing.drive_duration;
  auto drive = [&](std::string label, std::string group, int system, double phase) {
    s.steps.push_back({std::move(label), std::move(group), DriveSpec{system, Transition::OneTwo, phase, kPi, tau_uw}});
  };
  auto resonant = [&](std::string label, std::string group, int system, Transition tr, double g, double t) {
    s.steps.push_back({std::move(label), std::move(group), ResonantSpec{system, tr, g, t}});
  };
  auto dispersive = [&](std::string label, std::string group, Transition tr, const DispersivePair& pair,
                        double detuning_sign, double t) {
    s.steps.push_back({std::move(label), std::move(group),
                       DispersiveSpec{target, tr, pair.g, detuning_sign * pair.detuning, t}});
  };
  // Rz(theta) on {|0>,|1>} via the |1> -> |2> shelving: |0> picks up
  // e^{-i theta/2} and the shelved |2> picks up e^{+i theta/2}. A blue-detuned
  // cavity (detuning = -Delta~) gives that sign for theta > 0.
  const std::string nc = group_name_control(n);
  auto rz = [&](double theta, const char* shelve, const char* phase, const char* unshelve) {
    const DispersivePair& p = couplings.rz_pair;
    drive(nc + shelve, nc, target, -kPi / 2);
    dispersive(nc + phase, nc, Transition::ZeroTwo, p, theta >= 0 ? -1.0 : 1.0,
               std::abs(theta) * p.detuning / (2 * p.g * p.g));
    drive(nc + unshelve, nc, target, kPi / 2);
  };

  // U_1: |1> -> |2> on system 1.
  drive("U_1", "U_1", 0, -kPi / 2);
  // U_lc: |2>_l|0>_c -> -i|0>_l|1>_c, l = 1 .. n-1.
  for (int l = 1; l <= n - 1; ++l) {
    const double g = couplings.resonant[l - 1];
    resonant(group_name_control(l), group_name_control(l), l - 1, Transition::ZeroTwo, g, kPi / (2 * g));
  }

  // U_nc: U on the target with the photon's help.
  rz(params.delta, ".iii", ".iv", ".v");
  resonant(nc + ".vi", nc, target, Transition::OneTwo, g_target_12, kPi / (2 * g_target_12));
  resonant(nc + ".vii", nc, target, Transition::ZeroTwo, g_target, params.gamma / (2 * g_target));
  resonant(nc + ".viii", nc, target, Transition::OneTwo, g_target_12, 3 * kPi / (2 * g_target_12));
  rz(params.beta, ".ix", ".x", ".xi");
  {
    const double sign = params.alpha >= 0 ? 1.0 : -1.0;
    const DispersivePair& p = couplings.phase_pair;
    dispersive(nc + ".xii", nc, Transition::ZeroTwo, p, sign, std::abs(params.alpha) * p.detuning / (p.g * p.g));
    dispersive(nc + ".xiii", nc, Transition::OneTwo, phase_12, sign,
               std::abs(params.alpha) * phase_12.detuning / (phase_12.g * phase_12.g));
  }

  // U_lc+: i|0>_l|1>_c <- |2>_l|0>_c, l = n-1 .. 1.
  for (int l = n - 1; l >= 1; --l) {
    const double g = couplings.resonant[l - 1];
    resonant(group_name_control_inv(l), group_name_control_inv(l), l - 1, Transition::ZeroTwo, g,
             3 * kPi / (2 * g));
  }
  drive("U_1+", "U_1+", 0, kPi / 2);
  return s;
}

Schedule with_resonant_coupling_scale(const Schedule& schedule, double factor) {
  if (!(factor > 0)) throw std::invalid_argument("coupling scale must be > 0");
  Schedule out = schedule;
  for (PulseOp& op : out.steps)
    if (auto* r = std::get_if<ResonantSpec>(&op.spec)) r->g *= factor;
  return out;
}

}  // namespace cavitygate
