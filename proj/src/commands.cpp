#include "cavitygate/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cavitygate/schedule_io.hpp"

namespace cavitygate {

namespace {

std::string sci(double v) { return fmt::format("{:.3e}", v); }
std::string ns(double seconds) { return fmt::format("{:.4f}", seconds * 1e9); }
std::string in_pi(double radians) { return fmt::format("{:.12g}", radians / kPi); }

// Nested key-value text, two spaces per level.
class Report {
 public:
  Report& kv(const std::string& key, const std::string& value) {
    out_ << std::string(2 * depth_, ' ') << key << ": " << value << '\n';
    return *this;
  }
  Report& kv(const std::string& key, int value) { return kv(key, std::to_string(value)); }
  Report& open(const std::string& key) {
    out_ << std::string(2 * depth_, ' ') << key << ":\n";
    ++depth_;
    return *this;
  }
  Report& close() {
    --depth_;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  int depth_ = 0;
};

const char* to_string(Propagation p) { return p == Propagation::ClosedForm ? "closed_form" : "oracle"; }

const char* to_string(CouplingSource s) {
  switch (s) {
    case CouplingSource::Device: return "device";
    case CouplingSource::Explicit: return "explicit";
    default: return "nominal";
  }
}

void echo_config(Report& r, const RunConfig& c) {
  r.open("config");
  r.kv("n", c.n).kv("mode", to_string(c.mode)).kv("fock_cutoff", c.fock_cutoff);
  r.kv("alpha_pi", in_pi(c.params.alpha)).kv("beta_pi", in_pi(c.params.beta));
  r.kv("gamma_pi", in_pi(c.params.gamma)).kv("delta_pi", in_pi(c.params.delta));
  r.kv("couplings", to_string(c.source)).kv("propagator", to_string(c.propagation));
  r.kv("tolerance", sci(c.tolerance));
  if (c.seed) r.kv("seed", *c.seed);
  r.close();
}

std::string ket_label(unsigned bits, int n) {
  std::string s = "|";
  for (int k = n - 1; k >= 0; --k) s += ((bits >> k) & 1u) ? '1' : '0';
  return s + ">|0>_c";
}

std::string coefficient(Complex<double> a) {
  constexpr double eps = 1e-9;
  if (std::abs(a - 1.0) < eps) return "";
  if (std::abs(a + 1.0) < eps) return "-";
  if (std::abs(a - Complex<double>(0, 1)) < eps) return "i";
  if (std::abs(a + Complex<double>(0, 1)) < eps) return "-i";
  return fmt::format("({:.6f}{:+.6f}i)", a.real(), a.imag());
}

CMatrixXd oracle_images(const Schedule& s, const HilbertLayout& layout) {
  const Index count = Index{1} << layout.n_systems();
  CMatrixXd states = CMatrixXd::Zero(layout.dimension(), count);
  for (Index b = 0; b < count; ++b) states(computational_index(layout, static_cast<unsigned>(b)), b) = 1.0;
  for (const PulseOp& op : s.steps) states = oracle_propagator<double>(layout, op.spec).entries() * states;
  return states;
}

std::string write_trace(const Schedule& schedule, const RunConfig& config) {
  const HilbertLayout layout(config.n, config.fock_cutoff);
  Report r;
  r.open("trace");
  std::string groups;
  for (const auto& g : schedule.groups()) groups += (groups.empty() ? "" : " ") + g;
  r.kv("groups", groups);
  const unsigned count = 1u << config.n;
  for (unsigned b = 0; b < count; ++b) {
    std::vector<int> levels(config.n);
    for (int k = 0; k < config.n; ++k) levels[k] = (b >> (config.n - 1 - k)) & 1u;
    const auto snaps = replay_trace(schedule, basis_state<double>(layout, levels, 0));
    r.open("state " + ket_label(b, config.n));
    for (const auto& snap : snaps) r.kv(snap.after, describe_state(snap.state));
    r.close();
  }
  r.close();
  return r.str();
}

void require_device(const ResolvedRun& run) {
  if (!run.device) throw ConfigError("(config)", 0, "device", "a device file is required (--device or device:)");
}

}  // namespace

std::string describe_state(const StateVector<double>& state, double threshold) {
  std::string out;
  for (Index i = 0; i < state.amplitudes().size(); ++i) {
    const Complex<double> a = state[i];
    if (std::abs(a) < threshold) continue;
    std::string term = coefficient(a) + state.layout().ket(i);
    if (out.empty()) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

Evaluation evaluate(const RunConfig& config, const ResolvedRun& run, double coupling_scale) {
  Evaluation e;
  e.schedule = compile_controlled_u(config.n, config.params, run.couplings, config.mode, run.timing);
  if (coupling_scale != 1.0) e.schedule = with_resonant_coupling_scale(e.schedule, coupling_scale);
  const HilbertLayout layout(config.n, config.fock_cutoff);
  const CMatrixXd images = config.propagation == Propagation::ClosedForm ? computational_images(e.schedule, layout)
                                                                         : oracle_images(e.schedule, layout);
  const auto ideal = ideal_controlled_u(config.n, config.params);
  e.gate = extract_computational_gate(images, layout);
  e.distance = gate_distance(e.gate.matrix, ideal);
  e.residues = residues(images, layout);

  const Index count = images.cols();
  e.per_state_error.resize(count);
  for (Index b = 0; b < count; ++b) {
    CVectorXd diff = images.col(b);
    for (Index i = 0; i < count; ++i)
      diff[computational_index(layout, static_cast<unsigned>(i))] -= ideal.matrix(i, b);
    e.per_state_error[b] = diff.cwiseAbs().maxCoeff();
  }
  e.max_error = *std::max_element(e.per_state_error.begin(), e.per_state_error.end());
  const double tol = config.tolerance;
  e.pass = e.max_error <= tol && e.residues.cavity <= tol && e.residues.level2 <= tol;
  return e;
}

std::string verify_report(const RunConfig& config, bool with_trace, bool csv, int& exit_code) {
  const ResolvedRun run = resolve(config);
  const Evaluation e = evaluate(config, run);
  exit_code = e.pass ? kExitPass : kExitFail;

  if (csv) {
    std::string out = "state,max_error\n";
    for (std::size_t b = 0; b < e.per_state_error.size(); ++b)
      out += fmt::format("{},{}\n", ket_label(static_cast<unsigned>(b), config.n), sci(e.per_state_error[b]));
    return out;
  }

  Report r;
  r.kv("command", "verify");
  echo_config(r, config);
  r.open("schedule");
  r.kv("steps", static_cast<int>(e.schedule.steps.size()));
  r.kv("adjustments", e.schedule.adjustment_count);
  r.kv("coupling_g", sci(run.g));
  r.kv("duration_ns", ns(e.schedule.total_duration()));
  r.close();
  r.open("result");
  r.kv("max_entry_error", sci(e.max_error));
  r.kv("fidelity", fmt::format("{:.12f}", e.distance.phase_sensitive_fidelity));
  r.kv("leakage", sci(e.gate.leakage));
  r.kv("cavity_residual", sci(e.residues.cavity));
  r.kv("level2_residue", sci(e.residues.level2));
  r.open("per_state");
  for (std::size_t b = 0; b < e.per_state_error.size(); ++b)
    r.kv(ket_label(static_cast<unsigned>(b), config.n), sci(e.per_state_error[b]));
  r.close();
  r.kv("status", e.pass ? "pass" : "fail");
  r.close();
  std::string out = r.str();
  if (with_trace) out += write_trace(e.schedule, config);
  return out;
}

std::string trace_report(const RunConfig& config) {
  const ResolvedRun run = resolve(config);
  const Schedule s = compile_controlled_u(config.n, config.params, run.couplings, config.mode, run.timing);
  Report r;
  r.kv("command", "trace");
  echo_config(r, config);
  return r.str() + write_trace(s, config);
}

std::string timing_report(const RunConfig& config, bool csv) {
  const ResolvedRun run = resolve(config);
  require_device(run);
  const auto& dev = *run.device;
  const device::TimingParams t =
      device::timing_from_couplings(run.g, run.couplings, run.timing.adjustment_time, run.timing.drive_duration);
  const device::TimeBreakdown b = device::time_breakdown(config.n, config.params, t);
  const double formula = b.total();
  const double corrected = device::schedule_time(config.n, config.params, t);
  const double compiled =
      compile_controlled_u(config.n, config.params, run.couplings, config.mode, run.timing).total_duration();
  const auto margin = device::decoherence_margin(corrected, dev.squid, dev.cavity);
  const double separation = dev.cavity.wavelength / 2;
  const double m_ss = device::mutual_inductance_dipole(dev.squid.loop_area, dev.squid.loop_area, separation,
                                                       device::LoopGeometry::Coplanar);
  const double ratio = m_ss / dev.cavity.M_sc;

  if (csv) {
    std::string out = "term,seconds\n";
    for (const auto& [k, v] : {std::pair{"resonant", b.resonant}, {"phase", b.phase}, {"rotation", b.rotation},
                               {"adjustments", b.adjustments}, {"pulses", b.pulses}, {"total", formula},
                               {"schedule_total", corrected}})
      out += fmt::format("{},{:.6e}\n", k, v);
    return out;
  }

  Report r;
  r.kv("command", "timing");
  echo_config(r, config);
  r.open("device");
  r.kv("coupling_g", sci(run.g));
  r.kv("kappa_inv_us", fmt::format("{:.4f}", dev.cavity.kappa_inv() * 1e6));
  r.kv("gamma2_inv_us", fmt::format("{:.4f}", dev.squid.gamma2_inv * 1e6));
  r.close();
  r.open("unit_times_ns");
  r.kv("tau_c1", ns(t.tau_c1)).kv("tau_c2", ns(t.tau_c2)).kv("tau_c3", ns(t.tau_c3));
  r.kv("tau_a", ns(t.tau_a)).kv("tau_uw", ns(t.tau_uw));
  r.close();
  r.open("formula_ns");
  r.kv("resonant", ns(b.resonant)).kv("phase", ns(b.phase)).kv("rotation", ns(b.rotation));
  r.kv("adjustments", ns(b.adjustments)).kv("pulses", ns(b.pulses)).kv("total", ns(formula));
  r.close();
  r.open("schedule_ns");
  r.kv("model_total", ns(corrected));
  r.kv("compiled_total", ns(compiled));
  r.close();
  r.open("decoherence");
  r.kv("tau_over_gamma2_inv", fmt::format("{:.4f}", margin.ratio_gamma2));
  r.kv("tau_over_kappa_inv", fmt::format("{:.4f}", margin.ratio_kappa));
  r.kv("status", margin.pass ? "ok" : "marginal");
  r.close();
  r.open("squid_squid_coupling");
  r.kv("separation_mm", fmt::format("{:.4f}", separation * 1e3));
  r.kv("m_ss_H", sci(m_ss));
  r.kv("m_sc_H", sci(dev.cavity.M_sc));
  r.kv("ratio", sci(ratio));
  r.kv("status", ratio < 1e-3 ? "negligible" : "significant");
  r.close();
  return r.str();
}

std::string counts_csv(int n_min, int n_max) {
  if (n_min < 3) throw std::invalid_argument("counts: n_min must be >= 3 (the Barenco count is stated for n >= 3)");
  if (n_max < n_min) throw std::invalid_argument("counts: n_max must be >= n_min");
  std::string out = "n,this_work,barenco,bergholm\n";
  for (int n = n_min; n <= n_max; ++n) {
    const auto c = device::step_counts(n);
    out += fmt::format("{},{},{},{}\n", c.n, c.this_work, c.barenco, c.bergholm);
  }
  const int cross = device::crossover(3, n_max);
  out += cross ? fmt::format("# crossover n={}\n", cross) : std::string("# crossover none\n");
  return out;
}

const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> names{"alpha", "beta", "gamma", "delta", "g", "coupling_error", "fock_cutoff",
                                              "n"};
  return names;
}

std::string sweep_csv(const RunConfig& config, const SweepRange& range) {
  const auto& names = sweepable_parameters();
  if (std::find(names.begin(), names.end(), range.parameter) == names.end())
    throw std::invalid_argument("sweep: parameter '" + range.parameter + "' is not sweepable");
  if (range.points < 0) throw std::invalid_argument("sweep: points must be >= 0");
  const std::string& p = range.parameter;
  const bool integral = p == "n" || p == "fock_cutoff";

  auto value_at = [&](int k) {
    const double v = range.points == 1 ? range.from
                                       : range.from + (range.to - range.from) * k / double(range.points - 1);
    return integral ? std::round(v) : v;
  };

  auto row = [&](int k) {
    const double v = value_at(k);
    RunConfig c = config;
    double scale = 1.0;
    if (p == "alpha") c.params.alpha = v * kPi;
    else if (p == "beta") c.params.beta = v * kPi;
    else if (p == "gamma") c.params.gamma = v * kPi;
    else if (p == "delta") c.params.delta = v * kPi;
    else if (p == "coupling_error") scale = 1 + v;
    else if (p == "fock_cutoff") c.fock_cutoff = static_cast<int>(v);
    else if (p == "n") c.n = static_cast<int>(v);
    validate(c.params);
    if (c.n < 2) throw std::invalid_argument("sweep: n must be >= 2");
    if (c.fock_cutoff < 1) throw std::invalid_argument("sweep: fock_cutoff must be >= 1");
    ResolvedRun run = resolve(c);
    if (p == "g") {
      if (!(v > 0)) throw std::invalid_argument("sweep: g must be > 0");
      CouplingTable t = CouplingTable::uniform(c.n, v);
      t.target_resonant_12 = run.couplings.target_resonant_12;
      t.phase_pair_12 = run.couplings.phase_pair_12;
      t.guard = run.couplings.guard;
      t.signed_detuning = run.couplings.signed_detuning;
      run.couplings = t;
      run.g = v;
      run.timing.drive_duration = c.drive_duration.resolve(kPi / v);
      run.timing.adjustment_time = c.adjustment_time.resolve(kPi / v);
    }
    const Evaluation e = evaluate(c, run, scale);
    return fmt::format("{},{},{:.12f},{},{},{}\n", k, format_real(v), e.distance.phase_sensitive_fidelity,
                       sci(e.max_error), sci(e.gate.leakage), ns(e.schedule.total_duration()));
  };

  std::string out = fmt::format("index,{},fidelity,max_error,leakage,tau_ns\n", p);
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  for (int start = 0; start < range.points; start += workers) {
    std::vector<std::future<std::string>> batch;
    for (int k = start; k < std::min(range.points, start + workers); ++k)
      batch.push_back(std::async(std::launch::async, row, k));
    for (auto& f : batch) out += f.get();
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct CommonOptions {
  std::string config;
  std::string device;
  int n = 0;
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
  std::string mode;
  int fock_cutoff = 0;
  double tolerance = 0;
  std::string out;
  bool csv = false;

  CLI::Option* n_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* fock_opt = nullptr;
  CLI::Option* tol_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "Run configuration (YAML)");
    app->add_option("--device", device, "Device and cavity parameters (YAML)");
    n_opt = app->add_option("--n", n, "Number of qubits");
    alpha_opt = app->add_option("--alpha", alpha, "Global phase, units of pi");
    beta_opt = app->add_option("--beta", beta, "Outer z rotation, units of pi");
    gamma_opt = app->add_option("--gamma", gamma, "y rotation, units of pi");
    delta_opt = app->add_option("--delta", delta, "Inner z rotation, units of pi");
    app->add_option("--mode", mode, "squid or atom");
    fock_opt = app->add_option("--fock-cutoff", fock_cutoff, "Maximum photon number kept");
    tol_opt = app->add_option("--tolerance", tolerance, "Pass threshold");
    app->add_option("--out", out, "Write the report to this file");
    app->add_flag("--csv", csv, "CSV output");
  }

  RunConfig build() const {
    RunConfig c = config.empty() ? RunConfig{} : load_run_config_file(config);
    if (!device.empty()) {
      c.device_path = device;
      if (c.source == CouplingSource::Nominal) c.source = CouplingSource::Device;
    }
    if (n_opt->count()) c.n = n;
    if (alpha_opt->count()) c.params.alpha = alpha * kPi;
    if (beta_opt->count()) c.params.beta = beta * kPi;
    if (gamma_opt->count()) c.params.gamma = gamma * kPi;
    if (delta_opt->count()) c.params.delta = delta * kPi;
    if (!mode.empty()) c.mode = mode_from_string(mode);
    if (fock_opt->count()) c.fock_cutoff = fock_cutoff;
    if (tol_opt->count()) c.tolerance = tolerance;
    if (c.n < 2) throw std::invalid_argument("--n must be >= 2");
    if (c.fock_cutoff < 1) throw std::invalid_argument("--fock-cutoff must be >= 1");
    if (!(c.tolerance > 0)) throw std::invalid_argument("--tolerance must be > 0");
    validate(c.params);
    return c;
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compile and verify n-qubit controlled-U pulse schedules for three-level systems in a cavity."};
  app.name("cavitygate");
  app.require_subcommand(1);

  CommonOptions verify_o, trace_o, timing_o, sweep_o;
  bool with_trace = false;
  auto* verify = app.add_subcommand("verify", "Simulate the compiled schedule and compare with the ideal gate");
  verify_o.attach(verify);
  verify->add_flag("--trace", with_trace, "Append the state after each grouped operator");

  auto* trace = app.add_subcommand("trace", "State after each grouped operator for every computational input");
  trace_o.attach(trace);

  auto* timing = app.add_subcommand("timing", "Operation-time budget, decoherence margins and coupler check");
  timing_o.attach(timing);

  int n_min = 3, n_max = 12;
  std::string counts_out;
  auto* counts = app.add_subcommand("counts", "Elementary step counts compared with other decompositions");
  counts->add_option("--n-min", n_min, "First n (>= 3)");
  counts->add_option("--n-max", n_max, "Last n");
  counts->add_option("--out", counts_out, "Write the table to this file");

  SweepRange range;
  auto* sweep = app.add_subcommand("sweep", "Scan one parameter and tabulate fidelity, error, leakage and duration");
  sweep_o.attach(sweep);
  sweep->add_option("--param", range.parameter, "alpha beta gamma delta g coupling_error fock_cutoff n")->required();
  sweep->add_option("--from", range.from, "First value (angles in units of pi)");
  sweep->add_option("--to", range.to, "Last value");
  sweep->add_option("--points", range.points, "Number of points (0 gives an empty table)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*verify) {
      int code = kExitPass;
      emit(verify_report(verify_o.build(), with_trace, verify_o.csv, code), verify_o.out, out);
      return code;
    }
    if (*trace) emit(trace_report(trace_o.build()), trace_o.out, out);
    if (*timing) emit(timing_report(timing_o.build(), timing_o.csv), timing_o.out, out);
    if (*counts) emit(counts_csv(n_min, n_max), counts_out, out);
    if (*sweep) emit(sweep_csv(sweep_o.build(), range), sweep_o.out, out);
    return kExitPass;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace cavitygate
