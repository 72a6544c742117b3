#include "cavitygate/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace cavitygate {

ConfigError::ConfigError(std::string source, int line, std::string field, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                         (field.empty() ? std::string() : ": " + field) + ": " + message),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

// ---------------------------------------------------------------------------
// Units

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, double>& prefixes() {
  static const std::map<std::string, double> p{
      {"a", 1e-18}, {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6}, {"\xc2\xb5", 1e-6},
      {"\xce\xbc", 1e-6}, {"m", 1e-3}, {"c", 1e-2}, {"k", 1e3}, {"M", 1e6}, {"G", 1e9}, {"T", 1e12}};
  return p;
}

const std::set<std::string>& base_units() {
  static const std::set<std::string> b{"F", "H", "Hz", "s", "m", "Ohm", "Wb", "Phi0", "rad", "J", "T"};
  return b;
}

// Splits one factor like "pH", "um^2" into base symbol, scale and power.
void add_factor(const std::string& factor, int sign, double& scale, std::map<std::string, int>& dims) {
  std::string sym = factor;
  int power = 1;
  if (const auto caret = factor.find('^'); caret != std::string::npos) {
    sym = factor.substr(0, caret);
    const std::string p = factor.substr(caret + 1);
    const auto res = std::from_chars(p.data(), p.data() + p.size(), power);
    if (res.ec != std::errc() || res.ptr != p.data() + p.size()) throw std::invalid_argument("bad exponent in '" + factor + "'");
  }
  if (sym == "1" && power == 1) return;
  double factor_scale = 1;
  std::string base;
  if (base_units().count(sym)) {
    base = sym;
  } else {
    for (const auto& [pre, value] : prefixes()) {
      if (sym.size() > pre.size() && sym.compare(0, pre.size(), pre) == 0 && base_units().count(sym.substr(pre.size()))) {
        base = sym.substr(pre.size());
        factor_scale = value;
        break;
      }
    }
    if (base.empty()) throw std::invalid_argument("unknown unit '" + sym + "'");
  }
  scale *= std::pow(factor_scale, sign * power);
  if (base != "rad") dims[base] += sign * power;
}

std::string canonical(const std::map<std::string, int>& dims) {
  std::string num, den;
  for (const auto& [base, p] : dims) {
    if (p == 0) continue;
    std::string& side = p > 0 ? num : den;
    if (!side.empty()) side += "*";
    side += base;
    if (std::abs(p) != 1) side += "^" + std::to_string(std::abs(p));
  }
  if (num.empty()) num = "1";
  return den.empty() ? num : num + "/" + den;
}

std::pair<double, std::string> parse_unit(const std::string& unit) {
  double scale = 1;
  std::map<std::string, int> dims;
  if (unit.empty()) return {1.0, "1"};
  const auto slash = unit.find('/');
  auto side = [&](const std::string& s, int sign) {
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, '*')) {
      tok = trim(tok);
      if (tok.empty()) throw std::invalid_argument("malformed unit '" + unit + "'");
      add_factor(tok, sign, scale, dims);
    }
  };
  side(unit.substr(0, slash), +1);
  if (slash != std::string::npos) side(unit.substr(slash + 1), -1);
  return {scale, canonical(dims)};
}

std::pair<double, std::string> split_number(const std::string& text) {
  const std::string t = trim(text);
  double value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || !std::isfinite(value)) throw std::invalid_argument("expected a number, got '" + t + "'");
  return {value, trim(std::string(res.ptr, t.data() + t.size()))};
}

}  // namespace

double parse_quantity(const std::string& text, const std::string& expected_unit) {
  const auto [value, unit] = split_number(text);
  const auto [scale, dims] = parse_unit(unit);
  const std::string want = parse_unit(expected_unit == "1" ? "" : expected_unit).second;
  if (dims != want)
    throw std::invalid_argument("unit '" + (unit.empty() ? std::string("(none)") : unit) + "' has dimension " + dims +
                                ", expected " + want);
  return value * scale;
}

// ---------------------------------------------------------------------------
// YAML helpers

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) const {
    const int line = node.IsDefined() ? node.Mark().line + 1 : 0;
    throw ConfigError(source_, line > 0 ? line : 0, field, msg);
  }

  void require_map(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
  }

  void check_keys(const YAML::Node& map, const std::string& prefix, const std::set<std::string>& allowed) const {
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, prefix + key, "unknown field");
    }
  }

  std::string scalar(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a scalar value");
    return node.Scalar();
  }

  double quantity(const YAML::Node& node, const std::string& field, const std::string& unit) const {
    try {
      return parse_quantity(scalar(node, field), unit);
    } catch (const std::invalid_argument& e) {
      fail(node, field, e.what());
    }
  }

  double number(const YAML::Node& node, const std::string& field) const { return quantity(node, field, "1"); }

  int integer(const YAML::Node& node, const std::string& field) const {
    const std::string s = trim(scalar(node, field));
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail(node, field, "expected an integer, got '" + s + "'");
    return v;
  }

  bool boolean(const YAML::Node& node, const std::string& field) const {
    const std::string s = scalar(node, field);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    fail(node, field, "expected true or false, got '" + s + "'");
  }

  DurationSetting duration(const YAML::Node& node, const std::string& field) const {
    const std::string s = scalar(node, field);
    try {
      const auto [value, unit] = split_number(s);
      if (unit == "tau_c1") {
        if (value < 0) fail(node, field, "must be >= 0");
        return {value, true};
      }
      const double v = parse_quantity(s, "s");
      if (v < 0) fail(node, field, "must be >= 0");
      return {v, false};
    } catch (const std::invalid_argument& e) {
      fail(node, field, e.what());
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line + 1, "", e.msg);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Device files

DeviceBundle load_device_text(const std::string& text, const std::string& source) {
  const Reader r(source);
  const YAML::Node root = load_yaml(text, source);
  r.require_map(root, "(document)");
  r.check_keys(root, "", {"squid", "cavity"});

  DeviceBundle out;
  std::vector<std::string> missing;
  auto get = [&](const YAML::Node& section, const std::string& prefix, const char* key, const char* unit,
                 double& dst, bool required = true) {
    const YAML::Node node = section[key];
    if (!node.IsDefined() || node.IsNull()) {
      if (required) missing.push_back(prefix + key);
      return;
    }
    dst = r.quantity(node, prefix + key, unit);
  };

  const YAML::Node squid = root["squid"];
  if (!squid.IsDefined()) {
    missing.push_back("squid");
  } else {
    r.require_map(squid, "squid");
    r.check_keys(squid, "squid.", {"C", "L", "beta_L", "Phi_x", "R", "loop_area", "loop_width", "loop_length", "nu_20",
                                   "nu_21", "phi_10", "phi_20", "phi_21", "gamma2_inv", "gamma1_inv"});
    auto& d = out.squid;
    get(squid, "squid.", "C", "F", d.C);
    get(squid, "squid.", "L", "H", d.L);
    get(squid, "squid.", "beta_L", "1", d.beta_L);
    get(squid, "squid.", "Phi_x", "Phi0", d.Phi_x);
    get(squid, "squid.", "R", "Ohm", d.R);
    if (squid["loop_area"].IsDefined()) {
      get(squid, "squid.", "loop_area", "m^2", d.loop_area);
    } else {
      double a = 0, b = 0;
      get(squid, "squid.", "loop_width", "m", a);
      get(squid, "squid.", "loop_length", "m", b);
      d.loop_area = a * b;
    }
    get(squid, "squid.", "nu_20", "Hz", d.nu_20);
    get(squid, "squid.", "nu_21", "Hz", d.nu_21);
    get(squid, "squid.", "phi_10", "1", d.phi_10);
    get(squid, "squid.", "phi_20", "1", d.phi_20);
    get(squid, "squid.", "phi_21", "1", d.phi_21);
    get(squid, "squid.", "gamma2_inv", "s", d.gamma2_inv);
    get(squid, "squid.", "gamma1_inv", "s", d.gamma1_inv);
  }

  const YAML::Node cavity = root["cavity"];
  if (!cavity.IsDefined()) {
    missing.push_back("cavity");
  } else {
    r.require_map(cavity, "cavity");
    r.check_keys(cavity, "cavity.", {"nu_c", "wavelength", "length", "L0", "M_sc", "Q", "epsilon_e", "gap_d",
                                     "width_w", "ground_t"});
    auto& c = out.cavity;
    get(cavity, "cavity.", "nu_c", "Hz", c.nu_c);
    get(cavity, "cavity.", "wavelength", "m", c.wavelength);
    if (const YAML::Node len = cavity["length"]; len.IsDefined()) {
      const std::string s = r.scalar(len, "cavity.length");
      try {
        const auto [value, unit] = split_number(s);
        c.length = unit == "lambda" ? value * c.wavelength : parse_quantity(s, "m");
      } catch (const std::invalid_argument& e) {
        r.fail(len, "cavity.length", e.what());
      }
    } else {
      missing.push_back("cavity.length");
    }
    get(cavity, "cavity.", "L0", "H/m", c.L0);
    get(cavity, "cavity.", "M_sc", "H", c.M_sc);
    get(cavity, "cavity.", "Q", "1", c.Q);
    get(cavity, "cavity.", "epsilon_e", "1", c.epsilon_e, false);
    get(cavity, "cavity.", "gap_d", "m", c.gap_d, false);
    get(cavity, "cavity.", "width_w", "m", c.width_w, false);
    get(cavity, "cavity.", "ground_t", "m", c.ground_t, false);
  }

  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ConfigError(source, 0, "", "missing device field(s): " + list);
  }
  try {
    device::validate(out.squid);
    device::validate(out.cavity);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, 0, "", e.what());
  }
  return out;
}

DeviceBundle load_device_file(const std::filesystem::path& path) {
  return load_device_text(read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Run configuration

RunConfig load_run_config_text(const std::string& text, const std::string& source,
                               const std::filesystem::path& base_dir) {
  const Reader r(source);
  const YAML::Node root = load_yaml(text, source);
  RunConfig cfg;
  if (root.IsNull()) return cfg;
  r.require_map(root, "(document)");
  r.check_keys(root, "", {"n", "mode", "fock_cutoff", "gate", "couplings", "device", "timing", "tolerance",
                          "propagator", "seed"});

  if (const auto node = root["n"]) {
    cfg.n = r.integer(node, "n");
    if (cfg.n < 2) r.fail(node, "n", "must be >= 2");
  }
  if (const auto node = root["mode"]) {
    try {
      cfg.mode = mode_from_string(r.scalar(node, "mode"));
    } catch (const std::invalid_argument& e) {
      r.fail(node, "mode", e.what());
    }
  }
  if (const auto node = root["fock_cutoff"]) {
    cfg.fock_cutoff = r.integer(node, "fock_cutoff");
    if (cfg.fock_cutoff < 1) r.fail(node, "fock_cutoff", "must be >= 1");
  }
  if (const auto gate = root["gate"]) {
    r.require_map(gate, "gate");
    r.check_keys(gate, "gate.", {"alpha", "beta", "gamma", "delta"});
    auto angle = [&](const char* key, double& dst) {
      if (const auto node = gate[key]) dst = kPi * r.number(node, std::string("gate.") + key);
    };
    angle("alpha", cfg.params.alpha);
    angle("beta", cfg.params.beta);
    angle("gamma", cfg.params.gamma);
    angle("delta", cfg.params.delta);
    try {
      validate(cfg.params);
    } catch (const std::invalid_argument& e) {
      r.fail(gate, "gate", e.what());
    }
  }
  if (const auto node = root["device"]) {
    std::filesystem::path p = r.scalar(node, "device");
    cfg.device_path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }

  auto pair = [&](const YAML::Node& node, const std::string& field) {
    r.require_map(node, field);
    r.check_keys(node, field + ".", {"g", "detuning"});
    if (!node["g"] || !node["detuning"]) r.fail(node, field, "needs both g and detuning");
    return DispersivePair{r.quantity(node["g"], field + ".g", "1/s"),
                          r.quantity(node["detuning"], field + ".detuning", "1/s")};
  };

  if (const auto cp = root["couplings"]) {
    r.require_map(cp, "couplings");
    r.check_keys(cp, "couplings.", {"source", "resonant", "resonant_12", "rz", "phase", "phase_12", "position",
                                    "guard_ratio", "enforce_guard", "signed_detuning"});
    if (const auto node = cp["source"]) {
      const std::string s = r.scalar(node, "couplings.source");
      if (s == "nominal") cfg.source = CouplingSource::Nominal;
      else if (s == "device") cfg.source = CouplingSource::Device;
      else if (s == "explicit") cfg.source = CouplingSource::Explicit;
      else r.fail(node, "couplings.source", "expected nominal, device or explicit, got '" + s + "'");
    }
    if (cfg.source == CouplingSource::Explicit) {
      const auto res = cp["resonant"];
      if (!res) r.fail(cp, "couplings.resonant", "required for explicit couplings");
      if (res.IsSequence()) {
        for (std::size_t k = 0; k < res.size(); ++k)
          cfg.explicit_couplings.resonant.push_back(
              r.quantity(res[k], "couplings.resonant[" + std::to_string(k) + "]", "1/s"));
      } else {
        cfg.explicit_couplings.resonant.assign(cfg.n, r.quantity(res, "couplings.resonant", "1/s"));
      }
      if (!cp["rz"] || !cp["phase"]) r.fail(cp, "couplings", "explicit couplings need rz and phase pairs");
      cfg.explicit_couplings.rz_pair = pair(cp["rz"], "couplings.rz");
      cfg.explicit_couplings.phase_pair = pair(cp["phase"], "couplings.phase");
    } else {
      for (const char* key : {"resonant", "rz", "phase"})
        if (cp[key]) r.fail(cp[key], std::string("couplings.") + key, "only allowed with source: explicit");
    }
    if (const auto node = cp["resonant_12"]) cfg.resonant_12 = r.quantity(node, "couplings.resonant_12", "1/s");
    if (const auto node = cp["phase_12"]) cfg.phase_12 = pair(node, "couplings.phase_12");
    if (const auto node = cp["position"]) cfg.position = r.quantity(node, "couplings.position", "m");
    if (const auto node = cp["guard_ratio"]) cfg.guard_ratio = r.number(node, "couplings.guard_ratio");
    if (const auto node = cp["enforce_guard"]) cfg.enforce_guard = r.boolean(node, "couplings.enforce_guard");
    if (const auto node = cp["signed_detuning"]) cfg.signed_detuning = r.boolean(node, "couplings.signed_detuning");
  }

  if (const auto tm = root["timing"]) {
    r.require_map(tm, "timing");
    r.check_keys(tm, "timing.", {"drive_duration", "adjustment_time"});
    if (const auto node = tm["drive_duration"]) cfg.drive_duration = r.duration(node, "timing.drive_duration");
    if (const auto node = tm["adjustment_time"]) cfg.adjustment_time = r.duration(node, "timing.adjustment_time");
  }
  if (const auto node = root["tolerance"]) {
    cfg.tolerance = r.number(node, "tolerance");
    if (!(cfg.tolerance > 0)) r.fail(node, "tolerance", "must be > 0");
  }
  if (const auto node = root["propagator"]) {
    const std::string s = r.scalar(node, "propagator");
    if (s == "closed_form") cfg.propagation = Propagation::ClosedForm;
    else if (s == "oracle") cfg.propagation = Propagation::Oracle;
    else r.fail(node, "propagator", "expected closed_form or oracle, got '" + s + "'");
  }
  if (const auto node = root["seed"]) cfg.seed = r.scalar(node, "seed");
  return cfg;
}

RunConfig load_run_config_file(const std::filesystem::path& path) {
  return load_run_config_text(read_file(path), path.string(), path.parent_path());
}

ResolvedRun resolve(const RunConfig& cfg) {
  ResolvedRun out;
  if (cfg.device_path) out.device = load_device_file(*cfg.device_path);

  switch (cfg.source) {
    case CouplingSource::Device: {
      if (!out.device) throw ConfigError("(config)", 0, "couplings.source", "device couplings need a device file");
      const double x = cfg.position.value_or(device::antinode_position(out.device->cavity));
      const double g = device::coupling_g(out.device->squid, out.device->cavity, x);
      if (!(g > 0)) throw ConfigError("(config)", 0, "couplings.position", "coupling vanishes at this position");
      out.couplings = CouplingTable::uniform(cfg.n, g);
      break;
    }
    case CouplingSource::Explicit:
      out.couplings = cfg.explicit_couplings;
      break;
    case CouplingSource::Nominal:
      out.couplings = CouplingTable::uniform(cfg.n, kNominalCoupling);
      break;
  }
  if (cfg.resonant_12) out.couplings.target_resonant_12 = cfg.resonant_12;
  if (cfg.phase_12) out.couplings.phase_pair_12 = cfg.phase_12;
  if (cfg.guard_ratio) out.couplings.guard.min_ratio = *cfg.guard_ratio;
  if (cfg.enforce_guard) out.couplings.guard.enforce = *cfg.enforce_guard;
  if (cfg.signed_detuning) out.couplings.signed_detuning = *cfg.signed_detuning;

  if (out.couplings.resonant.empty()) throw ConfigError("(config)", 0, "couplings.resonant", "no couplings given");
  out.g = out.couplings.resonant.back();
  const double tau_c1 = kPi / out.g;
  out.timing.drive_duration = cfg.drive_duration.resolve(tau_c1);
  out.timing.adjustment_time = cfg.adjustment_time.resolve(tau_c1);
  return out;
}

}  // namespace cavitygate
