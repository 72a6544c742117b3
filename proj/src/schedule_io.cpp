#include "cavitygate/schedule_io.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace cavitygate {

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kMagic = "cavitygate-schedule";
constexpr int kVersion = 1;

// Decimal value sign * digits * 10^exponent. Durations are written in ns by
// shifting the exponent of the shortest seconds text, so reading them back
// rounds exactly once and recovers the same double.
struct Decimal {
  bool negative = false;
  std::string digits;
  int exponent = 0;
};

std::optional<Decimal> parse_decimal(const std::string& text) {
  Decimal d;
  std::size_t k = 0;
  if (k < text.size() && (text[k] == '-' || text[k] == '+')) d.negative = text[k++] == '-';
  bool seen_dot = false, any = false;
  for (; k < text.size(); ++k) {
    const char c = text[k];
    if (c >= '0' && c <= '9') {
      d.digits += c;
      if (seen_dot) --d.exponent;
      any = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) return std::nullopt;
  if (k < text.size()) {
    if (text[k] != 'e' && text[k] != 'E') return std::nullopt;
    int e = 0;
    const char* first = text.data() + k + 1;
    if (first < text.data() + text.size() && *first == '+') ++first;
    const auto res = std::from_chars(first, text.data() + text.size(), e);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
    d.exponent += e;
  }
  return d;
}

std::string render(Decimal d) {
  const auto lead = d.digits.find_first_not_of('0');
  if (lead == std::string::npos) return "0";
  d.digits.erase(0, lead);
  while (d.digits.back() == '0') {
    d.digits.pop_back();
    ++d.exponent;
  }
  const int k = static_cast<int>(d.digits.size());
  const int top = d.exponent + k - 1;
  std::string out = d.negative ? "-" : "";
  if (top < -6 || top > 15) {
    out += d.digits.substr(0, 1);
    if (k > 1) out += "." + d.digits.substr(1);
    return out + "e" + std::to_string(top);
  }
  if (d.exponent >= 0) return out + d.digits + std::string(d.exponent, '0');
  if (-d.exponent < k) return out + d.digits.substr(0, k + d.exponent) + "." + d.digits.substr(k + d.exponent);
  return out + "0." + std::string(-d.exponent - k, '0') + d.digits;
}

std::string ns_text(double seconds) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, seconds, std::chars_format::scientific);
  Decimal d = *parse_decimal(std::string(buf, res.ptr));
  d.exponent += 9;
  return render(d);
}

const char* kind_of(const PulseSpec& spec) {
  switch (spec.index()) {
    case 0: return "resonant";
    case 1: return "dispersive";
    default: return "drive";
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

class Fields {
 public:
  Fields(int line, const std::vector<std::string>& tokens, std::size_t first) : line_(line) {
    for (std::size_t k = first; k < tokens.size(); ++k) {
      const auto eq = tokens[k].find('=');
      if (eq == std::string::npos || eq == 0) throw ScheduleParseError(line, "expected key=value, got '" + tokens[k] + "'");
      if (!map_.emplace(tokens[k].substr(0, eq), tokens[k].substr(eq + 1)).second)
        throw ScheduleParseError(line, "duplicate field '" + tokens[k].substr(0, eq) + "'");
    }
  }

  std::string text(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) throw ScheduleParseError(line_, "missing field '" + key + "'");
    std::string v = it->second;
    map_.erase(it);
    return v;
  }

  double real(const std::string& key) {
    const std::string v = text(key);
    double out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
      throw ScheduleParseError(line_, "field '" + key + "': not a real number: '" + v + "'");
    return out;
  }

  double seconds_from_ns(const std::string& key) {
    const std::string v = text(key);
    auto d = parse_decimal(v);
    double out = 0;
    if (d) {
      const std::string shifted = (d->negative ? "-" : "") + d->digits + "e" + std::to_string(d->exponent - 9);
      const auto res = std::from_chars(shifted.data(), shifted.data() + shifted.size(), out);
      if (res.ec != std::errc() || res.ptr != shifted.data() + shifted.size()) d.reset();
    }
    if (!d || !std::isfinite(out))
      throw ScheduleParseError(line_, "field '" + key + "': not a real number: '" + v + "'");
    return out;
  }

  int integer(const std::string& key) {
    const std::string v = text(key);
    int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
      throw ScheduleParseError(line_, "field '" + key + "': not an integer: '" + v + "'");
    return out;
  }

  Transition transition() {
    const std::string v = text("transition");
    if (v == "0-2") return Transition::ZeroTwo;
    if (v == "1-2") return Transition::OneTwo;
    throw ScheduleParseError(line_, "unknown transition '" + v + "'");
  }

  void finish() const {
    if (!map_.empty()) throw ScheduleParseError(line_, "unknown field '" + map_.begin()->first + "'");
  }

 private:
  int line_;
  std::map<std::string, std::string> map_;
};

}  // namespace

std::string serialize_schedule(const Schedule& s) {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  out << "mode " << to_string(s.mode) << '\n';
  out << "qubits " << s.n << '\n';
  out << "adjustments " << s.adjustment_count << " time_ns=" << ns_text(s.adjustment_time) << '\n';
  out << "guard min_ratio=" << format_real(s.guard.min_ratio) << " enforce=" << (s.guard.enforce ? 1 : 0) << '\n';
  for (const PulseOp& op : s.steps) {
    out << "step label=" << op.label << " group=" << op.group << " kind=" << kind_of(op.spec)
        << " system=" << system_of(op.spec) + 1;
    std::visit(
        [&](const auto& spec) {
          using S = std::decay_t<decltype(spec)>;
          out << " transition=" << to_string(spec.transition);
          if constexpr (std::is_same_v<S, ResonantSpec>) {
            out << " g=" << format_real(spec.g);
          } else if constexpr (std::is_same_v<S, DispersiveSpec>) {
            out << " g=" << format_real(spec.g) << " detuning=" << format_real(spec.detuning);
          } else {
            out << " phase=" << format_real(spec.phase) << " area=" << format_real(spec.area);
          }
        },
        op.spec);
    out << " duration_ns=" << ns_text(op.duration()) << '\n';
  }
  out << "end\n";
  return out.str();
}

Schedule parse_schedule(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Schedule s;
  enum { Magic, Mode_, Qubits, Adjust, Guard, Steps, Done } state = Magic;

  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (state == Done) throw ScheduleParseError(lineno, "content after 'end'");
    const std::string& head = tokens[0];
    switch (state) {
      case Magic:
        if (head != kMagic || tokens.size() != 2 || tokens[1] != std::to_string(kVersion))
          throw ScheduleParseError(lineno, std::string("expected '") + kMagic + " " + std::to_string(kVersion) + "'");
        state = Mode_;
        break;
      case Mode_:
        if (head != "mode" || tokens.size() != 2) throw ScheduleParseError(lineno, "expected 'mode squid|atom'");
        try {
          s.mode = mode_from_string(tokens[1]);
        } catch (const std::invalid_argument& e) {
          throw ScheduleParseError(lineno, e.what());
        }
        state = Qubits;
        break;
      case Qubits: {
        if (head != "qubits" || tokens.size() != 2) throw ScheduleParseError(lineno, "expected 'qubits N'");
        Fields f(lineno, {"", "n=" + tokens[1]}, 1);
        s.n = f.integer("n");
        if (s.n < 2) throw ScheduleParseError(lineno, "qubits must be >= 2");
        state = Adjust;
        break;
      }
      case Adjust: {
        if (head != "adjustments" || tokens.size() != 3)
          throw ScheduleParseError(lineno, "expected 'adjustments COUNT time_ns=T'");
        Fields f(lineno, {"", "count=" + tokens[1], tokens[2]}, 1);
        s.adjustment_count = f.integer("count");
        s.adjustment_time = f.seconds_from_ns("time_ns");
        f.finish();
        state = Guard;
        break;
      }
      case Guard: {
        if (head != "guard") throw ScheduleParseError(lineno, "expected 'guard min_ratio=R enforce=0|1'");
        Fields f(lineno, tokens, 1);
        s.guard.min_ratio = f.real("min_ratio");
        s.guard.enforce = f.integer("enforce") != 0;
        f.finish();
        state = Steps;
        break;
      }
      case Steps: {
        if (head == "end") {
          if (tokens.size() != 1) throw ScheduleParseError(lineno, "unexpected tokens after 'end'");
          state = Done;
          break;
        }
        if (head != "step") throw ScheduleParseError(lineno, "expected 'step ...' or 'end', got '" + head + "'");
        Fields f(lineno, tokens, 1);
        PulseOp op;
        op.label = f.text("label");
        op.group = f.text("group");
        const std::string kind = f.text("kind");
        const int system = f.integer("system") - 1;
        if (system < 0 || system >= s.n)
          throw ScheduleParseError(lineno, "system " + std::to_string(system + 1) + " outside 1.." + std::to_string(s.n));
        const Transition tr = f.transition();
        if (kind == "resonant") {
          ResonantSpec r{system, tr, f.real("g"), 0};
          r.t = f.seconds_from_ns("duration_ns");
          op.spec = r;
        } else if (kind == "dispersive") {
          DispersiveSpec d{system, tr, f.real("g"), f.real("detuning"), 0};
          d.t = f.seconds_from_ns("duration_ns");
          op.spec = d;
        } else if (kind == "drive") {
          DriveSpec d{system, tr, f.real("phase"), f.real("area"), 0};
          d.duration = f.seconds_from_ns("duration_ns");
          op.spec = d;
        } else {
          throw ScheduleParseError(lineno, "unknown step kind '" + kind + "'");
        }
        f.finish();
        s.steps.push_back(std::move(op));
        break;
      }
      case Done:
        break;
    }
  }
  if (state != Done) throw ScheduleParseError(lineno, "unexpected end of input (missing 'end')");
  if (static_cast<int>(s.steps.size()) != 2 * s.n + 11)
    throw ScheduleParseError(lineno, "expected " + std::to_string(2 * s.n + 11) + " steps for " +
                                         std::to_string(s.n) + " qubits, found " + std::to_string(s.steps.size()));
  return s;
}

}  // namespace cavitygate
