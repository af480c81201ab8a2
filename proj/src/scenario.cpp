#include "qnetsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "qnetsim/error.hpp"

namespace qnetsim {

const char* to_string(Operation op) noexcept {
  switch (op) {
    case Operation::Eig: return "eig";
    case Operation::Evolve: return "evolve";
    case Operation::Fig3: return "fig3";
    case Operation::Protocol: return "protocol";
    case Operation::Entropy: return "entropy";
  }
  return "?";
}

const char* to_string(SystemKind kind) noexcept {
  switch (kind) {
    case SystemKind::Qubit: return "qubit";
    case SystemKind::Jc: return "jc";
    case SystemKind::Network: return "network";
  }
  return "?";
}

const char* to_string(Propagation p) noexcept {
  switch (p) {
    case Propagation::Default: return "default";
    case Propagation::Adiabatic: return "adiabatic";
    case Propagation::Paper: return "paper";
    case Propagation::Eigen: return "eigen";
    case Propagation::Stepped: return "stepped";
  }
  return "?";
}

std::optional<Operation> parse_operation(std::string_view text) {
  for (Operation op : {Operation::Eig, Operation::Evolve, Operation::Fig3, Operation::Protocol,
                       Operation::Entropy})
    if (text == to_string(op)) return op;
  return std::nullopt;
}

CoupledSystem JcConfig::build() const {
  CoupledSystem sys;
  sys.e_g = e_g;
  sys.e_phi1 = e_phi1;
  sys.e_phi2 = e_phi2;
  if (e_e)
    sys.e_e = *e_e;
  else
    sys.e_e = e_g + DriveSignal::constant(e_phi2 - e_phi1) + detuning.value_or(DriveSignal{});
  sys.g_mag = g;
  sys.g_phase = g_phase;
  return sys;
}

NetworkSystem NetworkConfig::build() const {
  NetworkSystem sys = NetworkSystem::simplified(e_g, g1, g2, d1, d2);
  if (qubit_a) sys.qubit_a.qubit = *qubit_a;
  if (qubit_b) sys.qubit_b.qubit = *qubit_b;
  if (cavity) sys.cavity = CavitySpec::from_energies((*cavity)[0], (*cavity)[1]);
  sys.f1 = f1;
  sys.waveguide_length = waveguide_length;
  sys.signal_speed = signal_speed;
  return sys;
}

int Scenario::dimension() const {
  switch (system) {
    case SystemKind::Qubit: return 2;
    case SystemKind::Jc: return 4;
    case SystemKind::Network: return 8;
  }
  return 0;
}

namespace {

constexpr int kValidationSamples = 257;

const std::vector<std::string>& partition_names(SystemKind kind) {
  static const std::vector<std::string> jc{"cavity", "qubit"};
  static const std::vector<std::string> network{"cavity", "qubit_a", "qubit_b"};
  static const std::vector<std::string> none;
  if (kind == SystemKind::Jc) return jc;
  if (kind == SystemKind::Network) return network;
  return none;
}

std::optional<Propagation> parse_propagation(std::string_view text) {
  for (Propagation p : {Propagation::Default, Propagation::Adiabatic, Propagation::Paper,
                        Propagation::Eigen, Propagation::Stepped})
    if (text == to_string(p)) return p;
  return std::nullopt;
}

Propagation resolved(const Scenario& s) {
  if (s.propagation != Propagation::Default) return s.propagation;
  switch (s.system) {
    case SystemKind::Qubit: return Propagation::Adiabatic;
    case SystemKind::Jc: return Propagation::Paper;
    case SystemKind::Network: return Propagation::Eigen;
  }
  return Propagation::Default;
}

using Report = std::function<void(const std::string& key, const std::string& message)>;

// Calls f and turns module errors into a report against `key`.
template <class F>
void check_module(const Report& report, const std::string& key, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    report(key, e.what());
  }
}

void check_signal_nonnegative(const Report& report, const std::string& key, const DriveSignal& s,
                              const Grid& grid) {
  for (int i = 0; i < kValidationSamples; ++i) {
    const double t = grid.t0 + (grid.t1 - grid.t0) * i / (kValidationSamples - 1);
    if (s(t) < 0.0) {
      report(key, "must be >= 0 (negative at t=" + format_double(t) + ")");
      return;
    }
  }
}

void validate_impl(const Scenario& s, const Report& report) {
  if (s.name.empty()) report("name", "must not be empty");

  const Grid& g = s.grid;
  if (!std::isfinite(g.t0) || !std::isfinite(g.t1)) report("grid", "t0 and t1 must be finite");
  if (!(g.t1 > g.t0)) report("grid.t1", "must exceed t0");
  if (g.samples < 2) report("grid.samples", "must be >= 2");
  if (s.dt < 0.0 || !std::isfinite(s.dt)) report("dt", "must be >= 0");

  switch (s.operation) {
    case Operation::Fig3:
      if (s.system != SystemKind::Jc) report("system.kind", "fig3 needs a jc system");
      break;
    case Operation::Protocol:
      if (s.system != SystemKind::Network) report("system.kind", "protocol needs a network system");
      if (s.shots < 1) report("shots", "must be >= 1");
      break;
    case Operation::Entropy:
      if (s.system == SystemKind::Qubit)
        report("system.kind", "entropy needs a composite (jc or network) system");
      break;
    default:
      break;
  }

  if (s.propagation != Propagation::Default) {
    const Propagation p = s.propagation;
    const bool ok = p == Propagation::Stepped ||
                    (s.system == SystemKind::Qubit && p == Propagation::Adiabatic) ||
                    (s.system == SystemKind::Jc && p == Propagation::Paper) ||
                    (s.system == SystemKind::Network && p == Propagation::Eigen);
    if (!ok)
      report("propagation", std::string("'") + to_string(p) + "' does not apply to a " +
                                to_string(s.system) + " system");
  }

  const int dim = s.dimension();
  switch (s.initial.kind) {
    case InitialState::Kind::Index:
      if (s.initial.index < 0 || s.initial.index >= dim)
        report("initial.index", "must be in [0, " + std::to_string(dim - 1) + "]");
      break;
    case InitialState::Kind::Eigenstate:
      if (s.initial.index < 1 || s.initial.index > dim)
        report("initial.eigenstate", "must be in [1, " + std::to_string(dim) + "]");
      break;
    case InitialState::Kind::Amplitudes: {
      if (static_cast<int>(s.initial.amplitudes.size()) != dim) {
        report("initial.amplitudes", "needs " + std::to_string(dim) + " entries");
        break;
      }
      double norm2 = 0.0;
      for (Complex c : s.initial.amplitudes) norm2 += std::norm(c);
      if (!(std::abs(std::sqrt(norm2) - 1.0) <= kNormTolerance))
        report("initial.amplitudes", "must have unit norm (got " + format_double(std::sqrt(norm2)) + ")");
      break;
    }
  }

  for (int k : s.states)
    if (k < 1 || k > dim) report("states", "labels must be in [1, " + std::to_string(dim) + "]");
  const auto& names = partition_names(s.system);
  for (const std::string& p : s.partitions)
    if (std::find(names.begin(), names.end(), p) == names.end())
      report("partitions", "unknown partition '" + p + "'");

  const bool times_ok = g.t1 > g.t0 && std::isfinite(g.t0) && std::isfinite(g.t1);
  switch (s.system) {
    case SystemKind::Qubit:
      if (times_ok) check_signal_nonnegative(report, "system.ts_mag", s.qubit.ts_mag, g);
      break;
    case SystemKind::Jc:
      if (times_ok) check_module(report, "system", [&] { s.jc.build().validate(g.t0, g.t1); });
      if (s.jc.e_e.has_value() == s.jc.detuning.has_value())
        report("system", "give exactly one of e_e and detuning");
      break;
    case SystemKind::Network: {
      const NetworkConfig& n = s.network;
      if (!(n.e_g > 0.0)) report("system.e_g", "must be > 0");
      if (!(n.signal_speed > 0.0)) report("system.signal_speed", "must be > 0");
      if (n.waveguide_length < 0.0) report("system.waveguide_length", "must be >= 0");
      if (n.cavity && !((*n.cavity)[1] > (*n.cavity)[0]))
        report("system.cavity", "needs E_phi2 > E_phi1");
      // Everything except stepped evolution from a given vector needs the analytic eigensystem.
      bool analytic = true;
      if (s.operation == Operation::Evolve)
        analytic = resolved(s) == Propagation::Eigen || s.initial.kind == InitialState::Kind::Eigenstate;
      if (s.operation == Operation::Protocol) analytic = s.prepared != Prepared::Initial;
      if (analytic && n.e_g > 0.0)
        check_module(report, "system", [&] { simplified_energy_unit(n.build(), g.t0); });
      break;
    }
  }
}

// ---------------------------------------------------------------- parsing

struct Diagnostic {
  int line;
  int column;
  std::string message;
};

struct Invalid {
  Diagnostic d;
};

Diagnostic at(const YAML::Mark& m, std::string message) {
  return {m.line + 1, m.column + 1, std::move(message)};
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& message) {
  throw Invalid{at(n.Mark(), message)};
}

std::string message_of(const ParseError& e) {
  const std::string w = e.what();
  const auto pos = w.find(": ");
  return pos == std::string::npos ? w : w.substr(pos + 2);
}

// Key -> node map of a YAML mapping, rejecting duplicates and unknown keys.
class Fields {
 public:
  Fields(const YAML::Node& node, std::string where, std::initializer_list<const char*> allowed)
      : node_(node), where_(std::move(where)) {
    if (!node.IsMap()) fail(node, where_ + " must be a mapping");
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (!it->first.IsScalar()) fail(it->first, "keys must be scalars");
      const std::string key = it->first.Scalar();
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
          allowed.end())
        fail(it->first, "unknown key '" + key + "' in " + where_);
      if (!entries_.emplace(key, std::make_pair(it->first, it->second)).second)
        fail(it->first, "duplicate key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const YAML::Node& get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(node_, "missing key '" + key + "' in " + where_);
    return it->second.second;
  }

  const YAML::Node& key_node(const std::string& key) const { return entries_.at(key).first; }
  const YAML::Node& node() const { return node_; }

 private:
  YAML::Node node_;
  std::string where_;
  std::map<std::string, std::pair<YAML::Node, YAML::Node>> entries_;
};

const std::string& scalar(const YAML::Node& n) {
  if (!n.IsScalar()) fail(n, "expected a scalar");
  return n.Scalar();
}

double read_double(const YAML::Node& n) {
  std::string_view text = scalar(n);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    fail(n, "expected a number, got '" + n.Scalar() + "'");
  if (!std::isfinite(v)) fail(n, "number must be finite");
  return v;
}

template <class Int>
Int read_integer(const YAML::Node& n) {
  const std::string& text = scalar(n);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    fail(n, "expected an integer, got '" + text + "'");
  return v;
}

DriveSignal read_signal(const YAML::Node& n) {
  const std::string& text = scalar(n);
  try {
    return DriveSignal::parse(text);
  } catch (const ParseError& e) {
    const YAML::Mark m = n.Mark();
    // Plain scalars start at the mark; quoted ones one column later.
    const int quote = (n.Tag() == "!") ? 1 : 0;
    throw Invalid{{m.line + 1, m.column + quote + e.column(), message_of(e)}};
  }
}

Complex read_complex(const YAML::Node& n) {
  if (n.IsScalar()) return {read_double(n), 0.0};
  if (n.IsSequence() && n.size() == 2) return {read_double(n[0]), read_double(n[1])};
  fail(n, "amplitude must be a number or [re, im]");
}

QubitParams read_qubit(const Fields& f) {
  QubitParams p;
  p.ep1 = read_signal(f.get("ep1"));
  p.ep2 = read_signal(f.get("ep2"));
  p.ts_mag = read_signal(f.get("ts_mag"));
  p.ts_phase = f.has("ts_phase") ? read_signal(f.get("ts_phase")) : DriveSignal{};
  return p;
}

void read_system(const YAML::Node& node, Scenario& s) {
  if (!node.IsMap()) fail(node, "system must be a mapping");
  const YAML::Node kind_node = node["kind"];
  if (!kind_node) fail(node, "missing key 'kind' in system");
  const std::string kind = scalar(kind_node);
  if (kind == "qubit") {
    s.system = SystemKind::Qubit;
    const Fields f(node, "qubit system", {"kind", "ep1", "ep2", "ts_mag", "ts_phase"});
    s.qubit = read_qubit(f);
  } else if (kind == "jc") {
    s.system = SystemKind::Jc;
    const Fields f(node, "jc system",
                   {"kind", "e_g", "e_e", "detuning", "e_phi1", "e_phi2", "g", "g_phase"});
    JcConfig& c = s.jc;
    c.e_g = read_signal(f.get("e_g"));
    if (f.has("e_e")) c.e_e = read_signal(f.get("e_e"));
    if (f.has("detuning")) c.detuning = read_signal(f.get("detuning"));
    if (!f.has("e_e") && !f.has("detuning")) fail(node, "jc system needs 'e_e' or 'detuning'");
    if (f.has("e_e") && f.has("detuning"))
      fail(f.key_node("detuning"), "give exactly one of 'e_e' and 'detuning'");
    c.e_phi1 = read_double(f.get("e_phi1"));
    c.e_phi2 = read_double(f.get("e_phi2"));
    c.g = read_signal(f.get("g"));
    if (f.has("g_phase")) c.g_phase = read_double(f.get("g_phase"));
  } else if (kind == "network") {
    s.system = SystemKind::Network;
    const Fields f(node, "network system",
                   {"kind", "form", "e_g", "g1", "g2", "d1", "d2", "qubit_a", "qubit_b", "cavity",
                    "f1", "waveguide_length", "signal_speed"});
    NetworkConfig& c = s.network;
    if (f.has("form")) {
      const std::string form = scalar(f.get("form"));
      if (form == "simplified")
        c.form = NetworkForm::Simplified;
      else if (form == "general")
        c.form = NetworkForm::General;
      else
        fail(f.get("form"), "form must be 'simplified' or 'general'");
    }
    c.e_g = read_double(f.get("e_g"));
    c.g1 = read_double(f.get("g1"));
    c.g2 = read_double(f.get("g2"));
    if (f.has("d1")) c.d1 = read_signal(f.get("d1"));
    if (f.has("d2")) c.d2 = read_signal(f.get("d2"));
    for (const char* q : {"qubit_a", "qubit_b"}) {
      if (!f.has(q)) continue;
      const Fields qf(f.get(q), q, {"ep1", "ep2", "ts_mag", "ts_phase"});
      (std::string(q) == "qubit_a" ? c.qubit_a : c.qubit_b) = read_qubit(qf);
    }
    if (f.has("cavity")) {
      const YAML::Node& cav = f.get("cavity");
      if (!cav.IsSequence() || cav.size() != 2) fail(cav, "cavity must be [e_phi1, e_phi2]");
      c.cavity = std::array<double, 2>{read_double(cav[0]), read_double(cav[1])};
    }
    if (f.has("f1")) c.f1 = read_signal(f.get("f1"));
    if (f.has("waveguide_length")) c.waveguide_length = read_double(f.get("waveguide_length"));
    if (f.has("signal_speed")) c.signal_speed = read_double(f.get("signal_speed"));
  } else {
    fail(kind_node, "unknown system kind '" + kind + "' (qubit, jc, network)");
  }
}

using MarkMap = std::map<std::string, YAML::Mark>;

Scenario read_scenario(const YAML::Node& node, MarkMap& marks) {
  const Fields f(node, "scenario",
                 {"name", "operation", "system", "grid", "initial", "propagation", "dt", "prepared",
                  "shots", "seed", "states", "partitions", "output"});
  Scenario s;
  s.name = scalar(f.get("name"));
  marks["name"] = f.get("name").Mark();

  const YAML::Node& op = f.get("operation");
  const auto parsed_op = parse_operation(scalar(op));
  if (!parsed_op) fail(op, "unknown operation '" + op.Scalar() + "'");
  s.operation = *parsed_op;

  read_system(f.get("system"), s);
  marks["system"] = f.get("system").Mark();
  if (f.get("system").IsMap())
    for (auto it = f.get("system").begin(); it != f.get("system").end(); ++it)
      marks["system." + it->first.Scalar()] = it->second.Mark();

  if (f.has("grid")) {
    const Fields g(f.get("grid"), "grid", {"t0", "t1", "samples"});
    marks["grid"] = g.node().Mark();
    if (g.has("t0")) s.grid.t0 = read_double(g.get("t0"));
    if (g.has("t1")) s.grid.t1 = read_double(g.get("t1"));
    if (g.has("samples")) s.grid.samples = read_integer<int>(g.get("samples"));
    for (const char* k : {"t0", "t1", "samples"})
      if (g.has(k)) marks[std::string("grid.") + k] = g.get(k).Mark();
  }

  if (f.has("initial")) {
    const Fields i(f.get("initial"), "initial", {"index", "eigenstate", "amplitudes"});
    marks["initial"] = i.node().Mark();
    const int given = i.has("index") + i.has("eigenstate") + i.has("amplitudes");
    if (given != 1) fail(i.node(), "initial needs exactly one of index, eigenstate, amplitudes");
    if (i.has("index")) {
      s.initial.kind = InitialState::Kind::Index;
      s.initial.index = read_integer<int>(i.get("index"));
      marks["initial.index"] = i.get("index").Mark();
    } else if (i.has("eigenstate")) {
      s.initial.kind = InitialState::Kind::Eigenstate;
      s.initial.index = read_integer<int>(i.get("eigenstate"));
      marks["initial.eigenstate"] = i.get("eigenstate").Mark();
    } else {
      const YAML::Node& a = i.get("amplitudes");
      if (!a.IsSequence()) fail(a, "amplitudes must be a list");
      s.initial.kind = InitialState::Kind::Amplitudes;
      for (const auto& c : a) s.initial.amplitudes.push_back(read_complex(c));
      marks["initial.amplitudes"] = a.Mark();
    }
  }

  if (f.has("propagation")) {
    const YAML::Node& p = f.get("propagation");
    const auto parsed = parse_propagation(scalar(p));
    if (!parsed) fail(p, "unknown propagation '" + p.Scalar() + "'");
    s.propagation = *parsed;
  }
  if (f.has("dt")) s.dt = read_double(f.get("dt"));
  if (f.has("prepared")) {
    const YAML::Node& p = f.get("prepared");
    const std::string& v = scalar(p);
    if (v == "E2")
      s.prepared = Prepared::E2;
    else if (v == "E3")
      s.prepared = Prepared::E3;
    else if (v == "initial")
      s.prepared = Prepared::Initial;
    else
      fail(p, "prepared must be E2, E3 or initial");
  }
  if (f.has("shots")) s.shots = read_integer<std::int64_t>(f.get("shots"));
  if (f.has("seed")) s.seed = read_integer<std::uint64_t>(f.get("seed"));
  if (f.has("states")) {
    const YAML::Node& st = f.get("states");
    if (!st.IsSequence()) fail(st, "states must be a list");
    for (const auto& k : st) s.states.push_back(read_integer<int>(k));
  }
  if (f.has("partitions")) {
    const YAML::Node& pt = f.get("partitions");
    if (!pt.IsSequence()) fail(pt, "partitions must be a list");
    for (const auto& k : pt) s.partitions.push_back(scalar(k));
  }
  if (f.has("output")) s.output = scalar(f.get("output"));

  for (const char* k : {"propagation", "dt", "prepared", "shots", "seed", "states", "partitions",
                        "output"})
    if (f.has(k)) marks[k] = f.get(k).Mark();
  return s;
}

std::string join(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const Diagnostic& d : diags) {
    if (!out.empty()) out += '\n';
    out += "line " + std::to_string(d.line) + ", column " + std::to_string(d.column) + ": " +
           d.message;
  }
  return out;
}

}  // namespace

std::vector<Scenario> parse_scenarios(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  if (!root.IsSequence()) {
    const YAML::Mark m = root.IsDefined() && !root.IsNull() ? root.Mark() : YAML::Mark();
    throw ParseError(m.line + 1, m.column + 1, "top level must be a list of scenarios");
  }

  std::vector<Scenario> out;
  std::vector<Diagnostic> diags;
  std::map<std::string, YAML::Mark> seen;
  for (const auto& node : root) {
    MarkMap marks;
    Scenario s;
    try {
      s = read_scenario(node, marks);
    } catch (const Invalid& e) {
      diags.push_back(e.d);
      continue;
    } catch (const YAML::Exception& e) {
      diags.push_back(at(e.mark, e.msg));
      continue;
    }
    const YAML::Mark name_mark = marks.count("name") ? marks["name"] : node.Mark();
    if (!seen.emplace(s.name, name_mark).second) {
      const YAML::Mark first = seen[s.name];
      diags.push_back(at(name_mark, "duplicate scenario name '" + s.name + "' (first at line " +
                                        std::to_string(first.line + 1) + ")"));
    }
    validate_impl(s, [&](const std::string& key, const std::string& message) {
      // Most specific recorded key: "grid.t1", then "grid", then the block.
      std::string k = key;
      YAML::Mark m = node.Mark();
      while (true) {
        if (const auto it = marks.find(k); it != marks.end()) {
          m = it->second;
          break;
        }
        const auto dot = k.rfind('.');
        if (dot == std::string::npos) break;
        k.resize(dot);
      }
      diags.push_back(at(m, "scenario '" + s.name + "': " + key + ": " + message));
    });
    out.push_back(std::move(s));
  }
  if (!diags.empty()) throw Error(ErrorCode::ValidationError, join(diags));
  if (out.empty()) throw Error(ErrorCode::ValidationError, "no scenarios in config");
  return out;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_scenarios(buf.str());
}

void validate(const Scenario& s) {
  std::string problems;
  validate_impl(s, [&](const std::string& key, const std::string& message) {
    if (!problems.empty()) problems += '\n';
    problems += "scenario '" + s.name + "': " + key + ": " + message;
  });
  if (!problems.empty()) throw Error(ErrorCode::ValidationError, problems);
}

// ---------------------------------------------------------------- serialization

namespace {

void emit_signal(YAML::Emitter& out, const DriveSignal& s) {
  if (s.terms().size() == 1 && s.kind() == DriveSignal::Kind::Constant)
    out << format_double(s.terms().front().p0);
  else
    out << YAML::DoubleQuoted << s.to_string();
}

void emit_number(YAML::Emitter& out, double v) { out << format_double(v); }

void emit_qubit_fields(YAML::Emitter& out, const QubitParams& p) {
  out << YAML::Key << "ep1" << YAML::Value;
  emit_signal(out, p.ep1);
  out << YAML::Key << "ep2" << YAML::Value;
  emit_signal(out, p.ep2);
  out << YAML::Key << "ts_mag" << YAML::Value;
  emit_signal(out, p.ts_mag);
  if (p.ts_phase != DriveSignal{}) {
    out << YAML::Key << "ts_phase" << YAML::Value;
    emit_signal(out, p.ts_phase);
  }
}

void emit_system(YAML::Emitter& out, const Scenario& s) {
  out << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(s.system);
  switch (s.system) {
    case SystemKind::Qubit:
      emit_qubit_fields(out, s.qubit);
      break;
    case SystemKind::Jc: {
      const JcConfig& c = s.jc;
      out << YAML::Key << "e_g" << YAML::Value;
      emit_signal(out, c.e_g);
      if (c.e_e) {
        out << YAML::Key << "e_e" << YAML::Value;
        emit_signal(out, *c.e_e);
      }
      if (c.detuning) {
        out << YAML::Key << "detuning" << YAML::Value;
        emit_signal(out, *c.detuning);
      }
      out << YAML::Key << "e_phi1" << YAML::Value;
      emit_number(out, c.e_phi1);
      out << YAML::Key << "e_phi2" << YAML::Value;
      emit_number(out, c.e_phi2);
      out << YAML::Key << "g" << YAML::Value;
      emit_signal(out, c.g);
      if (c.g_phase != 0.0) {
        out << YAML::Key << "g_phase" << YAML::Value;
        emit_number(out, c.g_phase);
      }
      break;
    }
    case SystemKind::Network: {
      const NetworkConfig& c = s.network;
      const NetworkConfig def;
      if (c.form != def.form)
        out << YAML::Key << "form" << YAML::Value
            << (c.form == NetworkForm::General ? "general" : "simplified");
      out << YAML::Key << "e_g" << YAML::Value;
      emit_number(out, c.e_g);
      out << YAML::Key << "g1" << YAML::Value;
      emit_number(out, c.g1);
      out << YAML::Key << "g2" << YAML::Value;
      emit_number(out, c.g2);
      if (c.d1 != def.d1) {
        out << YAML::Key << "d1" << YAML::Value;
        emit_signal(out, c.d1);
      }
      if (c.d2 != def.d2) {
        out << YAML::Key << "d2" << YAML::Value;
        emit_signal(out, c.d2);
      }
      if (c.qubit_a) {
        out << YAML::Key << "qubit_a" << YAML::Value << YAML::BeginMap;
        emit_qubit_fields(out, *c.qubit_a);
        out << YAML::EndMap;
      }
      if (c.qubit_b) {
        out << YAML::Key << "qubit_b" << YAML::Value << YAML::BeginMap;
        emit_qubit_fields(out, *c.qubit_b);
        out << YAML::EndMap;
      }
      if (c.cavity) {
        out << YAML::Key << "cavity" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        emit_number(out, (*c.cavity)[0]);
        emit_number(out, (*c.cavity)[1]);
        out << YAML::EndSeq;
      }
      if (c.f1 != def.f1) {
        out << YAML::Key << "f1" << YAML::Value;
        emit_signal(out, c.f1);
      }
      if (c.waveguide_length != def.waveguide_length) {
        out << YAML::Key << "waveguide_length" << YAML::Value;
        emit_number(out, c.waveguide_length);
      }
      if (c.signal_speed != def.signal_speed) {
        out << YAML::Key << "signal_speed" << YAML::Value;
        emit_number(out, c.signal_speed);
      }
      break;
    }
  }
  out << YAML::EndMap;
}

}  // namespace

std::string serialize_scenarios(const std::vector<Scenario>& scenarios) {
  const Scenario def;
  YAML::Emitter out;
  out << YAML::BeginSeq;
  for (const Scenario& s : scenarios) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << s.name;
    out << YAML::Key << "operation" << YAML::Value << to_string(s.operation);
    emit_system(out, s);
    out << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "t0" << YAML::Value;
    emit_number(out, s.grid.t0);
    out << YAML::Key << "t1" << YAML::Value;
    emit_number(out, s.grid.t1);
    out << YAML::Key << "samples" << YAML::Value << s.grid.samples << YAML::EndMap;
    if (s.initial != def.initial) {
      out << YAML::Key << "initial" << YAML::Value << YAML::Flow << YAML::BeginMap;
      switch (s.initial.kind) {
        case InitialState::Kind::Index:
          out << YAML::Key << "index" << YAML::Value << s.initial.index;
          break;
        case InitialState::Kind::Eigenstate:
          out << YAML::Key << "eigenstate" << YAML::Value << s.initial.index;
          break;
        case InitialState::Kind::Amplitudes:
          out << YAML::Key << "amplitudes" << YAML::Value << YAML::BeginSeq;
          for (Complex c : s.initial.amplitudes) {
            out << YAML::BeginSeq;
            emit_number(out, c.real());
            emit_number(out, c.imag());
            out << YAML::EndSeq;
          }
          out << YAML::EndSeq;
          break;
      }
      out << YAML::EndMap;
    }
    if (s.propagation != def.propagation)
      out << YAML::Key << "propagation" << YAML::Value << to_string(s.propagation);
    if (s.dt != def.dt) {
      out << YAML::Key << "dt" << YAML::Value;
      emit_number(out, s.dt);
    }
    if (s.prepared != def.prepared)
      out << YAML::Key << "prepared" << YAML::Value
          << (s.prepared == Prepared::E3 ? "E3" : "initial");
    if (s.shots != def.shots) out << YAML::Key << "shots" << YAML::Value << s.shots;
    if (s.seed != def.seed) out << YAML::Key << "seed" << YAML::Value << s.seed;
    if (!s.states.empty()) out << YAML::Key << "states" << YAML::Value << YAML::Flow << s.states;
    if (!s.partitions.empty())
      out << YAML::Key << "partitions" << YAML::Value << YAML::Flow << s.partitions;
    if (!s.output.empty()) out << YAML::Key << "output" << YAML::Value << s.output;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------- running

std::vector<std::string> columns_for(Operation op, SystemKind system) {
  switch (op) {
    case Operation::Eig:
      return {"scenario", "t", "index", "energy_analytic", "energy_numeric", "residual"};
    case Operation::Fig3:
      return {"scenario", "t", "coefficient"};
    case Operation::Protocol:
      return {"shot", "outcome", "p_outcome", "q2_ground_prob"};
    case Operation::Entropy:
      return {"scenario", "state", "partition", "entropy"};
    case Operation::Evolve:
      switch (system) {
        case SystemKind::Qubit:
          return {"scenario", "t", "p_x1", "p_x2", "p_ground", "p_excited", "norm"};
        case SystemKind::Jc:
          return {"scenario", "t", "p_qubit_excited", "p_cavity_excited", "norm"};
        case SystemKind::Network: {
          std::vector<std::string> c{"scenario", "t"};
          for (int k = 1; k <= 8; ++k) c.push_back("p_" + std::to_string(k));
          c.push_back("norm");
          return c;
        }
      }
  }
  return {};
}

namespace {

struct Eigenpairs {
  std::vector<double> values;
  std::vector<ComplexVector> vectors;
};

Eigenpairs analytic_eigenpairs(const Scenario& s, double t) {
  Eigenpairs e;
  switch (s.system) {
    case SystemKind::Qubit: {
      const QubitEigen q = qubit_eigensystem(s.qubit, t);
      e.values = {q.e1, q.e2};
      e.vectors = {q.v1.amplitudes(), q.v2.amplitudes()};
      break;
    }
    case SystemKind::Jc: {
      const JcEigen j = jc_eigensystem(s.jc.build(), t);
      e.values.assign(j.values.begin(), j.values.end());
      e.vectors.assign(j.vectors.begin(), j.vectors.end());
      break;
    }
    case SystemKind::Network: {
      const NetworkEigen n = network_eigensystem(s.network.build(), t);
      e.values.assign(n.values.begin(), n.values.end());
      e.vectors.assign(n.vectors.begin(), n.vectors.end());
      break;
    }
  }
  return e;
}

ComplexMatrix hamiltonian(const Scenario& s, double t) {
  switch (s.system) {
    case SystemKind::Qubit: return build_qubit_hamiltonian(s.qubit, t);
    case SystemKind::Jc: return build_jc_hamiltonian(s.jc.build(), t);
    case SystemKind::Network: return build_network_hamiltonian(s.network.build(), t, s.network.form);
  }
  return {};
}

BasisLabel basis_of(SystemKind kind) {
  switch (kind) {
    case SystemKind::Qubit: return BasisLabel::QubitPosition;
    case SystemKind::Jc: return BasisLabel::JcEnergy;
    case SystemKind::Network: return BasisLabel::NetworkEnergy;
  }
  return BasisLabel::Generic;
}

ComplexVector initial_vector(const Scenario& s) {
  const int dim = s.dimension();
  switch (s.initial.kind) {
    case InitialState::Kind::Index:
      return ComplexVector::Unit(dim, s.initial.index);
    case InitialState::Kind::Eigenstate:
      return analytic_eigenpairs(s, s.grid.t0).vectors.at(static_cast<std::size_t>(s.initial.index - 1));
    case InitialState::Kind::Amplitudes: {
      ComplexVector v(dim);
      for (int i = 0; i < dim; ++i) v(i) = s.initial.amplitudes[static_cast<std::size_t>(i)];
      return v;
    }
  }
  return {};
}

RunRecord run_eig(const Scenario& s) {
  RunRecord r;
  for (int i = 0; i < s.grid.samples; ++i) {
    const double t = s.grid.at(i);
    const ComplexMatrix h = hamiltonian(s, t);
    const Eigenpairs a = analytic_eigenpairs(s, t);
    const EigenSystem numeric = hermitian_eig(h);
    std::vector<std::size_t> order(a.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a.values[x] < a.values[y]; });
    std::vector<double> paired(a.values.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank)
      paired[order[rank]] = numeric.values(static_cast<Eigen::Index>(rank));
    for (std::size_t k = 0; k < a.values.size(); ++k) {
      const double residual = (h * a.vectors[k] - a.values[k] * a.vectors[k]).norm();
      r.rows.push_back({s.name, t, static_cast<std::int64_t>(k + 1), a.values[k], paired[k], residual});
    }
  }
  return r;
}

// Per-sample states for evolve; stepped modes advance sample to sample.
std::vector<ComplexVector> evolve_states(const Scenario& s) {
  const ComplexVector psi0 = initial_vector(s);
  const Propagation mode = resolved(s);
  std::vector<ComplexVector> out;
  out.reserve(static_cast<std::size_t>(s.grid.samples));
  out.push_back(psi0);
  const double t0 = s.grid.t0;

  if (mode == Propagation::Stepped) {
    for (int i = 1; i < s.grid.samples; ++i) {
      const double a = s.grid.at(i - 1);
      const double b = s.grid.at(i);
      ComplexMatrix u;
      switch (s.system) {
        case SystemKind::Qubit:
          u = qubit_propagator(s.qubit, a, b, QubitPropagation::Stepped,
                               s.dt > 0.0 ? s.dt : default_qubit_dt(s.grid.t0, s.grid.t1));
          break;
        case SystemKind::Jc:
          u = jc_propagator(s.jc.build(), a, b, JcPropagation::Stepped, s.dt);
          break;
        case SystemKind::Network:
          u = network_propagator(s.network.build(), a, b, s.network.form, s.dt > 0.0 ? s.dt : 1e-3);
          break;
      }
      out.push_back(u * out.back());
    }
    return out;
  }

  switch (s.system) {
    case SystemKind::Qubit:
      for (int i = 1; i < s.grid.samples; ++i)
        out.push_back(qubit_propagator(s.qubit, t0, s.grid.at(i), QubitPropagation::Adiabatic) * psi0);
      break;
    case SystemKind::Jc: {
      const CoupledSystem sys = s.jc.build();
      for (int i = 1; i < s.grid.samples; ++i)
        out.push_back(jc_propagator(sys, t0, s.grid.at(i), JcPropagation::Paper) * psi0);
      break;
    }
    case SystemKind::Network: {
      const NetworkSystem sys = s.network.build();
      const NetworkEigen e0 = network_eigensystem(sys, t0);
      std::array<Complex, 8> coeffs{};
      for (int k = 0; k < 8; ++k) coeffs[static_cast<std::size_t>(k)] = e0.vectors[static_cast<std::size_t>(k)].dot(psi0);
      for (int i = 1; i < s.grid.samples; ++i)
        out.push_back(network_evolve(sys, coeffs, t0, s.grid.at(i)).amplitudes());
      break;
    }
  }
  return out;
}

RunRecord run_evolve(const Scenario& s) {
  RunRecord r;
  const std::vector<ComplexVector> states = evolve_states(s);
  for (int i = 0; i < s.grid.samples; ++i) {
    const double t = s.grid.at(i);
    const ComplexVector& psi = states[static_cast<std::size_t>(i)];
    const double norm = psi.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9)
      throw Error(ErrorCode::NotNormalized,
                  "state norm drifted to " + format_double(norm) + " at t=" + format_double(t));
    std::vector<Cell> row{s.name, t};
    switch (s.system) {
      case SystemKind::Qubit: {
        const StateVector sv = StateVector::normalized(psi, BasisLabel::QubitPosition);
        const Occupancy energy = occupancy(sv, QubitBasis::Energy, s.qubit, t);
        row.insert(row.end(), {std::norm(psi(0)), std::norm(psi(1)), energy.prob0, energy.prob1});
        break;
      }
      case SystemKind::Jc:
        row.insert(row.end(), {std::norm(psi(1)) + std::norm(psi(3)), std::norm(psi(2)) + std::norm(psi(3))});
        break;
      case SystemKind::Network:
        for (int k = 0; k < 8; ++k) row.push_back(std::norm(psi(k)));
        break;
    }
    row.push_back(norm);
    r.rows.push_back(std::move(row));
  }
  return r;
}

RunRecord run_fig3(const Scenario& s) {
  RunRecord r;
  const CoupledSystem sys = s.jc.build();
  sys.validate(s.grid.t0, s.grid.t1);
  for (int i = 0; i < s.grid.samples; ++i) {
    const double t = s.grid.at(i);
    r.rows.push_back({s.name, t, energy_transfer_coefficient(sys, s.grid.t0, t)});
  }
  return r;
}

RunRecord run_protocol(const Scenario& s, unsigned jobs) {
  const NetworkSystem sys = s.network.build();
  ComplexVector psi;
  if (s.prepared == Prepared::Initial) {
    psi = initial_vector(s);
  } else {
    const NetworkEigen e = network_eigensystem(sys, s.grid.t0);
    psi = e.vectors[s.prepared == Prepared::E2 ? 1 : 2];
  }
  const ProtocolStats stats =
      communication_protocol(StateVector(psi, BasisLabel::NetworkEnergy),
                             static_cast<std::size_t>(s.shots), s.seed, jobs);
  RunRecord r;
  r.rows.reserve(stats.shots.size());
  for (const ShotRecord& shot : stats.shots)
    r.rows.push_back({static_cast<std::int64_t>(shot.shot), std::string(shot.qubit1_excited ? "e1" : "g1"),
                      shot.p_outcome, shot.q2_ground_prob});
  return r;
}

RunRecord run_entropy(const Scenario& s) {
  const Eigenpairs e = analytic_eigenpairs(s, s.grid.t0);
  const auto& names = partition_names(s.system);
  const std::vector<int> dims(names.size(), 2);
  std::vector<int> states = s.states;
  if (states.empty()) {
    states.resize(e.values.size());
    std::iota(states.begin(), states.end(), 1);
  }
  const std::vector<std::string> partitions = s.partitions.empty() ? names : s.partitions;
  RunRecord r;
  for (int k : states) {
    const StateVector psi(e.vectors.at(static_cast<std::size_t>(k - 1)), basis_of(s.system));
    for (const std::string& p : partitions) {
      const int keep = static_cast<int>(std::find(names.begin(), names.end(), p) - names.begin());
      r.rows.push_back({s.name, "E" + std::to_string(k), p, von_neumann_entropy(psi, dims, keep)});
    }
  }
  return r;
}

}  // namespace

RunRecord run_experiment(const Scenario& s, unsigned jobs) {
  validate(s);
  const auto start = std::chrono::steady_clock::now();
  RunRecord r;
  switch (s.operation) {
    case Operation::Eig: r = run_eig(s); break;
    case Operation::Evolve: r = run_evolve(s); break;
    case Operation::Fig3: r = run_fig3(s); break;
    case Operation::Protocol: r = run_protocol(s, jobs); break;
    case Operation::Entropy: r = run_entropy(s); break;
  }
  r.scenario = s.name;
  r.columns = columns_for(s.operation, s.system);
  r.samples = s.operation == Operation::Protocol ? static_cast<std::size_t>(s.shots)
                                                 : static_cast<std::size_t>(s.grid.samples);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<RunRecord> run_experiments(const std::vector<Scenario>& scenarios, unsigned jobs) {
  const std::size_t n = scenarios.size();
  std::vector<RunRecord> records(n);
  std::vector<std::exception_ptr> failures(n);
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  // A lone scenario gets the whole thread budget for its shots.
  const unsigned inner = n == 1 ? std::max(1u, jobs) : 1u;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        records[i] = run_experiment(scenarios[i], inner);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return records;
}

}  // namespace qnetsim
