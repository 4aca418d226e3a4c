// SPDX-License-Identifier: Apache-2.0
#include "circqft/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "circqft/error.hpp"

namespace circqft {

using std::numbers::pi;
using json = nlohmann::ordered_json;

namespace {

constexpr double kTwoPi = 2 * pi;

struct KindName {
  ScenarioKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ScenarioKind::spectrum, "spectrum"},
    {ScenarioKind::gate_fidelity, "gate-fidelity"},
    {ScenarioKind::adiabatic_fidelity, "adiabatic-fidelity"},
    {ScenarioKind::entangle_sweep, "entangle-sweep"},
    {ScenarioKind::counter_driving, "counter-driving"},
    {ScenarioKind::ion_couplings, "ion-couplings"},
};

}  // namespace

const char* to_string(ScenarioKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "unknown";
}

ScenarioKind parse_kind(const std::string& name) {
  for (const auto& k : kKinds)
    if (name == k.name) return k.kind;
  std::string all;
  for (const auto& k : kKinds) all += std::string(all.empty() ? "" : ", ") + k.name;
  throw ConfigError("unknown scenario kind '" + name + "' (expected one of: " + all + ")");
}

const char* to_string(Scheme scheme) { return scheme == Scheme::offset ? "offset" : "rabi"; }

// ---------------------------------------------------------------------------
// Number formatting

std::string format_number(double v) {
  if (v == 0) v = 0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string format_roundtrip(double v) {
  if (v == 0) v = 0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_short(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Presets

Scenario offset_preset(ScenarioKind kind, const char* name, double J0, double J01, double d1, double d2,
                       double d3, double omega) {
  Scenario s;
  s.kind = kind;
  s.name = name;
  s.scheme = Scheme::offset;
  s.offset = {J0, J01, d1, d2, d3, omega, pi / 2};
  return s;
}

Scenario rabi_preset(ScenarioKind kind, const char* name, double J0, double J01, double ups,
                     double ups_p, double omega) {
  Scenario s;
  s.kind = kind;
  s.name = name;
  s.scheme = Scheme::rabi;
  s.rabi = {J0, J01, ups, ups_p, omega, pi / 4};
  return s;
}

Scenario with_sweep(Scenario s, const char* parameter, double from_khz, double to_khz) {
  s.has_sweep = true;
  s.sweep.parameter = parameter;
  s.sweep.from = kTwoPi * from_khz;
  s.sweep.to = kTwoPi * to_khz;
  s.sweep.points = 61;
  s.sweep.gate_time = 0.31;
  return s;
}

std::vector<Preset> build_presets() {
  using K = ScenarioKind;
  const double t = kTwoPi;
  std::vector<Preset> p;
  p.push_back({"fig3", "eigenfrequencies under the detuning-controlled ramp",
               offset_preset(K::spectrum, "fig3", t * 1, t * 2, t * 120, t * 60, t * 30, t * 0.15)});
  p.push_back({"fig4", "QFT gate fidelity under the detuning-controlled ramp",
               offset_preset(K::gate_fidelity, "fig4", t * 1, t * 1, t * 20, t * 10, t * 6, t * 0.505)});
  p.push_back({"fig4-raw", "as fig4 with omega' read as 0.505 rad/ms instead of 2 pi x 0.505 kHz",
               offset_preset(K::gate_fidelity, "fig4-raw", t * 1, t * 1, t * 20, t * 10, t * 6, 0.505)});
  p.push_back({"fig5", "adiabatic fidelity under the drive-controlled ramp",
               rabi_preset(K::adiabatic_fidelity, "fig5", t * 2.1, t * 2.4, t * 1.9, t * 2.0, t * 0.3)});

  const Scenario fig6 = rabi_preset(K::entangle_sweep, "fig6a", t * 2.3, t * 2.1, t * 1.8, t * 1.7, t * 0.5);
  p.push_back({"fig6a", "entangled-state fidelity at t = 0.31 ms versus omega'",
               with_sweep(fig6, "omega", 0.1, 1.5)});
  Scenario b = fig6;
  b.name = "fig6b";
  b.rabi.omega = t * 0.5;
  p.push_back({"fig6b", "entangled-state fidelity at t = 0.31 ms versus J01", with_sweep(b, "J01", 0.5, 4.0)});
  Scenario c = fig6;
  c.name = "fig6c";
  c.rabi.omega = t * 0.605;
  p.push_back({"fig6c", "entangled-state fidelity at t = 0.31 ms versus J0", with_sweep(c, "J0", 0.5, 4.0)});

  p.push_back({"fig7-blue", "counter-driving rate",
               rabi_preset(K::counter_driving, "fig7-blue", t * 1.0, t * 1.5, t * 0.5, t * 2.0, t * 0.3)});
  p.push_back({"fig7-cyan", "counter-driving rate",
               rabi_preset(K::counter_driving, "fig7-cyan", t * 1.3, t * 1.9, t * 0.5, t * 2.0, t * 0.3)});
  p.push_back({"fig7-red", "counter-driving rate",
               rabi_preset(K::counter_driving, "fig7-red", t * 1.7, t * 2.0, t * 0.5, t * 2.0, t * 0.3)});

  Scenario ion;
  ion.kind = K::ion_couplings;
  ion.name = "ion-demo";
  ion.has_ions = true;
  ion.modes.Omega = {t * 1000, t * 1100, t * 1250};
  ion.modes.eta = {{0.06, 0.04, 0.02}, {0.06, -0.04, 0.02}, {0.06, 0.0, -0.05}};
  ion.drive = {t * 1050, t * 150, t * 150, t * 150};
  p.push_back({"ion-demo", "effective couplings of a synthetic three-mode crystal", ion});
  return p;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = build_presets();
  return p;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  std::string all;
  for (const auto& p : presets()) all += std::string(all.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + name + "' (available: " + all + ")");
}

std::string describe_preset(const Preset& p) {
  const Scenario& s = p.scenario;
  std::ostringstream os;
  auto khz = [](double v) { return format_short(v / kTwoPi) + " kHz"; };
  os << p.name << "  [" << to_string(s.kind) << "]  " << p.summary << "\n";
  if (s.kind == ScenarioKind::ion_couplings) {
    os << "  modes Omega/2pi:";
    for (double w : s.modes.Omega) os << " " << khz(w);
    os << "\n";
    for (std::size_t i = 0; i < s.modes.eta.size(); ++i) {
      os << "  eta ion " << i + 1 << ":";
      for (double e : s.modes.eta[i]) os << " " << format_short(e);
      os << "\n";
    }
    os << "  nu/2pi = " << khz(s.drive.nu) << ", Omega_x/2pi = " << khz(s.drive.Omega_x)
       << ", Omega_z/2pi = " << khz(s.drive.Omega_z) << ", Omega_alpha/2pi = " << khz(s.drive.Omega_alpha)
       << "\n";
    return os.str();
  }
  if (s.scheme == Scheme::offset) {
    const auto& o = s.offset;
    os << "  J0/2pi = " << khz(o.J0) << ", J01/2pi = " << khz(o.J01) << ", Delta/2pi = (" << khz(o.Delta1)
       << ", " << khz(o.Delta2) << ", " << khz(o.Delta3) << "), omega'/2pi = " << khz(o.omega)
       << ", phi = " << format_short(o.phi) << " rad\n";
    os << "  t_max = " << format_short(o.t_max()) << " ms\n";
  } else {
    const auto& r = s.rabi;
    os << "  J0/2pi = " << khz(r.J0) << ", J01/2pi = " << khz(r.J01) << ", Upsilon0/2pi = " << khz(r.Upsilon0)
       << ", Upsilon0'/2pi = " << khz(r.Upsilon0p) << ", omega'/2pi = " << khz(r.omega)
       << ", phi = " << format_short(r.phi) << " rad\n";
    os << "  t_max = " << format_short(r.t_max()) << " ms\n";
  }
  if (s.has_sweep)
    os << "  sweep " << s.sweep.parameter << "/2pi from " << khz(s.sweep.from) << " to " << khz(s.sweep.to)
       << " (" << s.sweep.points << " points), evaluated at t = " << format_short(s.sweep.gate_time)
       << " ms (or t_max if shorter)\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Config text

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ConfigError(where + ": expected a number, got '" + t + "'");
  if (!std::isfinite(v)) throw ConfigError(where + ": value must be finite");
  return v;
}

std::uint64_t parse_uint(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ConfigError(where + ": expected a nonnegative integer, got '" + t + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  throw ConfigError(where + ": expected true or false, got '" + t + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, where));
  return out;
}

class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, const std::string& name)
      : name_(name), section_(sections.count(name) ? &sections[name] : nullptr) {}

  bool present() const { return section_ != nullptr; }

  const Entry* find(const std::string& key) {
    if (!section_) return nullptr;
    auto it = section_->find(key);
    if (it == section_->end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const Entry& need(const std::string& key) {
    const Entry* e = find(key);
    if (!e) throw ConfigError("missing key '" + key + "' in [" + name_ + "]");
    return *e;
  }

  std::string where(const Entry& e, const std::string& key) const {
    return "line " + std::to_string(e.line) + " (" + name_ + "." + key + ")";
  }

  double number(const std::string& key) {
    const Entry& e = need(key);
    return parse_double(e.value, where(e, key));
  }

  double number_or(const std::string& key, double fallback) {
    const Entry* e = find(key);
    return e ? parse_double(e->value, where(*e, key)) : fallback;
  }

  std::vector<double> list(const std::string& key) {
    const Entry& e = need(key);
    return parse_list(e.value, where(e, key));
  }

  void finish() const {
    if (!section_) return;
    for (const auto& [key, e] : *section_)
      if (!e.used)
        throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + key + "' in [" + name_ + "]");
  }

 private:
  std::string name_;
  Section* section_;
};

}  // namespace

Scenario parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw ConfigError("line " + std::to_string(line) + ": malformed section header");
      current = trim(l.substr(1, l.size() - 2));
      static const char* known[] = {"scenario", "schedule", "sweep", "ions"};
      if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return current == k; }))
        throw ConfigError("line " + std::to_string(line) + ": unknown section [" + current + "]");
      if (sections.count(current))
        throw ConfigError("line " + std::to_string(line) + ": duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    if (current.empty()) throw ConfigError("line " + std::to_string(line) + ": key outside any section");
    const std::string key = trim(l.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
    auto& sec = sections[current];
    if (sec.count(key)) throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    sec[key] = Entry{trim(l.substr(eq + 1)), line, false};
  }

  Scenario s;
  Reader sc(sections, "scenario");
  if (!sc.present()) throw ConfigError("missing section [scenario]");
  s.kind = parse_kind(trim(sc.need("kind").value));
  if (const Entry* e = sc.find("name")) s.name = e->value;
  if (const Entry* e = sc.find("samples")) s.samples = parse_uint(e->value, sc.where(*e, "samples"));
  if (const Entry* e = sc.find("with_cd")) s.with_cd = parse_bool(e->value, sc.where(*e, "with_cd"));
  if (const Entry* e = sc.find("seed")) s.seed = parse_uint(e->value, sc.where(*e, "seed"));
  sc.finish();

  Reader sch(sections, "schedule");
  if (sch.present()) {
    const std::string scheme = trim(sch.need("scheme").value);
    if (scheme == "offset") {
      s.scheme = Scheme::offset;
      s.offset.J0 = sch.number("J0");
      s.offset.J01 = sch.number("J01");
      s.offset.Delta1 = sch.number("Delta1");
      s.offset.Delta2 = sch.number("Delta2");
      s.offset.Delta3 = sch.number("Delta3");
      s.offset.omega = sch.number("omega");
      s.offset.phi = sch.number_or("phi", pi / 2);
    } else if (scheme == "rabi") {
      s.scheme = Scheme::rabi;
      s.rabi.J0 = sch.number("J0");
      s.rabi.J01 = sch.number("J01");
      s.rabi.Upsilon0 = sch.number("Upsilon0");
      s.rabi.Upsilon0p = sch.number("Upsilon0p");
      s.rabi.omega = sch.number("omega");
      s.rabi.phi = sch.number_or("phi", pi / 4);
    } else {
      throw ConfigError("unknown scheme '" + scheme + "' (expected offset or rabi)");
    }
    sch.finish();
  } else if (s.kind != ScenarioKind::ion_couplings) {
    throw ConfigError("missing section [schedule]");
  }

  Reader sw(sections, "sweep");
  if (sw.present()) {
    s.has_sweep = true;
    s.sweep.parameter = trim(sw.need("parameter").value);
    s.sweep.from = sw.number("from");
    s.sweep.to = sw.number("to");
    const Entry& pts = sw.need("points");
    s.sweep.points = parse_uint(pts.value, sw.where(pts, "points"));
    s.sweep.gate_time = sw.number("gate_time_ms");
    sw.finish();
  }

  Reader io(sections, "ions");
  if (io.present()) {
    s.has_ions = true;
    s.modes.Omega = io.list("Omega");
    s.modes.eta = {io.list("eta1"), io.list("eta2"), io.list("eta3")};
    s.drive.nu = io.number("nu");
    s.drive.Omega_x = io.number("Omega_x");
    s.drive.Omega_z = io.number("Omega_z");
    s.drive.Omega_alpha = io.number("Omega_alpha");
    io.finish();
  }

  validate(s);
  return s;
}

Scenario load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const Scenario& s) {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_roundtrip(v[i]);
    return out;
  };
  os << "[scenario]\n";
  os << "kind = " << to_string(s.kind) << "\n";
  os << "name = " << s.name << "\n";
  os << "samples = " << s.samples << "\n";
  os << "with_cd = " << (s.with_cd ? "true" : "false") << "\n";
  os << "seed = " << s.seed << "\n";
  if (s.kind != ScenarioKind::ion_couplings) {
    os << "\n[schedule]\n";
    os << "scheme = " << to_string(s.scheme) << "\n";
    if (s.scheme == Scheme::offset) {
      const auto& o = s.offset;
      os << "J0 = " << format_roundtrip(o.J0) << "\n";
      os << "J01 = " << format_roundtrip(o.J01) << "\n";
      os << "Delta1 = " << format_roundtrip(o.Delta1) << "\n";
      os << "Delta2 = " << format_roundtrip(o.Delta2) << "\n";
      os << "Delta3 = " << format_roundtrip(o.Delta3) << "\n";
      os << "omega = " << format_roundtrip(o.omega) << "\n";
      os << "phi = " << format_roundtrip(o.phi) << "\n";
    } else {
      const auto& r = s.rabi;
      os << "J0 = " << format_roundtrip(r.J0) << "\n";
      os << "J01 = " << format_roundtrip(r.J01) << "\n";
      os << "Upsilon0 = " << format_roundtrip(r.Upsilon0) << "\n";
      os << "Upsilon0p = " << format_roundtrip(r.Upsilon0p) << "\n";
      os << "omega = " << format_roundtrip(r.omega) << "\n";
      os << "phi = " << format_roundtrip(r.phi) << "\n";
    }
  }
  if (s.has_sweep) {
    os << "\n[sweep]\n";
    os << "parameter = " << s.sweep.parameter << "\n";
    os << "from = " << format_roundtrip(s.sweep.from) << "\n";
    os << "to = " << format_roundtrip(s.sweep.to) << "\n";
    os << "points = " << s.sweep.points << "\n";
    os << "gate_time_ms = " << format_roundtrip(s.sweep.gate_time) << "\n";
  }
  if (s.has_ions) {
    os << "\n[ions]\n";
    os << "Omega = " << list(s.modes.Omega) << "\n";
    for (std::size_t i = 0; i < s.modes.eta.size(); ++i)
      os << "eta" << i + 1 << " = " << list(s.modes.eta[i]) << "\n";
    os << "nu = " << format_roundtrip(s.drive.nu) << "\n";
    os << "Omega_x = " << format_roundtrip(s.drive.Omega_x) << "\n";
    os << "Omega_z = " << format_roundtrip(s.drive.Omega_z) << "\n";
    os << "Omega_alpha = " << format_roundtrip(s.drive.Omega_alpha) << "\n";
  }
  return os.str();
}

namespace {

json scenario_json(const Scenario& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["name"] = s.name;
  j["samples"] = s.samples;
  j["with_cd"] = s.with_cd;
  j["seed"] = s.seed;
  j["units"] = "time in ms, frequencies in rad/ms";
  if (s.kind != ScenarioKind::ion_couplings) {
    json sch;
    sch["scheme"] = to_string(s.scheme);
    if (s.scheme == Scheme::offset) {
      const auto& o = s.offset;
      sch["J0"] = o.J0;
      sch["J01"] = o.J01;
      sch["Delta1"] = o.Delta1;
      sch["Delta2"] = o.Delta2;
      sch["Delta3"] = o.Delta3;
      sch["omega"] = o.omega;
      sch["phi"] = o.phi;
      sch["t_max"] = o.t_max();
    } else {
      const auto& r = s.rabi;
      sch["J0"] = r.J0;
      sch["J01"] = r.J01;
      sch["Upsilon0"] = r.Upsilon0;
      sch["Upsilon0p"] = r.Upsilon0p;
      sch["omega"] = r.omega;
      sch["phi"] = r.phi;
      sch["t_max"] = r.t_max();
    }
    j["schedule"] = sch;
  }
  if (s.has_sweep)
    j["sweep"] = {{"parameter", s.sweep.parameter},
                  {"from", s.sweep.from},
                  {"to", s.sweep.to},
                  {"points", s.sweep.points},
                  {"gate_time_ms", s.sweep.gate_time}};
  if (s.has_ions)
    j["ions"] = {{"Omega", s.modes.Omega},
                 {"eta", s.modes.eta},
                 {"nu", s.drive.nu},
                 {"Omega_x", s.drive.Omega_x},
                 {"Omega_z", s.drive.Omega_z},
                 {"Omega_alpha", s.drive.Omega_alpha}};
  return j;
}

}  // namespace

std::string export_json(const Scenario& s) { return scenario_json(s).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Validation and execution

void validate(const Scenario& s) {
  if (s.samples < 2) throw PreconditionError("samples must be at least 2");
  if (s.with_cd && s.kind != ScenarioKind::adiabatic_fidelity)
    throw ConfigError("with_cd applies only to adiabatic-fidelity");
  const bool needs_rabi = s.kind == ScenarioKind::adiabatic_fidelity ||
                          s.kind == ScenarioKind::entangle_sweep || s.kind == ScenarioKind::counter_driving;
  if (s.kind == ScenarioKind::ion_couplings) {
    if (!s.has_ions) throw ConfigError("ion-couplings needs an [ions] section");
    if (s.modes.eta.size() != 3) throw ConfigError("ion-couplings needs eta1, eta2 and eta3");
    for (const auto& row : s.modes.eta)
      if (row.size() != s.modes.Omega.size())
        throw ConfigError("each eta list needs one entry per mode frequency");
    for (double w : s.modes.Omega)
      if (!(w > 0)) throw PreconditionError("mode frequencies must be positive");
    return;
  }
  if (needs_rabi && s.scheme != Scheme::rabi)
    throw ConfigError(std::string(to_string(s.kind)) + " needs the rabi scheme");
  if (s.kind == ScenarioKind::gate_fidelity && s.scheme != Scheme::offset)
    throw ConfigError("gate-fidelity needs the offset scheme");
  if (s.scheme == Scheme::offset)
    validate(s.offset);
  else
    validate(s.rabi);
  if (s.kind == ScenarioKind::entangle_sweep) {
    if (!s.has_sweep) throw ConfigError("entangle-sweep needs a [sweep] section");
    const auto& w = s.sweep;
    if (w.parameter != "omega" && w.parameter != "J01" && w.parameter != "J0")
      throw ConfigError("sweep parameter must be omega, J01 or J0");
    if (w.points < 1) throw PreconditionError("sweep needs at least one point");
    if (!(w.gate_time > 0)) throw PreconditionError("gate_time_ms must be positive");
    const double lo = std::min(w.from, w.to);
    if (w.parameter == "omega" ? !(lo > 0) : lo < 0)
      throw PreconditionError("sweep range violates the schedule's sign constraints");
  }
}

namespace {

std::vector<double> sweep_values(const SweepSpec& w) {
  if (w.points == 1) return {w.from};
  return uniform_grid(w.from, w.to, w.points);
}

RabiSchedule swept(RabiSchedule r, const std::string& parameter, double v) {
  if (parameter == "omega")
    r.omega = v;
  else if (parameter == "J01")
    r.J01 = v;
  else
    r.J0 = v;
  return r;
}

// Runs f(i) for i in [0, n) on a fixed partition of worker threads. Results
// land in per-index slots, so the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, F f) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double finite_or_null(double v) { return std::isfinite(v) ? v : -1; }

ScenarioResult run_spectrum(const Scenario& s) {
  const double tm = s.scheme == Scheme::offset ? s.offset.t_max() : s.rabi.t_max();
  const HamiltonianFn h_at = s.scheme == Scheme::offset
                                 ? HamiltonianFn([&](double t) { return offset_hamiltonian(s.offset, t); })
                                 : HamiltonianFn([&](double t) { return rabi_hamiltonian(s.rabi, t); });
  const auto b = track_spectrum(h_at, uniform_grid(0.0, tm, s.samples));
  const auto rep = adiabaticity_report(b);

  ScenarioResult r;
  r.columns = {"time_ms"};
  for (int k = 0; k < kDim; ++k) r.columns.push_back("branch" + std::to_string(k));
  for (std::size_t i = 0; i < b.times.size(); ++i) {
    std::vector<double> row{b.times[i]};
    row.insert(row.end(), b.values[i].begin(), b.values[i].end());
    r.rows.push_back(std::move(row));
  }
  double interior = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < b.values.size(); ++i) interior = std::min(interior, min_gap(b.values[i]));

  json d;
  d["t_max_ms"] = tm;
  d["min_gap"] = b.min_gap;
  d["min_gap_time_ms"] = b.times[b.min_gap_index];
  d["min_gap_before_t_max"] = interior;
  d["degenerate"] = b.degenerate;
  d["min_adiabatic_margin"] = finite_or_null(rep.min_margin);
  d["min_margin_pair"] = {rep.worst_i, rep.worst_j};
  d["min_margin_time_ms"] = b.times[rep.worst_index];
  r.diagnostics_json = d.dump();
  if (b.degenerate) r.warnings.push_back(b.warning);
  return r;
}

ScenarioResult run_gate(const Scenario& s) {
  const GateRun run = simulate_offset_gate(s.offset, s.samples);
  ScenarioResult r;
  r.columns = {"time_ms", "f_gate"};
  const auto& f = run.fidelity;
  std::size_t peak = 0;
  for (std::size_t i = 0; i < f.times.size(); ++i) {
    r.rows.push_back({f.times[i], f.values[i]});
    if (f.values[i] > f.values[peak]) peak = i;
  }
  json d;
  d["t_max_ms"] = s.offset.t_max();
  d["steps"] = run.steps;
  d["max_unitarity_drift"] = run.max_drift;
  d["final_f_gate"] = f.values.back();
  d["peak_f_gate"] = f.values[peak];
  d["peak_time_ms"] = f.times[peak];
  r.diagnostics_json = d.dump();
  return r;
}

ScenarioResult run_adiabatic(const Scenario& s) {
  AdiabaticOptions opt;
  opt.with_counter_driving = s.with_cd;
  opt.samples = s.samples;
  const AdiabaticRun run = simulate_adiabatic(s.rabi, opt);
  ScenarioResult r;
  r.columns = {"time_ms", "f_ad"};
  for (std::size_t i = 0; i < run.f_ad.times.size(); ++i) r.rows.push_back({run.f_ad.times[i], run.f_ad.values[i]});
  json d;
  d["t_max_ms"] = s.rabi.t_max();
  d["with_cd"] = s.with_cd;
  d["steps"] = run.steps;
  d["max_unitarity_drift"] = run.max_drift;
  d["final_f_ad"] = run.f_ad.values.back();
  d["initial_state_overlaps"] = run.initial_overlap;
  d["final_branch_overlaps"] = run.branch_overlap.back();
  d["min_gap"] = run.min_gap;
  d["degenerate"] = run.degenerate;
  r.diagnostics_json = d.dump();
  if (run.degenerate)
    r.warnings.push_back("degenerate eigenvalues along the drive schedule; branch labels there are arbitrary");
  return r;
}

ScenarioResult run_entangle(const Scenario& s) {
  const auto values = sweep_values(s.sweep);
  std::vector<double> f(values.size());
  parallel_for(values.size(), [&](std::size_t i) {
    f[i] = entangle_fidelity_at(swept(s.rabi, s.sweep.parameter, values[i]), s.sweep.gate_time);
  });
  ScenarioResult r;
  r.columns = {s.sweep.parameter + "_rad_per_ms", "f_entangle"};
  std::size_t peak = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    r.rows.push_back({values[i], f[i]});
    if (f[i] > f[peak]) peak = i;
  }
  json d;
  d["gate_time_ms"] = s.sweep.gate_time;
  d["max_f_entangle"] = f[peak];
  d["argmax_rad_per_ms"] = values[peak];
  r.diagnostics_json = d.dump();
  return r;
}

ScenarioResult run_counter(const Scenario& s) {
  const double tm = s.rabi.t_max();
  ScenarioResult r;
  r.columns = {"time_ms", "kappa_rate"};
  for (double t : uniform_grid(0.0, tm, s.samples)) r.rows.push_back({t, kappa_rate(s.rabi, t)});
  json d;
  d["t_max_ms"] = tm;
  d["kappa_rate_start"] = r.rows.front()[1];
  d["kappa_rate_end"] = r.rows.back()[1];
  r.diagnostics_json = d.dump();
  return r;
}

ScenarioResult run_ions(const Scenario& s) {
  const auto res = circulant_point_search(s.modes, s.drive);
  ScenarioResult r;
  r.columns = {"j1", "j2", "j3", "j", "residual", "best_scale", "best_j1", "best_j", "best_residual"};
  r.rows.push_back({res.unscaled.J1, res.unscaled.J2, res.unscaled.J3, res.unscaled.J, res.residual_unscaled,
                    res.scale, res.couplings.J1, res.couplings.J, res.residual});
  json d;
  d["scaled_couplings"] = {res.couplings.J1, res.couplings.J2, res.couplings.J3, res.couplings.J};
  d["advisories"] = res.advisories;
  r.diagnostics_json = d.dump();
  r.warnings = res.advisories;
  return r;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s) {
  validate(s);
  switch (s.kind) {
    case ScenarioKind::spectrum:
      return run_spectrum(s);
    case ScenarioKind::gate_fidelity:
      return run_gate(s);
    case ScenarioKind::adiabatic_fidelity:
      return run_adiabatic(s);
    case ScenarioKind::entangle_sweep:
      return run_entangle(s);
    case ScenarioKind::counter_driving:
      return run_counter(s);
    case ScenarioKind::ion_couplings:
      return run_ions(s);
  }
  throw ConfigError("unhandled scenario kind");
}

std::string format_csv(const ScenarioResult& r) {
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + r.columns[i];
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open '" + tmp + "' for writing");
    f << content;
    f.flush();
    if (!f) throw ConfigError("failed writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ConfigError("cannot move output into place at '" + path + "'");
  }
}

void write_outputs(const Scenario& s, const ScenarioResult& r, const std::string& path) {
  write_atomic(path, format_csv(r));
  json meta;
  meta["scenario"] = scenario_json(s);
  meta["seed"] = s.seed;
  meta["columns"] = r.columns;
  meta["rows"] = r.rows.size();
  meta["diagnostics"] = r.diagnostics_json.empty() ? json::object() : json::parse(r.diagnostics_json);
  meta["warnings"] = r.warnings;
  write_atomic(path + ".meta.json", meta.dump(2) + "\n");
}

}  // namespace circqft
