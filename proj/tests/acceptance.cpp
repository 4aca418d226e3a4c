// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, REPORT lines for
// diagnostics that are recorded but not asserted. Exit status is the number
// of failed criteria (capped at 1 for ctest).

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "circqft/dynamics.hpp"
#include "circqft/error.hpp"
#include "circqft/scenario.hpp"
#include "circqft/schedules.hpp"
#include "circqft/spectra.hpp"

using namespace circqft;
using std::numbers::pi;

namespace {

// Tolerances and thresholds, pinned here.
constexpr double kC1Residual = 1e-10;
constexpr double kC1Seconds = 5;
constexpr double kC2Relative = 0.01;
constexpr double kC2Exact = 1e-10;
constexpr double kC3Seconds = 10;
constexpr double kC4Target = 0.96, kC4Band = 0.03, kC4Time = 0.4875, kC4Seconds = 30;
constexpr double kC5Target = 0.71, kC5Band = 0.05, kC5Tmax = 0.835, kC5TmaxRel = 0.005, kC5Seconds = 60;
constexpr double kC6Slope = 1e-6;
constexpr double kC8Entry = 1e-14, kC8Unitary = 1e-14, kC8Det = 1e-10;
constexpr double kC9Drift = 1e-9;
constexpr double kC10Tol = 1e-10;
constexpr double kC11Max = 0.9, kC11Baseline = 1e-9;
// Gaps below this fraction of max|H| are treated as crossings (roundoff level).
constexpr double kGapFloor = 1e-9;

int failures = 0;

void verdict(int n, bool ok, const std::string& what, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what << " | " << detail << std::endl;
  if (!ok) ++failures;
}

template <class... T>
void report(const std::string& name, T&&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  std::cout << "REPORT " << name << ": " << os.str() << std::endl;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

const Scenario& preset(const char* name) { return find_preset(name).scenario; }

// ---------------------------------------------------------------------------

void criterion1() {
  Timer timer;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(0, 5), ph(0, 2 * pi);
  const auto modes = fourier_modes();
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int variant = 1 + trial % 2;
    const CirculantParams p{variant, a(rng), a(rng), variant == 2 ? a(rng) : 0.0, ph(rng)};
    const Operator h = build_circulant(p);
    const auto lam = circulant_eigenvalues(p);
    for (int j = 0; j < kDim; ++j) worst = std::max(worst, (h * modes.psi[j] - lam[j] * modes.psi[j]).norm());
  }
  const double secs = timer.seconds();
  verdict(1, worst < kC1Residual && secs < kC1Seconds, "circulant diagonalization over 1000 random draws",
          "max residual " + fmt(worst) + " (< " + fmt(kC1Residual) + "), " + fmt(secs) + " s");
}

std::array<double, kDim> signed_sums(double d1, double d2, double d3) {
  std::array<double, kDim> v{};
  for (int k = 0; k < kDim; ++k) v[k] = spin_sign(k, 1) * d1 + spin_sign(k, 2) * d2 + spin_sign(k, 3) * d3;
  std::sort(v.begin(), v.end());
  return v;
}

void criterion2() {
  const double t = 2 * pi;
  struct Case {
    double d1, d2, d3;
  };
  const Case cases[] = {{t * 120, t * 60, t * 30}, {t * 20, t * 10, t * 6}, {t * 50, t * 35, t * 9}};
  double worst_rel = 0;
  for (const auto& c : cases) {
    const double J = std::min({c.d1, c.d2, c.d3}) / 100;  // Delta/J = 100
    const Operator h = build_circulant({1, J, J, 0, pi / 2}) + build_offset({c.d1, c.d2, c.d3});
    const auto num = hermitian_eigensystem(h).values;
    const auto table = signed_sums(c.d1, c.d2, c.d3);
    for (int k = 0; k < kDim; ++k) worst_rel = std::max(worst_rel, std::abs(num[k] - table[k]) / std::abs(table[k]));
  }

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> a(0, 5), ph(0, 2 * pi);
  double worst_exact = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const CirculantParams p{1, a(rng), a(rng), 0, ph(rng)};
    auto cf = circulant_eigenvalues(p);
    std::sort(cf.begin(), cf.end());
    const auto num = hermitian_eigensystem(build_circulant(p)).values;
    for (int k = 0; k < kDim; ++k) worst_exact = std::max(worst_exact, std::abs(num[k] - cf[k]));
  }
  verdict(2, worst_rel < kC2Relative && worst_exact < kC2Exact, "closed-form limits",
          "Delta/J = 100: max relative error " + fmt(worst_rel) + " (< " + fmt(kC2Relative) +
              "); Delta = 0: max deviation " + fmt(worst_exact) + " (< " + fmt(kC2Exact) + ")");
}

void criterion3() {
  Timer timer;
  const auto& s = preset("fig3").offset;
  const auto grid = uniform_grid(0, s.t_max(), 2000);
  const auto b = track_spectrum([&](double t) { return offset_hamiltonian(s, t); }, grid);
  double h_norm = 0;
  for (double t : {0.0, s.t_max()}) h_norm = std::max(h_norm, max_abs(offset_hamiltonian(s, t)));
  const double floor = kGapFloor * h_norm;
  std::size_t crossings = 0;
  for (const auto& v : b.values)
    if (min_gap(v) <= floor) ++crossings;

  const auto table = signed_sums(s.Delta1, s.Delta2, s.Delta3);
  auto start = b.values.front();
  std::sort(start.begin(), start.end());
  double start_dev = 0;
  for (int k = 0; k < kDim; ++k) start_dev = std::max(start_dev, std::abs(start[k] - table[k]));
  const double allowed = 2 * (s.J0 + s.J01);
  const double secs = timer.seconds();
  verdict(3, crossings == 0 && start_dev <= allowed && secs < kC3Seconds, "fig3 branches never cross",
          "min gap " + fmt(b.min_gap) + " rad/ms at t = " + fmt(b.times[b.min_gap_index]) + " ms; " +
              std::to_string(crossings) + " of 2000 samples at or below " + fmt(floor) +
              "; t = 0 deviation " + fmt(start_dev) + " (<= " + fmt(allowed) + "), " + fmt(secs) + " s");

  double interior = 1e300;
  for (std::size_t i = 0; i + 1 < b.values.size(); ++i) interior = std::min(interior, min_gap(b.values[i]));
  report("fig3 min gap before t_max", fmt(interior), " rad/ms");
  const auto rep = adiabaticity_report(b);
  report("fig3 adiabatic margin", "min gap/coupling ratio ", fmt(rep.min_margin), " for pair (", rep.worst_i, ",",
         rep.worst_j, ") at t = ", fmt(b.times[rep.worst_index]), " ms (diagnostic threshold 10)");

  // Closed-form offset spectrum against the oracle at mid-ramp.
  const auto p = offset_at(s, s.t_max() / 2);
  const Operator h = offset_hamiltonian(s, s.t_max() / 2);
  Eigen::SelfAdjointEigenSolver<Operator> oracle(h, Eigen::EigenvaluesOnly);
  try {
    auto cf = closed_form_offset_spectrum(p.J, p.J1, p.Delta1, p.Delta2, p.Delta3).values();
    std::sort(cf.begin(), cf.end());
    double d = 0;
    for (int k = 0; k < kDim; ++k) d = std::max(d, std::abs(cf[k] - oracle.eigenvalues()[k]));
    report("offset closed form at fig3 t_max/2", "multiset distance to oracle ", fmt(d), " rad/ms (scale ",
           fmt(oracle.eigenvalues().cwiseAbs().maxCoeff()), ")");
  } catch (const FormulaDomainError& e) {
    report("offset closed form at fig3 t_max/2", "formula domain error: ", e.what());
  }
}

void criterion4() {
  Timer timer;
  const auto& s = preset("fig4").offset;
  const double f = gate_fidelity_at(s, kC4Time);
  const double secs = timer.seconds();
  verdict(4, std::abs(f - kC4Target) <= kC4Band && secs < kC4Seconds, "fig4 gate fidelity at 0.4875 ms",
          "F_Gate = " + fmt(f) + " (target " + fmt(kC4Target) + " +/- " + fmt(kC4Band) + "), " + fmt(secs) + " s");

  const auto run = simulate_offset_gate(s, 2000);
  const auto peak = std::max_element(run.fidelity.values.begin(), run.fidelity.values.end());
  report("fig4 series", "peak F_Gate ", fmt(*peak), " at t = ", fmt(run.fidelity.times[peak - run.fidelity.values.begin()]),
         " ms; F_Gate(t_max) = ", fmt(run.fidelity.values.back()));
  const auto& raw = preset("fig4-raw").offset;
  report("fig4-raw", "F_Gate(t_max = ", fmt(raw.t_max()), " ms) = ", fmt(gate_fidelity_at(raw, raw.t_max())));

  const auto tuned = tune_detunings(s, 1e-3);
  report("fig4 tuning", "scale ", fmt(tuned.scale), ", multiples (", tuned.multiples[0], ",", tuned.multiples[1],
         ",", tuned.multiples[2], ",", tuned.multiples[3], "), max residual ", fmt(tuned.max_residual),
         " rad, converged ", tuned.converged ? "yes" : "no");
  const double f_tuned = gate_fidelity_at(tuned.schedule, std::min(kC4Time, tuned.schedule.t_max()));
  report("fig4 tuned", "F_Gate at 0.4875 ms ", fmt(f_tuned), ", at t_max ",
         fmt(gate_fidelity_at(tuned.schedule, tuned.schedule.t_max())));

  // Slower ramp with re-tuned detunings should not lower F_Gate(t_max).
  OffsetSchedule slow = s;
  slow.omega /= 2;
  const auto tuned_slow = tune_detunings(slow, 1e-3);
  report("gate monotonicity", "F_Gate(t_max) tuned at omega' ", fmt(gate_fidelity_at(tuned.schedule, tuned.schedule.t_max())),
         ", at omega'/2 ", fmt(gate_fidelity_at(tuned_slow.schedule, tuned_slow.schedule.t_max())));
}

double f_ad_final(const RabiSchedule& s, bool cd, AdiabaticRun* out = nullptr) {
  AdiabaticOptions opt;
  opt.with_counter_driving = cd;
  opt.samples = 2000;
  AdiabaticRun run = simulate_adiabatic(s, opt);
  const double f = run.f_ad.values.back();
  if (out) *out = std::move(run);
  return f;
}

double min_of(const std::array<double, kDim>& a) { return *std::min_element(a.begin(), a.end()); }

void criterion5_and_6() {
  const auto& s = preset("fig5").rabi;
  Timer timer;
  AdiabaticRun plain;
  const double f = f_ad_final(s, false, &plain);
  const double secs = timer.seconds();
  const double tm = s.t_max();
  const bool tm_ok = std::abs(tm - kC5Tmax) / kC5Tmax <= kC5TmaxRel;
  verdict(5, std::abs(f - kC5Target) <= kC5Band && tm_ok && secs < kC5Seconds, "fig5 adiabatic fidelity",
          "F_ad(t_max) = " + fmt(f) + " (target " + fmt(kC5Target) + " +/- " + fmt(kC5Band) + "); t_max = " +
              fmt(tm) + " ms (" + (tm_ok ? "within" : "outside") + " 0.5% of 0.835), " + fmt(secs) + " s");
  report("fig5 drift", "max unitarity drift ", fmt(plain.max_drift), ", steps ", plain.steps);
  report("fig5 initial overlaps", "min |<target|eigvec>| at t = 0: ", fmt(min_of(plain.initial_overlap)));

  AdiabaticRun cd_run;
  const double f_cd = f_ad_final(s, true, &cd_run);
  const double k0 = kappa_rate(s, 0), k1 = kappa_rate(s, tm);
  double worst_slope = 0;
  auto kappa_t = [&](double t) {
    const RotatingParams r = rabi_at(s, t);
    return mixing_angle(r.Omega2, r.Omega3, r.J1, r.J);
  };
  const double h = 1e-4 * tm;
  for (int i = 1; i < 200; ++i) {
    const double t = tm * i / 200;
    const double fd = (kappa_t(t + h) - kappa_t(t - h)) / (2 * h);
    worst_slope = std::max(worst_slope, std::abs(kappa_rate(s, t) - fd));
  }
  const bool better = f_cd > f;
  const bool ends = k0 == 0.0 && k1 == 0.0;
  verdict(6, better && ends && worst_slope < kC6Slope, "counter-driving",
          "F_ad with CD " + fmt(f_cd) + " vs without " + fmt(f) + (better ? " (higher)" : " (not higher)") +
              "; kappa_rate(0) = " + fmt(k0) + ", kappa_rate(t_max) = " + fmt(k1) +
              "; max |kappa_rate - d(kappa)/dt| on 199 interior points " + fmt(worst_slope) + " rad/ms (< " +
              fmt(kC6Slope) + ")");
  report("counter-driving branch overlaps", "min final per-branch overlap without CD ",
         fmt(min_of(plain.branch_overlap.back())), ", with CD ", fmt(min_of(cd_run.branch_overlap.back())),
         " (transitionless driving would hold the corrected branches near 1)");
  report("counter-driving target", "F_ad with CD ", fmt(f_cd), " against the 0.95 expectation");

  double worst_half_sum = 0;
  auto half_sum = [&](double t) {
    const RotatingParams r = rabi_at(s, t);
    return 0.5 * (std::atan(r.J1 / r.Omega2) + std::atan(r.J / r.Omega3));
  };
  for (int i = 1; i < 200; ++i) {
    const double t = tm * i / 200;
    worst_half_sum = std::max(worst_half_sum,
                             std::abs(kappa_rate(s, t) - (half_sum(t + h) - half_sum(t - h)) / (2 * h)));
  }
  report("kappa_rate form", "matches d/dt of (1/2)[atan(J1/Omega2) + atan(J/Omega3)] within ", fmt(worst_half_sum),
         " rad/ms");
}

void criterion7() {
  const RabiSchedule base = preset("fig5").rabi;
  double f[3];
  for (int i = 0; i < 3; ++i) {
    RabiSchedule s = base;
    s.omega = base.omega / (1 << i);
    f[i] = f_ad_final(s, false);
  }
  verdict(7, f[1] >= f[0] && f[2] >= f[1], "adiabatic monotonicity in omega'",
          "F_ad(t_max) at omega', omega'/2, omega'/4: " + fmt(f[0]) + ", " + fmt(f[1]) + ", " + fmt(f[2]));
}

void criterion8() {
  // Reference gate entries in units of 1/(2 sqrt 2); w = e^{i pi/4}.
  const char* rows[8][8] = {
      {"1", "-i", "1", "1", "1", "1", "1", "1"},
      {"1", "-iw", "i", "iw", "-1", "-w", "-i", "-iw"},
      {"1", "1", "-1", "-i", "1", "i", "-1", "-i"},
      {"1", "w", "-i", "w", "-1", "-iw", "i", "-w"},
      {"1", "i", "1", "-1", "1", "-1", "1", "-1"},
      {"1", "iw", "i", "-iw", "-1", "w", "-i", "iw"},
      {"1", "-1", "-1", "i", "1", "-i", "-1", "i"},
      {"1", "-w", "-i", "-w", "-1", "iw", "i", "w"},
  };
  const Complex w = std::polar(1.0, pi / 4), I(0, 1);
  auto value = [&](std::string t) {
    Complex v = 1;
    if (t[0] == '-') {
      v = -v;
      t = t.substr(1);
    }
    if (t == "1") return v;
    if (t == "i") return v * I;
    if (t == "w") return v * w;
    return v * I * w;  // "iw"
  };
  const Operator g = qft_gate();
  const double norm = 1 / (2 * std::sqrt(2.0));
  double worst = 0;
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c) worst = std::max(worst, std::abs(g(r, c) - norm * value(rows[r][c])));
  const double unit = max_abs(g.adjoint() * g - Operator::Identity());
  const Complex det = g.determinant();
  verdict(8, worst < kC8Entry && unit < kC8Unitary && std::abs(std::abs(det) - 1) < kC8Det, "gate matrix",
          "max entry deviation " + fmt(worst) + ", |G^dagger G - I| " + fmt(unit) + ", det = " + fmt(det.real()) +
              (det.imag() < 0 ? " - " : " + ") + fmt(std::abs(det.imag())) + "i");
}

void criterion9() {
  double worst_drift = 0;
  std::vector<std::string> unstable;
  for (const auto& p : presets()) {
    const auto a = format_csv(run_scenario(p.scenario));
    const auto b = format_csv(run_scenario(p.scenario));
    if (a != b) unstable.push_back(p.name);
    const Scenario& s = p.scenario;
    switch (s.kind) {
      case ScenarioKind::gate_fidelity:
        worst_drift = std::max(worst_drift, simulate_offset_gate(s.offset, s.samples).max_drift);
        break;
      case ScenarioKind::adiabatic_fidelity:
        worst_drift = std::max(worst_drift, simulate_adiabatic(s.rabi, {.samples = s.samples}).max_drift);
        break;
      case ScenarioKind::entangle_sweep: {
        const auto grid = uniform_grid(s.sweep.from, s.sweep.to, s.sweep.points);
        for (double v : grid) {
          RabiSchedule r = s.rabi;
          if (s.sweep.parameter == "omega")
            r.omega = v;
          else if (s.sweep.parameter == "J01")
            r.J01 = v;
          else
            r.J0 = v;
          AdiabaticOptions opt;
          opt.samples = 200;
          opt.t_end = std::min(s.sweep.gate_time, r.t_max());
          worst_drift = std::max(worst_drift, simulate_adiabatic(r, opt).max_drift);
        }
        break;
      }
      default:
        break;
    }
  }
  std::string which;
  for (const auto& n : unstable) which += " " + n;
  verdict(9, worst_drift < kC9Drift && unstable.empty(), "unitarity and determinism",
          "max |U^dagger U - I| over all sampled propagators " + fmt(worst_drift) + " (< " + fmt(kC9Drift) + "); " +
              (unstable.empty() ? std::string("all presets bit-identical on rerun") : "differing:" + which));
}

void criterion10() {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  auto state = [&] {
    StateVector v;
    for (int k = 0; k < kDim; ++k) v[k] = {g(rng), g(rng)};
    return StateVector(v.normalized());
  };
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const StateVector a = state(), b = state();
    worst = std::max(worst, std::abs(uhlmann_fidelity(outer(a, a), outer(b, b)) - std::norm(a.dot(b))));
  }
  verdict(10, worst < kC10Tol, "Uhlmann consistency on 100 pure pairs",
          "max deviation " + fmt(worst) + " (< " + fmt(kC10Tol) + ")");
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::ifstream f(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  if (!std::getline(f, line)) return rows;
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

void criterion11() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"fig6a", "fig6b", "fig6c"}) {
    const auto r = run_scenario(preset(name));
    double mx = 0, arg = 0;
    for (const auto& row : r.rows)
      if (row[1] > mx) {
        mx = row[1];
        arg = row[0];
      }
    const std::string path = std::string(CQFT_BASELINE_DIR) + "/" + name + ".csv";
    const auto base = read_csv(path);
    std::string base_state;
    if (base.empty()) {
      base_state = "baseline missing";
      ok = false;
    } else if (base.size() != r.rows.size()) {
      base_state = "baseline row count differs";
      ok = false;
    } else {
      double dev = 0;
      for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t c = 0; c < base[i].size(); ++c) dev = std::max(dev, std::abs(base[i][c] - r.rows[i][c]));
      base_state = "baseline deviation " + fmt(dev);
      ok = ok && dev < kC11Baseline;
    }
    ok = ok && mx >= kC11Max;
    detail += std::string(detail.empty() ? "" : "; ") + name + " max " + fmt(mx) + " at " + fmt(arg / (2 * pi)) +
              " kHz, " + base_state;
  }
  verdict(11, ok, "fig6a-c entangle sweep max >= 0.9 and matches pinned baseline", detail);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> steps = {criterion1, criterion2, criterion3, criterion4,
                                                    criterion5_and_6, criterion7, criterion8, criterion9,
                                                    criterion10, criterion11};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      steps[i]();
    } catch (const std::exception& e) {
      std::cout << "FAIL step " << i + 1 << ": uncaught error: " << e.what() << std::endl;
      ++failures;
    }
  }
  std::cout << "SUMMARY " << failures << " criteria failed" << std::endl;
  return failures ? 1 : 0;
}
