// SPDX-License-Identifier: Apache-2.0
#include "circqft/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "circqft/error.hpp"
#include "circqft/spectra.hpp"

namespace circqft {

using std::numbers::pi;

namespace {

constexpr double kTimeSlack = 1e-12;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw PreconditionError(std::string(name) + " is not finite");
}

double clamp_time(double t, double t_max) {
  if (!(t >= -kTimeSlack * t_max && t <= t_max * (1 + kTimeSlack)))
    throw PreconditionError("time outside [0, t_max]");
  return std::clamp(t, 0.0, t_max);
}

}  // namespace

Envelope envelope(double t, double t_max) {
  const double u = t / t_max;
  if (u <= 0) return {0.0, 1.0, 0.0};
  if (u >= 1) return {1.0, 0.0, 0.0};
  const double c = std::cos(pi * u);
  return {0.5 * (1 - c), 0.5 * (1 + c), std::sin(pi * u)};
}

void validate(const OffsetSchedule& s) {
  for (double v : {s.J0, s.J01, s.Delta1, s.Delta2, s.Delta3, s.omega, s.phi})
    require_finite(v, "offset schedule parameter");
  if (!(s.omega > 0)) throw PreconditionError("omega' must be positive");
  if (s.J0 < 0 || s.J01 < 0) throw PreconditionError("coupling amplitudes must be nonnegative");
}

void validate(const RabiSchedule& s) {
  for (double v : {s.J0, s.J01, s.Upsilon0, s.Upsilon0p, s.omega, s.phi})
    require_finite(v, "drive schedule parameter");
  if (!(s.omega > 0)) throw PreconditionError("omega' must be positive");
  if (s.J0 < 0 || s.J01 < 0 || s.Upsilon0 < 0 || s.Upsilon0p < 0)
    throw PreconditionError("drive schedule amplitudes must be nonnegative");
}

OffsetPoint offset_at(const OffsetSchedule& s, double t) {
  validate(s);
  const double tm = s.t_max();
  const Envelope e = envelope(clamp_time(t, tm), tm);
  return {s.J0 * e.sin2, s.J01 * e.sin2, s.Delta1 * e.cos2, s.Delta2 * e.cos2, s.Delta3 * e.cos2};
}

RotatingParams rabi_at(const RabiSchedule& s, double t) {
  validate(s);
  const double tm = s.t_max();
  const Envelope e = envelope(clamp_time(t, tm), tm);
  return {s.J0 * e.sin2, s.J01 * e.sin2, s.J01 + s.Upsilon0 * e.cos2, s.J0 + s.Upsilon0p * e.cos2,
          s.phi};
}

Operator offset_hamiltonian(const OffsetSchedule& s, double t) {
  const OffsetPoint p = offset_at(s, t);
  return build_circulant({1, p.J, p.J1, 0.0, s.phi}) +
         build_offset({p.Delta1, p.Delta2, p.Delta3});
}

Operator rabi_hamiltonian(const RabiSchedule& s, double t, bool with_counter_driving) {
  Operator h = build_rotating(rabi_at(s, t));
  if (with_counter_driving) h += build_counter_driving(kappa_rate(s, std::clamp(t, 0.0, s.t_max())));
  return h;
}

double wrap_phase(double x) {
  double r = std::remainder(x, 2 * pi);
  if (r <= -pi) r += 2 * pi;
  return r;
}

namespace {

PhaseSet integrate_phases(const HamiltonianFn& h_at, double t_max,
                          const std::array<StateVector, kDim>& targets, int count, Scheme scheme,
                          std::size_t steps) {
  if (steps < 100) throw PreconditionError("adiabatic_phases needs at least 100 steps");
  const auto grid = uniform_grid(0.0, t_max, steps + 1);
  Operator h = h_at(grid[0]);
  const MatchedBasis start = match_eigenbasis(h, targets);
  BranchTracker tracker(start.vectors, start.values, max_abs(h));

  std::vector<double> acc(count, 0.0);
  auto prev = tracker.values();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    h = h_at(grid[i]);
    tracker.advance(h);
    const double dt = grid[i] - grid[i - 1];
    for (int b = 0; b < count; ++b) acc[b] += 0.5 * (prev[b] + tracker.values()[b]) * dt;
    prev = tracker.values();
  }
  PhaseSet out;
  out.scheme = scheme;
  out.phases = std::move(acc);
  out.degenerate = tracker.degenerate();
  out.min_gap = tracker.min_gap_seen();
  return out;
}

std::array<StateVector, kDim> standard_basis() {
  std::array<StateVector, kDim> e;
  for (int k = 0; k < kDim; ++k) e[k] = StateVector::Unit(k);
  return e;
}

}  // namespace

PhaseSet adiabatic_phases(const OffsetSchedule& s, std::size_t steps) {
  validate(s);
  return integrate_phases([&](double t) { return offset_hamiltonian(s, t); }, s.t_max(),
                          standard_basis(), 4, Scheme::offset, steps);
}

PhaseSet adiabatic_phases(const RabiSchedule& s, std::size_t steps) {
  validate(s);
  return integrate_phases([&](double t) { return rabi_hamiltonian(s, t); }, s.t_max(),
                          rotating_spin_states(s.phi), kDim, Scheme::rabi, steps);
}

namespace {

OffsetSchedule scaled(const OffsetSchedule& s, double c) {
  OffsetSchedule r = s;
  r.Delta1 *= c;
  r.Delta2 *= c;
  r.Delta3 *= c;
  return r;
}

struct Residuals {
  std::array<long, 4> multiples{};
  std::array<double, 4> residuals{};
  double max = 0;
};

Residuals evaluate(const OffsetSchedule& s, std::size_t steps) {
  const PhaseSet ph = adiabatic_phases(s, steps);
  Residuals r;
  for (int j = 0; j < 4; ++j) {
    const double m = std::round(ph.phases[j] / (2 * pi));
    r.multiples[j] = static_cast<long>(m);
    r.residuals[j] = std::abs(ph.phases[j] - 2 * pi * m);
    r.max = std::max(r.max, r.residuals[j]);
  }
  return r;
}

}  // namespace

TuneResult tune_detunings(const OffsetSchedule& s, double tolerance, const TuneOptions& opt) {
  validate(s);
  if (s.Delta1 == 0 && s.Delta2 == 0 && s.Delta3 == 0)
    throw PreconditionError("tune_detunings needs nonzero detunings");
  if (!(tolerance > 0)) throw PreconditionError("tolerance must be positive");
  if (!(opt.lo > 0 && opt.hi > opt.lo) || opt.grid_points < 3)
    throw PreconditionError("invalid tuning bracket");

  auto finish = [&](double c, const Residuals& r) {
    TuneResult out;
    out.schedule = scaled(s, c);
    out.scale = c;
    out.multiples = r.multiples;
    out.residuals = r.residuals;
    out.max_residual = r.max;
    out.converged = r.max <= tolerance;
    return out;
  };

  const Residuals at_one = evaluate(s, opt.steps);
  if (at_one.max <= tolerance) return finish(1.0, at_one);

  const auto grid = uniform_grid(opt.lo, opt.hi, opt.grid_points);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = evaluate(scaled(s, grid[i]), opt.steps).max;
  const std::size_t best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());

  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[best + 1 == grid.size() ? best : best + 1];
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = evaluate(scaled(s, x1), opt.steps).max;
  double f2 = evaluate(scaled(s, x2), opt.steps).max;
  for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = evaluate(scaled(s, x1), opt.steps).max;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = evaluate(scaled(s, x2), opt.steps).max;
    }
  }
  double c = f1 < f2 ? x1 : x2;
  if (std::min(f1, f2) > f[best]) c = grid[best];
  return finish(c, evaluate(scaled(s, c), opt.steps));
}

}  // namespace circqft
