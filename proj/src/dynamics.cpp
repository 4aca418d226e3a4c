// SPDX-License-Identifier: Apache-2.0
#include "circqft/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "circqft/error.hpp"

namespace circqft {

Operator qft_gate() {
  const auto modes = fourier_modes().psi;
  Operator g;
  for (int k = 0; k < kDim; ++k) g.col(k) = modes[k];
  g.col(1) *= Complex(0, -1);
  return g;
}

double gate_fidelity(const Operator& u) {
  static const Operator g = qft_gate();
  return std::norm((g.adjoint() * u).trace()) / 64.0;
}

namespace {

struct Plan {
  std::vector<double> grid;
  std::size_t substeps = 1;
  std::size_t total = 0;
};

Plan plan_steps(const HamiltonianFn& h_at, double t_end, std::size_t samples, std::size_t steps) {
  if (samples < 2) throw PreconditionError("need at least two samples");
  Plan p;
  p.grid = uniform_grid(0.0, t_end, samples);
  const std::size_t budget = steps ? steps : default_step_budget(h_at, 0.0, t_end);
  p.substeps = std::max<std::size_t>(1, (budget + samples - 2) / (samples - 1));
  p.total = p.substeps * (samples - 1);
  return p;
}

}  // namespace

GateRun simulate_offset_gate(const OffsetSchedule& s, std::size_t samples) {
  validate(s);
  const HamiltonianFn h_at = [&](double t) { return offset_hamiltonian(s, t); };
  const Plan plan = plan_steps(h_at, s.t_max(), samples, 0);

  GateRun run;
  run.steps = plan.total;
  run.fidelity.times = plan.grid;
  run.fidelity.values.reserve(samples);
  Operator u = Operator::Identity();
  run.fidelity.values.push_back(gate_fidelity(u));
  for (std::size_t i = 1; i < plan.grid.size(); ++i) {
    propagate_in_place(u, h_at, plan.grid[i - 1], plan.grid[i], plan.substeps);
    const double drift = unitarity_drift(u);
    run.max_drift = std::max(run.max_drift, drift);
    check_propagator(u, i * plan.substeps);
    run.fidelity.values.push_back(gate_fidelity(u));
  }
  return run;
}

double gate_fidelity_at(const OffsetSchedule& s, double t, std::size_t steps) {
  validate(s);
  if (!(t > 0 && t <= s.t_max())) throw PreconditionError("gate time outside (0, t_max]");
  const HamiltonianFn h_at = [&](double tt) { return offset_hamiltonian(s, tt); };
  return gate_fidelity(steps ? evolve_propagator(h_at, 0.0, t, steps) : evolve_propagator(h_at, 0.0, t));
}

AdiabaticRun simulate_adiabatic(const RabiSchedule& s, const AdiabaticOptions& opt) {
  validate(s);
  const double t_end = opt.t_end < 0 ? s.t_max() : opt.t_end;
  if (!(t_end > 0 && t_end <= s.t_max())) throw PreconditionError("end time outside (0, t_max]");

  const HamiltonianFn h_bare = [&](double t) { return rabi_hamiltonian(s, t, false); };
  const HamiltonianFn h_drive = [&](double t) { return rabi_hamiltonian(s, t, opt.with_counter_driving); };
  const Plan plan = plan_steps(h_drive, t_end, opt.samples, opt.steps);

  Operator h = h_bare(0.0);
  const MatchedBasis start = match_eigenbasis(h, rotating_spin_states(s.phi));
  BranchTracker tracker(start.vectors, start.values, max_abs(h));

  const auto psi = fourier_modes().psi;
  Operator states;
  for (int i = 0; i < kDim; ++i) states.col(i) = start.vectors[i];
  std::array<double, kDim> beta{};
  auto prev_values = tracker.values();

  AdiabaticRun run;
  run.steps = plan.total;
  run.initial_overlap = start.overlaps;
  run.f_ad.times = plan.grid;

  auto record = [&]() {
    std::array<StateVector, kDim> tilde;
    Complex sum = 0;
    std::array<double, kDim> ov{};
    for (int i = 0; i < kDim; ++i) {
      tilde[i] = states.col(i) * std::polar(1.0, beta[i]);
      sum += psi[i].dot(tilde[i]);
      ov[i] = std::abs(tracker.vectors()[i].dot(tilde[i]));
    }
    run.f_ad.values.push_back(std::norm(sum) / 64.0);
    run.branch_overlap.push_back(ov);
    if (opt.keep_states) run.states.push_back(tilde);
    run.final_states = tilde;
  };

  record();
  for (std::size_t i = 1; i < plan.grid.size(); ++i) {
    const double t0 = plan.grid[i - 1];
    const double dt = (plan.grid[i] - t0) / static_cast<double>(plan.substeps);
    for (std::size_t k = 0; k < plan.substeps; ++k) {
      const double a = t0 + static_cast<double>(k) * dt;
      const double b = k + 1 == plan.substeps ? plan.grid[i] : a + dt;
      states = expm_hermitian(h_drive(0.5 * (a + b)), b - a) * states;
      tracker.advance(h_bare(b));
      for (int n = 0; n < kDim; ++n) beta[n] += 0.5 * (prev_values[n] + tracker.values()[n]) * (b - a);
      prev_values = tracker.values();
    }
    const double drift = unitarity_drift(states);
    run.max_drift = std::max(run.max_drift, drift);
    check_propagator(states, i * plan.substeps);
    record();
  }
  run.min_gap = tracker.min_gap_seen();
  run.degenerate = tracker.degenerate();
  return run;
}

StateVector prepare_superposition(const std::array<double, 4>& phases, Scheme scheme, double phi) {
  StateVector v = StateVector::Zero();
  const auto rotated = rotating_spin_states(phi);
  for (int j = 0; j < 4; ++j) {
    const StateVector basis = scheme == Scheme::offset ? StateVector(StateVector::Unit(j)) : rotated[j];
    v += 0.5 * std::polar(1.0, phases[j]) * basis;
  }
  return v;
}

StateVector entangle_target() {
  const auto psi = fourier_modes().psi;
  return 0.5 * (psi[0] + psi[1] + psi[2] + psi[3]);
}

double entangle_overlap(const std::array<StateVector, 4>& states) {
  const StateVector mix = 0.5 * (states[0] + states[1] + states[2] + states[3]);
  return std::norm(entangle_target().dot(mix));
}

FidelitySeries entangle_fidelity(const RabiSchedule& s, std::size_t samples, double gate_time) {
  validate(s);
  if (!(gate_time > 0)) throw PreconditionError("gate time must be positive");
  AdiabaticOptions opt;
  opt.samples = samples;
  opt.t_end = std::min(gate_time, s.t_max());
  opt.keep_states = true;
  const AdiabaticRun run = simulate_adiabatic(s, opt);
  FidelitySeries out;
  out.times = run.f_ad.times;
  for (const auto& st : run.states) out.values.push_back(entangle_overlap({st[0], st[1], st[2], st[3]}));
  return out;
}

double entangle_fidelity_at(const RabiSchedule& s, double gate_time) {
  validate(s);
  if (!(gate_time > 0)) throw PreconditionError("gate time must be positive");
  AdiabaticOptions opt;
  opt.samples = 2;
  opt.t_end = std::min(gate_time, s.t_max());
  const AdiabaticRun run = simulate_adiabatic(s, opt);
  const auto& st = run.final_states;
  return entangle_overlap({st[0], st[1], st[2], st[3]});
}

void validate_density(const Operator& rho) {
  require_hermitian(rho, 1e-10);
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-10) throw PreconditionError("density matrix trace is not 1");
  const EigenSystem es = hermitian_eigensystem(rho);
  if (es.values[0] < -1e-10) throw PreconditionError("density matrix has a negative eigenvalue");
}

double uhlmann_fidelity(const Operator& rho0, const Operator& rho) {
  validate_density(rho0);
  validate_density(rho);
  const Operator r = psd_sqrt(0.5 * (rho0 + rho0.adjoint()));
  Operator m = r * rho * r;
  m = 0.5 * (m + m.adjoint());
  const double tr = psd_sqrt(m).trace().real();
  return tr * tr;
}

}  // namespace circqft
