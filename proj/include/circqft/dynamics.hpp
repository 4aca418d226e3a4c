// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "circqft/schedules.hpp"
#include "circqft/spectra.hpp"

namespace circqft {

/// Column k is psi_k, except column 1 which carries an extra -i.
Operator qft_gate();

/// |Tr(G^dagger U)|^2 / 64.
double gate_fidelity(const Operator& u);

struct FidelitySeries {
  std::vector<double> times;
  std::vector<double> values;
};

struct GateRun {
  FidelitySeries fidelity;
  double max_drift = 0;  // max |U^dagger U - I| over samples
  std::size_t steps = 0;
};

/// Evolves under the offset-controlled Hamiltonian and samples F_Gate on a
/// uniform grid of `samples` points over [0, t_max].
GateRun simulate_offset_gate(const OffsetSchedule& s, std::size_t samples);

/// F_Gate of U(t) for a single t in (0, t_max].
double gate_fidelity_at(const OffsetSchedule& s, double t, std::size_t steps = 0);

struct AdiabaticOptions {
  bool with_counter_driving = false;
  std::size_t samples = 2000;
  double t_end = -1;       // negative means t_max
  std::size_t steps = 0;   // 0 means the default budget over [0, t_end]
  bool keep_states = false;
};

struct AdiabaticRun {
  FidelitySeries f_ad;
  /// |<Lambda_i(t)|evolved_i(t)>| against the tracked instantaneous eigenvector.
  std::vector<std::array<double, kDim>> branch_overlap;
  /// Evolved states with dynamical phases removed; filled when keep_states is set.
  std::vector<std::array<StateVector, kDim>> states;
  std::array<double, kDim> initial_overlap{};
  std::array<StateVector, kDim> final_states;
  double max_drift = 0;
  double min_gap = 0;
  bool degenerate = false;
  std::size_t steps = 0;
};

/// Evolves the eight rotated spin eigenstates through the drive schedule,
/// optionally adding the counter-driving field.
AdiabaticRun simulate_adiabatic(const RabiSchedule& s, const AdiabaticOptions& opt = {});

/// (1/2) sum_j exp(i phase_j) |basis_j>, j = 0..3. The offset scheme uses the
/// computational states, the Rabi scheme the rotated |-..> states.
StateVector prepare_superposition(const std::array<double, 4>& phases, Scheme scheme,
                                  double phi = std::numbers::pi / 4);

/// (psi_0 + psi_1 + psi_2 + psi_3) / 2.
StateVector entangle_target();

/// |<target| (1/2) sum_{i<4} states_i>|^2.
double entangle_overlap(const std::array<StateVector, 4>& states);

/// Entangled-state fidelity sampled over [0, min(gate_time, t_max)].
FidelitySeries entangle_fidelity(const RabiSchedule& s, std::size_t samples, double gate_time);

/// Final value of entangle_fidelity.
double entangle_fidelity_at(const RabiSchedule& s, double gate_time);

/// Throws PreconditionError unless rho is Hermitian with unit trace and
/// eigenvalues >= -1e-10.
void validate_density(const Operator& rho);

/// (Tr sqrt(sqrt(rho0) rho sqrt(rho0)))^2.
double uhlmann_fidelity(const Operator& rho0, const Operator& rho);

}  // namespace circqft
