// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <vector>

#include "circqft/hamiltonians.hpp"

namespace circqft {

/// Couplings ramp up as sin^2(w't), detunings ramp down as cos^2(w't).
struct OffsetSchedule {
  double J0 = 0, J01 = 0;
  double Delta1 = 0, Delta2 = 0, Delta3 = 0;
  double omega = 0;  // w', rad/ms
  double phi = std::numbers::pi / 2;

  double t_max() const { return std::numbers::pi / (2.0 * omega); }
};

/// Couplings ramp up as sin^2(w't) while the drives relax to the circulant point.
struct RabiSchedule {
  double J0 = 0, J01 = 0;
  double Upsilon0 = 0, Upsilon0p = 0;
  double omega = 0;
  double phi = std::numbers::pi / 4;

  double t_max() const { return std::numbers::pi / (2.0 * omega); }
};

struct OffsetPoint {
  double J = 0, J1 = 0;
  double Delta1 = 0, Delta2 = 0, Delta3 = 0;
};

/// sin^2(w't), cos^2(w't) and sin(2w't) evaluated from t / t_max so the
/// endpoints come out exactly 0 or 1.
struct Envelope {
  double sin2 = 0, cos2 = 1, sin2wt = 0;
};
Envelope envelope(double t, double t_max);

void validate(const OffsetSchedule& s);
void validate(const RabiSchedule& s);

/// Both throw PreconditionError for t outside [0, t_max].
OffsetPoint offset_at(const OffsetSchedule& s, double t);
RotatingParams rabi_at(const RabiSchedule& s, double t);

/// Circulant part at the schedule's phase plus the detuning offset.
Operator offset_hamiltonian(const OffsetSchedule& s, double t);
Operator rabi_hamiltonian(const RabiSchedule& s, double t, bool with_counter_driving = false);

enum class Scheme { offset, rabi };

struct PhaseSet {
  Scheme scheme = Scheme::offset;
  std::vector<double> phases;  // alpha1..alpha4 or beta0..beta7
  bool degenerate = false;
  double min_gap = 0;
};

/// Trapezoid integrals of the tracked eigenvalue branches over [0, t_max].
/// Offset scheme: branches starting on |ddd>, |ddu>, |dud>, |duu>.
/// Rabi scheme: branches starting on the rotated spin states.
PhaseSet adiabatic_phases(const OffsetSchedule& s, std::size_t steps);
PhaseSet adiabatic_phases(const RabiSchedule& s, std::size_t steps);

/// Maps a phase to (-pi, pi].
double wrap_phase(double x);

struct TuneOptions {
  double lo = 0.5, hi = 2.0;
  std::size_t grid_points = 241;
  std::size_t steps = 800;
};

struct TuneResult {
  OffsetSchedule schedule;
  double scale = 1;
  std::array<long, 4> multiples{};
  std::array<double, 4> residuals{};
  double max_residual = 0;
  bool converged = false;
};

/// Rescales all three detuning amplitudes by one factor so that each alpha_j
/// lands near a multiple of 2 pi.
TuneResult tune_detunings(const OffsetSchedule& s, double tolerance, const TuneOptions& opt = {});

}  // namespace circqft
