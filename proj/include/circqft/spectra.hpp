// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "circqft/hamiltonians.hpp"
#include "circqft/schedules.hpp"

namespace circqft {

struct FourierModes {
  std::array<StateVector, kDim> psi;
};

/// psi_j[k] = exp(i pi j k / 4) / (2 sqrt 2).
FourierModes fourier_modes();

/// Eigenvalue belonging to psi_j, indexed by j.
std::array<double, kDim> circulant_eigenvalues(const CirculantParams& p);

struct OffsetSpectrum {
  double lambda_p = 0, lambda_m = 0;
  double delta_p = 0, delta_m = 0;
  double mu_p = 0, mu_m = 0;
  double gamma_p = 0, gamma_m = 0;
  double A = 0, B = 0, C = 0, D = 0;
  double p = 0, q = 0, S = 0, Q = 0, Delta0 = 0, Delta = 0;

  std::array<double, kDim> values() const {
    return {lambda_p, lambda_m, delta_p, delta_m, mu_p, mu_m, gamma_p, gamma_m};
  }
};

/// Quartic-radical eigenfrequencies of circulant (phi = pi/2) plus offset.
/// A..D are the coefficients of x^4 + A x^3 + B x^2 + C x + D in x = lambda^2.
/// Throws FormulaDomainError when S = 0.
OffsetSpectrum closed_form_offset_spectrum(double J, double J1, double Delta1, double Delta2,
                                           double Delta3);

struct RotatingSpectrum {
  std::array<double, kDim> Lambda{};
  double kappa = 0;
  double alpha = 0;
};

/// Requires phi = pi/4.
RotatingSpectrum closed_form_rotating_spectrum(const RotatingParams& p);

/// Fourier modes with exp(-i alpha) (even i) or exp(+i alpha) (odd i) on the
/// components |ddd>, |ddu>, |udd>, |udu>. Requires phi = pi/4.
std::array<StateVector, kDim> rotating_eigenvectors(const RotatingParams& p);

/// atan(Omega2/(2 J1) + Omega3/(2 J)); pi/2 when J1 or J vanishes.
double mixing_angle(double Omega2, double Omega3, double J1, double J);

/// Analytic rate of the mixing angle along a drive schedule.
double kappa_rate(const RabiSchedule& s, double t);

/// The rotated single-spin product states |+-+-...>, index bit = 1 for '+'
/// with qubit 1 as the most significant bit.
std::array<StateVector, kDim> rotating_spin_states(double phi);

/// Eigenvectors of h matched greedily to `targets` by overlap magnitude and
/// phased so <target_i|v_i> is real and positive.
struct MatchedBasis {
  std::array<StateVector, kDim> vectors;
  std::array<double, kDim> values{};
  std::array<double, kDim> overlaps{};
};
MatchedBasis match_eigenbasis(const Operator& h, const std::array<StateVector, kDim>& targets);

/// Greedy overlap assignment: result[i] = column of `next` continuing branch i.
std::array<int, kDim> greedy_assignment(const Operator& overlap_magnitudes);

/// Smallest spacing between any two eigenvalues.
double min_gap(const std::array<double, kDim>& values);

/// Follows eigenbranches through a sequence of Hamiltonians.
class BranchTracker {
 public:
  /// Starts with the eigenvectors of h in descending eigenvalue order.
  explicit BranchTracker(const Operator& h);
  /// Starts from given branch vectors and values.
  BranchTracker(const std::array<StateVector, kDim>& vectors, const std::array<double, kDim>& values,
                double h_norm);

  void advance(const Operator& h);

  const std::array<StateVector, kDim>& vectors() const { return vectors_; }
  const std::array<double, kDim>& values() const { return values_; }
  double min_gap_seen() const { return min_gap_; }
  bool degenerate() const { return degenerate_; }

 private:
  void note_gap(double gap, double h_norm);

  std::array<StateVector, kDim> vectors_;
  std::array<double, kDim> values_{};
  double min_gap_;
  bool degenerate_ = false;
};

struct SpectrumBranches {
  std::vector<double> times;
  std::vector<std::array<double, kDim>> values;          // [t][branch]
  std::vector<std::array<StateVector, kDim>> vectors;    // [t][branch]
  double min_gap = 0;
  std::size_t min_gap_index = 0;
  bool degenerate = false;
  std::string warning;
};

/// Gap below 1e-9 max|H| marks a degeneracy warning; tracking continues.
SpectrumBranches track_spectrum(const HamiltonianFn& hamiltonian_at, const std::vector<double>& grid);

struct PairMargin {
  int i = 0, j = 0;
  std::vector<double> gap;
  std::vector<double> coupling;
  std::vector<double> margin;
  double min_margin = 0;
};

struct AdiabaticityReport {
  std::vector<PairMargin> pairs;
  double min_margin = 0;
  int worst_i = 0, worst_j = 0;
  std::size_t worst_index = 0;
};

/// gap/|<d_t v_i|v_j>| for every branch pair with finite differences on the
/// gauge-fixed vectors. Zero coupling gives an infinite margin.
AdiabaticityReport adiabaticity_report(const SpectrumBranches& b);

std::vector<double> uniform_grid(double t0, double t1, std::size_t points);

}  // namespace circqft
