// SPDX-License-Identifier: Apache-2.0
#pragma once

// Effective couplings between three trapped ions after adiabatic elimination
// of the phonons. SI units appear only in lamb_dicke.

#include <string>
#include <vector>

#include "circqft/hamiltonians.hpp"

namespace circqft {

inline constexpr double kHbar = 1.054571817e-34;  // J s

/// b k sqrt(hbar / (2 M Omega_n)). k in 1/m, M in kg, Omega_n in rad/s.
double lamb_dicke(double b, double k, double M, double Omega_n);

/// sum_n Jj_n Jp_n / (nu^2 - Omega_n^2). Throws PreconditionError on length
/// mismatch or when nu hits a mode frequency.
double pairwise_coupling(const std::vector<double>& Jj, const std::vector<double>& Jp, double nu,
                         const std::vector<double>& Omega);

/// sum_n Jj_n Jp_n h_n / (nu^2 - Omega_n^2).
double trilinear_coupling(const std::vector<double>& Jj, const std::vector<double>& Jp,
                          const std::vector<double>& h, double nu, const std::vector<double>& Omega);

/// Normal modes seen by ions 1..3. eta[ion][mode].
struct ModeSet {
  std::vector<double> Omega;
  std::vector<std::vector<double>> eta;
};

struct DriveParams {
  double nu = 0;
  double Omega_x = 0, Omega_z = 0, Omega_alpha = 0;
};

struct IonCouplings {
  double J1 = 0, J2 = 0, J3 = 0, J = 0;
};

/// Ion 1 and 2 spin-phonon rates scale with Omega_x, ion 3 with Omega_z, the
/// trilinear rate with Omega_alpha.
IonCouplings effective_couplings(const ModeSet& modes, const DriveParams& drive);

/// max(|J2-J3|, |J2-J|, |J3-J|) / max(|J2|, |J3|, |J|); 0 when all vanish.
double circulant_residual(const IonCouplings& c);

struct CirculantPointResult {
  CirculantParams params;  // variant 1, J and J1 at the best drive scale, phi = 0
  IonCouplings couplings;  // at the best drive scale
  IonCouplings unscaled;   // at the given drive
  double scale = 1;        // multiplies all three Rabi frequencies
  double residual = 0;
  double residual_unscaled = 0;
  std::vector<std::string> advisories;
};

/// Golden-section search over a common drive scale in [1e-3, 1e3] (log
/// spaced) minimizing circulant_residual.
CirculantPointResult circulant_point_search(const ModeSet& modes, const DriveParams& drive);

/// Lamb-Dicke and near-resonance advisories; never throws for valid input.
std::vector<std::string> ion_advisories(const ModeSet& modes, const DriveParams& drive);

}  // namespace circqft
