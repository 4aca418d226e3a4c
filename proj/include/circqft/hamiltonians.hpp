// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "circqft/numerics.hpp"

namespace circqft {

/// Every coupling, drive and phase of the general three-spin Hamiltonian.
/// Couplings in rad/ms, phases in rad.
struct FullParams {
  double J1 = 0, J2 = 0, J3 = 0, J = 0;
  double Omega1 = 0, Omega2 = 0, Omega3 = 0;
  double theta1 = 0, theta2 = 0, theta3 = 0;
  double phi12 = 0, phi21 = 0, phi23 = 0, phi32 = 0, phi13 = 0, phi31 = 0;
  double phi1 = 0, phi2 = 0, phi3 = 0;
};

struct CirculantParams {
  int variant = 1;  // 1 or 2; only variant 2 uses Omega1
  double J = 0;
  double J1 = 0;
  double Omega1 = 0;
  double phi = 0;
};

struct OffsetParams {
  double Delta1 = 0, Delta2 = 0, Delta3 = 0;
};

struct RotatingParams {
  double J = 0, J1 = 0, Omega2 = 0, Omega3 = 0;
  double phi = 0;
};

Operator build_full(const FullParams& p);

/// Throws PreconditionError for an unknown variant, or variant 1 with Omega1 != 0.
Operator build_circulant(const CirculantParams& p);

/// Diagonal offset with sigma_z = |d><d| - |u><u|, so |ddd> sits at +(D1+D2+D3).
Operator build_offset(const OffsetParams& p);

/// Drive-controlled Hamiltonian: reduces to build_circulant(variant 1) when
/// Omega2 = J1 and Omega3 = J.
Operator build_rotating(const RotatingParams& p);

/// -rate on (0,4), (1,5) and their transposes.
Operator build_counter_driving(double kappa_rate);

/// FullParams that reproduce the circulant Hamiltonian.
FullParams circulant_assignment(const CirculantParams& p);

/// FullParams that reproduce build_rotating.
FullParams rotating_assignment(const RotatingParams& p);

struct CirculantCheck {
  bool circulant = false;
  double max_deviation = 0;
};

/// M[r][c] == M[0][(c - r) mod 8] within tol.
CirculantCheck is_circulant(const Operator& m, double tol = 1e-12);

/// Permutation P with P|k> = |k+1 mod 8>.
Operator cyclic_shift();

/// Basis-state spin sign for qubit q (1..3): +1 for down, -1 for up.
int spin_sign(int basis_index, int qubit);

}  // namespace circqft
