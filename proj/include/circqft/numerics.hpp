// SPDX-License-Identifier: Apache-2.0
#pragma once

// Fixed-dimension (8x8) complex linear algebra and time-dependent
// Schrodinger propagation. Units: hbar = 1, time in ms, frequencies in rad/ms.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Core>

namespace circqft {

using Complex = std::complex<double>;

inline constexpr int kDim = 8;

/// Amplitudes over the spin basis |ddd>, |ddu>, |dud>, |duu>, |udd>, |udu>, |uud>, |uuu>
/// (qubit 1 is the most significant bit, u = 1).
using StateVector = Eigen::Matrix<Complex, kDim, 1>;
using Operator = Eigen::Matrix<Complex, kDim, kDim>;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-9;
inline constexpr double kPropagatorFailure = 1e-6;

/// Eigenvalues ascending; eigenvectors are the matching columns of `vectors`.
struct EigenSystem {
  std::array<double, kDim> values{};
  Operator vectors = Operator::Identity();
};

double max_abs(const Operator& m);
double max_asymmetry(const Operator& m);
double unitarity_drift(const Operator& u);
bool is_finite(const Operator& m);

/// Throws NonHermitianError unless max|M - M^dagger| is within `tol`.
/// The tolerance scales with (1 + max|M|).
void require_hermitian(const Operator& m, double tol = kHermitianTolerance);

/// Cyclic complex Jacobi diagonalization.
/// Sweeps until the off-diagonal Frobenius norm falls below 1e-14 ||H||_F
/// (at most 100 sweeps). Ties keep their original diagonal order.
EigenSystem hermitian_eigensystem(const Operator& h);

/// exp(-i H dt) through the eigensystem of H.
Operator expm_hermitian(const Operator& h, double dt);

/// exp(-i H dt) given a precomputed eigensystem of H.
Operator expm_from_eigensystem(const EigenSystem& es, double dt);

using HamiltonianFn = std::function<Operator(double)>;

/// ceil(40 (t1 - t0) ||H||_max / 2 pi) with a floor of 4000, where ||H||_max is
/// the largest entry magnitude seen on a 65-point probe of [t0, t1].
std::size_t default_step_budget(const HamiltonianFn& hamiltonian_at, double t0, double t1);

/// Solves dU/dt = -i H(t) U with U(t0) = I by midpoint exponential steps
/// U <- exp(-i H(t_mid) dt) U.
Operator evolve_propagator(const HamiltonianFn& hamiltonian_at, double t0, double t1,
                           std::size_t steps);
Operator evolve_propagator(const HamiltonianFn& hamiltonian_at, double t0, double t1);

/// Advances `u` in place over [t0, t1] with `steps` midpoint steps. No checks.
void propagate_in_place(Operator& u, const HamiltonianFn& hamiltonian_at, double t0, double t1,
                        std::size_t steps);

/// Throws PropagatorError when the drift exceeds 1e-6.
void check_propagator(const Operator& u, std::size_t steps);

/// Hermitian square root of a positive semidefinite operator. Eigenvalues
/// within `floor` of zero are treated as zero.
Operator psd_sqrt(const Operator& m, double floor = 1e-13);

Operator outer(const StateVector& a, const StateVector& b);

}  // namespace circqft
