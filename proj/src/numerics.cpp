// SPDX-License-Identifier: Apache-2.0
#include "circqft/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "circqft/error.hpp"

namespace circqft {

NonHermitianError::NonHermitianError(double max_asymmetry)
    : PreconditionError([&] {
        std::ostringstream os;
        os << "operator is not Hermitian: max |M - M^dagger| = " << max_asymmetry;
        return os.str();
      }()),
      max_asymmetry_(max_asymmetry) {}

PropagatorError::PropagatorError(double drift, std::size_t steps)
    : NumericalError([&] {
        std::ostringstream os;
        os << "propagator lost unitarity: max |U^dagger U - I| = " << drift << " after " << steps
           << " steps";
        return os.str();
      }()),
      drift_(drift),
      steps_(steps) {}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
      return "config";
    case ErrorKind::precondition:
      return "precondition";
    case ErrorKind::numerical:
      return "numerical";
  }
  return "unknown";
}

double max_abs(const Operator& m) { return m.cwiseAbs().maxCoeff(); }

double max_asymmetry(const Operator& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double unitarity_drift(const Operator& u) {
  return (u.adjoint() * u - Operator::Identity()).cwiseAbs().maxCoeff();
}

bool is_finite(const Operator& m) {
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

void require_hermitian(const Operator& m, double tol) {
  if (!is_finite(m)) throw PreconditionError("operator has non-finite entries");
  const double asym = max_asymmetry(m);
  if (asym > tol * (1.0 + max_abs(m))) throw NonHermitianError(asym);
}

namespace {

double off_diagonal_norm(const Operator& a) {
  double sum = 0.0;
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c)
      if (r != c) sum += std::norm(a(r, c));
  return std::sqrt(sum);
}

// Zeroes a(p,q) with the unitary G = diag-phase * real rotation:
//   G_pp = c, G_pq = s, G_qp = -s e^{-i theta}, G_qq = c e^{-i theta}
// where a(p,q) = |a(p,q)| e^{i theta}. Applies a <- G^dagger a G, v <- v G.
void rotate(Operator& a, Operator& v, int p, int q) {
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = std::conj(apq) / r;  // e^{-i theta}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex gpp = c;
  const Complex gpq = s;
  const Complex gqp = -s * phase;
  const Complex gqq = c * phase;

  for (int k = 0; k < kDim; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
  for (int k = 0; k < kDim; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

EigenSystem hermitian_eigensystem(const Operator& h) {
  require_hermitian(h);

  // Symmetrize so rounding in the input cannot bias the rotations.
  Operator a = 0.5 * (h + h.adjoint());
  Operator v = Operator::Identity();

  const double scale = a.norm();
  const double target = 1e-14 * scale;
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (int p = 0; p < kDim - 1; ++p)
      for (int q = p + 1; q < kDim; ++q) rotate(a, v, p, q);
  }
  if (sweep == kMaxSweeps && off_diagonal_norm(a) > target)
    throw NumericalError("Jacobi eigensolver did not converge in 100 sweeps");

  std::array<int, kDim> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem es;
  for (int k = 0; k < kDim; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    es.vectors.col(k) = v.col(order[k]);
  }
  return es;
}

Operator expm_from_eigensystem(const EigenSystem& es, double dt) {
  Operator scaled = es.vectors;
  for (int k = 0; k < kDim; ++k) scaled.col(k) *= std::polar(1.0, -es.values[k] * dt);
  return scaled * es.vectors.adjoint();
}

Operator expm_hermitian(const Operator& h, double dt) {
  return expm_from_eigensystem(hermitian_eigensystem(h), dt);
}

std::size_t default_step_budget(const HamiltonianFn& hamiltonian_at, double t0, double t1) {
  constexpr int kProbes = 65;
  double norm = 0.0;
  for (int i = 0; i < kProbes; ++i) {
    const double t = t0 + (t1 - t0) * i / (kProbes - 1);
    norm = std::max(norm, max_abs(hamiltonian_at(t)));
  }
  const double budget = std::ceil(40.0 * (t1 - t0) * norm / (2.0 * std::numbers::pi));
  return std::max<std::size_t>(4000, static_cast<std::size_t>(budget));
}

void propagate_in_place(Operator& u, const HamiltonianFn& hamiltonian_at, double t0, double t1,
                        std::size_t steps) {
  const double dt = (t1 - t0) / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double mid = t0 + (static_cast<double>(i) + 0.5) * dt;
    u = expm_hermitian(hamiltonian_at(mid), dt) * u;
  }
}

void check_propagator(const Operator& u, std::size_t steps) {
  const double drift = unitarity_drift(u);
  if (!(drift <= kPropagatorFailure)) throw PropagatorError(drift, steps);
}

Operator evolve_propagator(const HamiltonianFn& hamiltonian_at, double t0, double t1,
                           std::size_t steps) {
  if (!(t1 > t0)) throw PreconditionError("evolve_propagator requires t1 > t0");
  if (steps < 1) throw PreconditionError("evolve_propagator requires at least one step");
  Operator u = Operator::Identity();
  propagate_in_place(u, hamiltonian_at, t0, t1, steps);
  check_propagator(u, steps);
  return u;
}

Operator evolve_propagator(const HamiltonianFn& hamiltonian_at, double t0, double t1) {
  if (!(t1 > t0)) throw PreconditionError("evolve_propagator requires t1 > t0");
  return evolve_propagator(hamiltonian_at, t0, t1, default_step_budget(hamiltonian_at, t0, t1));
}

Operator psd_sqrt(const Operator& m, double floor) {
  const EigenSystem es = hermitian_eigensystem(m);
  Operator scaled = es.vectors;
  for (int k = 0; k < kDim; ++k) {
    const double lambda = es.values[k] <= floor ? 0.0 : es.values[k];
    scaled.col(k) *= std::sqrt(lambda);
  }
  return scaled * es.vectors.adjoint();
}

Operator outer(const StateVector& a, const StateVector& b) { return a * b.adjoint(); }

}  // namespace circqft
