// SPDX-License-Identifier: Apache-2.0
#include "circqft/hamiltonians.hpp"

#include <algorithm>
#include <cmath>

#include "circqft/error.hpp"

namespace circqft {

namespace {

Complex e(double angle) { return std::polar(1.0, angle); }

void validate_nonnegative(double v, const char* name) {
  if (!std::isfinite(v)) throw PreconditionError(std::string(name) + " is not finite");
  if (v < 0) throw PreconditionError(std::string(name) + " must be nonnegative");
}

}  // namespace

int spin_sign(int basis_index, int qubit) {
  const int bit = (basis_index >> (3 - qubit)) & 1;
  return bit ? -1 : 1;
}

Operator build_full(const FullParams& p) {
  const double x1 = p.phi23 + p.phi32, x2 = p.phi13 + p.phi31, x3 = p.phi12 + p.phi21;
  const double x4 = p.phi23 - p.phi32, x5 = p.phi13 - p.phi31, x6 = p.phi12 - p.phi21;
  const double x7 = p.phi1 + p.phi2 + p.phi3, x8 = p.phi1 + p.phi2 - p.phi3;
  const double x9 = p.phi1 - p.phi2 + p.phi3, x10 = p.phi1 - p.phi2 - p.phi3;

  const Complex a = p.Omega1 * e(p.theta1);
  const Complex b = p.Omega2 * e(p.theta2);
  const Complex c = p.Omega3 * e(p.theta3);

  // Upper triangle; the lower triangle follows by Hermiticity.
  Operator h = Operator::Zero();
  h(0, 1) = c;
  h(0, 2) = b;
  h(0, 3) = p.J2 * e(-x1);
  h(0, 4) = a;
  h(0, 5) = p.J3 * e(-x2);
  h(0, 6) = p.J1 * e(-x3);
  h(0, 7) = p.J * e(-x7);
  h(1, 2) = p.J2 * e(-x4);
  h(1, 3) = b;
  h(1, 4) = p.J3 * e(-x5);
  h(1, 5) = a;
  h(1, 6) = p.J * e(-x8);
  h(1, 7) = p.J1 * e(-x3);
  h(2, 3) = c;
  h(2, 4) = p.J1 * e(-x6);
  h(2, 5) = p.J * e(-x9);
  h(2, 6) = a;
  h(2, 7) = p.J3 * e(-x2);
  h(3, 4) = p.J * e(-x10);
  h(3, 5) = p.J1 * e(-x6);
  h(3, 6) = p.J3 * e(-x5);
  h(3, 7) = a;
  h(4, 5) = c;
  h(4, 6) = b;
  h(4, 7) = p.J2 * e(-x1);
  h(5, 6) = p.J2 * e(-x4);
  h(5, 7) = b;
  h(6, 7) = c;
  for (int r = 0; r < kDim; ++r)
    for (int col = r + 1; col < kDim; ++col) h(col, r) = std::conj(h(r, col));
  return h;
}

Operator build_circulant(const CirculantParams& p) {
  if (p.variant != 1 && p.variant != 2)
    throw PreconditionError("circulant variant must be 1 or 2");
  if (p.variant == 1 && p.Omega1 != 0)
    throw PreconditionError("circulant variant 1 requires Omega1 = 0");
  const Complex ep = e(p.phi), em = e(-p.phi);
  const std::array<Complex, kDim> row = {0.0,   p.J * ep, p.J1 * ep, p.J * em,
                                         p.Omega1, p.J * ep, p.J1 * em, p.J * em};
  Operator h;
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c) h(r, c) = row[(c - r + kDim) % kDim];
  return h;
}

Operator build_offset(const OffsetParams& p) {
  Operator h = Operator::Zero();
  for (int k = 0; k < kDim; ++k)
    h(k, k) = spin_sign(k, 1) * p.Delta1 + spin_sign(k, 2) * p.Delta2 + spin_sign(k, 3) * p.Delta3;
  return h;
}

FullParams rotating_assignment(const RotatingParams& p) {
  FullParams f;
  f.J1 = p.J1;
  f.J2 = p.Omega3;
  f.J3 = p.Omega3;
  f.J = p.J;
  f.Omega2 = p.Omega2;
  f.Omega3 = p.Omega3;
  f.theta2 = p.phi;
  f.theta3 = p.phi;
  f.phi21 = p.phi;
  f.phi32 = p.phi;
  f.phi31 = -p.phi;
  f.phi3 = p.phi;
  return f;
}

FullParams circulant_assignment(const CirculantParams& p) {
  if (p.variant != 1 && p.variant != 2)
    throw PreconditionError("circulant variant must be 1 or 2");
  FullParams f = rotating_assignment({p.J, p.J1, p.J1, p.J, p.phi});
  if (p.variant == 2) f.Omega1 = p.Omega1;
  return f;
}

Operator build_rotating(const RotatingParams& p) {
  validate_nonnegative(p.J, "J");
  validate_nonnegative(p.J1, "J1");
  validate_nonnegative(p.Omega2, "Omega2");
  validate_nonnegative(p.Omega3, "Omega3");
  return build_full(rotating_assignment(p));
}

Operator build_counter_driving(double kappa_rate) {
  Operator h = Operator::Zero();
  h(0, 4) = h(4, 0) = h(1, 5) = h(5, 1) = -kappa_rate;
  return h;
}

CirculantCheck is_circulant(const Operator& m, double tol) {
  double dev = 0;
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c)
      dev = std::max(dev, std::abs(m(r, c) - m(0, (c - r + kDim) % kDim)));
  return {dev <= tol, dev};
}

Operator cyclic_shift() {
  Operator p = Operator::Zero();
  for (int k = 0; k < kDim; ++k) p((k + 1) % kDim, k) = 1.0;
  return p;
}

}  // namespace circqft
