// SPDX-License-Identifier: Apache-2.0
#include "circqft/ioncoup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circqft/error.hpp"

namespace circqft {

double lamb_dicke(double b, double k, double M, double Omega_n) {
  if (!(M > 0)) throw PreconditionError("ion mass must be positive");
  if (!(Omega_n > 0)) throw PreconditionError("mode frequency must be positive");
  return b * k * std::sqrt(kHbar / (2.0 * M * Omega_n));
}

namespace {

double denominator(double nu, double Omega, std::size_t mode) {
  const double d = nu * nu - Omega * Omega;
  if (d == 0) {
    std::ostringstream os;
    os << "drive frequency is resonant with mode " << mode << " (Omega = " << Omega << ")";
    throw PreconditionError(os.str());
  }
  return d;
}

void check_lengths(std::size_t n, std::size_t a, std::size_t b) {
  if (a != n || b != n) throw PreconditionError("per-mode lists must have equal length");
}

}  // namespace

double pairwise_coupling(const std::vector<double>& Jj, const std::vector<double>& Jp, double nu,
                         const std::vector<double>& Omega) {
  check_lengths(Omega.size(), Jj.size(), Jp.size());
  double sum = 0;
  for (std::size_t n = 0; n < Omega.size(); ++n) sum += Jj[n] * Jp[n] / denominator(nu, Omega[n], n);
  return sum;
}

double trilinear_coupling(const std::vector<double>& Jj, const std::vector<double>& Jp,
                          const std::vector<double>& h, double nu, const std::vector<double>& Omega) {
  check_lengths(Omega.size(), Jj.size(), Jp.size());
  if (h.size() != Omega.size()) throw PreconditionError("per-mode lists must have equal length");
  double sum = 0;
  for (std::size_t n = 0; n < Omega.size(); ++n)
    sum += Jj[n] * Jp[n] * h[n] / denominator(nu, Omega[n], n);
  return sum;
}

namespace {

void validate_modes(const ModeSet& m) {
  if (m.eta.size() != 3) throw PreconditionError("mode set needs Lamb-Dicke rows for three ions");
  for (const auto& row : m.eta)
    if (row.size() != m.Omega.size()) throw PreconditionError("Lamb-Dicke row length mismatch");
  for (double w : m.Omega)
    if (!(w > 0)) throw PreconditionError("mode frequencies must be positive");
}

std::vector<double> times(const std::vector<double>& v, double c) {
  std::vector<double> out(v);
  for (double& x : out) x *= c;
  return out;
}

}  // namespace

IonCouplings effective_couplings(const ModeSet& modes, const DriveParams& drive) {
  validate_modes(modes);
  const auto j1 = times(modes.eta[0], drive.Omega_x);
  const auto j2 = times(modes.eta[1], drive.Omega_x);
  const auto j3 = times(modes.eta[2], drive.Omega_z);
  const auto h = times(modes.eta[2], drive.Omega_alpha);
  IonCouplings c;
  c.J1 = pairwise_coupling(j1, j2, drive.nu, modes.Omega);
  c.J2 = pairwise_coupling(j2, j3, drive.nu, modes.Omega);
  c.J3 = pairwise_coupling(j1, j3, drive.nu, modes.Omega);
  c.J = trilinear_coupling(j1, j2, h, drive.nu, modes.Omega);
  return c;
}

double circulant_residual(const IonCouplings& c) {
  const double scale = std::max({std::abs(c.J2), std::abs(c.J3), std::abs(c.J)});
  if (scale == 0) return 0;
  return std::max({std::abs(c.J2 - c.J3), std::abs(c.J2 - c.J), std::abs(c.J3 - c.J)}) / scale;
}

std::vector<std::string> ion_advisories(const ModeSet& modes, const DriveParams& drive) {
  std::vector<std::string> out;
  for (std::size_t ion = 0; ion < modes.eta.size(); ++ion)
    for (std::size_t n = 0; n < modes.eta[ion].size(); ++n)
      if (std::abs(modes.eta[ion][n]) > 0.3) {
        std::ostringstream os;
        os << "Lamb-Dicke parameter of ion " << ion + 1 << " mode " << n << " is "
           << modes.eta[ion][n] << " (> 0.3)";
        out.push_back(os.str());
      }
  const double rate = std::max({std::abs(drive.Omega_x), std::abs(drive.Omega_z), std::abs(drive.Omega_alpha)});
  for (std::size_t n = 0; n < modes.Omega.size(); ++n) {
    double eta_max = 0;
    for (const auto& row : modes.eta) eta_max = std::max(eta_max, std::abs(row[n]));
    const double detuning = std::abs(modes.Omega[n] - drive.nu);
    if (detuning < 10 * eta_max * rate) {
      std::ostringstream os;
      os << "drive is within 10x the spin-phonon rate of mode " << n << " (|Omega - nu| = "
         << detuning << ")";
      out.push_back(os.str());
    }
  }
  out.push_back("coupling sums are reported in rad/ms by convention; the sums carry no explicit normalization");
  return out;
}

CirculantPointResult circulant_point_search(const ModeSet& modes, const DriveParams& drive) {
  validate_modes(modes);
  CirculantPointResult r;
  r.unscaled = effective_couplings(modes, drive);
  r.residual_unscaled = circulant_residual(r.unscaled);
  r.advisories = ion_advisories(modes, drive);

  // Bilinear terms go as c^2 and the trilinear one as c^3.
  auto at = [&](double c) {
    IonCouplings s = r.unscaled;
    s.J1 *= c * c;
    s.J2 *= c * c;
    s.J3 *= c * c;
    s.J *= c * c * c;
    return s;
  };
  auto f = [&](double logc) { return circulant_residual(at(std::exp(logc))); };

  // Coarse scan first: the residual is not unimodal in general.
  const double lo = std::log(1e-3), hi = std::log(1e3);
  constexpr int kScan = 121;
  double best_x = 0, best_f = f(0);
  for (int i = 0; i < kScan; ++i) {
    const double x = lo + (hi - lo) * i / (kScan - 1);
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double step = (hi - lo) / (kScan - 1);
  double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  const double xg = f1 < f2 ? x1 : x2;
  if (std::min(f1, f2) < best_f) {
    best_f = std::min(f1, f2);
    best_x = xg;
  }

  r.scale = std::exp(best_x);
  r.couplings = at(r.scale);
  r.residual = best_f;
  r.params.variant = 1;
  r.params.J = std::abs(r.couplings.J);
  r.params.J1 = std::abs(r.couplings.J1);
  return r;
}

}  // namespace circqft
