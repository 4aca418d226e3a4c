// SPDX-License-Identifier: Apache-2.0
#include "circqft/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "circqft/error.hpp"

namespace circqft {

using std::numbers::pi;

namespace {

constexpr double kInvNorm = 0.35355339059327376220;  // 1 / (2 sqrt 2)

bool is_quarter_pi(double phi) { return std::abs(phi - pi / 4) <= 1e-12; }

}  // namespace

FourierModes fourier_modes() {
  FourierModes m;
  for (int j = 0; j < kDim; ++j)
    for (int k = 0; k < kDim; ++k) {
      // Reduce jk mod 8 first so every amplitude comes from one of eight exact angles.
      const int r = (j * k) % kDim;
      m.psi[j](k) = std::polar(kInvNorm, pi * r / 4.0);
    }
  return m;
}

std::array<double, kDim> circulant_eigenvalues(const CirculantParams& p) {
  const Operator h = build_circulant(p);
  std::array<double, kDim> out{};
  for (int j = 0; j < kDim; ++j) {
    Complex sum = 0;
    for (int k = 0; k < kDim; ++k) sum += h(0, k) * std::polar(1.0, pi * ((j * k) % kDim) / 4.0);
    out[j] = sum.real();
  }
  return out;
}

OffsetSpectrum closed_form_offset_spectrum(double J, double J1, double d1, double d2, double d3) {
  OffsetSpectrum s;
  const double J2 = J * J;
  const double K2 = J1 * J1, K4 = K2 * K2;
  const double a2 = d1 * d1, a4 = a2 * a2, a6 = a4 * a2, a8 = a4 * a4;
  const double b2 = d2 * d2, b4 = b2 * b2, b6 = b4 * b2, b8 = b4 * b4;
  const double c2 = d3 * d3, c4 = c2 * c2, c6 = c4 * c2, c8 = c4 * c4;

  s.A = -16 * J2 - 4 * a2 - 4 * b2 - 4 * c2 - 8 * K2;
  s.B = 32 * J2 * a2 + 32 * J2 * b2 + 48 * J2 * c2 + 128 * J2 * K2 + 6 * a4 + 4 * a2 * b2 +
        4 * a2 * c2 + 16 * a2 * K2 + 6 * b4 + 4 * b2 * c2 + 24 * b2 * K2 + 6 * c4 + 8 * c2 * K2 +
        16 * K4;
  s.C = -16 * J2 * a4 - 32 * J2 * a2 * b2 - 128 * J2 * a2 * K2 - 16 * J2 * b4 -
        128 * J2 * b2 * K2 - 48 * J2 * c4 - 256 * J2 * K4 - 4 * a6 + 4 * a4 * b2 + 4 * a4 * c2 -
        8 * a4 * K2 + 4 * a2 * b4 - 40 * a2 * b2 * c2 + 4 * a2 * c4 - 32 * a2 * c2 * K2 - 4 * b6 +
        4 * b4 * c2 - 24 * b4 * K2 + 4 * b2 * c4 + 16 * b2 * c2 * K2 - 32 * b2 * K4 - 4 * c6 +
        8 * c4 * K2 - 32 * c2 * K4;
  s.D = 4 * a4 * b2 * c2 + 4 * a2 * b4 * c2 + 4 * a2 * b2 * c4 - 4 * a6 * b2 - 4 * a6 * c2 +
        6 * a4 * b4 + 6 * a4 * c4 - 4 * a2 * b6 - 4 * a2 * c6 - 4 * b6 * c2 + 6 * b4 * c4 -
        4 * b2 * c6 + 16 * b4 * K4 - 8 * c6 * K2 + 16 * c4 * K4 + 16 * J2 * c6 + 8 * b6 * K2 +
        16 * a2 * c4 * K2 - 24 * b4 * c2 * K2 + 24 * b2 * c4 * K2 - 32 * b2 * c2 * K4 +
        8 * a4 * b2 * K2 - 8 * a4 * c2 * K2 - 16 * a2 * b4 * K2 - 128 * J2 * c4 * K2 +
        256 * J2 * c2 * K4 + 16 * J2 * a4 * c2 - 32 * J2 * a2 * c4 + 16 * J2 * b4 * c2 -
        32 * J2 * b2 * c4 + 32 * J2 * a2 * b2 * c2 + 128 * J2 * a2 * c2 * K2 +
        128 * J2 * b2 * c2 * K2 + a8 + b8 + c8;

  const double A = s.A, B = s.B, C = s.C, D = s.D;
  s.p = (8 * B - 3) / 8;
  s.q = (-1 + 4 * B + 8 * C) / 8;
  s.Delta0 = B * B + 3 * C + 12 * D;
  s.Delta = 2 * B * B * B + 9 * B * C + 27 * D + 27 * C * C - 72 * B * D;
  s.Q = std::cbrt(0.5 * std::abs(s.Delta + std::sqrt(std::abs(s.Delta * s.Delta -
                                                                4 * s.Delta0 * s.Delta0 * s.Delta0))));
  if (s.Q == 0 || !std::isfinite(s.Q))
    throw FormulaDomainError("closed-form offset spectrum: Q = 0");
  s.S = 0.5 * std::sqrt(std::abs(-2 * s.p + (s.Q + s.Delta0 / s.Q)) / 3);
  if (s.S == 0 || !std::isfinite(s.S))
    throw FormulaDomainError("closed-form offset spectrum: S = 0");

  const double r1 = 0.5 * std::sqrt(std::abs(-4 * s.S * s.S - 2 * s.p + s.q / s.S));
  const double r2 = 0.5 * std::sqrt(std::abs(-4 * s.S * s.S - 2 * s.p - s.q / s.S));
  s.lambda_p = std::sqrt(std::abs(-A / 4 - s.S + r1));
  s.delta_p = std::sqrt(std::abs(-A / 4 - s.S - r1));
  s.mu_p = std::sqrt(std::abs(-A / 4 + s.S + r2));
  s.gamma_p = std::sqrt(std::abs(-A / 4 + s.S - r2));
  s.lambda_m = -s.lambda_p;
  s.delta_m = -s.delta_p;
  s.mu_m = -s.mu_p;
  s.gamma_m = -s.gamma_p;
  return s;
}

double mixing_angle(double Omega2, double Omega3, double J1, double J) {
  for (double v : {Omega2, Omega3, J1, J}) {
    if (!std::isfinite(v)) throw PreconditionError("mixing_angle: non-finite input");
    if (v < 0) throw PreconditionError("mixing_angle: inputs must be nonnegative");
  }
  if (J1 == 0 || J == 0) return pi / 2;
  return std::atan(Omega2 / (2 * J1) + Omega3 / (2 * J));
}

RotatingSpectrum closed_form_rotating_spectrum(const RotatingParams& p) {
  if (!is_quarter_pi(p.phi)) throw PreconditionError("closed-form rotating spectrum requires phi = pi/4");
  const double J = p.J, J1 = p.J1, O2 = p.Omega2, O3 = p.Omega3;
  const double a = (O3 - J) * (O3 - J) + J1 * J1 + O2 * O2;
  const double ra = std::sqrt(2 * (O3 - J) * (O3 - J) * (J1 - O2) * (J1 - O2));
  const double b = 5 * O3 * O3 + 2 * J * O3 + J * J + J1 * J1 + O2 * O2;
  const double rb = std::sqrt(2 * O3 * O3 * (9 * O2 * O2 + 2 * J1 * O2 + 9 * J1 * J1) +
                              2 * J * (J1 + O2) * (J1 + O2) * (2 * O3 + J));
  // a - ra and b - rb are nonnegative in exact arithmetic; clamp rounding.
  const double l0 = std::sqrt(a + ra), l2 = std::sqrt(std::max(0.0, a - ra));
  const double l4 = std::sqrt(b + rb), l6 = std::sqrt(std::max(0.0, b - rb));
  RotatingSpectrum s;
  s.Lambda = {l0, -l0, l2, -l2, l4, -l4, l6, -l6};
  s.kappa = mixing_angle(O2, O3, J1, J);
  s.alpha = pi / 4 - s.kappa;
  return s;
}

std::array<StateVector, kDim> rotating_eigenvectors(const RotatingParams& p) {
  if (!is_quarter_pi(p.phi)) throw PreconditionError("rotating eigenvectors require phi = pi/4");
  const double alpha = pi / 4 - mixing_angle(p.Omega2, p.Omega3, p.J1, p.J);
  auto out = fourier_modes().psi;
  for (int i = 0; i < kDim; ++i) {
    const Complex ph = std::polar(1.0, i % 2 == 0 ? -alpha : alpha);
    for (int k : {0, 1, 4, 5}) out[i](k) *= ph;
  }
  return out;
}

double kappa_rate(const RabiSchedule& s, double t) {
  validate(s);
  const double tm = s.t_max();
  if (!(t >= 0 && t <= tm)) throw PreconditionError("kappa_rate: t outside [0, t_max]");
  const Envelope e = envelope(t, tm);
  const double w = s.omega;
  const double s4 = e.sin2 * e.sin2;
  auto term = [&](double j0, double ups) {
    const double shifted = ups * e.sin2 - (j0 + ups);
    const double den = j0 * j0 * s4 + shifted * shifted;
    return w * j0 * (j0 + ups) * e.sin2wt / den;
  };
  return 0.5 * (term(s.J01, s.Upsilon0) + term(s.J0, s.Upsilon0p));
}

std::array<StateVector, kDim> rotating_spin_states(double phi) {
  const double r = std::numbers::sqrt2 / 2;
  const Complex down2 = std::polar(r, phi);
  std::array<StateVector, kDim> out;
  for (int i = 0; i < kDim; ++i) {
    const double sgn1 = (i >> 2) & 1 ? 1.0 : -1.0;
    const double sgn2 = (i >> 1) & 1 ? 1.0 : -1.0;
    const double sgn3 = i & 1 ? 1.0 : -1.0;
    // Single-spin amplitudes (down, up).
    const std::array<Complex, 2> q1 = {r, sgn1 * r};
    const std::array<Complex, 2> q2 = {down2, sgn2 * r};
    const std::array<Complex, 2> q3 = {r, sgn3 * r};
    for (int k = 0; k < kDim; ++k) out[i](k) = q1[(k >> 2) & 1] * q2[(k >> 1) & 1] * q3[k & 1];
  }
  return out;
}

std::array<int, kDim> greedy_assignment(const Operator& ov) {
  std::vector<std::tuple<double, int, int>> cand;
  cand.reserve(kDim * kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) cand.emplace_back(ov(i, j).real(), i, j);
  std::stable_sort(cand.begin(), cand.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  std::array<int, kDim> assign;
  assign.fill(-1);
  std::array<bool, kDim> used{};
  int placed = 0;
  for (const auto& [mag, i, j] : cand) {
    if (assign[i] >= 0 || used[j]) continue;
    assign[i] = j;
    used[j] = true;
    if (++placed == kDim) break;
  }
  return assign;
}

MatchedBasis match_eigenbasis(const Operator& h, const std::array<StateVector, kDim>& targets) {
  const EigenSystem es = hermitian_eigensystem(h);
  Operator ov;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) ov(i, j) = std::abs(targets[i].dot(es.vectors.col(j)));
  const auto assign = greedy_assignment(ov);
  MatchedBasis m;
  for (int i = 0; i < kDim; ++i) {
    StateVector v = es.vectors.col(assign[i]);
    const Complex o = targets[i].dot(v);
    if (std::abs(o) > 0) v *= std::conj(o) / std::abs(o);
    m.vectors[i] = v;
    m.values[i] = es.values[assign[i]];
    m.overlaps[i] = std::abs(o);
  }
  return m;
}

double min_gap(const std::array<double, kDim>& values) {
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double g = std::numeric_limits<double>::infinity();
  for (int k = 1; k < kDim; ++k) g = std::min(g, sorted[k] - sorted[k - 1]);
  return g;
}

BranchTracker::BranchTracker(const Operator& h) : min_gap_(std::numeric_limits<double>::infinity()) {
  const EigenSystem es = hermitian_eigensystem(h);
  for (int b = 0; b < kDim; ++b) {
    vectors_[b] = es.vectors.col(kDim - 1 - b);
    values_[b] = es.values[kDim - 1 - b];
  }
  note_gap(min_gap(values_), max_abs(h));
}

BranchTracker::BranchTracker(const std::array<StateVector, kDim>& vectors,
                             const std::array<double, kDim>& values, double h_norm)
    : vectors_(vectors), values_(values), min_gap_(std::numeric_limits<double>::infinity()) {
  note_gap(min_gap(values_), h_norm);
}

void BranchTracker::note_gap(double gap, double h_norm) {
  min_gap_ = std::min(min_gap_, gap);
  if (gap < 1e-9 * h_norm) degenerate_ = true;
}

void BranchTracker::advance(const Operator& h) {
  const EigenSystem es = hermitian_eigensystem(h);
  Operator ov;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) ov(i, j) = std::abs(vectors_[i].dot(es.vectors.col(j)));
  const auto assign = greedy_assignment(ov);
  for (int i = 0; i < kDim; ++i) {
    StateVector v = es.vectors.col(assign[i]);
    const Complex o = vectors_[i].dot(v);
    if (std::abs(o) > 0) v *= std::conj(o) / std::abs(o);
    vectors_[i] = v;
    values_[i] = es.values[assign[i]];
  }
  note_gap(min_gap(es.values), max_abs(h));
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t points) {
  if (points < 2) throw PreconditionError("grid needs at least two points");
  std::vector<double> g(points);
  const double n = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = t0 + (t1 - t0) * (static_cast<double>(i) / n);
  g.back() = t1;
  return g;
}

SpectrumBranches track_spectrum(const HamiltonianFn& hamiltonian_at, const std::vector<double>& grid) {
  if (grid.size() < 2) throw PreconditionError("track_spectrum needs at least two grid points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw PreconditionError("track_spectrum grid must be strictly increasing");

  SpectrumBranches out;
  out.times = grid;
  out.values.reserve(grid.size());
  out.vectors.reserve(grid.size());
  out.min_gap = std::numeric_limits<double>::infinity();

  auto record = [&](const BranchTracker& tr, const Operator& h, std::size_t idx) {
    out.values.push_back(tr.values());
    out.vectors.push_back(tr.vectors());
    const double g = min_gap(tr.values());
    if (g < out.min_gap) {
      out.min_gap = g;
      out.min_gap_index = idx;
    }
    if (g < 1e-9 * max_abs(h)) out.degenerate = true;
  };

  Operator h = hamiltonian_at(grid[0]);
  BranchTracker tracker(h);
  record(tracker, h, 0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    h = hamiltonian_at(grid[i]);
    tracker.advance(h);
    record(tracker, h, i);
  }
  if (out.degenerate) {
    std::ostringstream os;
    os << "degenerate eigenvalues: min gap " << out.min_gap << " at t = " << grid[out.min_gap_index]
       << " ms; branch labels there are arbitrary";
    out.warning = os.str();
  }
  return out;
}

AdiabaticityReport adiabaticity_report(const SpectrumBranches& b) {
  const std::size_t n = b.times.size();
  if (n < 2) throw PreconditionError("adiabaticity_report needs at least two samples");
  AdiabaticityReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();

  auto derivative = [&](std::size_t t, int i) -> StateVector {
    const std::size_t lo = t == 0 ? 0 : t - 1;
    const std::size_t hi = t + 1 == n ? t : t + 1;
    return (b.vectors[hi][i] - b.vectors[lo][i]) / (b.times[hi] - b.times[lo]);
  };

  for (int i = 0; i < kDim; ++i)
    for (int j = i + 1; j < kDim; ++j) {
      PairMargin pm;
      pm.i = i;
      pm.j = j;
      pm.gap.resize(n);
      pm.coupling.resize(n);
      pm.margin.resize(n);
      pm.min_margin = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < n; ++t) {
        const double gap = std::abs(b.values[t][i] - b.values[t][j]);
        const double c = std::abs(derivative(t, i).dot(b.vectors[t][j]));
        pm.gap[t] = gap;
        pm.coupling[t] = c;
        pm.margin[t] = c > 0 ? gap / c : std::numeric_limits<double>::infinity();
        if (pm.margin[t] < pm.min_margin) pm.min_margin = pm.margin[t];
        if (pm.margin[t] < rep.min_margin) {
          rep.min_margin = pm.margin[t];
          rep.worst_i = i;
          rep.worst_j = j;
          rep.worst_index = t;
        }
      }
      rep.pairs.push_back(std::move(pm));
    }
  return rep;
}

}  // namespace circqft
