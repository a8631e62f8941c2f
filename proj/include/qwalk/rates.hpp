#ifndef QWALK_RATES_HPP
#define QWALK_RATES_HPP

// Polar decomposition psi = sqrt(rho) e^{iS} and the jump-rate field
//   nu_k(t,j) = h_kj sqrt(rho_k / rho_j) (1 + sin beta_kj),
//   beta_kj   = Arg H_kj + S_j - S_k,
// for the transition j -> k. Together with the continuity equation
//   d rho_k/dt = sum_j rho_j nu_k(j) - rho_k nu_j(k)
// these rates reproduce rho = |psi|^2 for a Schroedinger solution psi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "qwalk/fields.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/line_rates.hpp"
#include "qwalk/quantum.hpp"

namespace qwalk::rates {

struct PolarState {
  DensityField density;
  PhaseField phase;
};

inline PolarState polar_decompose(const WaveFunction& psi, double density_floor = kDefaultDensityFloor,
                                  int first_label = 0) {
  PolarState out;
  out.density.t = psi.t;
  out.density.first_label = first_label;
  out.phase.t = psi.t;
  const std::size_t n = psi.size();
  out.density.rho.resize(n);
  out.phase.s_values.assign(n, 0.0);
  out.phase.defined.assign(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = std::norm(psi.amplitudes[k]);
    out.density.rho[k] = r;
    if (r > density_floor) {
      double s = std::arg(psi.amplitudes[k]);
      if (s <= -std::numbers::pi) s = std::numbers::pi;
      out.phase.s_values[k] = s;
      out.phase.defined[k] = true;
    }
  }
  return out;
}

inline double beta(const Hamiltonian& h, const PhaseField& s, std::size_t k, std::size_t j) {
  return std::arg(h(k, j)) + s.s_values[j] - s.s_values[k];
}

namespace detail {

inline void check_dimensions(const Hamiltonian& h, const DensityField& rho, const PhaseField& s) {
  if (rho.size() != h.size() || s.s_values.size() != h.size() || s.defined.size() != h.size())
    throw ValidationError("rates: field dimensions do not match the Hamiltonian");
}

inline double rate(const Hamiltonian& h, const DensityField& rho, const PhaseField& s, std::size_t from,
                   std::size_t to, double density_floor, std::size_t& masked) {
  const double source = rho.rho[from];
  const double target = rho.rho[to];
  if (!(source > density_floor) || !(target > density_floor)) return 0.0;
  if (!s.defined[from] || !s.defined[to]) {
    ++masked;
    return 0.0;
  }
  return std::abs(h(to, from)) * std::sqrt(target / source) * (1.0 + std::sin(beta(h, s, to, from)));
}

}  // namespace detail

/// Rates on every directed edge of g. For edge e = {a, b} (a < b) the result
/// holds a -> b at index 2e and b -> a at index 2e + 1.
inline RateField gm_rates(const Hamiltonian& h, const Graph& g, const DensityField& rho, const PhaseField& s,
                          double density_floor = kDefaultDensityFloor) {
  detail::check_dimensions(h, rho, s);
  RateField out;
  out.t = rho.t;
  out.rates.reserve(2 * g.edges.size());
  for (const Edge& e : g.edges) {
    out.rates.push_back({e.a, e.b, detail::rate(h, rho, s, e.a, e.b, density_floor, out.masked)});
    out.rates.push_back({e.b, e.a, detail::rate(h, rho, s, e.b, e.a, density_floor, out.masked)});
  }
  return out;
}

inline RateField gm_rates(const Hamiltonian& h, const DensityField& rho, const PhaseField& s,
                          double density_floor = kDefaultDensityFloor) {
  return gm_rates(h, graph::derive_graph(h), rho, s, density_floor);
}

// Largest violations of the edge constraints over edges whose endpoints both
// carry density above the floor:
//   symmetric:      rho_j nu_k(j) + rho_k nu_j(k) = 2 h_kj sqrt(rho_k rho_j)
//   antisymmetric:  rho_j nu_k(j) - rho_k nu_j(k) = 2 h_kj sqrt(rho_k rho_j) sin beta_kj
// and the largest |net relative flux| (bounded by 1).
struct ConstraintResiduals {
  double symmetric = 0.0;
  double antisymmetric = 0.0;
  double max_relative_flux = 0.0;
};

inline ConstraintResiduals constraint_residuals(const Hamiltonian& h, const Graph& g, const DensityField& rho,
                                                const PhaseField& s, const RateField& nu,
                                                double density_floor = kDefaultDensityFloor) {
  if (nu.rates.size() != 2 * g.edges.size()) throw ValidationError("constraint_residuals: rate field/graph mismatch");
  ConstraintResiduals r;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const std::size_t j = g.edges[e].a;
    const std::size_t k = g.edges[e].b;
    const double rj = rho.rho[j];
    const double rk = rho.rho[k];
    if (!(rj > density_floor && rk > density_floor)) continue;
    const double into_k = rj * nu.rates[2 * e].nu;      // j -> k
    const double into_j = rk * nu.rates[2 * e + 1].nu;  // k -> j
    const double gm = 2.0 * std::abs(h(k, j)) * std::sqrt(rk * rj);
    r.symmetric = std::max(r.symmetric, std::abs(into_k + into_j - gm));
    r.antisymmetric = std::max(r.antisymmetric, std::abs(into_k - into_j - gm * std::sin(beta(h, s, k, j))));
    if (const double total = into_k + into_j; total > 0.0)
      r.max_relative_flux = std::max(r.max_relative_flux, std::abs(into_k - into_j) / total);
  }
  return r;
}

namespace detail {

inline double snapshot_spacing(std::span<const WaveFunction> snaps) {
  if (snaps.size() < 3) throw ValidationError("residual: at least three snapshots are required");
  const double dt = snaps[1].t - snaps[0].t;
  if (!(dt > 0.0)) throw ValidationError("residual: snapshot times must increase");
  for (std::size_t n = 1; n < snaps.size(); ++n)
    if (std::abs((snaps[n].t - snaps[n - 1].t) - dt) > 1.0e-9 * std::max(1.0, std::abs(snaps[n].t)))
      throw ValidationError("residual: snapshots must be uniformly spaced");
  return dt;
}

}  // namespace detail

/// max over vertices and interior times of
///   | central-difference d rho_k/dt - sum_j 2 h_kj sqrt(rho_k rho_j) sin beta_kj |.
inline double continuity_residual(const Hamiltonian& h, std::span<const WaveFunction> snaps) {
  const double dt = detail::snapshot_spacing(snaps);
  const Graph g = graph::derive_graph(h);
  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < snaps.size(); ++n) {
    if (snaps[n].size() != h.size()) throw ValidationError("continuity_residual: size mismatch");
    const PolarState p = polar_decompose(snaps[n], 0.0);
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double drho = (std::norm(snaps[n + 1].amplitudes[k]) - std::norm(snaps[n - 1].amplitudes[k])) / (2.0 * dt);
      double rhs = 0.0;
      const double rk = p.density.rho[k];
      if (rk > 0.0)
        for (std::size_t j : g.neighbors[k]) {
          const double rj = p.density.rho[j];
          if (rj > 0.0) rhs += 2.0 * std::abs(h(k, j)) * std::sqrt(rk * rj) * std::sin(beta(h, p.phase, k, j));
        }
      worst = std::max(worst, std::abs(drho - rhs));
    }
  }
  return worst;
}

inline double wrap_to_pi(double a) {
  return a - 2.0 * std::numbers::pi * std::round(a / (2.0 * std::numbers::pi));
}

/// Phase-equation residual: on vertices with rho > 10 * density_floor at all
/// three stencil times, compares the unwrapped central difference of S_k with
///   -H_kk - sum_j h_kj sqrt(rho_j / rho_k) cos beta_kj.
inline double phase_residual(const Hamiltonian& h, std::span<const WaveFunction> snaps,
                             double density_floor = kDefaultDensityFloor) {
  const double dt = detail::snapshot_spacing(snaps);
  const Graph g = graph::derive_graph(h);
  const double floor = 10.0 * density_floor;
  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < snaps.size(); ++n) {
    const PolarState prev = polar_decompose(snaps[n - 1], 0.0);
    const PolarState cur = polar_decompose(snaps[n], 0.0);
    const PolarState next = polar_decompose(snaps[n + 1], 0.0);
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (!(prev.density.rho[k] > floor && cur.density.rho[k] > floor && next.density.rho[k] > floor)) continue;
      const double s = cur.phase.s_values[k];
      // nearest-multiple-of-2pi continuation around the middle sample
      const double before = s + wrap_to_pi(prev.phase.s_values[k] - s);
      const double after = s + wrap_to_pi(next.phase.s_values[k] - s);
      const double ds = (after - before) / (2.0 * dt);
      double rhs = -h(k, k).real();
      for (std::size_t j : g.neighbors[k]) {
        const double rj = cur.density.rho[j];
        if (rj > 0.0) rhs -= std::abs(h(k, j)) * std::sqrt(rj / cur.density.rho[k]) * std::cos(beta(h, cur.phase, k, j));
      }
      worst = std::max(worst, std::abs(ds - rhs));
    }
  }
  return worst;
}

}  // namespace qwalk::rates

#endif  // QWALK_RATES_HPP
