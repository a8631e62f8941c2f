#ifndef QWALK_GUIDED_HPP
#define QWALK_GUIDED_HPP

// Guided swarm: walkers jump along the edges of the graph of H with the exact
// rates nu computed from a concurrently integrated wave function. No empirical
// feedback, no transition array, no dummy trajectories.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "qwalk/fields.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/quantum.hpp"
#include "qwalk/random.hpp"
#include "qwalk/rates.hpp"
#include "qwalk/swarm.hpp"

namespace qwalk::ensemble {

inline constexpr double kGuidedMaxSubstep = 0.01;

// Largest-remainder apportionment of n walkers to the weights rho.
inline std::vector<std::int64_t> apportion(const std::vector<double>& rho, std::int64_t n) {
  const double total = std::accumulate(rho.begin(), rho.end(), 0.0);
  std::vector<std::int64_t> counts(rho.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double exact = static_cast<double>(n) * rho[k] / total;
    counts[k] = static_cast<std::int64_t>(std::floor(exact));
    assigned += counts[k];
    remainders.push_back({exact - std::floor(exact), k});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % remainders.size()].second];
  return counts;
}

namespace detail {

struct JumpTable {
  // outgoing[j] lists (target, cumulative probability) for walkers at j
  std::vector<std::vector<std::pair<std::size_t, double>>> outgoing;
  std::uint64_t clamped = 0;
};

inline JumpTable jump_table(const RateField& nu, std::size_t vertices, double tau) {
  JumpTable t;
  t.outgoing.resize(vertices);
  std::vector<double> total(vertices, 0.0);
  for (const auto& r : nu.rates) total[r.from] += r.nu;
  std::vector<double> scale(vertices, tau);
  for (std::size_t j = 0; j < vertices; ++j)
    if (tau * total[j] > 1.0) {
      scale[j] = 1.0 / total[j];
      ++t.clamped;
    }
  std::vector<double> running(vertices, 0.0);
  for (const auto& r : nu.rates) {
    if (r.nu <= 0.0) continue;
    running[r.from] += scale[r.from] * r.nu;
    t.outgoing[r.from].push_back({r.to, running[r.from]});
  }
  return t;
}

}  // namespace detail

/// Guided run on the graph of h from psi0; cfg.half_width is not used,
/// densities are labelled with h's (contiguous) labels.
inline RunResult run_guided(const Hamiltonian& h, const WaveFunction& psi0, const SimConfig& cfg,
                            double density_floor = kDefaultDensityFloor) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate_common();
  const Graph g = graph::derive_graph(h);
  if (psi0.size() != h.size()) throw ValidationError("run_guided: state and Hamiltonian sizes differ");
  quantum::require_unit_norm(psi0);
  if (!h.contiguous_labels()) throw ValidationError("run_guided: vertex labels must be contiguous");

  const std::size_t substeps = static_cast<std::size_t>(std::ceil(cfg.tau / kGuidedMaxSubstep - 1.0e-9));
  const double dt = cfg.tau / static_cast<double>(substeps);
  quantum::check_step(h, dt);

  const int first_label = h.labels()[0];
  const std::size_t s = h.size();
  RunResult out;
  out.config = cfg;
  out.config.mode = Mode::guided;

  WaveFunction psi = psi0;
  psi.t = 0.0;
  std::vector<std::size_t> where;
  where.reserve(static_cast<std::size_t>(cfg.n_tr));
  {
    std::vector<double> rho0(s);
    for (std::size_t k = 0; k < s; ++k) rho0[k] = std::norm(psi.amplitudes[k]);
    const auto counts = apportion(rho0, cfg.n_tr);
    for (std::size_t k = 0; k < s; ++k) where.insert(where.end(), static_cast<std::size_t>(counts[k]), k);
  }

  const auto density = [&](double t) {
    DensityField d;
    d.t = t;
    d.first_label = first_label;
    d.rho.assign(s, 0.0);
    for (std::size_t k : where) d.rho[k] += 1.0;
    for (double& v : d.rho) v /= static_cast<double>(cfg.n_tr);
    return d;
  };
  const auto record_paths = [&](double t) {
    for (std::size_t k = 0; k < std::min<std::size_t>(cfg.dump_paths, where.size()); ++k)
      out.paths.push_back({t, k, h.labels()[where[k]]});
  };

  std::mt19937_64 rng(cfg.seed);
  quantum::Rk4Stepper stepper(h);
  const std::int64_t steps = cfg.n_steps();
  const std::int64_t stride = cfg.snapshot_stride();
  out.snapshots.push_back(density(0.0));
  record_paths(0.0);

  for (std::int64_t n = 1; n <= steps; ++n) {
    const rates::PolarState polar = rates::polar_decompose(psi, density_floor, first_label);
    const RateField nu = rates::gm_rates(h, g, polar.density, polar.phase, density_floor);
    out.diagnostics.masked_edges += nu.masked;
    const detail::JumpTable table = detail::jump_table(nu, s, cfg.tau);
    out.diagnostics.clamp_events += table.clamped;

    for (std::size_t w = 0; w < where.size(); ++w) {
      const double u = cfg.threads <= 1 ? uniform01(rng)
                                        : keyed_uniform01(cfg.seed, static_cast<std::uint64_t>(n - 1), w);
      for (const auto& [target, cumulative] : table.outgoing[where[w]])
        if (u < cumulative) {
          where[w] = target;
          break;
        }
    }

    for (std::size_t k = 0; k < substeps; ++k) stepper.step(std::span<Complex>(psi.amplitudes), dt);
    psi.t = static_cast<double>(n) * cfg.tau;
    if (const double drift = std::abs(psi.norm_squared() - 1.0); drift > quantum::kNormTolerance)
      throw IntegrationError("run_guided: norm drift " + std::to_string(drift));

    if (n % stride == 0 || n == steps) out.snapshots.push_back(density(psi.t));
    record_paths(psi.t);
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace qwalk::ensemble

#endif  // QWALK_GUIDED_HPP
