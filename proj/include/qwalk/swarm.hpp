#ifndef QWALK_SWARM_HPP
#define QWALK_SWARM_HPP

// Autonomous swarm simulator on the line [-L, L].
//
// Each step, with tau the time step and N the number of trajectories:
//   1. estimate rho_emp(t, .) from the configuration array;
//   2. move every trajectory by -1, 0, +1 with probabilities tau*mu_emp,
//      1 - tau*(mu_emp + lambda_emp), tau*lambda_emp at its site;
//   3. estimate rho_emp(t + tau, .) from the moved array;
//   4. horror vacui: for every x with rho_emp(t,x) > 0 and rho_emp(t+tau,x) = 0
//      set l_{x-1} = 1, m_{x+1} = 1, (m_x, l_x) = (0, 0);
//   5. put trajectory j back on site j - L (j = 0..2L, the dummies).
//
// The simulator only ever reads its own configuration and transition arrays.
// It does not include the Bessel or Schroedinger code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qwalk/error.hpp"
#include "qwalk/fields.hpp"
#include "qwalk/line_rates.hpp"
#include "qwalk/random.hpp"

namespace qwalk::ensemble {

enum class Mode { autonomous, guided };

inline const char* to_string(Mode m) { return m == Mode::autonomous ? "autonomous" : "guided"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "autonomous") return Mode::autonomous;
  if (s == "guided") return Mode::guided;
  throw ValidationError("unknown mode '" + s + "' (expected autonomous|guided)");
}

struct SimConfig {
  std::int64_t n_tr = 50000;
  double tau = 0.05;
  int half_width = 150;
  double t_max = 100.0;
  std::uint64_t seed = 1;
  Mode mode = Mode::autonomous;
  bool include_dummies_in_density = true;
  double snapshot_every = 0.25;  // multiple of tau
  std::size_t dump_paths = 0;    // first K non-dummy trajectories
  unsigned threads = 1;          // > 1 switches to counter-based draws

  std::size_t site_count() const { return 2 * static_cast<std::size_t>(half_width) + 1; }
  std::size_t dummy_count() const { return site_count(); }

  std::int64_t n_steps() const { return multiple_of_tau(t_max, "t_max"); }
  std::int64_t snapshot_stride() const { return std::max<std::int64_t>(1, multiple_of_tau(snapshot_every, "snapshot_every")); }

  // Checks common to both modes; the autonomous mode also needs validate().
  void validate_common() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("config: tau must be > 0");
    if (n_tr < 1) throw ValidationError("config: n_tr must be >= 1");
    if (threads < 1) throw ValidationError("config: threads must be >= 1");
    n_steps();
    snapshot_stride();
  }

  void validate() const {
    if (half_width < 1) throw ValidationError("config: half_width must be >= 1");
    validate_common();
    if (n_tr <= static_cast<std::int64_t>(site_count()))
      throw ValidationError("config: n_tr must exceed 2L+1 = " + std::to_string(site_count()));
    if (dump_paths > static_cast<std::size_t>(n_tr) - dummy_count())
      throw ValidationError("config: dump_paths exceeds the number of non-dummy trajectories");
  }

 private:
  std::int64_t multiple_of_tau(double span, const char* what) const {
    if (!(span >= 0.0) || !std::isfinite(span)) throw ValidationError(std::string("config: ") + what + " must be >= 0");
    const double n = std::round(span / tau);
    if (std::abs(n * tau - span) > 1.0e-9 * std::max(1.0, span))
      throw ValidationError(std::string("config: ") + what + " must be a multiple of tau");
    return static_cast<std::int64_t>(n);
  }
};

struct Diagnostics {
  std::uint64_t clamp_events = 0;   // site-steps where tau*(lambda+mu) > 1 was scaled down
  std::uint64_t boundary_hits = 0;  // moves that would have left [-L, L]
  std::uint64_t crossings = 0;      // horror-vacui triggers
  std::uint64_t masked_edges = 0;   // guided mode: rates zeroed for undefined phases
};

struct EnsembleState {
  double t = 0.0;
  std::int64_t step_index = 0;
  std::vector<int> positions;  // configuration array, signed sites
  TransitionFlags flags;
  std::mt19937_64 rng;
  Diagnostics diagnostics;
  std::vector<int> last_crossings;  // sites that triggered horror vacui in the last step
};

/// Trajectories 0..2L sit one per site (dummies), all others at the origin.
inline EnsembleState init(const SimConfig& cfg) {
  cfg.validate();
  const int L = cfg.half_width;
  EnsembleState s;
  s.positions.assign(static_cast<std::size_t>(cfg.n_tr), 0);
  for (int j = 0; j <= 2 * L; ++j) s.positions[static_cast<std::size_t>(j)] = j - L;
  s.flags = TransitionFlags::outward(L);
  s.rng.seed(cfg.seed);
  return s;
}

inline std::vector<std::int64_t> site_counts(const std::vector<int>& positions, const SimConfig& cfg) {
  const int L = cfg.half_width;
  std::vector<std::int64_t> counts(cfg.site_count(), 0);
  const std::size_t first = cfg.include_dummies_in_density ? 0 : cfg.dummy_count();
  for (std::size_t j = first; j < positions.size(); ++j) ++counts[static_cast<std::size_t>(positions[j] + L)];
  return counts;
}

inline DensityField density_from_counts(const std::vector<std::int64_t>& counts, const SimConfig& cfg, double t) {
  const double denom = static_cast<double>(cfg.include_dummies_in_density
                                               ? cfg.n_tr
                                               : cfg.n_tr - static_cast<std::int64_t>(cfg.dummy_count()));
  DensityField d;
  d.t = t;
  d.first_label = -cfg.half_width;
  d.rho.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) d.rho[i] = static_cast<double>(counts[i]) / denom;
  return d;
}

/// rho_emp(x) = (number of trajectories at x) / N, dummies counted iff configured.
inline DensityField estimate_density(const EnsembleState& state, const SimConfig& cfg) {
  return density_from_counts(site_counts(state.positions, cfg), cfg, state.t);
}

/// Applies the horror-vacui rule in ascending x and returns the sites that
/// triggered it. Later sites overwrite flags set by earlier ones.
inline std::vector<int> apply_horror_vacui(TransitionFlags& flags, const DensityField& before,
                                           const DensityField& after) {
  const int L = flags.half_width();
  std::vector<int> crossed;
  for (int x = -L; x <= L; ++x) {
    if (!(before.at_label(x) > 0.0 && after.at_label(x) == 0.0)) continue;
    crossed.push_back(x);
    if (x - 1 >= -L) flags.set_l(x - 1, true);
    if (x + 1 <= L) flags.set_m(x + 1, true);
    flags.set(x, false, false);
  }
  flags.close_boundary();
  if (!flags.unidirectional()) throw InternalError("horror vacui update broke edge unidirectionality");
  return crossed;
}

inline TransitionFlags horror_vacui_update(TransitionFlags flags, const DensityField& before,
                                           const DensityField& after) {
  apply_horror_vacui(flags, before, after);
  return flags;
}

// Per-site probabilities of a -1 / +1 move for the coming step.
struct MoveTable {
  std::vector<double> down;
  std::vector<double> up;
  std::uint64_t clamped = 0;
};

inline MoveTable move_table(const DensityField& rho, const TransitionFlags& flags, double tau) {
  const LineRates r = rates::line_rates(rho, flags);
  MoveTable t;
  t.down.resize(r.mu.size());
  t.up.resize(r.lambda.size());
  for (std::size_t i = 0; i < r.mu.size(); ++i) {
    double down = tau * r.mu[i];
    double up = tau * r.lambda[i];
    if (const double total = down + up; total > 1.0) {
      down /= total;
      up /= total;
      ++t.clamped;
    }
    t.down[i] = down;
    t.up[i] = up;
  }
  return t;
}

namespace detail {

inline int draw_move(double u, double down, double up) {
  if (u < down) return -1;
  if (u < down + up) return 1;
  return 0;
}

inline std::uint64_t move_range(std::vector<int>& positions, std::size_t begin, std::size_t end,
                                const MoveTable& table, int L, const SimConfig& cfg, std::int64_t step,
                                std::mt19937_64* stream) {
  std::uint64_t hits = 0;
  for (std::size_t j = begin; j < end; ++j) {
    const double u = stream ? uniform01(*stream)
                            : keyed_uniform01(cfg.seed, static_cast<std::uint64_t>(step), j);
    const std::size_t i = static_cast<std::size_t>(positions[j] + L);
    int x = positions[j] + draw_move(u, table.down[i], table.up[i]);
    if (x < -L || x > L) {
      x = std::clamp(x, -L, L);
      ++hits;
    }
    positions[j] = x;
  }
  return hits;
}

}  // namespace detail

/// One full step (1-5 above), in place.
inline void advance(EnsembleState& s, const SimConfig& cfg) {
  const int L = cfg.half_width;
  const DensityField before = estimate_density(s, cfg);
  const MoveTable table = move_table(before, s.flags, cfg.tau);
  s.diagnostics.clamp_events += table.clamped;

  const std::size_t n = s.positions.size();
  if (cfg.threads <= 1) {
    s.diagnostics.boundary_hits += detail::move_range(s.positions, 0, n, table, L, cfg, s.step_index, &s.rng);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::uint64_t> hits(cfg.threads, 0);
    const std::size_t chunk = (n + cfg.threads - 1) / cfg.threads;
    for (unsigned w = 0; w < cfg.threads; ++w) {
      const std::size_t b = std::min(n, w * chunk);
      const std::size_t e = std::min(n, b + chunk);
      pool.emplace_back([&, w, b, e] {
        hits[w] = detail::move_range(s.positions, b, e, table, L, cfg, s.step_index, nullptr);
      });
    }
    for (auto& th : pool) th.join();
    for (auto h : hits) s.diagnostics.boundary_hits += h;
  }

  ++s.step_index;
  s.t = static_cast<double>(s.step_index) * cfg.tau;
  const DensityField after = estimate_density(s, cfg);
  s.last_crossings = apply_horror_vacui(s.flags, before, after);
  s.diagnostics.crossings += s.last_crossings.size();

  for (int j = 0; j <= 2 * L; ++j) s.positions[static_cast<std::size_t>(j)] = j - L;
}

inline EnsembleState step(EnsembleState state, const SimConfig& cfg) {
  advance(state, cfg);
  return state;
}

struct FlagRecord {
  double t;
  int x;
  bool m;
  bool l;
};

struct CrossingEvent {
  double t;
  int x;
};

struct PathPoint {
  double t;
  std::size_t trajectory;
  int x;
};

struct RunResult {
  SimConfig config;
  std::vector<DensityField> snapshots;
  std::vector<FlagRecord> flag_log;  // full array at t = 0, then changes only
  std::vector<CrossingEvent> crossings;
  std::vector<PathPoint> paths;
  Diagnostics diagnostics;
  double wall_seconds = 0.0;
};

/// Iterates n_steps = t_max / tau steps, recording densities every
/// snapshot_every (plus t = 0 and t_max), every flag change and every
/// horror-vacui trigger.
inline RunResult run(const SimConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  EnsembleState s = init(cfg);
  RunResult out;
  out.config = cfg;
  const int L = cfg.half_width;
  const std::int64_t steps = cfg.n_steps();
  const std::int64_t stride = cfg.snapshot_stride();
  const std::size_t first_path = cfg.dummy_count();

  const auto record_paths = [&] {
    for (std::size_t k = 0; k < cfg.dump_paths; ++k)
      out.paths.push_back({s.t, first_path + k, s.positions[first_path + k]});
  };

  out.snapshots.push_back(estimate_density(s, cfg));
  for (int x = -L; x <= L; ++x) out.flag_log.push_back({0.0, x, s.flags.m(x), s.flags.l(x)});
  record_paths();

  for (std::int64_t n = 1; n <= steps; ++n) {
    const TransitionFlags previous = s.flags;
    advance(s, cfg);
    for (int x = -L; x <= L; ++x)
      if (s.flags.m(x) != previous.m(x) || s.flags.l(x) != previous.l(x))
        out.flag_log.push_back({s.t, x, s.flags.m(x), s.flags.l(x)});
    for (int x : s.last_crossings) out.crossings.push_back({s.t, x});
    if (n % stride == 0 || n == steps) out.snapshots.push_back(estimate_density(s, cfg));
    record_paths();
  }
  out.diagnostics = s.diagnostics;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace qwalk::ensemble

#endif  // QWALK_SWARM_HPP
