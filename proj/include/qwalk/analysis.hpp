#ifndef QWALK_ANALYSIS_HPP
#define QWALK_ANALYSIS_HPP

// Comparison of swarm output with the Bessel oracle, and the sample-size sweep.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/bessel.hpp"
#include "qwalk/error.hpp"
#include "qwalk/fields.hpp"
#include "qwalk/swarm.hpp"

namespace qwalk::analysis {

inline constexpr double kNormalizationTolerance = 1.0e-6;

/// (1/2) sum |p - q| over a common support.
inline double total_variation(const DensityField& p, const DensityField& q) {
  if (p.size() != q.size() || p.first_label != q.first_label)
    throw ValidationError("total_variation: supports differ");
  if (std::abs(p.total() - 1.0) > kNormalizationTolerance || std::abs(q.total() - 1.0) > kNormalizationTolerance)
    throw ValidationError("total_variation: inputs must sum to 1");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p.rho[i] - q.rho[i]);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

inline Moments position_moments(const DensityField& rho) {
  double m = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) m += (rho.first_label + static_cast<double>(i)) * rho.rho[i];
  double v = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double d = rho.first_label + static_cast<double>(i) - m;
    v += d * d * rho.rho[i];
  }
  return {m, std::max(0.0, v)};
}

// rho(t, x) = J_x(t)^2 on [-L, L].
inline DensityField bessel_density(double t, int half_width) {
  const bessel::BesselRow r = bessel::row(t, half_width);
  DensityField d;
  d.t = t;
  d.first_label = -half_width;
  d.rho.resize(r.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i) d.rho[i] = r.values[i] * r.values[i];
  return d;
}

inline DensityField mirror(const DensityField& rho) {
  if (rho.first_label != -rho.last_label()) throw ValidationError("mirror: support must be symmetric");
  DensityField m = rho;
  std::reverse(m.rho.begin(), m.rho.end());
  return m;
}

struct VisitSeries {
  int site = 0;
  std::vector<double> t;
  std::vector<double> fraction;
  std::vector<double> crossing_times;  // horror-vacui instants at site, ascending
};

/// rho_emp(t, site) along the snapshots plus the instants the site's flags
/// were reset to (0,0) in the change log.
inline VisitSeries visit_fraction_series(std::span<const DensityField> snapshots,
                                         std::span<const ensemble::FlagRecord> flag_log, int site) {
  VisitSeries v;
  v.site = site;
  for (std::size_t n = 0; n < snapshots.size(); ++n) {
    if (n > 0 && !(snapshots[n].t > snapshots[n - 1].t)) throw ValidationError("visit_fraction_series: times must increase");
    v.t.push_back(snapshots[n].t);
    v.fraction.push_back(snapshots[n].at_label(site));
  }
  std::optional<std::pair<bool, bool>> last;
  for (const auto& f : flag_log) {
    if (f.x != site) continue;
    const bool reset = !f.m && !f.l;
    if (reset && last && (last->first || last->second)) v.crossing_times.push_back(f.t);
    last = std::pair{f.m, f.l};
  }
  std::sort(v.crossing_times.begin(), v.crossing_times.end());
  return v;
}

inline std::optional<double> first_crossing(std::span<const ensemble::FlagRecord> flag_log, int site) {
  const VisitSeries v = visit_fraction_series({}, flag_log, site);
  if (v.crossing_times.empty()) return std::nullopt;
  return v.crossing_times.front();
}

// First zero of J_|x|, the instant site x first empties in the exact process.
inline double exact_first_crossing(int site) { return bessel::zero(std::abs(site), 1); }

struct SnapshotComparison {
  double t = 0.0;
  double tv_distance = 0.0;
  Moments empirical;
  Moments exact;
};

struct CrossingComparison {
  int site = 0;
  std::optional<double> empirical;
  double exact = 0.0;
};

struct ComparisonReport {
  std::vector<SnapshotComparison> snapshots;
  std::vector<CrossingComparison> crossings;
  ensemble::Diagnostics diagnostics;
  double wall_seconds = 0.0;
};

/// Compares every snapshot (or only t_only, if given) with J_x(t)^2 and the
/// first crossing times of sites [-crossing_sites, crossing_sites] with the
/// first zeros of J_|x|.
inline ComparisonReport compare_to_bessel(std::span<const DensityField> snapshots,
                                          std::span<const ensemble::FlagRecord> flag_log,
                                          std::optional<double> t_only = std::nullopt, int crossing_sites = 3) {
  ComparisonReport rep;
  for (const auto& d : snapshots) {
    if (t_only && std::abs(d.t - *t_only) > 1.0e-9) continue;
    const int L = d.last_label();
    if (d.first_label != -L) throw ValidationError("compare_to_bessel: density must live on [-L, L]");
    const DensityField exact = bessel_density(d.t, L);
    rep.snapshots.push_back({d.t, total_variation(d, exact), position_moments(d), position_moments(exact)});
  }
  if (t_only && rep.snapshots.empty())
    throw ValidationError("compare_to_bessel: no snapshot at t=" + std::to_string(*t_only));
  for (int x = -crossing_sites; x <= crossing_sites; ++x)
    rep.crossings.push_back({x, first_crossing(flag_log, x), exact_first_crossing(x)});
  return rep;
}

struct SweepRow {
  std::int64_t n_tr = 0;
  std::uint64_t seed = 0;
  double tv_distance = 0.0;
  double wall_seconds = 0.0;
};

struct SweepSummary {
  std::int64_t n_tr = 0;
  double tv_min = 0.0;
  double tv_median = 0.0;
  double tv_max = 0.0;
  double wall_median = 0.0;
};

struct SweepTable {
  double t_eval = 0.0;
  std::vector<SweepRow> rows;
  std::vector<SweepSummary> summary;  // one per n_tr, in input order
  bool median_strictly_decreasing = false;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// One autonomous run per (n_tr, seed), seeds base_seed + 1000*i + s; TV
/// against J^2 at t_eval. jobs > 1 runs that many simulations concurrently.
inline SweepTable ntr_sweep(const ensemble::SimConfig& base, std::span<const std::int64_t> n_tr_values,
                            double t_eval, int seeds, unsigned jobs = 1) {
  if (n_tr_values.empty()) throw ValidationError("ntr_sweep: empty n_tr list");
  if (seeds < 1) throw ValidationError("ntr_sweep: seeds must be >= 1");
  std::vector<ensemble::SimConfig> configs;
  for (std::size_t i = 0; i < n_tr_values.size(); ++i)
    for (int s = 0; s < seeds; ++s) {
      ensemble::SimConfig c = base;
      c.mode = ensemble::Mode::autonomous;
      c.n_tr = n_tr_values[i];
      c.t_max = t_eval;
      c.snapshot_every = t_eval;
      c.dump_paths = 0;
      c.seed = base.seed + 1000 * i + static_cast<std::uint64_t>(s);
      c.validate();
      configs.push_back(c);
    }

  const DensityField exact = bessel_density(t_eval, base.half_width);
  const auto one = [&exact](const ensemble::SimConfig& c) {
    const ensemble::RunResult r = ensemble::run(c);
    return SweepRow{c.n_tr, c.seed, total_variation(r.snapshots.back(), exact), r.wall_seconds};
  };

  SweepTable table;
  table.t_eval = t_eval;
  table.rows.resize(configs.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t begin = 0; begin < configs.size(); begin += width) {
    std::vector<std::future<SweepRow>> batch;
    const std::size_t end = std::min(configs.size(), begin + width);
    for (std::size_t k = begin; k < end; ++k)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, one, configs[k]));
    for (std::size_t k = begin; k < end; ++k) table.rows[k] = batch[k - begin].get();
  }

  for (std::int64_t n : n_tr_values) {
    std::vector<double> tv, wall;
    for (const auto& r : table.rows)
      if (r.n_tr == n) {
        tv.push_back(r.tv_distance);
        wall.push_back(r.wall_seconds);
      }
    SweepSummary s;
    s.n_tr = n;
    s.tv_min = *std::min_element(tv.begin(), tv.end());
    s.tv_max = *std::max_element(tv.begin(), tv.end());
    s.tv_median = median(tv);
    s.wall_median = median(wall);
    table.summary.push_back(s);
  }
  table.median_strictly_decreasing = true;
  for (std::size_t i = 1; i < table.summary.size(); ++i)
    if (!(table.summary[i].n_tr > table.summary[i - 1].n_tr &&
          table.summary[i].tv_median < table.summary[i - 1].tv_median))
      table.median_strictly_decreasing = false;
  return table;
}

}  // namespace qwalk::analysis

#endif  // QWALK_ANALYSIS_HPP
