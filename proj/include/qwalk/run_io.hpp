#ifndef QWALK_RUN_IO_HPP
#define QWALK_RUN_IO_HPP

// On-disk layout of a swarm run directory:
//   density.csv  t,x,rho_emp          one row per site per snapshot
//   paths.csv    t,trajectory_id,x    dumped trajectories, every step
//   flags.csv    t,x,m,l              full array at t=0, then changes only
//   meta.json    configuration, diagnostics, crossing events, runtime
//   plot.gp      gnuplot script over density.csv
// and the report / sweep outputs written by the analysis commands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwalk/analysis.hpp"
#include "qwalk/error.hpp"
#include "qwalk/fields.hpp"
#include "qwalk/swarm.hpp"

namespace qwalk::io {

using nlohmann::json;

inline std::string format_number(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Times are multiples of tau; 12 significant digits keep them readable and stable.
inline std::string format_time(double t) { return format_number(t, 12); }

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + p.string());
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + p.string());
  return in;
}

inline void write_density_csv(std::ostream& out, const std::vector<DensityField>& snapshots) {
  out << "t,x,rho_emp\n";
  for (const auto& d : snapshots) {
    const std::string t = format_time(d.t);
    for (std::size_t i = 0; i < d.size(); ++i)
      out << t << ',' << d.first_label + static_cast<int>(i) << ',' << format_number(d.rho[i]) << '\n';
  }
}

inline void write_flags_csv(std::ostream& out, const std::vector<ensemble::FlagRecord>& log) {
  out << "t,x,m,l\n";
  for (const auto& f : log) out << format_time(f.t) << ',' << f.x << ',' << int(f.m) << ',' << int(f.l) << '\n';
}

inline void write_paths_csv(std::ostream& out, const std::vector<ensemble::PathPoint>& paths) {
  out << "t,trajectory_id,x\n";
  for (const auto& p : paths) out << format_time(p.t) << ',' << p.trajectory << ',' << p.x << '\n';
}

inline json config_json(const ensemble::SimConfig& c) {
  return {{"mode", ensemble::to_string(c.mode)},
          {"n_tr", c.n_tr},
          {"tau", c.tau},
          {"half_width", c.half_width},
          {"t_max", c.t_max},
          {"n_steps", c.n_steps()},
          {"seed", c.seed},
          {"include_dummies_in_density", c.include_dummies_in_density},
          {"snapshot_every", c.snapshot_every},
          {"dump_paths", c.dump_paths},
          {"threads", c.threads}};
}

inline ensemble::SimConfig config_from_json(const json& j) {
  ensemble::SimConfig c;
  c.mode = ensemble::parse_mode(j.at("mode").get<std::string>());
  c.n_tr = j.at("n_tr").get<std::int64_t>();
  c.tau = j.at("tau").get<double>();
  c.half_width = j.at("half_width").get<int>();
  c.t_max = j.at("t_max").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.include_dummies_in_density = j.at("include_dummies_in_density").get<bool>();
  c.snapshot_every = j.at("snapshot_every").get<double>();
  c.dump_paths = j.at("dump_paths").get<std::size_t>();
  c.threads = j.value("threads", 1u);
  return c;
}

inline json diagnostics_json(const ensemble::Diagnostics& d) {
  return {{"clamp_events", d.clamp_events},
          {"boundary_hits", d.boundary_hits},
          {"crossings", d.crossings},
          {"masked_edges", d.masked_edges}};
}

inline ensemble::Diagnostics diagnostics_from_json(const json& j) {
  ensemble::Diagnostics d;
  d.clamp_events = j.value("clamp_events", std::uint64_t{0});
  d.boundary_hits = j.value("boundary_hits", std::uint64_t{0});
  d.crossings = j.value("crossings", std::uint64_t{0});
  d.masked_edges = j.value("masked_edges", std::uint64_t{0});
  return d;
}

inline json meta_json(const ensemble::RunResult& r) {
  json crossings = json::array();
  for (const auto& c : r.crossings) crossings.push_back({{"t", c.t}, {"x", c.x}});
  return {{"config", config_json(r.config)},
          {"diagnostics", diagnostics_json(r.diagnostics)},
          {"crossing_events", crossings},
          {"wall_seconds", r.wall_seconds}};
}

inline void write_plot_script(std::ostream& out, double t_last) {
  out << "# gnuplot script: empirical density at the last snapshot\n"
      << "set datafile separator ','\n"
      << "set xlabel 'x'\nset ylabel 'rho_emp'\n"
      << "plot 'density.csv' every ::1 using ($1==" << format_time(t_last) << " ? $2 : 1/0):3 with impulses title 't="
      << format_time(t_last) << "'\n";
}

/// Writes every run file into dir (created if missing).
inline void write_run(const std::filesystem::path& dir, const ensemble::RunResult& r) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "density.csv");
    write_density_csv(out, r.snapshots);
  }
  {
    auto out = open_out(dir / "flags.csv");
    write_flags_csv(out, r.flag_log);
  }
  {
    auto out = open_out(dir / "paths.csv");
    write_paths_csv(out, r.paths);
  }
  {
    auto out = open_out(dir / "meta.json");
    out << meta_json(r).dump(2) << '\n';
  }
  {
    auto out = open_out(dir / "plot.gp");
    write_plot_script(out, r.snapshots.empty() ? 0.0 : r.snapshots.back().t);
  }
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

template <typename Row>
void for_each_row(std::istream& in, std::size_t columns, const std::string& what, Row&& row) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(what + ": empty file");
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != columns) throw ValidationError(what + ": bad row " + std::to_string(n));
    try {
      row(cells);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::logic_error&) {
      throw ValidationError(what + ": unparsable row " + std::to_string(n));
    }
  }
}

}  // namespace detail

/// Groups density.csv rows by t; each snapshot must list consecutive x.
inline std::vector<DensityField> read_density_csv(std::istream& in) {
  std::vector<DensityField> out;
  std::string current_t;
  detail::for_each_row(in, 3, "density.csv", [&](const std::vector<std::string>& c) {
    const int x = std::stoi(c[1]);
    if (out.empty() || c[0] != current_t) {
      current_t = c[0];
      DensityField d;
      d.t = std::stod(c[0]);
      d.first_label = x;
      out.push_back(std::move(d));
    } else if (x != out.back().last_label() + 1) {
      throw ValidationError("density.csv: non-consecutive x");
    }
    out.back().rho.push_back(std::stod(c[2]));
  });
  return out;
}

inline std::vector<ensemble::FlagRecord> read_flags_csv(std::istream& in) {
  std::vector<ensemble::FlagRecord> out;
  detail::for_each_row(in, 4, "flags.csv", [&](const std::vector<std::string>& c) {
    out.push_back({std::stod(c[0]), std::stoi(c[1]), std::stoi(c[2]) != 0, std::stoi(c[3]) != 0});
  });
  return out;
}

struct LoadedRun {
  ensemble::SimConfig config;
  ensemble::Diagnostics diagnostics;
  double wall_seconds = 0.0;
  std::vector<DensityField> snapshots;
  std::vector<ensemble::FlagRecord> flag_log;
};

inline LoadedRun read_run(const std::filesystem::path& dir) {
  LoadedRun r;
  {
    auto in = open_in(dir / "meta.json");
    json meta;
    try {
      meta = json::parse(in);
      r.config = config_from_json(meta.at("config"));
      r.diagnostics = diagnostics_from_json(meta.at("diagnostics"));
      r.wall_seconds = meta.value("wall_seconds", 0.0);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("meta.json: ") + e.what());
    }
  }
  {
    auto in = open_in(dir / "density.csv");
    r.snapshots = read_density_csv(in);
  }
  if (std::filesystem::exists(dir / "flags.csv")) {
    auto in = open_in(dir / "flags.csv");
    r.flag_log = read_flags_csv(in);
  }
  return r;
}

inline json report_json(const analysis::ComparisonReport& rep) {
  json snaps = json::array();
  for (const auto& s : rep.snapshots)
    snaps.push_back({{"t", s.t},
                     {"tv_distance", s.tv_distance},
                     {"mean", s.empirical.mean},
                     {"variance", s.empirical.variance},
                     {"exact_mean", s.exact.mean},
                     {"exact_variance", s.exact.variance}});
  json cross = json::array();
  for (const auto& c : rep.crossings)
    cross.push_back({{"site", c.site},
                     {"first_crossing", c.empirical ? json(*c.empirical) : json(nullptr)},
                     {"exact_first_zero", c.exact}});
  return {{"snapshots", snaps},
          {"crossings", cross},
          {"diagnostics", diagnostics_json(rep.diagnostics)},
          {"wall_seconds", rep.wall_seconds}};
}

inline void write_report_csv(std::ostream& out, const analysis::ComparisonReport& rep) {
  out << "t,tv_distance,mean,variance,exact_mean,exact_variance\n";
  for (const auto& s : rep.snapshots)
    out << format_time(s.t) << ',' << format_number(s.tv_distance) << ',' << format_number(s.empirical.mean) << ','
        << format_number(s.empirical.variance) << ',' << format_number(s.exact.mean) << ','
        << format_number(s.exact.variance) << '\n';
}

inline json sweep_json(const analysis::SweepTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"n_tr", r.n_tr}, {"seed", r.seed}, {"tv_distance", r.tv_distance}, {"wall_seconds", r.wall_seconds}});
  json summary = json::array();
  for (const auto& s : t.summary)
    summary.push_back({{"n_tr", s.n_tr},
                       {"tv_min", s.tv_min},
                       {"tv_median", s.tv_median},
                       {"tv_max", s.tv_max},
                       {"wall_median", s.wall_median}});
  return {{"t_eval", t.t_eval},
          {"rows", rows},
          {"summary", summary},
          {"median_strictly_decreasing", t.median_strictly_decreasing}};
}

inline void write_sweep_csv(std::ostream& out, const analysis::SweepTable& t) {
  out << "n_tr,seed,tv_distance,wall_seconds\n";
  for (const auto& r : t.rows)
    out << r.n_tr << ',' << r.seed << ',' << format_number(r.tv_distance) << ',' << format_number(r.wall_seconds)
        << '\n';
}

}  // namespace qwalk::io

#endif  // QWALK_RUN_IO_HPP
