// qwalk command-line front end.
//
//   qwalk bessel eval --order N --t T
//   qwalk bessel zeros --order N --count K
//   qwalk graph derive --input FILE
//   qwalk quantum --hamiltonian FILE|line --L 150 --t 30 --dt 0.01 --out csv
//   qwalk rates --hamiltonian FILE|line --state FILE --out csv
//   qwalk ensemble --mode autonomous|guided --n-tr 50000 --tau 0.05 --L 150 --t-max 100 --seed S --out DIR
//   qwalk compare --run DIR --oracle bessel --t 30
//   qwalk sweep --n-tr 1000,10000,50000 --t 30 --seeds 5 --out DIR
//
// Failures print {"error": {"type": ..., "message": ...}} on stderr and exit
// with 2 (invalid input), 3 (integration failure) or 4 (internal error).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qwalk/qwalk.hpp"

namespace {

using namespace qwalk;
using nlohmann::json;

int fail(const char* type, const std::string& message, int code) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << '\n';
  return code;
}

std::string num(double v, int digits = 17) { return io::format_number(v, digits); }

Hamiltonian load_hamiltonian(const std::string& spec, int half_width) {
  if (spec == "line") return graph::line_hamiltonian(half_width);
  return graph::read_hamiltonian_file(spec);
}

std::size_t vertex_of(const Hamiltonian& h, int label) {
  const auto labels = h.labels();
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == label) return k;
  throw ValidationError("no vertex labelled " + std::to_string(label));
}

// Output sink: a file when a path is given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void require_csv(const std::string& format) {
  if (format != "csv") throw ValidationError("unsupported output format '" + format + "' (only csv)");
}

// --- bessel -----------------------------------------------------------------

struct BesselArgs {
  int order = 0;
  double t = 0.0;
  int count = 1;
};

// --- quantum ----------------------------------------------------------------

struct QuantumArgs {
  std::string hamiltonian = "line";
  int half_width = 150;
  std::optional<int> start;
  double t = 30.0;
  double dt = quantum::kDefaultStep;
  std::optional<double> snapshot_every;
  std::string format = "csv";
  std::string output;
};

int run_quantum(const QuantumArgs& a) {
  require_csv(a.format);
  const Hamiltonian h = load_hamiltonian(a.hamiltonian, a.half_width);
  const int start_label = a.start.value_or(a.hamiltonian == "line" ? 0 : h.labels()[0]);
  const WaveFunction psi0 = quantum::delta_state(h.size(), vertex_of(h, start_label));
  quantum::EvolveOptions opt;
  opt.dt = a.dt;
  const double every = a.snapshot_every.value_or(a.t);
  opt.snapshot_stride = every > 0.0 ? std::max<std::size_t>(1, quantum::step_count(every, a.dt)) : 1;
  const quantum::Evolution ev = quantum::evolve(h, psi0, a.t, opt);
  if (ev.boundary_warning)
    std::cerr << "warning: boundary mass reached " << ev.max_boundary_mass << '\n';

  Sink sink(a.output);
  auto& out = sink.stream();
  out << "t,x,re,im,rho\n";
  for (const auto& w : ev.snapshots)
    for (std::size_t k = 0; k < w.size(); ++k)
      out << io::format_time(w.t) << ',' << h.labels()[k] << ',' << num(w.amplitudes[k].real()) << ','
          << num(w.amplitudes[k].imag()) << ',' << num(std::norm(w.amplitudes[k])) << '\n';
  return 0;
}

// --- rates ------------------------------------------------------------------

struct RatesArgs {
  std::string hamiltonian = "line";
  int half_width = 150;
  std::string state;
  double density_floor = kDefaultDensityFloor;
  std::string format = "csv";
  std::string output;
};

// Reads t,x,re,im[,rho] rows into one wave function per distinct t.
std::vector<WaveFunction> read_states(const std::string& path, const Hamiltonian& h) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read state file " + path);
  std::map<int, std::size_t> index;
  for (std::size_t k = 0; k < h.size(); ++k) index[h.labels()[k]] = k;
  std::vector<WaveFunction> states;
  std::string line, current;
  std::getline(in, line);
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> c;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) c.push_back(cell);
    if (c.size() < 4) throw ValidationError("state file row " + std::to_string(n) + ": expected t,x,re,im");
    try {
      if (states.empty() || c[0] != current) {
        current = c[0];
        states.push_back({std::stod(c[0]), std::vector<Complex>(h.size())});
      }
      const auto it = index.find(std::stoi(c[1]));
      if (it == index.end()) throw ValidationError("state file row " + std::to_string(n) + ": unknown vertex");
      states.back().amplitudes[it->second] = Complex(std::stod(c[2]), std::stod(c[3]));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::logic_error&) {
      throw ValidationError("state file row " + std::to_string(n) + ": unparsable");
    }
  }
  if (states.empty()) throw ValidationError("state file has no rows");
  return states;
}

int run_rates(const RatesArgs& a) {
  require_csv(a.format);
  const Hamiltonian h = load_hamiltonian(a.hamiltonian, a.half_width);
  const Graph g = graph::derive_graph(h);
  const auto states = read_states(a.state, h);
  Sink sink(a.output);
  auto& out = sink.stream();
  out << "t,from,to,nu\n";
  std::size_t masked = 0;
  for (const auto& psi : states) {
    quantum::require_unit_norm(psi);
    const auto polar = rates::polar_decompose(psi, a.density_floor);
    const RateField nu = rates::gm_rates(h, g, polar.density, polar.phase, a.density_floor);
    masked += nu.masked;
    for (const auto& r : nu.rates)
      out << io::format_time(psi.t) << ',' << h.labels()[r.from] << ',' << h.labels()[r.to] << ',' << num(r.nu)
          << '\n';
  }
  if (masked) std::cerr << "note: " << masked << " directed edges masked for undefined phase\n";
  return 0;
}

// --- ensemble ---------------------------------------------------------------

struct EnsembleArgs {
  std::string mode = "autonomous";
  ensemble::SimConfig cfg;
  bool exclude_dummies = false;
  std::string out_dir = "run";
};

int run_ensemble(EnsembleArgs a) {
  a.cfg.mode = ensemble::parse_mode(a.mode);
  a.cfg.include_dummies_in_density = !a.exclude_dummies;
  ensemble::RunResult r;
  if (a.cfg.mode == ensemble::Mode::autonomous) {
    r = ensemble::run(a.cfg);
  } else {
    const Hamiltonian h = graph::line_hamiltonian(a.cfg.half_width);
    r = ensemble::run_guided(h, quantum::delta_state(h.size(), vertex_of(h, 0)), a.cfg);
  }
  io::write_run(a.out_dir, r);
  std::cout << io::meta_json(r).at("diagnostics").dump() << '\n';
  return 0;
}

// --- compare ----------------------------------------------------------------

struct CompareArgs {
  std::string run_dir;
  std::string oracle = "bessel";
  std::optional<double> t;
  int sites = 3;
  std::string out_dir;
};

int run_compare(const CompareArgs& a) {
  if (a.oracle != "bessel") throw ValidationError("unknown oracle '" + a.oracle + "' (only bessel)");
  const io::LoadedRun run = io::read_run(a.run_dir);
  analysis::ComparisonReport rep = analysis::compare_to_bessel(run.snapshots, run.flag_log, a.t, a.sites);
  rep.diagnostics = run.diagnostics;
  rep.wall_seconds = run.wall_seconds;
  const std::filesystem::path dir = a.out_dir.empty() ? std::filesystem::path(a.run_dir) : std::filesystem::path(a.out_dir);
  std::filesystem::create_directories(dir);
  const json j = io::report_json(rep);
  {
    auto out = io::open_out(dir / "report.json");
    out << j.dump(2) << '\n';
  }
  {
    auto out = io::open_out(dir / "report.csv");
    io::write_report_csv(out, rep);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

// --- sweep ------------------------------------------------------------------

struct SweepArgs {
  std::vector<std::int64_t> n_tr{1000, 10000, 50000};
  double t = 30.0;
  int seeds = 5;
  unsigned jobs = 1;
  ensemble::SimConfig base;
  std::string out_dir = "sweep";
};

int run_sweep(const SweepArgs& a) {
  const analysis::SweepTable table = analysis::ntr_sweep(a.base, a.n_tr, a.t, a.seeds, a.jobs);
  std::filesystem::create_directories(a.out_dir);
  const json j = io::sweep_json(table);
  {
    auto out = io::open_out(std::filesystem::path(a.out_dir) / "report.json");
    out << j.dump(2) << '\n';
  }
  {
    auto out = io::open_out(std::filesystem::path(a.out_dir) / "report.csv");
    io::write_sweep_csv(out, table);
  }
  std::cout << j.at("summary").dump(2) << '\n'
            << "median_strictly_decreasing: " << (table.median_strictly_decreasing ? "true" : "false") << '\n';
  return 0;
}

void add_config_options(CLI::App* cmd, ensemble::SimConfig& c) {
  cmd->add_option("--tau", c.tau, "time step")->capture_default_str();
  cmd->add_option("--L", c.half_width, "space cut-off L")->capture_default_str();
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads for the move phase (>1: counter-based draws)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov-swarm emulation of continuous-time quantum walks"};
  app.require_subcommand(1);

  // bessel
  BesselArgs bargs;
  auto* bessel_cmd = app.add_subcommand("bessel", "Bessel functions of the first kind");
  bessel_cmd->require_subcommand(1);
  auto* beval = bessel_cmd->add_subcommand("eval", "print J_order(t)");
  beval->add_option("--order", bargs.order)->required();
  beval->add_option("--t", bargs.t)->required();
  auto* bzeros = bessel_cmd->add_subcommand("zeros", "print the first K positive zeros of J_order");
  bzeros->add_option("--order", bargs.order)->required();
  bzeros->add_option("--count", bargs.count)->required();

  // graph
  std::string graph_input;
  double edge_threshold = kDefaultEdgeThreshold;
  auto* graph_cmd = app.add_subcommand("graph", "graphs induced by Hamiltonians");
  graph_cmd->require_subcommand(1);
  auto* gderive = graph_cmd->add_subcommand("derive", "list the edges of the graph of a Hamiltonian file");
  gderive->add_option("--input", graph_input)->required();
  gderive->add_option("--threshold", edge_threshold)->capture_default_str();

  // quantum
  QuantumArgs qargs;
  auto* quantum_cmd = app.add_subcommand("quantum", "integrate the Schroedinger equation from a delta state");
  quantum_cmd->add_option("--hamiltonian", qargs.hamiltonian, "FILE or 'line'")->capture_default_str();
  quantum_cmd->add_option("--L", qargs.half_width)->capture_default_str();
  quantum_cmd->add_option("--start", qargs.start, "label of the initial vertex");
  quantum_cmd->add_option("--t", qargs.t)->capture_default_str();
  quantum_cmd->add_option("--dt", qargs.dt)->capture_default_str();
  quantum_cmd->add_option("--snapshot-every", qargs.snapshot_every, "default: only t=0 and t");
  quantum_cmd->add_option("--out", qargs.format, "output format")->capture_default_str();
  quantum_cmd->add_option("--output", qargs.output, "output file (default stdout)");

  // rates
  RatesArgs rargs;
  auto* rates_cmd = app.add_subcommand("rates", "jump rates of a wave function");
  rates_cmd->add_option("--hamiltonian", rargs.hamiltonian, "FILE or 'line'")->capture_default_str();
  rates_cmd->add_option("--L", rargs.half_width)->capture_default_str();
  rates_cmd->add_option("--state", rargs.state, "CSV t,x,re,im[,rho] as written by 'quantum'")->required();
  rates_cmd->add_option("--density-floor", rargs.density_floor)->capture_default_str();
  rates_cmd->add_option("--out", rargs.format, "output format")->capture_default_str();
  rates_cmd->add_option("--output", rargs.output, "output file (default stdout)");

  // ensemble
  EnsembleArgs eargs;
  auto* ens_cmd = app.add_subcommand("ensemble", "run the trajectory swarm");
  ens_cmd->add_option("--mode", eargs.mode, "autonomous|guided")->capture_default_str();
  ens_cmd->add_option("--n-tr", eargs.cfg.n_tr, "number of trajectories")->capture_default_str();
  ens_cmd->add_option("--t-max", eargs.cfg.t_max)->capture_default_str();
  ens_cmd->add_option("--snapshot-every", eargs.cfg.snapshot_every)->capture_default_str();
  ens_cmd->add_option("--dump-paths", eargs.cfg.dump_paths, "number of trajectories written to paths.csv")
      ->capture_default_str();
  ens_cmd->add_flag("--exclude-dummies", eargs.exclude_dummies, "leave dummy trajectories out of the density");
  ens_cmd->add_option("--out", eargs.out_dir, "output directory")->capture_default_str();
  add_config_options(ens_cmd, eargs.cfg);

  // compare
  CompareArgs cargs;
  auto* cmp_cmd = app.add_subcommand("compare", "compare a run directory with the exact solution");
  cmp_cmd->add_option("--run", cargs.run_dir)->required();
  cmp_cmd->add_option("--oracle", cargs.oracle)->capture_default_str();
  cmp_cmd->add_option("--t", cargs.t, "compare only this snapshot time");
  cmp_cmd->add_option("--sites", cargs.sites, "crossing table for sites in [-K, K]")->capture_default_str();
  cmp_cmd->add_option("--out", cargs.out_dir, "report directory (default: the run directory)");

  // sweep
  SweepArgs sargs;
  auto* sweep_cmd = app.add_subcommand("sweep", "TV distance against the sample size");
  sweep_cmd->add_option("--n-tr", sargs.n_tr, "comma-separated sizes")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--t", sargs.t)->capture_default_str();
  sweep_cmd->add_option("--seeds", sargs.seeds)->capture_default_str();
  sweep_cmd->add_option("--jobs", sargs.jobs, "concurrent runs")->capture_default_str();
  sweep_cmd->add_option("--out", sargs.out_dir, "output directory")->capture_default_str();
  add_config_options(sweep_cmd, sargs.base);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (beval->parsed()) {
      std::cout << num(bessel::eval_j(bargs.order, bargs.t)) << '\n';
    } else if (bzeros->parsed()) {
      if (bargs.count < 1) throw ValidationError("--count must be >= 1");
      for (int k = 1; k <= bargs.count; ++k) std::cout << num(bessel::zero(bargs.order, k)) << '\n';
    } else if (gderive->parsed()) {
      const Hamiltonian h = graph::read_hamiltonian_file(graph_input);
      const Graph g = graph::derive_graph(h, edge_threshold);
      std::cout << "vertices " << g.vertex_count << "\nedges " << g.edges.size() << '\n';
      for (const Edge& e : g.edges) std::cout << h.labels()[e.a] << ' ' << h.labels()[e.b] << '\n';
    } else if (quantum_cmd->parsed()) {
      return run_quantum(qargs);
    } else if (rates_cmd->parsed()) {
      return run_rates(rargs);
    } else if (ens_cmd->parsed()) {
      return run_ensemble(eargs);
    } else if (cmp_cmd->parsed()) {
      return run_compare(cargs);
    } else if (sweep_cmd->parsed()) {
      return run_sweep(sargs);
    }
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), 2);
  } catch (const DomainError& e) {
    return fail("domain", e.what(), 2);
  } catch (const IntegrationError& e) {
    return fail("integration", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 4);
  }
  return 0;
}
