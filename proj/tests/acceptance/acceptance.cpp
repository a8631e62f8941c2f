// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Stochastic criteria use seed 1 (the default) unless the criterion itself
// asks for several seeds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/qwalk.hpp"
#include "random_systems.hpp"

namespace {

using namespace qwalk;
namespace fs = std::filesystem;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto started = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %-28s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double line_error(double dt) {
  const Hamiltonian h = graph::line_hamiltonian(150);
  quantum::EvolveOptions opt;
  opt.dt = dt;
  opt.snapshot_stride = 1u << 30;
  const quantum::Evolution ev = quantum::evolve(h, quantum::delta_state(h.size(), 150), 30.0, opt);
  const WaveFunction exact = quantum::analytic_line_state(30.0, 150);
  double worst = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    worst = std::max(worst, std::abs(ev.snapshots.back().amplitudes[i] - exact.amplitudes[i]));
  return worst;
}

std::vector<WaveFunction> analytic_snapshots(double t0, double dt, int count) {
  std::vector<WaveFunction> out;
  for (int n = 0; n < count; ++n) out.push_back(quantum::analytic_line_state(t0 + n * dt, 45));
  return out;
}

const DensityField& snapshot_at(const ensemble::RunResult& r, double t) {
  for (const auto& d : r.snapshots)
    if (std::abs(d.t - t) < 1e-9) return d;
  throw InternalError("no snapshot at requested time");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "bessel normalization", [] {
    double worst = 0.0;
    for (double t : {1.0, 5.0, 10.0, 30.0}) worst = std::max(worst, std::abs(bessel::row(t, 150).sum_of_squares() - 1.0));
    return Outcome{worst <= 1e-10, fmt("max |sum J^2 - 1| = %.2e (<= 1e-10)", worst)};
  });

  criterion(2, "bessel zeros", [] {
    const double z0 = bessel::zero(0, 1), z1 = bessel::zero(1, 1);
    const bool ok = std::abs(z0 - 2.4048) <= 1e-3 && std::abs(z1 - 3.8317) <= 1e-3;
    return Outcome{ok, fmt("j(0,1) = %.10f, j(1,1) = %.10f (2.4048, 3.8317 +- 1e-3)", z0, z1)};
  });

  criterion(3, "integrator accuracy", [] {
    const Hamiltonian h = graph::line_hamiltonian(150);
    const quantum::Evolution ev = quantum::evolve(h, quantum::delta_state(h.size(), 150), 30.0);
    const double e1 = line_error(0.01), e2 = line_error(0.005);
    const double ratio = e1 / e2;
    const bool ok = e1 <= 1e-6 && ev.max_norm_drift <= 1e-9 && ratio >= 14.0 && ratio <= 18.0;
    return Outcome{ok, fmt("err(dt=0.01) = %.2e (<= 1e-6), drift = %.2e (<= 1e-9), err ratio = %.2f (14..18)", e1,
                           ev.max_norm_drift, ratio)};
  });

  criterion(4, "rate identities", [] {
    std::mt19937_64 rng(4);
    double sym = 0.0, anti = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t s = 2 + std::size_t(trial % 7);
      const Hamiltonian h = qwalk::testing::random_hermitian(s, rng);
      const DensityField rho = qwalk::testing::random_density(s, rng);
      const PhaseField phase = qwalk::testing::random_phase(s, rng);
      const Graph g = graph::derive_graph(h);
      const rates::ConstraintResiduals r = rates::constraint_residuals(h, g, rho, phase, rates::gm_rates(h, g, rho, phase));
      sym = std::max(sym, r.symmetric);
      anti = std::max(anti, r.antisymmetric);
    }
    return Outcome{sym <= 1e-12 && anti <= 1e-12, fmt("symmetric %.2e, antisymmetric %.2e (<= 1e-12)", sym, anti)};
  });

  criterion(5, "continuity residual order", [] {
    const Hamiltonian line = graph::line_hamiltonian(45);
    const double line_ratio = rates::continuity_residual(line, analytic_snapshots(0.9, 0.01, 21)) /
                              rates::continuity_residual(line, analytic_snapshots(0.9, 0.005, 41));
    std::mt19937_64 rng(5);
    const Hamiltonian h = qwalk::testing::random_hermitian(5, rng);
    const WaveFunction psi0 = qwalk::testing::random_state(5, rng);
    const auto residual = [&](double dt) {
      quantum::EvolveOptions opt;
      opt.dt = dt;
      return rates::continuity_residual(h, quantum::evolve(h, psi0, 0.5, opt).snapshots);
    };
    const double random_ratio = residual(0.005) / residual(0.0025);
    const auto in_band = [](double r) { return r >= 3.5 && r <= 4.5; };
    return Outcome{in_band(line_ratio) && in_band(random_ratio),
                   fmt("ratio line = %.3f, random 5-vertex = %.3f (3.5..4.5)", line_ratio, random_ratio)};
  });

  // Criteria 6 and 9 share one default run (N = 5e4, tau = 0.05, L = 150, seed 1).
  ensemble::SimConfig fig2;
  fig2.t_max = 30.0;
  fig2.snapshot_every = 10.0;
  std::optional<ensemble::RunResult> fig2_run;
  const auto fig2_result = [&]() -> const ensemble::RunResult& {
    if (!fig2_run) fig2_run = ensemble::run(fig2);
    return *fig2_run;
  };

  criterion(6, "swarm vs J^2 at t=30", [&] {
    const DensityField& d = snapshot_at(fig2_result(), 30.0);
    const double tv = analysis::total_variation(d, analysis::bessel_density(30.0, 150));
    const double sd = std::sqrt(analysis::position_moments(d).variance);
    const double target = 30.0 / std::sqrt(2.0);
    const bool ok = tv <= 0.08 && std::abs(sd - target) <= 0.05 * target;
    return Outcome{ok, fmt("TV = %.4f (<= 0.08), std = %.3f (21.21 +- 5%%)", tv, sd)};
  });

  criterion(7, "first flag flips", [] {
    int good = 0;
    std::string seen;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ensemble::SimConfig c;
      c.seed = seed;
      c.t_max = 6.0;
      c.snapshot_every = 6.0;
      const ensemble::RunResult r = ensemble::run(c);
      const auto t0 = analysis::first_crossing(r.flag_log, 0);
      const auto tm = analysis::first_crossing(r.flag_log, -1);
      const auto tp = analysis::first_crossing(r.flag_log, 1);
      const auto near = [](const std::optional<double>& t, double target) { return t && std::abs(*t - target) <= 0.5; };
      if (near(t0, 2.4048) && near(tm, 3.8317) && near(tp, 3.8317)) ++good;
      seen += fmt(" s%d:%.2f/%.2f/%.2f", int(seed), t0.value_or(-1), tm.value_or(-1), tp.value_or(-1));
    }
    return Outcome{good >= 4, fmt("%d/5 seeds within 0.5 (>= 4);", good) + seen};
  });

  criterion(8, "guided two-site", [] {
    ensemble::SimConfig c;
    c.mode = ensemble::Mode::guided;
    c.n_tr = 100000;
    c.tau = 0.01;
    c.t_max = 3.0;
    c.snapshot_every = 0.01;
    const ensemble::RunResult r =
        ensemble::run_guided(graph::two_site_hamiltonian(), quantum::delta_state(2, 0), c);
    double worst = 0.0;
    for (const auto& d : r.snapshots) {
      const double cs = std::cos(d.t / 2.0);
      DensityField exact;
      exact.rho = {cs * cs, 1.0 - cs * cs};
      worst = std::max(worst, analysis::total_variation(d, exact));
    }
    return Outcome{worst <= 0.05, fmt("max_t TV = %.4f (<= 0.05)", worst)};
  });

  criterion(9, "left-right symmetry t=10", [&] {
    const DensityField& d = snapshot_at(fig2_result(), 10.0);
    const double tv = analysis::total_variation(d, analysis::mirror(d));
    return Outcome{tv <= 0.05, fmt("TV(rho(x), rho(-x)) = %.4f (<= 0.05)", tv)};
  });

  criterion(10, "reproducibility", [] {
    const fs::path dir = fs::temp_directory_path() / "qwalk_acceptance_repro";
    fs::remove_all(dir);
    ensemble::SimConfig c;
    c.t_max = 10.0;
    io::write_run(dir / "a", ensemble::run(c));
    io::write_run(dir / "b", ensemble::run(c));
    const std::string a = slurp(dir / "a" / "density.csv"), b = slurp(dir / "b" / "density.csv");
    fs::remove_all(dir);
    return Outcome{!a.empty() && a == b, fmt("density.csv %zu bytes, identical = %s", a.size(), a == b ? "yes" : "no")};
  });

  criterion(11, "n_tr sweep trend", [] {
    ensemble::SimConfig base;
    const std::vector<std::int64_t> n{1000, 10000, 50000};
    const analysis::SweepTable t = analysis::ntr_sweep(base, n, 30.0, 3);
    std::string medians;
    for (const auto& s : t.summary) medians += fmt(" %lld:%.4f", static_cast<long long>(s.n_tr), s.tv_median);
    return Outcome{t.median_strictly_decreasing, "median TV" + medians + " (strictly decreasing)"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
