// Autonomous swarm on the line: compare the empirical density with J_x(t)^2
// every 5 time units and print when the first few sites empty for the first time.

#include <cmath>
#include <cstdio>

#include "qwalk/analysis.hpp"
#include "qwalk/swarm.hpp"

int main() {
  using namespace qwalk;
  ensemble::SimConfig cfg;  // N = 50000, tau = 0.05, L = 150
  cfg.t_max = 30.0;
  cfg.snapshot_every = 5.0;
  const ensemble::RunResult run = ensemble::run(cfg);

  std::printf("%6s %8s %10s %10s\n", "t", "TV", "std", "t/sqrt2");
  for (const DensityField& d : run.snapshots) {
    const double tv = analysis::total_variation(d, analysis::bessel_density(d.t, cfg.half_width));
    const double sd = std::sqrt(analysis::position_moments(d).variance);
    std::printf("%6.1f %8.4f %10.3f %10.3f\n", d.t, tv, sd, d.t / std::sqrt(2.0));
  }

  std::printf("\n%4s %12s %12s\n", "x", "first flip", "J zero");
  for (int x = -2; x <= 2; ++x) {
    const auto t = analysis::first_crossing(run.flag_log, x);
    std::printf("%4d %12.2f %12.4f\n", x, t.value_or(NAN), analysis::exact_first_crossing(x));
  }
  std::printf("\nclamps %llu, boundary hits %llu, %.1f s\n",
              static_cast<unsigned long long>(run.diagnostics.clamp_events),
              static_cast<unsigned long long>(run.diagnostics.boundary_hits), run.wall_seconds);
}
