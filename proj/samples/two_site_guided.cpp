// Guided swarm on two sites: walkers jump with the exact rates of the state
// started at site 0, and their occupation follows cos^2(t/2).

#include <cmath>
#include <cstdio>

#include "qwalk/guided.hpp"

int main() {
  using namespace qwalk;
  const Hamiltonian h = graph::two_site_hamiltonian();
  ensemble::SimConfig cfg;
  cfg.mode = ensemble::Mode::guided;
  cfg.n_tr = 100000;
  cfg.tau = 0.01;
  cfg.t_max = 6.0;
  cfg.snapshot_every = 0.5;
  const ensemble::RunResult run = ensemble::run_guided(h, quantum::delta_state(2, 0), cfg);

  std::printf("%6s %10s %10s\n", "t", "rho(0)", "cos^2");
  for (const DensityField& d : run.snapshots) {
    const double c = std::cos(d.t / 2.0);
    std::printf("%6.2f %10.4f %10.4f\n", d.t, d.rho[0], c * c);
  }
}
