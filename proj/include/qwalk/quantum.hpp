#ifndef QWALK_QUANTUM_HPP
#define QWALK_QUANTUM_HPP

// Discrete Schroedinger equation i dpsi/dt = H psi: fixed-step classical RK4
// integration and the closed-form line solution psi(t,x) = i^x J_x(t).

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qwalk/bessel.hpp"
#include "qwalk/error.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

struct WaveFunction {
  double t = 0.0;
  std::vector<Complex> amplitudes;

  std::size_t size() const { return amplitudes.size(); }

  double norm_squared() const {
    double s = 0.0;
    for (const Complex& z : amplitudes) s += std::norm(z);
    return s;
  }
};

namespace quantum {

inline constexpr double kDefaultStep = 0.01;
inline constexpr double kNormTolerance = 1.0e-9;
inline constexpr double kBoundaryMassWarning = 1.0e-8;
// RK4 is stable on the imaginary axis up to 2*sqrt(2); we stay well inside.
inline constexpr double kMaxStepTimesNorm = 1.0;

inline WaveFunction delta_state(std::size_t size, std::size_t vertex, double t = 0.0) {
  if (vertex >= size) throw ValidationError("delta_state: vertex out of range");
  WaveFunction w{t, std::vector<Complex>(size)};
  w.amplitudes[vertex] = 1.0;
  return w;
}

// i^n for integer n, exact.
inline Complex i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// One-step RK4 for dpsi/dt = -i H psi; keeps its stage buffers between calls.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(const Hamiltonian& h)
      : h_(h), k1_(h.size()), k2_(h.size()), k3_(h.size()), k4_(h.size()), tmp_(h.size()) {}

  void step(std::span<Complex> psi, double dt) {
    const std::size_t n = psi.size();
    derivative(psi, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + 0.5 * dt * k1_[i];
    derivative(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + 0.5 * dt * k2_[i];
    derivative(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = psi[i] + dt * k3_[i];
    derivative(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) psi[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

  void step(WaveFunction& psi, double dt) {
    step(std::span<Complex>(psi.amplitudes), dt);
    psi.t += dt;
  }

 private:
  void derivative(std::span<const Complex> psi, std::vector<Complex>& out) {
    h_.apply(psi, out);
    for (Complex& z : out) z = Complex(z.imag(), -z.real());  // -i * z
  }

  const Hamiltonian& h_;
  std::vector<Complex> k1_, k2_, k3_, k4_, tmp_;
};

struct EvolveOptions {
  double dt = kDefaultStep;
  std::size_t snapshot_stride = 1;  // keep every n-th step (t = 0 and t_final always kept)
  double norm_tolerance = kNormTolerance;
  double boundary_mass_warning = kBoundaryMassWarning;
};

struct Evolution {
  std::vector<WaveFunction> snapshots;
  double max_norm_drift = 0.0;
  double max_boundary_mass = 0.0;
  bool boundary_warning = false;
};

inline double boundary_mass(const Hamiltonian& h, const WaveFunction& psi) {
  double m = 0.0;
  for (std::size_t b : h.boundary()) m += std::norm(psi.amplitudes[b]);
  return m;
}

inline void require_unit_norm(const WaveFunction& psi, double tol = kNormTolerance) {
  if (std::abs(psi.norm_squared() - 1.0) > tol) throw ValidationError("wave function is not unit norm");
}

inline void check_step(const Hamiltonian& h, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("evolve: dt must be positive");
  if (dt * h.row_sum_norm() > kMaxStepTimesNorm)
    throw ValidationError("evolve: dt * ||H|| exceeds " + std::to_string(kMaxStepTimesNorm));
}

// Number of dt-steps in span; span must be an integer multiple of dt.
inline std::size_t step_count(double span, double dt) {
  if (!(span >= 0.0) || !std::isfinite(span)) throw ValidationError("evolve: t_final must be >= 0");
  const double n = std::round(span / dt);
  if (std::abs(n * dt - span) > 1.0e-9 * std::max(1.0, span))
    throw ValidationError("evolve: t_final is not a multiple of dt");
  return static_cast<std::size_t>(n);
}

/// Integrates from psi0.t to psi0.t + t_final. No renormalization: a norm
/// drift above options.norm_tolerance aborts with IntegrationError.
inline Evolution evolve(const Hamiltonian& h, const WaveFunction& psi0, double t_final,
                        const EvolveOptions& options = {}) {
  if (psi0.size() != h.size()) throw ValidationError("evolve: state and Hamiltonian sizes differ");
  require_unit_norm(psi0);
  check_step(h, options.dt);
  if (options.snapshot_stride == 0) throw ValidationError("evolve: snapshot_stride must be >= 1");
  const std::size_t steps = step_count(t_final, options.dt);

  Evolution ev;
  WaveFunction psi = psi0;
  const auto observe = [&] {
    const double bm = boundary_mass(h, psi);
    ev.max_boundary_mass = std::max(ev.max_boundary_mass, bm);
    if (bm > options.boundary_mass_warning) ev.boundary_warning = true;
  };
  observe();
  ev.snapshots.push_back(psi);

  Rk4Stepper stepper(h);
  for (std::size_t n = 1; n <= steps; ++n) {
    stepper.step(std::span<Complex>(psi.amplitudes), options.dt);
    psi.t = psi0.t + static_cast<double>(n) * options.dt;
    const double drift = std::abs(psi.norm_squared() - 1.0);
    ev.max_norm_drift = std::max(ev.max_norm_drift, drift);
    if (drift > options.norm_tolerance)
      throw IntegrationError("evolve: norm drift " + std::to_string(drift) + " at t=" + std::to_string(psi.t));
    observe();
    if (n % options.snapshot_stride == 0 || n == steps) ev.snapshots.push_back(psi);
  }
  return ev;
}

/// psi(t, x) = i^x J_x(t) on [-L, L], indexed x + L like line_hamiltonian.
inline WaveFunction analytic_line_state(double t, int half_width) {
  if (!(t >= 0.0)) throw ValidationError("analytic_line_state: t must be >= 0");
  if (half_width < t + 40.0)
    throw ValidationError("analytic_line_state: half_width must be >= t + 40");
  const bessel::BesselRow r = bessel::row(t, half_width);
  WaveFunction w{t, std::vector<Complex>(r.values.size())};
  for (int x = -half_width; x <= half_width; ++x)
    w.amplitudes[static_cast<std::size_t>(x + half_width)] = i_power(x) * r(x);
  return w;
}

}  // namespace quantum
}  // namespace qwalk

#endif  // QWALK_QUANTUM_HPP
