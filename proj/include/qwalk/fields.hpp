#ifndef QWALK_FIELDS_HPP
#define QWALK_FIELDS_HPP

// Value types shared by the rate construction, the swarm simulator and the
// analysis code. This header has no dependency on the quantum solvers.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "qwalk/error.hpp"

namespace qwalk {

inline constexpr double kDefaultDensityFloor = 1.0e-14;

// Probability mass over vertices; vertex i carries the signed label first_label + i.
struct DensityField {
  double t = 0.0;
  std::vector<double> rho;
  int first_label = 0;

  std::size_t size() const { return rho.size(); }
  int last_label() const { return first_label + static_cast<int>(rho.size()) - 1; }
  double at_label(int x) const {
    if (x < first_label || x > last_label()) return 0.0;
    return rho[static_cast<std::size_t>(x - first_label)];
  }
  double total() const { return std::accumulate(rho.begin(), rho.end(), 0.0); }
};

// Phase S(t,k) in (-pi, pi], meaningful only where defined[k].
struct PhaseField {
  double t = 0.0;
  std::vector<double> s_values;
  std::vector<bool> defined;
};

struct DirectedRate {
  std::size_t from;
  std::size_t to;
  double nu;  // transition probability per unit time from -> to
};

struct RateField {
  double t = 0.0;
  std::vector<DirectedRate> rates;  // both directions of every edge
  std::size_t masked = 0;           // directed edges zeroed because a phase was undefined

  double rate(std::size_t from, std::size_t to) const {
    for (const auto& r : rates)
      if (r.from == from && r.to == to) return r.nu;
    return 0.0;
  }
};

// Birth (lambda: x -> x+1) and death (mu: x -> x-1) rates on [-L, L].
struct LineRates {
  int half_width = 0;
  std::vector<double> lambda;
  std::vector<double> mu;

  double up(int x) const { return lambda[static_cast<std::size_t>(x + half_width)]; }
  double down(int x) const { return mu[static_cast<std::size_t>(x + half_width)]; }
};

// Transition array: per site x in [-L, L] the bit pair (m_x, l_x);
// m_x allows x -> x-1, l_x allows x -> x+1.
class TransitionFlags {
 public:
  TransitionFlags() = default;
  explicit TransitionFlags(int half_width)
      : half_width_(half_width), m_(site_count(half_width), 0), l_(site_count(half_width), 0) {}

  // (1,0) for x < 0, (1,1) at the origin, (0,1) for x > 0; the two boundary
  // sites never point outward.
  static TransitionFlags outward(int half_width) {
    TransitionFlags f(half_width);
    for (int x = -half_width; x <= half_width; ++x) f.set(x, x <= 0, x >= 0);
    f.close_boundary();
    return f;
  }

  int half_width() const { return half_width_; }
  bool contains(int x) const { return x >= -half_width_ && x <= half_width_; }
  bool m(int x) const { return m_[index(x)] != 0; }
  bool l(int x) const { return l_[index(x)] != 0; }

  void set(int x, bool m, bool l) {
    m_[index(x)] = m;
    l_[index(x)] = l;
  }
  void set_m(int x, bool v) { m_[index(x)] = v; }
  void set_l(int x, bool v) { l_[index(x)] = v; }

  void close_boundary() {
    if (half_width_ <= 0) return;
    m_[index(-half_width_)] = 0;
    l_[index(half_width_)] = 0;
  }

  // l_x * m_{x+1} == 0 on every edge {x, x+1}.
  bool unidirectional() const {
    for (int x = -half_width_; x < half_width_; ++x)
      if (l(x) && m(x + 1)) return false;
    return true;
  }

  friend bool operator==(const TransitionFlags&, const TransitionFlags&) = default;

 private:
  static std::size_t site_count(int half_width) {
    if (half_width < 1) throw ValidationError("transition flags: half_width must be >= 1");
    return 2 * static_cast<std::size_t>(half_width) + 1;
  }
  std::size_t index(int x) const {
    if (!contains(x)) throw ValidationError("transition flags: site " + std::to_string(x) + " outside [-L, L]");
    return static_cast<std::size_t>(x + half_width_);
  }

  int half_width_ = 0;
  std::vector<std::uint8_t> m_;
  std::vector<std::uint8_t> l_;
};

}  // namespace qwalk

#endif  // QWALK_FIELDS_HPP
