#ifndef QWALK_BESSEL_HPP
#define QWALK_BESSEL_HPP

// Bessel functions of the first kind and integer order.
//
// J_n(t) is the minimal solution of the three-term recurrence
//   J_{n-1}(t) + J_{n+1}(t) = (2n/t) J_n(t),
// so it is computed by downward (Miller) recurrence from an order well above
// max(n, t). The unnormalized sequence is scaled with
//   J_0^2 + 2 sum_{k>=1} J_k^2 = 1      (magnitude)
//   J_0   + 2 sum_{k>=1} J_{2k} = 1     (sign)
// Negative orders use J_{-n} = (-1)^n J_n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qwalk/error.hpp"

namespace qwalk::bessel {

inline constexpr int kMaxOrder = 10000;
inline constexpr double kMaxArgument = 1.0e4;
inline constexpr int kMaxZeroOrder = 200;
inline constexpr int kMaxZeroIndex = 100;

// J_x(t) for x in [-half_width, half_width].
struct BesselRow {
  double t = 0.0;
  int half_width = 0;
  std::vector<double> values;  // values[x + half_width] = J_x(t)

  double operator()(int x) const { return values.at(static_cast<std::size_t>(x + half_width)); }

  double sum_of_squares() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }
};

namespace detail {

inline void check_argument(double t) {
  if (!std::isfinite(t) || t < 0.0 || t > kMaxArgument)
    throw DomainError("bessel: argument t=" + std::to_string(t) + " outside [0, 1e4]");
}

inline void check_order(long long order) {
  if (order < -kMaxOrder || order > kMaxOrder)
    throw DomainError("bessel: order " + std::to_string(order) + " outside [-1e4, 1e4]");
}

// Even starting order for the downward recurrence; the margin covers the
// Airy transition region around n ~ t.
inline int start_order(int top_order, double t) {
  const double m = std::max(static_cast<double>(top_order), t);
  int start = static_cast<int>(m + 30.0 + 2.0 * std::sqrt(40.0 * m));
  return start + (start & 1);
}

inline constexpr double kRescale = 1.0e150;

// Runs the recurrence from start down to 0, calling visit(k, unnormalized J_k)
// and rescale(factor) whenever the running values are scaled down. Returns the
// signed normalization constant.
template <typename Visit, typename Rescale>
double miller(int start, double t, Visit&& visit, Rescale&& rescale) {
  double upper = 0.0;
  double cur = 1.0;
  double sum_sq = 0.0;
  double even_sum = 0.0;
  for (int k = start; k >= 0; --k) {
    visit(k, cur);
    if (k == 0) {
      sum_sq += cur * cur;
      even_sum += cur;
      break;
    }
    sum_sq += 2.0 * cur * cur;
    if ((k & 1) == 0) even_sum += 2.0 * cur;
    const double lower = (2.0 * k / t) * cur - upper;
    upper = cur;
    cur = lower;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      upper /= kRescale;
      even_sum /= kRescale;
      sum_sq /= kRescale * kRescale;
      rescale(kRescale);
    }
  }
  const double norm = std::sqrt(sum_sq);
  return even_sum < 0.0 ? -norm : norm;
}

}  // namespace detail

/// J_order(t) for |order| <= 1e4 and 0 <= t <= 1e4, absolute error ~1e-12.
inline double eval_j(int order, double t) {
  detail::check_order(order);
  detail::check_argument(t);
  double reflect = 1.0;
  if (order < 0) {
    order = -order;
    if (order & 1) reflect = -1.0;
  }
  if (t == 0.0) return order == 0 ? 1.0 : 0.0;

  double target = 0.0;
  const double norm = detail::miller(
      detail::start_order(order, t), t,
      [&](int k, double v) {
        if (k == order) target = v;
      },
      [&](double f) { target /= f; });
  return reflect * target / norm;
}

/// J_x(t) for every x in [-half_width, half_width] from a single recurrence.
inline BesselRow row(double t, int half_width) {
  detail::check_argument(t);
  if (half_width < 1 || half_width > kMaxOrder)
    throw DomainError("bessel: half_width must lie in [1, 1e4]");

  BesselRow r;
  r.t = t;
  r.half_width = half_width;
  r.values.assign(2 * static_cast<std::size_t>(half_width) + 1, 0.0);
  const auto at = [&](int x) -> double& { return r.values[static_cast<std::size_t>(x + half_width)]; };

  if (t == 0.0) {
    at(0) = 1.0;
    return r;
  }

  const double norm = detail::miller(
      detail::start_order(half_width, t), t,
      [&](int k, double v) {
        if (k <= half_width) at(k) = v;
      },
      [&](double f) {
        for (int x = 0; x <= half_width; ++x) at(x) /= f;
      });
  for (int x = 0; x <= half_width; ++x) {
    at(x) /= norm;
    at(-x) = (x & 1) ? -at(x) : at(x);
  }
  return r;
}

/// J_n'(t) = (J_{n-1}(t) - J_{n+1}(t)) / 2.
inline double derivative(int order, double t) {
  return 0.5 * (eval_j(order - 1, t) - eval_j(order + 1, t));
}

/// index-th positive zero of J_order: sign-change scan with step 0.1, then
/// bisection down to a 1e-12 bracket.
inline double zero(int order, int index) {
  if (order < 0 || order > kMaxZeroOrder || index < 1 || index > kMaxZeroIndex)
    throw DomainError("bessel: zero(order, index) requires 0 <= order <= 200, 1 <= index <= 100");

  constexpr double step = 0.1;
  // J_n > 0 on (0, n] for n >= 1, and the first zero exceeds n.
  double a = static_cast<double>(order);
  double fa = eval_j(order, a);
  // Zeros are spaced by roughly pi; this bound is never reached in range.
  const double limit = order + 4.0 * (index + 2) + 10.0 * std::sqrt(order + 1.0) + 20.0;
  int found = 0;
  while (a < limit) {
    const double b = a + step;
    const double fb = eval_j(order, b);
    if (fb == 0.0) {
      if (++found == index) return b;
    } else if ((fa < 0.0) != (fb < 0.0) && fa != 0.0) {
      if (++found == index) {
        double lo = a, hi = b, flo = fa;
        while (hi - lo > 1.0e-12) {
          const double mid = 0.5 * (lo + hi);
          const double fm = eval_j(order, mid);
          if (fm == 0.0) return mid;
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
    }
    a = b;
    fa = fb;
  }
  throw InternalError("bessel: zero bracketing failed for order " + std::to_string(order) +
                      ", index " + std::to_string(index));
}

}  // namespace qwalk::bessel

#endif  // QWALK_BESSEL_HPP
