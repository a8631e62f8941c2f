#ifndef QWALK_LINE_RATES_HPP
#define QWALK_LINE_RATES_HPP

#include <cmath>
#include <cstddef>

#include "qwalk/fields.hpp"

namespace qwalk::rates {

/// Empirical birth/death rates on the line:
///   lambda(x) = sqrt(rho(x+1)/rho(x)) * l_x,   mu(x) = sqrt(rho(x-1)/rho(x)) * m_x,
/// both 0 where rho(x) <= 0 and outside [-L, L].
inline LineRates line_rates(const DensityField& rho, const TransitionFlags& flags) {
  const int L = flags.half_width();
  if (rho.first_label != -L || rho.size() != 2 * static_cast<std::size_t>(L) + 1)
    throw ValidationError("line_rates: density support must be [-L, L] of the transition array");
  LineRates out;
  out.half_width = L;
  out.lambda.assign(rho.size(), 0.0);
  out.mu.assign(rho.size(), 0.0);
  for (int x = -L; x <= L; ++x) {
    const std::size_t i = static_cast<std::size_t>(x + L);
    const double here = rho.rho[i];
    if (!(here > 0.0)) continue;
    if (flags.l(x) && x < L) out.lambda[i] = std::sqrt(rho.rho[i + 1] / here);
    if (flags.m(x) && x > -L) out.mu[i] = std::sqrt(rho.rho[i - 1] / here);
  }
  return out;
}

}  // namespace qwalk::rates

#endif  // QWALK_LINE_RATES_HPP
