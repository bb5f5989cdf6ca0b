#pragma once

// Central finite-difference stencils shared by the surface and verification
// kernels. The templates work for any type with +, - and scalar *.

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace rwsurf::numdiff {

/// Default step: max(1e-4, 1e-4 |x|).
inline double default_step(double x) { return std::max(1e-4, 1e-4 * std::abs(x)); }

/// Fourth-order central first derivative.
template <class F>
auto central4(F&& f, double x, double h) {
  using R = std::decay_t<decltype(f(x))>;
  const R fm2 = f(x - 2.0 * h);
  const R fm1 = f(x - h);
  const R fp1 = f(x + h);
  const R fp2 = f(x + 2.0 * h);
  return R((fm2 - fp2 + 8.0 * (fp1 - fm1)) * (1.0 / (12.0 * h)));
}

/// Fourth-order central second derivative.
template <class F>
auto central4_second(F&& f, double x, double h) {
  using R = std::decay_t<decltype(f(x))>;
  const R f0 = f(x);
  const R fm2 = f(x - 2.0 * h);
  const R fm1 = f(x - h);
  const R fp1 = f(x + h);
  const R fp2 = f(x + 2.0 * h);
  return R((16.0 * (fp1 + fm1) - (fp2 + fm2) - 30.0 * f0) * (1.0 / (12.0 * h * h)));
}

/// One Richardson level on top of central4: (16 D(h/2) - D(h)) / 15.
template <class F>
auto richardson_central4(F&& f, double x, double h) {
  using R = std::decay_t<decltype(f(x))>;
  const R coarse = central4(f, x, h);
  const R fine = central4(f, x, 0.5 * h);
  return R((16.0 * fine - coarse) * (1.0 / 15.0));
}

}  // namespace rwsurf::numdiff
