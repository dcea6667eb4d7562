#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the library's closed forms.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "g2lab/scanline.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Trapezoid rule for the Fourier integral of a 0/1 double slit on a grid
/// of spacing h anchored at the outer slit edges. Edge samples take the
/// midpoint value 1/2, so the quadrature converges at O(h^2).
/// h must divide both the slit width and the gap between slits.
inline std::complex<double> slit_spectrum(double width, double separation, double xi, double h) {
  const double outer = 0.5 * (separation + width);
  const double inner = 0.5 * (separation - width);
  const auto n = static_cast<long>(std::llround(2.0 * outer / h));
  std::complex<double> acc{0.0, 0.0};
  for (long i = 0; i <= n; ++i) {
    const double x = -outer + h * static_cast<double>(i);
    const double ax = std::abs(x);
    double t = 0.0;
    if (std::abs(ax - outer) < 0.25 * h || std::abs(ax - inner) < 0.25 * h) t = 0.5;
    else if (ax > inner && ax < outer) t = 1.0;
    if (t == 0.0) continue;
    acc += t * std::polar(1.0, -xi * x);
  }
  return acc * h;
}

/// Section sampled from an arbitrary callable on a uniform grid.
template <class F>
g2lab::CrossSection section_from(F&& f, double x_min, double x_max, std::size_t n,
                                 g2lab::SourceKind kind = g2lab::SourceKind::thermal) {
  g2lab::CrossSection s;
  s.source_kind = kind;
  s.line = g2lab::ScanLine{0.0, 0.0, {x_min, x_max}, n, "synthetic", false};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.line.parameter(i);
    s.parameter.push_back(x);
    s.values.push_back(f(x));
  }
  return s;
}

/// Positions of local minima of |g| by golden-section refinement on
/// brackets found from a dense scan. Used to locate dark fringes.
template <class F>
std::vector<double> minima(F&& f, double lo, double hi, std::size_t n) {
  std::vector<double> out;
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x0 = lo + h * static_cast<double>(i - 1);
    const double x1 = x0 + h, x2 = x1 + h;
    if (!(f(x1) < f(x0) && f(x1) <= f(x2))) continue;
    double a = x0, b = x2;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 100; ++k) {
      const double c = b - g * (b - a), d = a + g * (b - a);
      if (f(c) < f(d)) b = d;
      else a = c;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

}  // namespace oracle
