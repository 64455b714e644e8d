#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sphkern/errors.hpp"

namespace sphkern {

struct SimpsonOptions {
  double abs_tol = 1e-12;
  /// Added to abs_tol after scaling by a coarse estimate of |integral|.
  double rel_tol = 0.0;
  /// Uniform panels seeded before refinement; oscillatory integrands need
  /// enough of them that the first estimate sees every lobe.
  int min_panels = 16;
  int max_depth = 50;
};

namespace detail {

template <class F>
double simpson_refine(F& f, double a, double fa, double m, double fm, double b,
                      double fb, double whole, double tol, int depth,
                      int max_depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || !(b - a > 0.0)) {
    return left + right + delta / 15.0;
  }
  if (depth >= max_depth) {
    std::ostringstream os;
    os << "adaptive Simpson did not converge on [" << a << ", " << b
       << "]: local error " << std::abs(delta) / 15.0 << " > tolerance " << tol;
    throw NumericalError(os.str());
  }
  return simpson_refine(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1,
                        max_depth) +
         simpson_refine(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1,
                        max_depth);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction.
/// Throws NumericalError when a panel cannot meet its share of the tolerance
/// within max_depth bisections.
template <class F>
double adaptive_simpson(F&& f, double a, double b,
                        const SimpsonOptions& opt = {}) {
  if (a == b) return 0.0;
  const int panels = opt.min_panels < 1 ? 1 : opt.min_panels;
  const double h = (b - a) / panels;

  std::vector<double> xs(2 * panels + 1);
  std::vector<double> fs(2 * panels + 1);
  for (int i = 0; i <= 2 * panels; ++i) {
    xs[i] = (i == 2 * panels) ? b : a + 0.5 * h * i;
    fs[i] = f(xs[i]);
  }
  double coarse = 0.0;
  for (int i = 0; i < panels; ++i) {
    coarse += (xs[2 * i + 2] - xs[2 * i]) / 6.0 *
              (fs[2 * i] + 4.0 * fs[2 * i + 1] + fs[2 * i + 2]);
  }
  const double tol = opt.abs_tol + opt.rel_tol * std::abs(coarse);

  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = xs[2 * i], x1 = xs[2 * i + 1], x2 = xs[2 * i + 2];
    const double s =
        (x2 - x0) / 6.0 * (fs[2 * i] + 4.0 * fs[2 * i + 1] + fs[2 * i + 2]);
    total += detail::simpson_refine(f, x0, fs[2 * i], x1, fs[2 * i + 1], x2,
                                    fs[2 * i + 2], s,
                                    tol * (x2 - x0) / std::abs(b - a), 0,
                                    opt.max_depth);
  }
  return total;
}

}  // namespace sphkern
