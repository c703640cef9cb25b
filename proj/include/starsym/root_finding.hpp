#pragma once

#include <cmath>
#include <stdexcept>

namespace starsym {

class RootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BracketOptions {
  /// Bisection stops once the bracket is this narrow.
  double width = 1e-12;
  /// Secant refinement steps after bisection.
  int secant_steps = 8;
};

/// Root of f on [lo, hi] with f(lo) and f(hi) of opposite sign (or zero).
/// Bisection to `width`, then secant steps that are kept inside the bracket.
template <class F>
double find_root_bracketed(F&& f, double lo, double hi, const BracketOptions& opts = {}) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw RootError("root is not bracketed");
  while (hi - lo > opts.width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  // Secant polish from the final bracket.
  double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double fbest = std::min(std::abs(flo), std::abs(fhi));
  for (int i = 0; i < opts.secant_steps; ++i) {
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 >= lo && x2 <= hi)) break;
    const double f2 = f(x2);
    if (std::abs(f2) < fbest) {
      best = x2;
      fbest = std::abs(f2);
    }
    if (f2 == 0.0 || x2 == x1) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
  }
  return best;
}

}  // namespace starsym
