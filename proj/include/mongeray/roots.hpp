#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include "mongeray/errors.hpp"

namespace mongeray {

struct RootOptions {
  double x_abs_tol = 0.0;
  double x_rel_tol = 4.0 * std::numeric_limits<double>::epsilon();
  double f_tol = 0.0;
  int max_iterations = 300;
};

/// Root of a monotone function on a sign-changing bracket.
///
/// Illinois-modified false position, falling back to bisection whenever a
/// step fails to halve the bracket. Stops when |f| <= f_tol or when the
/// bracket width drops to x_abs_tol + x_rel_tol * |x|. The returned value
/// always lies inside the initial bracket. Either endpoint may evaluate to
/// +-infinity (log-space residuals), in which case bisection is used until
/// both ends are finite.
template <class F>
double find_root_monotone(const F& f, double lo, double hi, const RootOptions& opts) {
  if (!(lo <= hi)) throw BracketError("find_root_monotone: require lo <= hi");
  double flo = f(lo);
  double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi)) throw BracketError("find_root_monotone: NaN at bracket end");
  if (std::abs(flo) <= opts.f_tol || flo == 0.0) return lo;
  if (std::abs(fhi) <= opts.f_tol || fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    std::ostringstream os;
    os << "find_root_monotone: no sign change on [" << lo << ", " << hi << "] (f = " << flo << ", "
       << fhi << ")";
    throw BracketError(os.str());
  }
  const bool increasing = flo < 0;
  int retained = 0;  // -1: lo kept last step, +1: hi kept last step
  bool bisect = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double width = hi - lo;
    const double mid = lo + 0.5 * width;
    if (width <= opts.x_abs_tol + opts.x_rel_tol * std::max(std::abs(lo), std::abs(hi)) ||
        !(mid > lo && mid < hi)) {
      break;
    }
    double x = mid;
    if (!bisect && std::isfinite(flo) && std::isfinite(fhi)) {
      const double cand = lo - flo * width / (fhi - flo);
      if (cand > lo && cand < hi) x = cand;
    }
    const double fx = f(x);
    if (std::isnan(fx)) throw BracketError("find_root_monotone: NaN inside bracket");
    if (fx == 0.0 || std::abs(fx) <= opts.f_tol) return x;
    if ((fx < 0) == increasing) {
      lo = x;
      flo = fx;
      if (retained == +1) fhi *= 0.5;
      retained = +1;
    } else {
      hi = x;
      fhi = fx;
      if (retained == -1) flo *= 0.5;
      retained = -1;
    }
    bisect = (hi - lo) > 0.5 * width;
  }
  // Illinois scaling distorts stored residuals, so pick the midpoint of the
  // final bracket; it is within half a bracket width of the root.
  return lo + 0.5 * (hi - lo);
}

/// Convenience form: stop when |f(x)| <= tol or width <= tol * (1 + |x|).
template <class F>
double find_root_monotone(const F& f, double lo, double hi, double tol) {
  return find_root_monotone(f, lo, hi, RootOptions{tol, tol, tol, 300});
}

}  // namespace mongeray
