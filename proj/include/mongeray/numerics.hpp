#pragma once

#include "mongeray/geometry.hpp"
#include "mongeray/quadrature.hpp"
#include "mongeray/regression.hpp"
#include "mongeray/roots.hpp"

namespace mongeray {

/// Iterated integral of h over Gamma_a, the triangle below l_a with vertices
/// (-a, 0), (1, omega(a)(1+a)) and (1, 0):
///   int_{-a}^{1} int_0^{omega(a)(x1+a)} h(x1, x2) dx2 dx1.
/// Half of the budget goes to the outer rule, the rest is spread over the
/// inner integrals.
template <class H>
QuadratureResult integrate_gamma_region(const H& h, const RayProfile& profile, double a, double tol) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("integrate_gamma_region: a outside (0,1]");
  const double w = profile.eval(a);
  const double inner_tol = 0.5 * tol / (1.0 + a);
  long inner_evals = 0;
  auto inner = [&](double x1) {
    const double top = w * (x1 + a);
    auto slice = [&](double x2) { return h(Point{x1, x2}); };
    const auto r = integrate_1d(slice, 0.0, top, QuadratureOptions{inner_tol, 0.0, 4000});
    inner_evals += r.evaluations;
    return r.value;
  };
  auto outer = integrate_1d(inner, -a, 1.0, QuadratureOptions{0.5 * tol, 0.0, 4000});
  outer.error_estimate += 0.5 * tol;
  outer.evaluations += inner_evals;
  return outer;
}

}  // namespace mongeray
