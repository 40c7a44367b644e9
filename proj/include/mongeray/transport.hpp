#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include "mongeray/densities.hpp"
#include "mongeray/errors.hpp"
#include "mongeray/geometry.hpp"
#include "mongeray/quadrature.hpp"
#include "mongeray/roots.hpp"

namespace mongeray {

// Along l_a the area element is omega'(a) (x1 + a + omega/omega') dx1 da, so
// the disintegrated source measure on the ray has density x1 + a + r(a) with
// r = omega/omega', and the target measure carries the extra factor
// 1 + c(zeta(x1) + eta(omega(a)(x1 + a))). Both are written below in the
// shifted variable L = x1 + a in [0, 1 + a].

/// Source mass on l_a to the left of abscissa p: (p+a)^2/2 + r(a)(p+a).
inline double cdf_source_on_ray(const RayProfile& profile, double a, double p) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("cdf_source_on_ray: a outside (0,1]");
  if (!(p >= -a && p <= 1.0)) throw DomainError("cdf_source_on_ray: p outside [-a,1]");
  const double len = p + a;
  return len * (0.5 * len + profile.ratio(a));
}

/// Target mass on l_a to the left of q by adaptive quadrature of the
/// weighted target density.
inline double cdf_target_on_ray(const DensityPair& pair, double a, double q, double tol = 1e-13) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("cdf_target_on_ray: a outside (0,1]");
  if (!(q >= -a && q <= 1.0)) throw DomainError("cdf_target_on_ray: q outside [-a,1]");
  const auto& profile = pair.profile();
  const double r = profile.ratio(a);
  const double log_w = profile.log_eval(a);
  const double c = pair.c();
  auto integrand = [&](double x1) {
    const double len = x1 + a;
    const double height_eta = len > 0.0 ? eta_at_log_height(profile, log_w + std::log(len)) : 0.0;
    return (len + r) * (1.0 + c * (zeta(x1) + height_eta));
  };
  return integrate_1d(integrand, -a, q, QuadratureOptions{tol, 0.0, 4000}).value;
}

/// Same quantity in closed form.
///
/// The zeta part is a polynomial in L. For the eta part substitute
/// tau = omega(a) L; with N(t) = t^2 a(t)^2 one gets
///   (T N'(T) - N(T)) / omega^2 + r N'(T) / omega,   T = omega(a) L,
/// which reduces to L^2 (A^2 + 2 A k) + 2 r L (A^2 + A k) where A = a(T) and
/// k = T a'(T). Nothing is divided by omega, so the form survives underflow.
inline double cdf_target_closed(const DensityPair& pair, double a, double q) {
  const auto& profile = pair.profile();
  const double len = q + a;
  const double r = profile.ratio(a);
  const double source = len * (0.5 * len + r);
  const double c = pair.c();
  if (c == 0.0 || len <= 0.0) return source;

  const double c2 = -12.0;
  const double c1 = 24.0 * a + 12.0;
  const double c0 = (-12.0 * a - 12.0) * a - 2.0;
  const double l2 = len * len;
  const double zeta_part =
      len * (r * c0 + len * (0.5 * (c0 + r * c1) + len * ((c1 + r * c2) / 3.0 + len * (0.25 * c2))));

  const double A = ray_index_from_log_height(profile, profile.log_eval(a) + std::log(len));
  double eta_part = 0.0;
  if (A > 0.0) {
    const double k = scaled_height_derivative(profile, A);
    eta_part = l2 * (A * A + 2.0 * A * k) + 2.0 * r * len * (A * A + A * k);
  }
  return source + c * (zeta_part + eta_part);
}

/// Image abscissa q on l_a of the point with abscissa p: the unique root of
/// cdf_target(a, q) = cdf_source(a, p).
inline double map_on_ray(const DensityPair& pair, double a, double p, const RootOptions& opts = {}) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("map_on_ray: a outside (0,1)");
  if (!(p >= -a && p <= 1.0)) throw DomainError("map_on_ray: p outside [-a,1]");
  if (pair.c() == 0.0) return p;
  const double goal = cdf_source_on_ray(pair.profile(), a, p);
  auto residual = [&](double len) { return cdf_target_closed(pair, a, len - a) - goal; };
  const double hi = 1.0 + a;
  const double top = residual(hi);
  if (top < 0.0) {
    const double scale = cdf_source_on_ray(pair.profile(), a, 1.0);
    if (-top <= 1e-13 * scale) return 1.0;
    std::ostringstream os;
    os << "map_on_ray: per-ray mass balance broken at a = " << a << " (residual " << top << ")";
    throw InternalConsistencyError(os.str());
  }
  const double len = find_root_monotone(residual, 0.0, hi, opts);
  return len - a;
}

/// Evaluates the monotone optimal map of a density pair.
class TransportEvaluator {
 public:
  explicit TransportEvaluator(DensityPair pair, RootOptions opts = {})
      : pair_(std::move(pair)), opts_(opts) {}

  const DensityPair& pair() const noexcept { return pair_; }
  const RootOptions& tolerance() const noexcept { return opts_; }

  double on_ray(double a, double p) const { return map_on_ray(pair_, a, p, opts_); }

  /// T(x). On the reflected domain the map acts on (x1, |x2|) and keeps the
  /// sign of x2.
  Point operator()(Point x) const {
    const Domain dom = pair_.domain();
    if (x.x2 == 0.0) throw DegenerateRayError("transport_map: point on the axis x2 = 0");
    if (!in_domain(dom, x)) throw DomainError("transport_map: point outside the domain");
    const double sign = x.x2 < 0.0 ? -1.0 : 1.0;
    const Point upper{x.x1, std::abs(x.x2)};
    const auto& profile = pair_.profile();
    const double a = ray_index(profile, upper);
    const double q = on_ray(a, upper.x1);
    return {q, sign * profile.eval(a) * (q + a)};
  }

 private:
  DensityPair pair_;
  RootOptions opts_;
};

inline Point transport_map(const DensityPair& pair, Point x) { return TransportEvaluator(pair)(x); }

/// Map of a pair of densities on the unit square whose vertical slices are
/// transported monotonically: T(x1, x2) = (x1, G_{x1}^{-1}(F_{x1}(x2))),
/// with F, G the slice primitives of f and g.
class ProductMap {
 public:
  using Density = std::function<double(double, double)>;

  struct Options {
    int validation_slices = 17;
    int validation_points = 33;
    double quad_tol = 1e-14;
  };

  ProductMap(Density f, Density g) : ProductMap(std::move(f), std::move(g), Options{}) {}

  ProductMap(Density f, Density g, Options opts) : f_(std::move(f)), g_(std::move(g)), opts_(opts) {
    validate();
  }

  double source(double x1, double x2) const { return f_(x1, x2); }
  double target(double x1, double x2) const { return g_(x1, x2); }
  double source_bound() const noexcept { return f_max_; }

  double slice_source_cdf(double x1, double x2) const { return slice_cdf(f_, x1, x2); }
  double slice_target_cdf(double x1, double x2) const { return slice_cdf(g_, x1, x2); }

  Point operator()(Point x) const {
    if (!(x.x1 > 0.0 && x.x1 < 1.0 && x.x2 >= 0.0 && x.x2 <= 1.0)) {
      throw DomainError("product_map: point outside the unit square");
    }
    const double goal = slice_source_cdf(x.x1, x.x2);
    auto residual = [&](double y) { return slice_target_cdf(x.x1, y) - goal; };
    const double top = residual(1.0);
    if (top <= 0.0) return {x.x1, 1.0};
    return {x.x1, find_root_monotone(residual, 0.0, 1.0, RootOptions{})};
  }

 private:
  double slice_cdf(const Density& d, double x1, double x2) const {
    auto slice = [&](double y) { return d(x1, y); };
    return integrate_1d(slice, 0.0, x2, QuadratureOptions{opts_.quad_tol, 1e-13, 4000}).value;
  }

  void validate() {
    if (!f_ || !g_) throw ConstructionError("product_map: densities required");
    const int ns = opts_.validation_slices, np = opts_.validation_points;
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ns; ++i) {
      const double x1 = (i + 0.5) / ns;
      for (int j = 0; j <= np; ++j) {
        const double x2 = static_cast<double>(j) / np;
        const double fv = f_(x1, x2), gv = g_(x1, x2);
        if (!std::isfinite(fv) || !std::isfinite(gv)) throw ConstructionError("product_map: non-finite density");
        lo = std::min({lo, fv, gv});
        f_max_ = std::max(f_max_, fv);
      }
      const double total_f = slice_source_cdf(x1, 1.0);
      const double total_g = slice_target_cdf(x1, 1.0);
      if (std::abs(total_f - total_g) > 1e-9 * std::max(1.0, total_f)) {
        throw ConstructionError("product_map: slice masses F(1) and G(1) differ");
      }
      for (int j = 1; j < np; ++j) {
        const double x2 = static_cast<double>(j) / np;
        if (slice_source_cdf(x1, x2) < slice_target_cdf(x1, x2) - 1e-12) {
          throw ConstructionError("product_map: slice condition F >= G violated");
        }
      }
    }
    if (!(lo > 0.0)) throw ConstructionError("product_map: densities must be bounded away from zero");
    // Rejection sampling needs an envelope; pad the grid maximum.
    f_max_ *= 1.25;
  }

  Density f_, g_;
  Options opts_;
  double f_max_ = 0.0;
};

}  // namespace mongeray
