#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "mongeray/errors.hpp"

namespace mongeray {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_subdivisions = 4000;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
double checked_eval(const F& f, double x) {
  const double y = static_cast<double>(f(x));
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "non-finite integrand value at x = " << x;
    throw IntegrationError(os.str());
  }
  return y;
}

template <class F>
Panel gauss_kronrod_15(const F& f, double lo, double hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<double, 7> left{}, right{};
  const double fc = checked_eval(f, center);
  double resk = fc * kKronrodWeights[7];
  double resg = fc * kGaussWeights[3];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    left[j] = checked_eval(f, center - dx);
    right[j] = checked_eval(f, center + dx);
    const double sum = left[j] + right[j];
    resk += kKronrodWeights[j] * sum;
    resabs += kKronrodWeights[j] * (std::abs(left[j]) + std::abs(right[j]));
    if (j % 2 == 1) resg += kGaussWeights[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kKronrodWeights[j] * (std::abs(left[j] - mean) + std::abs(right[j] - mean));
  }
  const double ah = std::abs(half);
  resk *= half;
  resabs *= ah;
  resasc *= ah;
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {lo, hi, resk, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature: the panel with the largest
/// error estimate is bisected until the summed estimate is within tolerance.
template <class F>
QuadratureResult integrate_1d(const F& f, double lo, double hi, const QuadratureOptions& opts) {
  if (!(lo <= hi)) throw DomainError("integrate_1d: require lo <= hi");
  if (!(opts.abs_tol > 0.0 || opts.rel_tol > 0.0)) {
    throw DomainError("integrate_1d: tolerance must be positive");
  }
  QuadratureResult out;
  if (lo == hi) return out;

  std::priority_queue<detail::Panel> heap;
  auto first = detail::gauss_kronrod_15(f, lo, hi);
  out.evaluations = 15;
  double value = first.value;
  double error = first.error;
  heap.push(first);

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
  int subdivisions = 0;
  while (error > target()) {
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (subdivisions >= opts.max_subdivisions || !(mid > worst.lo && mid < worst.hi)) {
      throw ToleranceNotMetError("integrate_1d: tolerance not met", value, error);
    }
    heap.pop();
    auto l = detail::gauss_kronrod_15(f, worst.lo, mid);
    auto r = detail::gauss_kronrod_15(f, mid, worst.hi);
    out.evaluations += 30;
    ++subdivisions;
    value += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    if (error <= target()) {
      // Re-sum to shed accumulated cancellation in the running totals.
      value = 0.0;
      error = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  out.value = value;
  out.error_estimate = error;
  return out;
}

template <class F>
QuadratureResult integrate_1d(const F& f, double lo, double hi, double tol) {
  return integrate_1d(f, lo, hi, QuadratureOptions{tol, 0.0, 4000});
}

}  // namespace mongeray
