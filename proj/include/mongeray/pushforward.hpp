#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "mongeray/densities.hpp"
#include "mongeray/errors.hpp"
#include "mongeray/geometry.hpp"
#include "mongeray/quadrature.hpp"
#include "mongeray/transport.hpp"

namespace mongeray {

/// Counter-based generator: the stream for sample i is a pure function of
/// (seed, i), so results do not depend on how samples are split over threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finaliser
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct BinGrid {
  int nx = 20;
  int ny = 20;
  double x_lo = -1.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;

  int count() const { return nx * ny; }
  double dx() const { return (x_hi - x_lo) / nx; }
  double dy() const { return (y_hi - y_lo) / ny; }

  /// Row-major bin index, or -1 outside the grid.
  int index(Point p) const {
    const int i = static_cast<int>(std::floor((p.x1 - x_lo) / dx()));
    const int j = static_cast<int>(std::floor((p.x2 - y_lo) / dy()));
    if (i < 0 || i >= nx || j < 0 || j >= ny) return -1;
    return j * nx + i;
  }
};

struct PushforwardReport {
  long n_samples = 0;
  long failures = 0;
  long outside = 0;
  std::uint64_t seed = 0;
  BinGrid bins;
  std::vector<double> empirical;  // fraction of images in each bin
  std::vector<double> expected;   // target mass of each bin
  std::vector<double> sigma;      // binomial standard deviation per bin
  double max_deviation = 0.0;
  int max_deviation_bin = -1;
  double max_sigma_ratio = 0.0;   // max_k |empirical - expected| / sigma
  bool aborted = false;
};

inline constexpr double kMaxFailureRate = 1e-4;

/// Samples x ~ source by rejection from the grid's bounding box, bins T(x)
/// and compares the empirical bin fractions with the supplied target masses.
///
/// Problem requirements:
///   double source(Point), double source_bound(), Point map(Point) (may throw),
///   double target_bin_mass(double x0, double x1, double y0, double y1).
template <class Problem>
PushforwardReport pushforward_check(const Problem& problem, long n_samples, std::uint64_t seed, BinGrid bins,
                                    unsigned threads = 0) {
  if (n_samples < 1) throw DomainError("pushforward_check: need at least one sample");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  PushforwardReport rep;
  rep.n_samples = n_samples;
  rep.seed = seed;
  rep.bins = bins;

  const double bound = problem.source_bound();
  struct Tally {
    std::vector<long> counts;
    long failures = 0;
    long outside = 0;
    std::exception_ptr error;
  };
  std::vector<Tally> tallies(threads);
  auto work = [&](unsigned t) {
    Tally& tally = tallies[t];
    tally.counts.assign(static_cast<std::size_t>(bins.count()), 0);
    try {
      for (long i = t; i < n_samples; i += threads) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        Point x;
        for (;;) {
          x = {bins.x_lo + (bins.x_hi - bins.x_lo) * rng.uniform(), bins.y_lo + (bins.y_hi - bins.y_lo) * rng.uniform()};
          if (bound * rng.uniform() < problem.source(x)) break;
        }
        Point y;
        try {
          y = problem.map(x);
        } catch (const Error&) {
          ++tally.failures;
          if (static_cast<double>(tally.failures) > kMaxFailureRate * static_cast<double>(n_samples)) return;
          continue;
        }
        const int k = bins.index(y);
        if (k < 0) {
          ++tally.outside;
        } else {
          ++tally.counts[static_cast<std::size_t>(k)];
        }
      }
    } catch (...) {
      tally.error = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  std::vector<long> counts(static_cast<std::size_t>(bins.count()), 0);
  for (const auto& tally : tallies) {
    if (tally.error) std::rethrow_exception(tally.error);
    rep.failures += tally.failures;
    rep.outside += tally.outside;
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += tally.counts[k];
  }
  if (static_cast<double>(rep.failures) > kMaxFailureRate * static_cast<double>(n_samples)) {
    rep.aborted = true;
    return rep;
  }

  const double n = static_cast<double>(n_samples);
  rep.empirical.resize(counts.size());
  rep.expected.resize(counts.size());
  rep.sigma.resize(counts.size());
  for (int j = 0; j < bins.ny; ++j) {
    for (int i = 0; i < bins.nx; ++i) {
      const auto k = static_cast<std::size_t>(j * bins.nx + i);
      const double x0 = bins.x_lo + i * bins.dx(), y0 = bins.y_lo + j * bins.dy();
      const double mass = problem.target_bin_mass(x0, x0 + bins.dx(), y0, y0 + bins.dy());
      rep.expected[k] = mass;
      rep.empirical[k] = static_cast<double>(counts[k]) / n;
      rep.sigma[k] = std::sqrt(std::max(mass * (1.0 - mass), 0.0) / n);
      const double dev = std::abs(rep.empirical[k] - mass);
      if (dev > rep.max_deviation) {
        rep.max_deviation = dev;
        rep.max_deviation_bin = static_cast<int>(k);
      }
      if (rep.sigma[k] > 0.0) {
        rep.max_sigma_ratio = std::max(rep.max_sigma_ratio, dev / rep.sigma[k]);
      } else if (counts[k] > 0) {
        rep.max_sigma_ratio = std::numeric_limits<double>::infinity();
      }
    }
  }
  return rep;
}

/// Mass of density over bin [x0,x1] x [y0,y1] intersected with the domain, by
/// iterated quadrature. The outer range is split where the domain's slanted
/// edges cross the bin's horizontal sides, and the inner range at x2 = 0.
template <class Density>
double domain_bin_mass(const Domain& domain, const Density& density, double x0, double x1, double y0, double y1,
                       double tol = 1e-11) {
  x0 = std::max(x0, -1.0);
  x1 = std::min(x1, 1.0);
  if (!(x0 < x1)) return 0.0;
  std::vector<double> cuts{x0, x1};
  for (double y : {y0, y1}) {
    for (double c : {2.0 * y - 1.0, -2.0 * y - 1.0}) {
      if (c > x0 && c < x1) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  auto inner = [&](double s) {
    const double lo = std::max(y0, domain.lower(s));
    const double hi = std::min(y1, domain.upper(s));
    if (!(lo < hi)) return 0.0;
    auto f = [&](double t) { return density(Point{s, t}); };
    const QuadratureOptions opts{tol, 1e-12, 4000};
    if (lo < 0.0 && hi > 0.0) return integrate_1d(f, lo, 0.0, opts).value + integrate_1d(f, 0.0, hi, opts).value;
    return integrate_1d(f, lo, hi, opts).value;
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] > cuts[k]) total += integrate_1d(inner, cuts[k], cuts[k + 1], QuadratureOptions{tol, 1e-12, 4000}).value;
  }
  return total;
}

/// Push-forward problem for a constructed density pair and its monotone map.
class RayTransportProblem {
 public:
  explicit RayTransportProblem(const DensityPair& pair) : map_(pair) {}

  double source(Point x) const { return map_.pair().source(x); }
  double source_bound() const { return map_.pair().prefactor(); }
  Point map(Point x) const { return map_(x); }
  double target_bin_mass(double x0, double x1, double y0, double y1) const {
    const auto& pair = map_.pair();
    // Integrate the smooth factor inside the domain; the indicator is handled by the limits.
    auto g = [&](Point x) { return pair.prefactor() * pair.target_factor(x); };
    return domain_bin_mass(pair.domain(), g, x0, x1, y0, y1);
  }

  /// 20 x 20 style grid over the domain's bounding box.
  BinGrid bins(int nx, int ny) const {
    BinGrid b;
    b.nx = nx;
    b.ny = ny;
    b.y_lo = map_.pair().reflected() ? -1.0 : 0.0;
    return b;
  }

 private:
  TransportEvaluator map_;
};

/// Push-forward problem for a ProductMap on the unit square.
class ProductMapProblem {
 public:
  explicit ProductMapProblem(const ProductMap& map) : map_(map) {}

  double source(Point x) const { return map_.source(x.x1, x.x2); }
  double source_bound() const { return map_.source_bound(); }
  Point map(Point x) const { return map_(x); }
  double target_bin_mass(double x0, double x1, double y0, double y1) const {
    auto inner = [&](double s) {
      auto g = [&](double t) { return map_.target(s, t); };
      return integrate_1d(g, y0, y1, QuadratureOptions{1e-12, 1e-12, 4000}).value;
    };
    return integrate_1d(inner, x0, x1, QuadratureOptions{1e-11, 1e-12, 4000}).value;
  }

  BinGrid bins(int nx, int ny) const {
    BinGrid b;
    b.nx = nx;
    b.ny = ny;
    b.x_lo = 0.0;
    return b;
  }

 private:
  const ProductMap& map_;
};

}  // namespace mongeray
