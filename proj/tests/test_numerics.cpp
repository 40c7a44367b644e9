#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "mongeray/densities.hpp"
#include "mongeray/numerics.hpp"

using namespace mongeray;

TEST(Integrate1d, Polynomials) {
  EXPECT_NEAR(integrate_1d([](double x) { return x; }, 0.0, 1.0, 1e-12).value, 0.5, 1e-15);
  EXPECT_NEAR(integrate_1d([](double x) { return zeta(x); }, 0.0, 1.0, 1e-12).value, 0.0, 1e-14);
  // Gauss 7 is exact to degree 13, so the embedded estimate vanishes there.
  for (int k = 0; k <= 13; ++k) {
    const auto r = integrate_1d([k](double x) { return std::pow(x, k); }, 0.0, 1.0, 1e-13);
    EXPECT_NEAR(r.value, 1.0 / (k + 1), 1e-13) << k;
    EXPECT_EQ(r.evaluations, 15) << k;
  }
}

TEST(Integrate1d, EmptyAndReversedIntervals) {
  const auto r = integrate_1d([](double) { return 1.0; }, 0.3, 0.3, 1e-10);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.error_estimate, 0.0);
  EXPECT_THROW(integrate_1d([](double) { return 1.0; }, 1.0, 0.0, 1e-10), DomainError);
  EXPECT_THROW(integrate_1d([](double) { return 1.0; }, 0.0, 1.0, QuadratureOptions{0.0, 0.0, 10}), DomainError);
}

TEST(Integrate1d, NonFiniteSampleIsAnError) {
  EXPECT_THROW(integrate_1d([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0, 1e-10), IntegrationError);
  EXPECT_THROW(integrate_1d([](double) { return std::nan(""); }, 0.0, 1.0, 1e-10), IntegrationError);
}

TEST(Integrate1d, ToleranceNotMetCarriesEstimate) {
  try {
    integrate_1d([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, QuadratureOptions{1e-14, 0.0, 5});
    FAIL() << "expected ToleranceNotMetError";
  } catch (const ToleranceNotMetError& e) {
    EXPECT_TRUE(std::isfinite(e.estimate()));
    EXPECT_GT(e.error_estimate(), 1e-14);
  }
}

TEST(Integrate1d, AdaptsToEndpointSingularity) {
  const auto r = integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  EXPECT_GE(r.error_estimate, 0.0);
  EXPECT_GT(r.evaluations, 15);
}

TEST(Integrate1d, HalvingToleranceDoesNotIncreaseError) {
  struct Fixture {
    std::function<double(double)> f;
    double lo, hi, exact;
  };
  const std::vector<Fixture> fixtures{
      {[](double x) { return std::exp(x); }, 0.0, 1.0, std::exp(1.0) - 1.0},
      {[](double x) { return std::sqrt(x); }, 0.0, 1.0, 2.0 / 3.0},
      {[](double x) { return std::log(x); }, 0.0, 1.0, -1.0},
  };
  for (const auto& fx : fixtures) {
    double prev = std::numeric_limits<double>::infinity();
    for (double tol = 1e-4; tol >= 1e-12; tol *= 0.5) {
      const double err = std::abs(integrate_1d(fx.f, fx.lo, fx.hi, tol).value - fx.exact);
      EXPECT_LE(err, std::max(prev, 4e-16)) << "tol=" << tol;
      EXPECT_LE(err, tol);
      prev = std::max(err, 4e-16);
    }
  }
}

TEST(GammaRegion, AreaOfTriangle) {
  for (const auto& p : {RayProfile::power(0.5), RayProfile::power(1.0), RayProfile::exponential()}) {
    for (double a : {0.1, 0.5, 0.9}) {
      const double w = p.eval(a);
      const double area = integrate_gamma_region([](Point) { return 1.0; }, p, a, 1e-12 * w).value;
      EXPECT_NEAR(area, 0.5 * w * (1 + a) * (1 + a), 1e-11 * w) << p.name();
    }
  }
}

TEST(GammaRegion, ZetaClosedForm) {
  // -int_{Gamma_a} zeta = omega(a) int_{-a}^1 (x1 + a)(12 x1^2 - 12 x1 + 2) dx1,
  // expanded by hand: omega a^2 (1+a)^2.
  for (const auto& p : {RayProfile::power(1.0), RayProfile::power(2.0)}) {
    for (double a : {0.2, 0.5, 0.8}) {
      const double w = p.eval(a);
      const double q = -integrate_gamma_region([](Point x) { return zeta(x.x1); }, p, a, 1e-13).value;
      EXPECT_NEAR(q, w * a * a * (1 + a) * (1 + a), 1e-11);
    }
  }
}

TEST(GammaRegion, EtaClosedFormLinearProfile) {
  // For omega = a/2: a(t) = (-1 + sqrt(1 + 8t))/2 and N(t) = t^2 a(t)^2.
  const auto p = RayProfile::power(1.0);
  auto a_of_t = [](double t) { return 0.5 * (-1.0 + std::sqrt(1.0 + 8.0 * t)); };
  for (double a : {0.1, 0.5, 0.9}) {
    const double w = 0.5 * a, t = w * (1 + a);
    const double N = t * t * a_of_t(t) * a_of_t(t);
    const double q = integrate_gamma_region([&](Point x) { return eta(p, x.x2); }, p, a, 1e-12).value;
    EXPECT_NEAR(q, N / w, 1e-10 * std::max(1.0, N / w));
  }
}

TEST(GammaRegion, RejectsBadIndex) {
  EXPECT_THROW(integrate_gamma_region([](Point) { return 1.0; }, RayProfile::power(1.0), 0.0, 1e-8), DomainError);
}

TEST(FindRoot, Examples) {
  EXPECT_NEAR(find_root_monotone([](double x) { return x * x - 0.25; }, 0.0, 1.0, 1e-14), 0.5, 1e-14);
  EXPECT_NEAR(find_root_monotone([](double x) { return x; }, -1.0, 1.0, 1e-14), 0.0, 1e-14);
  EXPECT_NEAR(find_root_monotone([](double a) { return 0.5 * a * (1 + a) - 0.375; }, 0.0, 1.0, 1e-14), 0.5, 1e-14);
}

TEST(FindRoot, DecreasingFunctionsAndEndpoints) {
  EXPECT_NEAR(find_root_monotone([](double x) { return 0.3 - x; }, 0.0, 1.0, RootOptions{}), 0.3, 1e-15);
  EXPECT_EQ(find_root_monotone([](double x) { return x; }, 0.0, 1.0, RootOptions{}), 0.0);
}

TEST(FindRoot, NoSignChange) {
  EXPECT_THROW(find_root_monotone([](double x) { return x + 2.0; }, 0.0, 1.0, 1e-12), BracketError);
}

TEST(FindRoot, StaysInsideBracket) {
  // Very flat on one side: pure false position would stall.
  auto f = [](double x) { return std::pow(x, 9) - 1e-6; };
  const double r = find_root_monotone(f, 0.0, 10.0, RootOptions{});
  EXPECT_GE(r, 0.0);
  EXPECT_LE(r, 10.0);
  EXPECT_NEAR(r, std::pow(1e-6, 1.0 / 9.0), 1e-14);
}

TEST(FitLine, RecoversExactLine) {
  const std::vector<double> xs{0, 1, 2, 3, 4}, ys{1, 3, 5, 7, 9};
  const auto fit = fit_line(xs, ys);
  EXPECT_NEAR(fit.slope, 2.0, 1e-14);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-14);
  EXPECT_NEAR(fit.r2, 1.0, 1e-14);
}
