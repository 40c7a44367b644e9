#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mongeray/geometry.hpp"
#include "mongeray/quadrature.hpp"

using namespace mongeray;

namespace {

// a(x) for omega = a/2: a^2 + x1 a - 2 x2 = 0.
double linear_ray_index(Point x) { return 0.5 * (-x.x1 + std::sqrt(x.x1 * x.x1 + 8.0 * x.x2)); }

RayProfile quadratic_custom() {
  return RayProfile::custom([](double a) { return 0.25 * (a + a * a); }, [](double a) { return 0.25 * (1.0 + 2.0 * a); },
                            [](double) { return 0.5; }, "quad");
}

std::vector<RayProfile> all_kinds() {
  return {RayProfile::power(0.5), RayProfile::power(1.0), RayProfile::power(2.0), RayProfile::power(4.0),
          RayProfile::exponential(), quadratic_custom()};
}

}  // namespace

TEST(RayProfile, EndpointValues) {
  for (const auto& p : all_kinds()) {
    EXPECT_NEAR(p.eval(0.0), 0.0, 1e-12) << p.name();
    EXPECT_NEAR(p.eval(1.0), 0.5, 1e-12) << p.name();
  }
}

TEST(RayProfile, DerivativesMatchFiniteDifferences) {
  for (const auto& p : all_kinds()) {
    for (double a : {0.15, 0.3, 0.5, 0.7, 0.9}) {
      const double h = 1e-5;
      const double fd1 = (p.eval(a + h) - p.eval(a - h)) / (2 * h);
      const double fd2 = (p.d1(a + h) - p.d1(a - h)) / (2 * h);
      EXPECT_NEAR(p.d1(a), fd1, 1e-7 * std::max(1.0, std::abs(fd1))) << p.name() << " a=" << a;
      EXPECT_NEAR(p.d2(a), fd2, 1e-6 * std::max(1.0, std::abs(fd2))) << p.name() << " a=" << a;
      EXPECT_GT(p.d1(a), 0.0);
    }
  }
}

TEST(RayProfile, PowerFormulas) {
  const auto p = RayProfile::power(2.5);
  const double a = 0.37;
  EXPECT_DOUBLE_EQ(p.eval(a), 0.5 * std::pow(a, 2.5));
  EXPECT_DOUBLE_EQ(p.d1(a), 0.5 * 2.5 * std::pow(a, 1.5));
  EXPECT_DOUBLE_EQ(p.d2(a), 0.5 * 2.5 * 1.5 * std::pow(a, 0.5));
  EXPECT_EQ(p.kind(), ProfileKind::power);
  EXPECT_DOUBLE_EQ(p.exponent(), 2.5);
}

TEST(RayProfile, ExponentialFormulaAndUnderflowSafeLog) {
  const auto p = RayProfile::exponential();
  EXPECT_DOUBLE_EQ(p.eval(0.25), 0.5 * std::exp(-3.0));
  EXPECT_EQ(p.eval(0.0), 0.0);
  // omega underflows long before log(omega) does
  EXPECT_EQ(p.eval(1e-4), 0.0);
  EXPECT_NEAR(p.log_eval(1e-4), 1.0 - 1e4 - std::log(2.0), 1e-9);
  EXPECT_TRUE(std::isnan(p.exponent()));
}

TEST(RayProfile, RatiosAreConsistent) {
  for (const auto& p : all_kinds()) {
    for (double a : {0.2, 0.6}) {
      EXPECT_NEAR(p.log_eval(a), std::log(p.eval(a)), 1e-13) << p.name();
      EXPECT_NEAR(p.log_slope(a), p.d1(a) / p.eval(a), 1e-12 * p.log_slope(a)) << p.name();
      EXPECT_NEAR(p.curvature_ratio(a), p.d2(a) / p.eval(a), 1e-12 * std::max(1.0, std::abs(p.curvature_ratio(a))));
      EXPECT_NEAR(p.ratio(a), p.eval(a) / p.d1(a), 1e-14) << p.name();
    }
  }
}

TEST(RayProfile, RejectsInvalid) {
  EXPECT_THROW(RayProfile::power(0.0), DomainError);
  EXPECT_THROW(RayProfile::power(-1.0), DomainError);
  EXPECT_THROW(RayProfile::custom([](double a) { return a; }, [](double) { return 1.0; }, [](double) { return 0.0; }),
               ConstructionError);
  EXPECT_THROW(RayProfile::custom([](double a) { return 0.5 * a; }, [](double) { return 0.0; },
                                  [](double) { return 0.0; }),
               ConstructionError);
  EXPECT_THROW(RayProfile::custom(nullptr, nullptr, nullptr), ConstructionError);
}

TEST(RayProfile, Names) {
  EXPECT_EQ(RayProfile::power(0.5).name(), "power:0.5");
  EXPECT_EQ(RayProfile::exponential().name(), "exponential");
  EXPECT_EQ(quadratic_custom().name(), "quad");
}

TEST(Domain, VerticesAndArea) {
  const auto d = Domain::delta();
  const auto dp = Domain::delta_prime();
  EXPECT_EQ(d.vertices()[0], (Point{-1, 0}));
  EXPECT_EQ(d.vertices()[1], (Point{1, 1}));
  EXPECT_EQ(d.vertices()[2], (Point{1, 0}));
  EXPECT_EQ(dp.vertices()[2], (Point{1, -1}));
  // Shoelace oracle.
  for (const auto& dom : {d, dp}) {
    const auto v = dom.vertices();
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Point p = v[static_cast<std::size_t>(i)], q = v[static_cast<std::size_t>((i + 1) % 3)];
      s += p.x1 * q.x2 - q.x1 * p.x2;
    }
    EXPECT_DOUBLE_EQ(dom.area(), 0.5 * std::abs(s));
  }
}

TEST(Domain, Membership) {
  EXPECT_TRUE(in_domain(Domain::delta(), {0.0, 0.1}));
  EXPECT_FALSE(in_domain(Domain::delta(), {0.0, -0.1}));
  EXPECT_TRUE(in_domain(Domain::delta_prime(), {0.0, -0.1}));
  for (const auto& dom : {Domain::delta(), Domain::delta_prime()}) {
    for (Point v : dom.vertices()) EXPECT_FALSE(in_domain(dom, v));
  }
  EXPECT_FALSE(in_domain(Domain::delta(), {0.0, 0.0}));
  EXPECT_FALSE(in_domain(Domain::delta(), {0.0, 0.6}));
}

TEST(RayPoint, Examples) {
  const auto p1 = RayProfile::power(1.0);
  EXPECT_EQ(ray_point(p1, {1.0, 1.0}), (Point{1.0, 1.0}));
  EXPECT_EQ(ray_point(p1, {0.3, -0.3}), (Point{-0.3, 0.0}));
  const Point x = ray_point(p1, {0.5, 0.0});
  EXPECT_DOUBLE_EQ(x.x1, 0.0);
  EXPECT_DOUBLE_EQ(x.x2, 0.125);
  EXPECT_THROW(ray_point(p1, {1.2, 0.0}), DomainError);
  EXPECT_THROW(ray_point(p1, {0.5, -0.6}), DomainError);
  EXPECT_THROW(ray_point(p1, {0.5, 1.1}), DomainError);
}

TEST(RayIndex, LinearProfileAgainstQuadraticFormula) {
  const auto p1 = RayProfile::power(1.0);
  EXPECT_NEAR(ray_index(p1, {0.0, 0.125}), 0.5, 1e-15);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Point x{-1.0 + 2.0 * u(gen), u(gen)};
    if (!in_domain(Domain::delta(), x)) continue;
    EXPECT_NEAR(ray_index(p1, x), linear_ray_index(x), 1e-13);
  }
}

TEST(RayIndex, Errors) {
  const auto p = RayProfile::power(1.0);
  EXPECT_THROW(ray_index(p, {0.0, 0.0}), DegenerateRayError);
  EXPECT_THROW(ray_index(p, {0.0, -0.2}), DegenerateRayError);
  EXPECT_THROW(ray_index(p, {0.0, 0.7}), DomainError);
  EXPECT_THROW(ray_index(p, {1.5, 0.1}), DomainError);
}

TEST(RayIndex, ResidualWithinTolerance) {
  for (const auto& p : all_kinds()) {
    for (Point x : {Point{-0.5, 0.01}, Point{0.3, 0.2}, Point{0.9, 0.9}, Point{0.0, 1e-3}}) {
      const double a = ray_index(p, x);
      EXPECT_LE(std::abs(p.eval(a) * (x.x1 + a) - x.x2), 1e-13 * (1.0 + x.x2)) << p.name();
    }
  }
}

TEST(RayIndex, RoundTripAllKinds) {
  for (const auto& p : all_kinds()) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double a = 0.02 + 0.97 * u(gen);
      const double pp = -a + (1.0 + a) * (0.001 + 0.998 * u(gen));
      const Point x = ray_point(p, {a, pp});
      if (!in_domain(Domain::delta(), x)) continue;
      EXPECT_NEAR(ray_index(p, x), a, 1e-10) << p.name();
    }
  }
}

TEST(RayIndex, NearRightEdgeRoundTrip) {
  const auto p = RayProfile::power(2.0);
  for (double a0 : {0.1, 0.5, 0.9}) {
    const double e = 1e-9;
    EXPECT_NEAR(ray_index(p, {1.0 - e, p.eval(a0) * (1.0 - e + a0)}), a0, 1e-10);
  }
}

TEST(Rays, DoNotIntersect) {
  for (const auto& p : all_kinds()) {
    for (int i = 1; i < 40; ++i) {
      const double a1 = i / 40.0, a2 = (i + 1) / 40.0;
      for (int k = 0; k <= 20; ++k) {
        const double x1 = -a1 + (1.0 + a1) * k / 20.0;
        EXPECT_LT(p.eval(a1) * (x1 + a1), p.eval(a2) * (x1 + a2)) << p.name();
      }
    }
  }
}

TEST(RayIndexFromHeight, Examples) {
  const auto p1 = RayProfile::power(1.0);
  EXPECT_EQ(ray_index_from_height(p1, 1.0), 1.0);
  EXPECT_EQ(ray_index_from_height(p1, 0.0), 0.0);
  EXPECT_NEAR(ray_index_from_height(p1, 0.375), 0.5, 1e-15);
  EXPECT_THROW(ray_index_from_height(p1, -0.1), DomainError);
  EXPECT_THROW(ray_index_from_height(p1, 1.1), DomainError);
}

TEST(RayIndexFromHeight, StrictlyIncreasing) {
  for (const auto& p : all_kinds()) {
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double a = ray_index_from_height(p, i / 200.0);
      EXPECT_GT(a, prev) << p.name();
      prev = a;
    }
  }
}

TEST(RayIndexDerivatives, LinearProfileExamples) {
  const auto p1 = RayProfile::power(1.0);
  const auto d = ray_index_derivatives(p1, 1.0);
  EXPECT_DOUBLE_EQ(d.a, 1.0);
  EXPECT_NEAR(d.da, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(d.d2a, -8.0 / 27.0, 1e-15);
  EXPECT_FALSE(d.ill_conditioned);
  EXPECT_NEAR(ray_index_derivatives(p1, 0.375).da, 1.0, 1e-14);
  EXPECT_THROW(ray_index_derivatives(p1, 0.0), DomainError);
}

TEST(RayIndexDerivatives, SecondDerivativeMatchesFiniteDifferences) {
  for (const auto& p : all_kinds()) {
    for (int k = 1; k <= 9; ++k) {
      const double t = k / 10.0, h = 1e-5;
      const auto d = ray_index_derivatives(p, t);
      EXPECT_GT(d.da, 0.0);
      const double fd = (ray_index_derivatives(p, t + h).da - ray_index_derivatives(p, t - h).da) / (2 * h);
      EXPECT_NEAR(d.d2a, fd, 1e-5 * std::max(1.0, std::abs(fd))) << p.name() << " t=" << t;
    }
  }
}

TEST(RayIndexDerivatives, IllConditionedFlag) {
  const auto d = ray_index_derivatives(RayProfile::power(2.0), 1e-14);
  EXPECT_TRUE(d.ill_conditioned);
  EXPECT_FALSE(ray_index_derivatives(RayProfile::power(2.0), 1e-3).ill_conditioned);
}

TEST(RayWeight, Examples) {
  const auto p1 = RayProfile::power(1.0);
  EXPECT_DOUBLE_EQ(ray_weight(p1, 0.5, 0.0), 0.5);
  for (const auto& p : all_kinds()) EXPECT_DOUBLE_EQ(ray_weight(p, 0.4, -0.4), p.eval(0.4));
  EXPECT_THROW(ray_weight(p1, 0.0, 0.0), DomainError);
  EXPECT_THROW(ray_weight(p1, 0.5, -0.6), DomainError);
}

TEST(RayWeight, ChangeOfVariablesGivesUnitArea) {
  // int_0^1 int_{-a}^1 w(a, x1) dx1 da = area(Delta); w is affine in x1, so
  // the inner integral is (1+a) (omega'(a)(1+a)/2 + omega(a)).
  for (const auto& p : {RayProfile::power(0.5), RayProfile::power(1.0), RayProfile::power(2.0)}) {
    auto inner = [&](double a) {
      if (a <= 0.0 || a >= 1.0) return 0.0;
      return integrate_1d([&](double x1) { return ray_weight(p, a, std::max(-a, x1)); }, -a, 1.0, QuadratureOptions{1e-12, 1e-12, 4000}).value;
    };
    const double area = integrate_1d(inner, 0.0, 1.0, QuadratureOptions{1e-11, 1e-12, 4000}).value;
    EXPECT_NEAR(area, 1.0, 1e-9) << p.name();
  }
}
