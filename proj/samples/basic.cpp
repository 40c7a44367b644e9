// Builds the s = 1 pair, maps a few points and prints z(a)/a near the origin.

#include <cstdio>

#include "mongeray/mongeray.hpp"

int main() {
  using namespace mongeray;
  const auto pair = make_pair(parse_preset("cor2.3"));
  std::printf("profile %s  c = %.6g  eta sup estimate = %.6g\n", pair.profile().name().c_str(), pair.c(),
              pair.eta_sup());

  const TransportEvaluator map(pair);
  for (Point x : {Point{0.0, 0.125}, Point{-0.2, 0.05}, Point{0.5, 0.3}}) {
    const Point y = map(x);
    std::printf("T(%.3f, %.3f) = (%.9f, %.9f)  ray %.9f\n", x.x1, x.x2, y.x1, y.x2, ray_index(pair.profile(), x));
  }

  const double lam = limit_ratio_oracle(pair.profile(), pair.c());
  for (double a : {1e-1, 1e-2, 1e-3, 1e-4}) {
    std::printf("a = %.0e  z(a)/a = %.6f  (limit %.6f)\n", a, z_of_a(pair, a) / a, lam);
  }

  const PotentialEvaluator u(pair.profile());
  std::printf("u(0.5, 0.3) = %.12f\n", u(Point{0.5, 0.3}));
  return 0;
}
