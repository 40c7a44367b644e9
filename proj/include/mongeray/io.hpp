#pragma once

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "mongeray/densities.hpp"
#include "mongeray/errors.hpp"
#include "mongeray/geometry.hpp"
#include "mongeray/potential.hpp"
#include "mongeray/probe.hpp"
#include "mongeray/pushforward.hpp"
#include "mongeray/transport.hpp"
#include "mongeray/verify.hpp"

namespace mongeray {

using json = nlohmann::ordered_json;

inline json to_json(const RayProfile& profile) {
  switch (profile.kind()) {
    case ProfileKind::power:
      return json{{"kind", "power"}, {"s", profile.exponent()}};
    case ProfileKind::exponential:
      return json{{"kind", "exponential"}};
    case ProfileKind::custom:
      break;
  }
  throw DomainError("custom profiles have no JSON form");
}

inline RayProfile profile_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw DomainError("profile JSON needs a 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "power") {
    if (!j.contains("s") || !j.at("s").is_number()) throw DomainError("power profile JSON needs numeric 's'");
    return RayProfile::power(j.at("s").get<double>());
  }
  if (kind == "exponential") return RayProfile::exponential();
  throw DomainError("unknown profile kind '" + kind + "'");
}

inline json to_json(const DensityPair& pair) {
  return json{{"profile", to_json(pair.profile())},
              {"c", pair.c()},
              {"zeta_sup", pair.zeta_sup()},
              {"eta_sup", pair.eta_sup()},
              {"reflected", pair.reflected()}};
}

/// zeta_sup and eta_sup are recomputed from the profile; c is revalidated.
inline DensityPair pair_from_json(const json& j) {
  auto pair = DensityPair::make(profile_from_json(j.at("profile")), j.at("c").get<double>());
  return j.value("reflected", false) ? pair.reflected_pair() : pair;
}

inline json to_json(const LinearFit& fit) {
  return json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
}

namespace detail {
// JSON has no NaN/inf; emit null for them.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace detail

inline json to_json(const ProbeReport& r) {
  return json{{"preset", r.preset},
              {"c", r.c},
              {"reflected", r.reflected},
              {"a_grid", r.a_grid},
              {"z_values", r.z_values},
              {"ratio", r.ratio},
              {"t_values", r.t_values},
              {"log_t_values", r.log_t_values},
              {"fit", to_json(r.fit)},
              {"fitted_exponent", r.fitted_exponent},
              {"theoretical_exponent", detail::num(r.theoretical_exponent)},
              {"lambda_star", detail::num(r.lambda_star)},
              {"max_ratio", r.max_ratio},
              {"min_ratio_small_a", detail::num(r.min_ratio_small_a)},
              {"ratio_at_smallest_a", detail::num(r.ratio_at_smallest_a)},
              {"c0", detail::num(r.bounds.c0)},
              {"lower_floor", detail::num(r.bounds.lower_floor)},
              {"upper_bound_ok", r.upper_bound_ok},
              {"lower_bound_ok", r.lower_bound_ok},
              {"bounds_ok", r.bounds_ok},
              {"violations", r.violations}};
}

inline json to_json(const DensityRegularityReport& r) {
  json partial = json::array();
  for (std::size_t k = 0; k < r.p_values.size(); ++k) {
    partial.push_back(json{{"p", r.p_values[k]}, {"tail_integrals", r.sobolev_partial[k]}});
  }
  return json{{"preset", r.preset},
              {"t_grid", r.t_grid},
              {"eta", r.eta_values},
              {"fitted_exponent", detail::num(r.fitted_exponent)},
              {"expected_exponent", detail::num(r.expected_exponent)},
              {"fit_r2", r.fit_r2},
              {"eta_log2_scaled", r.log2_scaled},
              {"eta_at_1e-8", r.eta_at_tiny},
              {"w1p_indicator", partial}};
}

inline json to_json(const PushforwardReport& r) {
  return json{{"n_samples", r.n_samples},
              {"seed", r.seed},
              {"failures", r.failures},
              {"outside", r.outside},
              {"bins", {{"nx", r.bins.nx}, {"ny", r.bins.ny}, {"x", {r.bins.x_lo, r.bins.x_hi}}, {"y", {r.bins.y_lo, r.bins.y_hi}}}},
              {"max_deviation", r.max_deviation},
              {"max_deviation_bin", r.max_deviation_bin},
              {"max_sigma_ratio", detail::num(r.max_sigma_ratio)},
              {"aborted", r.aborted},
              {"empirical", r.empirical},
              {"expected", r.expected}};
}

inline json to_json(const CheckResult& r) {
  return json{{"name", r.name},
              {"passed", r.passed},
              {"worst", detail::num(r.worst)},
              {"threshold", r.threshold},
              {"samples", r.samples},
              {"detail", r.detail}};
}

inline json to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  return arr;
}

/// CSV writer with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<const char*> header) : out_(out) {
    bool first = true;
    for (const char* h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    char buf[32];
    for (double v : values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out_ << (first ? "" : ",") << buf;
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

inline void write_eta_csv(std::ostream& out, const EtaSolution& eta_fn, std::span<const double> ts) {
  CsvWriter csv(out, {"t", "eta"});
  for (double t : ts) csv.row({t, eta_fn(t)});
}

inline void write_potential_csv(std::ostream& out, const PotentialEvaluator& u, std::span<const Point> points) {
  CsvWriter csv(out, {"x1", "x2", "u", "b1", "b2"});
  for (Point x : points) {
    const Point b = u.b(x);
    csv.row({x.x1, x.x2, u(x), b.x1, b.x2});
  }
}

inline void write_map_csv(std::ostream& out, const TransportEvaluator& map, std::span<const Point> points) {
  CsvWriter csv(out, {"x1", "x2", "T1", "T2", "a"});
  for (Point x : points) {
    const Point y = map(x);
    const double a = ray_index(map.pair().profile(), Point{x.x1, std::abs(x.x2)});
    csv.row({x.x1, x.x2, y.x1, y.x2, a});
  }
}

inline void write_probe_csv(std::ostream& out, const ProbeReport& r) {
  CsvWriter csv(out, {"a", "t", "z", "ratio", "log_t"});
  for (std::size_t i = 0; i < r.a_grid.size(); ++i) {
    csv.row({r.a_grid[i], r.t_values[i], r.z_values[i], r.ratio[i], r.log_t_values[i]});
  }
}

}  // namespace mongeray
