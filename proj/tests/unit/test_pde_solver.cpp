#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "bondkit/approximation.hpp"
#include "bondkit/closed_form.hpp"
#include "bondkit/pde_solver.hpp"

namespace bondkit {
namespace {

PdeConfig small_config() {
  PdeConfig c;
  c.n_space = 301;
  c.n_time = 1200;
  return c;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no bondkit::Error thrown";
  return ErrorKind::ParseError;
}

double max_error_vs_cir(const PdeSolution& sol, std::size_t k, double r_hi) {
  const LogPriceCurve c = sol.curve_up_to(k, r_hi);
  double worst = 0.0;
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    worst = std::max(worst, std::abs(c.values[i] - cir_log_price(sol.params, c.tau, c.grid[i])));
  }
  return worst;
}

TEST(PdeConfig, Validation) {
  auto bad = [](auto mutate) {
    PdeConfig c = small_config();
    mutate(c);
    return kind_of([&] { validate_config(c); });
  };
  EXPECT_NO_THROW(validate_config(small_config()));
  EXPECT_EQ(bad([](PdeConfig& c) { c.r_max = 0.0; }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](PdeConfig& c) { c.n_space = 2; }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](PdeConfig& c) { c.n_time = 0; }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](PdeConfig& c) { c.t_final = -1.0; }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](PdeConfig& c) { c.theta = 0.4; }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](PdeConfig& c) { c.theta = 1.1; }), ErrorKind::InvalidConfig);
}

TEST(PdeSolve, RejectsBadInputs) {
  const std::array<double, 1> taus{1.0};
  EXPECT_EQ(kind_of([&] { solve(benchmark_params(1.5), small_config(), taus); }), ErrorKind::UnsupportedGamma);
  EXPECT_EQ(kind_of([&] { solve(ModelParams{-1.0, -0.0555, 0.0894, 1.0}, small_config(), taus); }),
            ErrorKind::NonPositiveAlpha);
  const std::array<double, 1> late{1.5};
  EXPECT_EQ(kind_of([&] { solve(benchmark_params(1.0), small_config(), late); }), ErrorKind::InvalidConfig);
  const std::array<double, 1> negative{-0.1};
  EXPECT_EQ(kind_of([&] { solve(benchmark_params(1.0), small_config(), negative); }), ErrorKind::InvalidConfig);
}

TEST(PdeSolve, UnsupportedGammaOverride) {
  PdeConfig c = small_config();
  c.allow_unsupported_gamma = true;
  const std::array<double, 1> taus{1.0};
  const PdeSolution sol = solve(benchmark_params(1.6), c, taus);
  for (double v : sol.log_prices[0]) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_LT(v, 1e-15);
  }
}

TEST(PdeSolve, ZeroMaturitySnapshotIsFlat) {
  const std::array<double, 2> taus{0.0, 0.5};
  const PdeSolution sol = solve(benchmark_params(0.75), small_config(), taus);
  for (double v : sol.log_prices[0]) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(sol.diagnostics.steps, small_config().n_time);
  EXPECT_EQ(sol.diagnostics.implicit_steps, 0u);
}

TEST(PdeSolve, MatchesCirAndConvergesNearSecondOrder) {
  const ModelParams p = benchmark_params(0.5);
  const std::array<double, 1> taus{1.0};
  PdeConfig coarse = small_config();
  coarse.n_space = 601;
  coarse.n_time = 3000;
  PdeConfig fine = coarse;
  fine.n_space = 2 * coarse.n_space - 1;
  fine.n_time = 4 * coarse.n_time;
  const double e1 = max_error_vs_cir(solve(p, coarse, taus), 0, 0.15);
  const double e2 = max_error_vs_cir(solve(p, fine, taus), 0, 0.15);
  EXPECT_LT(e1, 1e-8);
  const double order = std::log2(e1 / e2);
  // Coarse grids are pre-asymptotic near r = 0; the order approaches 2 under refinement.
  EXPECT_GT(order, 1.4);
  EXPECT_LT(order, 2.2);
}

TEST(PdeSolve, AgreesWithImprovedApproximationAtShortMaturity) {
  for (double gamma : {0.75, 1.0, 1.32}) {
    const ModelParams p = benchmark_params(gamma);
    PdeConfig c = small_config();
    c.n_space = 1001;
    c.n_time = 2000;
    c.t_final = 0.25;
    const std::array<double, 1> taus{0.25};
    const LogPriceCurve curve = solve(p, c, taus).curve_up_to(0, 0.15);
    double worst = 0.0;
    for (std::size_t i = 1; i < curve.values.size(); ++i) {
      worst = std::max(worst, std::abs(curve.values[i] - improved_log_price(p, 0.25, curve.grid[i])));
    }
    EXPECT_LT(worst, 1e-10) << gamma;
  }
}

TEST(PdeSolve, PricesStayInUnitIntervalUpToTenYears) {
  for (double gamma : {0.0, 0.5, 0.75, 1.0, 1.32}) {
    PdeConfig c = small_config();
    c.t_final = 10.0;
    c.n_time = 2000;
    const std::array<double, 3> taus{1.0, 5.0, 10.0};
    const PdeSolution sol = solve(benchmark_params(gamma), c, taus);
    EXPECT_GT(sol.diagnostics.min_price, 0.0) << gamma;
    EXPECT_LE(sol.diagnostics.max_price, 1.0 + 1e-12) << gamma;
    for (const auto& row : sol.log_prices) {
      for (double v : row) EXPECT_LE(v, 1e-12);
    }
  }
}

TEST(PdeSolve, TimeErrorBelowSpaceErrorAtDefaultRatio) {
  // Quadrupling the step count alone should barely move the answer.
  const ModelParams p = benchmark_params(1.0);
  const std::array<double, 1> taus{1.0};
  PdeConfig a = small_config();
  PdeConfig b = a;
  b.n_time *= 4;
  PdeConfig s = a;
  s.n_space = 2 * a.n_space - 1;
  const auto ya = solve(p, a, taus).log_prices[0];
  const auto yb = solve(p, b, taus).log_prices[0];
  const auto ys = solve(p, s, taus).log_prices[0];
  double dt_change = 0.0, dr_change = 0.0;
  for (std::size_t i = 0; i < ya.size(); ++i) {
    dt_change = std::max(dt_change, std::abs(ya[i] - yb[i]));
    dr_change = std::max(dr_change, std::abs(ya[i] - ys[2 * i]));
  }
  EXPECT_LT(dt_change, dr_change);
}

TEST(PdeSolve, SnapshotBetweenLevelsIsInterpolated) {
  const ModelParams p = benchmark_params(0.5);
  PdeConfig c = small_config();
  c.n_time = 1000;
  const double tau = 0.5004;  // between levels 500 and 501
  const std::array<double, 3> taus{0.5, tau, 0.501};
  const PdeSolution sol = solve(p, c, taus);
  for (std::size_t i = 0; sol.grid()[i] <= 0.15; i += 10) {
    const double lo = sol.log_prices[0][i], mid = sol.log_prices[1][i], hi = sol.log_prices[2][i];
    EXPECT_LE(std::min(lo, hi) - 1e-15, mid);
    EXPECT_GE(std::max(lo, hi) + 1e-15, mid);
    EXPECT_NEAR(mid, cir_log_price(p, tau, sol.grid()[i]), 1e-7);
  }
}

TEST(PdeSolve, RannacherAndFullyImplicitVariants) {
  const ModelParams p = benchmark_params(0.5);
  const std::array<double, 1> taus{1.0};
  PdeConfig r = small_config();
  r.rannacher_steps = 4;
  const PdeSolution a = solve(p, r, taus);
  EXPECT_EQ(a.diagnostics.implicit_steps, 4u);
  EXPECT_LT(max_error_vs_cir(a, 0, 0.15), 1e-7);
  PdeConfig implicit = small_config();
  implicit.theta = 1.0;
  const PdeSolution b = solve(p, implicit, taus);
  EXPECT_EQ(b.diagnostics.implicit_steps, implicit.n_time);
  EXPECT_LT(max_error_vs_cir(b, 0, 0.15), 5e-5);
  EXPECT_GT(max_error_vs_cir(b, 0, 0.15), max_error_vs_cir(a, 0, 0.15));
}

TEST(PdeSolve, AllDriftSchemesAreUsable) {
  const ModelParams p = benchmark_params(0.5);
  const std::array<double, 1> taus{1.0};
  for (DriftScheme d : {DriftScheme::Fitted, DriftScheme::Upwind, DriftScheme::Central, DriftScheme::Hybrid}) {
    for (LowerBoundaryOrder lb : {LowerBoundaryOrder::First, LowerBoundaryOrder::Second}) {
      PdeConfig c = small_config();
      c.drift = d;
      c.lower_boundary = lb;
      EXPECT_LT(max_error_vs_cir(solve(p, c, taus), 0, 0.15), 1e-5) << to_string(d);
    }
  }
}

TEST(PdeSolution, CurvesAndSnapshotLookup) {
  const std::array<double, 2> taus{0.25, 1.0};
  const PdeSolution sol = solve(benchmark_params(1.0), small_config(), taus);
  EXPECT_EQ(sol.snapshot_index(1.0), 1u);
  EXPECT_EQ(sol.snapshot_index(0.25), 0u);
  EXPECT_EQ(kind_of([&] { sol.snapshot_index(0.5); }), ErrorKind::GridMismatch);
  EXPECT_EQ(sol.curve(1).values.size(), 301u);
  const LogPriceCurve sub = sol.curve_up_to(1, 0.15);
  EXPECT_EQ(sub.values.size(), 91u);
  EXPECT_NEAR(sub.grid[sub.values.size() - 1], 0.15, 1e-15);
  EXPECT_EQ(sub.values[90], sol.log_prices[1][90]);
  EXPECT_EQ(sol.curve_up_to(1, 1.0).values.size(), 301u);
  EXPECT_EQ(kind_of([&] { sol.curve_up_to(1, 0.0); }), ErrorKind::InvalidGrid);
}

TEST(AlignedTimeSteps, Examples) {
  const std::array<double, 4> quarters{1.0, 0.75, 0.5, 0.25};
  EXPECT_EQ(aligned_time_steps(quarters, 1.0, 1000), 1000u);
  EXPECT_EQ(aligned_time_steps(quarters, 1.0, 1001), 1004u);
  const std::array<double, 1> third{1.0 / 3.0};
  EXPECT_EQ(aligned_time_steps(third, 1.0, 1000), 1002u);
  const std::array<double, 1> irrational{1.0 / std::sqrt(2.0)};
  EXPECT_EQ(aligned_time_steps(irrational, 1.0, 100), 100u);
  const std::array<double, 10> years{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_EQ(aligned_time_steps(years, 10.0, 1000), 1000u);
}

TEST(BoundaryPolicy, Descriptions) {
  const PdeConfig c = small_config();
  const BoundaryDescription half = boundary_policy(benchmark_params(0.5), c);
  EXPECT_TRUE(half.diffusion_vanishes_at_zero);
  EXPECT_NE(half.lower.find("second-order"), std::string::npos);
  EXPECT_NE(half.upper.find("zero curvature"), std::string::npos);
  const BoundaryDescription vas = boundary_policy(benchmark_params(0.0), c);
  EXPECT_FALSE(vas.diffusion_vanishes_at_zero);
  EXPECT_NE(vas.lower.find("modeling choice"), std::string::npos);
}

TEST(PdeCsv, HeaderAndRows) {
  PdeConfig c = small_config();
  c.n_space = 11;
  c.n_time = 10;
  const std::array<double, 2> taus{0.5, 1.0};
  const PdeSolution sol = solve(benchmark_params(1.0), c, taus);
  std::ostringstream out;
  write_csv(out, sol);
  std::istringstream in(out.str());
  std::string line;
  std::size_t comments = 0, rows = 0;
  std::string header;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      ++comments;
    } else if (header.empty()) {
      header = line;
    } else {
      ++rows;
    }
  }
  EXPECT_EQ(header, "r,lnP_0.5,lnP_1");
  EXPECT_EQ(rows, 11u);
  EXPECT_GE(comments, 3u);
  EXPECT_EQ(out.str().find("# generated"), std::string::npos);
  std::ostringstream stamped;
  write_csv(stamped, sol, true);
  EXPECT_NE(stamped.str().find("# generated"), std::string::npos);
}

}  // namespace
}  // namespace bondkit
