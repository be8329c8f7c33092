#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bondkit/model.hpp"

namespace bondkit {

/// Spatial treatment of the drift term (alpha + beta r) dP/dr.
enum class DriftScheme {
  /// Exponentially fitted (Il'in / Scharfetter-Gummel) flux: central where
  /// diffusion dominates, upwind where it vanishes.
  Fitted,
  /// First-order upwinding by the local sign of the drift.
  Upwind,
  /// Plain central differences. Only monotone when the cell Peclet number is below 1.
  Central,
  /// Central where the cell Peclet number |mu| dr / (2 a) is at most 1, fitted elsewhere.
  Hybrid,
};

/// Order of the one-sided drift derivative in the r = 0 equation -P_tau + alpha P_r = 0.
enum class LowerBoundaryOrder { First, Second };

struct PdeConfig {
  double r_max = 0.5;
  std::size_t n_space = 4001;
  std::size_t n_time = 40000;
  double t_final = 1.0;
  /// 1 = fully implicit, 0.5 = Crank-Nicolson.
  double theta = 0.5;
  /// Fully implicit steps taken before switching to `theta` (Rannacher smoothing).
  std::size_t rannacher_steps = 0;
  DriftScheme drift = DriftScheme::Central;
  LowerBoundaryOrder lower_boundary = LowerBoundaryOrder::Second;
  /// Permit gamma >= 3/2, where uniqueness of the pricing equation is not known.
  bool allow_unsupported_gamma = false;

  double dr() const { return r_max / static_cast<double>(n_space - 1); }
  double dt() const { return t_final / static_cast<double>(n_time); }
};

/// Throws Error(InvalidConfig) when an invariant of PdeConfig does not hold.
void validate_config(const PdeConfig& cfg);

/// Human-readable description of the boundary equations used by `solve`.
struct BoundaryDescription {
  std::string lower;
  std::string upper;
  bool diffusion_vanishes_at_zero;
};

BoundaryDescription boundary_policy(const ModelParams& p, const PdeConfig& cfg);

struct SolverDiagnostics {
  std::size_t steps = 0;
  std::size_t implicit_steps = 0;
  double max_solve_residual = 0.0;
  double min_price = 1.0;
  double max_price = 1.0;
};

/// Log bond prices on the solver grid at the requested maturities.
struct PdeSolution {
  PdeConfig config;
  ModelParams params;
  std::vector<double> taus;
  std::vector<std::vector<double>> log_prices;  // [snapshot][node]
  SolverDiagnostics diagnostics;

  RateGrid grid() const { return RateGrid(0.0, config.r_max, config.n_space); }

  /// Snapshot k as a curve on the full solver grid.
  LogPriceCurve curve(std::size_t k) const;

  /// Snapshot k restricted to the solver nodes with r <= r_hi.
  LogPriceCurve curve_up_to(std::size_t k, double r_hi) const;

  /// Index of the snapshot at maturity tau; throws GridMismatch if absent.
  std::size_t snapshot_index(double tau) const;
};

/// Marches P(0, r) = 1 forward in tau with a theta scheme on a uniform grid over
/// [0, r_max]. Snapshots falling between time levels are interpolated linearly.
PdeSolution solve(const ModelParams& p, const PdeConfig& cfg, std::span<const double> snapshot_taus);

/// Smallest step count >= min_steps that puts every tau on a time level.
/// Falls back to min_steps (and snapshot interpolation) if none is found
/// below 2 * min_steps.
std::size_t aligned_time_steps(std::span<const double> taus, double t_final, std::size_t min_steps);

/// CSV export: '#' metadata lines, then `r,lnP_<tau>...` rows.
void write_csv(std::ostream& out, const PdeSolution& sol, bool stamp = false);

std::string to_string(DriftScheme s);

}  // namespace bondkit
