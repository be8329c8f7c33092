#include "bondkit/pde_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

#include "bondkit/csv.hpp"
#include "bondkit/error.hpp"

namespace bondkit {

namespace {

// Spatial operator L with (L P)_i = lo_i P_{i-1} + di_i P_i + up_i P_{i+1},
// plus an extra P_2 coefficient in row 0 for the second-order boundary.
// `source` is L applied to the constant 1, i.e. -r at each node.
struct SpatialOperator {
  std::vector<double> lo, di, up, source;
  double row0_p2 = 0.0;

  void apply(const std::vector<double>& p, std::vector<double>& out) const {
    const std::size_t n = p.size();
    out[0] = di[0] * p[0] + up[0] * p[1] + row0_p2 * p[2];
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = lo[i] * p[i - 1] + di[i] * p[i] + up[i] * p[i + 1];
    out[n - 1] = lo[n - 1] * p[n - 2] + di[n - 1] * p[n - 1];
  }
};

double fitted_diffusion(double a, double mu, double dr) {
  const double adv = std::abs(mu) * dr / 2.0;
  if (a <= 0.0) return adv;
  const double pe = adv / a;
  if (pe < 1e-4) return a * (1.0 + pe * pe / 3.0);
  if (pe > 30.0) return adv;  // coth(pe) == 1 in double
  return adv / std::tanh(pe);
}

SpatialOperator build_operator(const ModelParams& p, const PdeConfig& cfg) {
  const std::size_t n = cfg.n_space;
  const double dr = cfg.dr();
  const double dr2 = dr * dr;
  const double sig2 = p.sigma * p.sigma;
  SpatialOperator op{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                     std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = static_cast<double>(i) * dr;
    const double a = 0.5 * sig2 * (p.gamma == 0.0 ? 1.0 : std::pow(r, 2.0 * p.gamma));
    const double mu = p.alpha + p.beta * r;
    double diff = a;
    switch (cfg.drift) {
      case DriftScheme::Fitted: diff = fitted_diffusion(a, mu, dr); break;
      case DriftScheme::Upwind: diff = a + std::abs(mu) * dr / 2.0; break;
      case DriftScheme::Central: break;
      case DriftScheme::Hybrid:
        if (!(a > 0.0) || std::abs(mu) * dr > 2.0 * a) diff = fitted_diffusion(a, mu, dr);
        break;
    }
    op.lo[i] = diff / dr2 - mu / (2.0 * dr);
    op.up[i] = diff / dr2 + mu / (2.0 * dr);
    op.di[i] = -2.0 * diff / dr2 - r;
    op.source[i] = -r;
  }

  // r = 0: -P_tau + alpha P_r = 0 (reaction and, for gamma > 0, diffusion vanish).
  if (cfg.lower_boundary == LowerBoundaryOrder::First) {
    op.di[0] = -p.alpha / dr;
    op.up[0] = p.alpha / dr;
  } else {
    op.di[0] = -1.5 * p.alpha / dr;
    op.up[0] = 2.0 * p.alpha / dr;
    op.row0_p2 = -0.5 * p.alpha / dr;
  }

  // r = r_max: ghost node 2 P_N - P_{N-1} kills the curvature; central drift
  // through the ghost leaves a backward difference.
  const double r_top = cfg.r_max;
  const double mu_top = p.alpha + p.beta * r_top;
  op.lo[n - 1] = -mu_top / dr;
  op.di[n - 1] = mu_top / dr - r_top;
  op.source[n - 1] = -r_top;
  return op;
}

// LU factors of M = I - w L, with row 0 made tridiagonal by eliminating its
// P_2 entry against row 1.
class ImplicitMatrix {
 public:
  ImplicitMatrix(const SpatialOperator& op, double w) : w_(w), n_(op.di.size()) {
    sub_.resize(n_);
    diag_.resize(n_);
    sup_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      sub_[i] = -w * op.lo[i];
      diag_[i] = 1.0 - w * op.di[i];
      sup_[i] = -w * op.up[i];
    }
    extra_ = -w * op.row0_p2;
    elim_ = extra_ == 0.0 ? 0.0 : extra_ / sup_[1];
    diag_[0] -= elim_ * sub_[1];
    sup_[0] -= elim_ * diag_[1];

    inv_pivot_.resize(n_);
    upper_.resize(n_);
    double pivot = diag_[0];
    check_pivot(pivot);
    inv_pivot_[0] = 1.0 / pivot;
    upper_[0] = sup_[0] * inv_pivot_[0];
    for (std::size_t i = 1; i < n_; ++i) {
      pivot = diag_[i] - sub_[i] * upper_[i - 1];
      check_pivot(pivot);
      inv_pivot_[i] = 1.0 / pivot;
      upper_[i] = sup_[i] * inv_pivot_[i];
    }
  }

  /// Solves M x = rhs in place; returns the max-norm residual of the original system.
  double solve(std::vector<double>& rhs, std::vector<double>& work) const {
    work = rhs;  // keep the right-hand side for the residual check
    rhs[0] -= elim_ * rhs[1];
    rhs[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n_; ++i) rhs[i] = (rhs[i] - sub_[i] * rhs[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n_ - 1; i-- > 0;) rhs[i] -= upper_[i] * rhs[i + 1];

    const auto& x = rhs;
    const double row0 = (diag_[0] + elim_ * sub_[1]) * x[0] + (sup_[0] + elim_ * diag_[1]) * x[1] +
                        extra_ * x[2] - work[0];
    double res = std::abs(row0);
    for (std::size_t i = 1; i + 1 < n_; ++i) {
      res = std::max(res, std::abs(sub_[i] * x[i - 1] + diag_[i] * x[i] + sup_[i] * x[i + 1] - work[i]));
    }
    res = std::max(res, std::abs(sub_[n_ - 1] * x[n_ - 2] + diag_[n_ - 1] * x[n_ - 1] - work[n_ - 1]));
    return res;
  }

  double weight() const { return w_; }

 private:
  static void check_pivot(double pivot) {
    if (!(std::abs(pivot) >= 1e-300)) {
      throw Error(ErrorKind::TridiagonalSingular, "tridiagonal pivot below 1e-300");
    }
  }

  double w_;
  std::size_t n_;
  std::vector<double> sub_, diag_, sup_, inv_pivot_, upper_;
  double extra_ = 0.0;
  double elim_ = 0.0;
};

struct SnapshotPlan {
  std::size_t lower_level;
  double weight_upper;  // 0 when tau sits on a time level
};

SnapshotPlan plan_snapshot(double tau, double dt, std::size_t n_time) {
  const double level = tau / dt;
  const double nearest = std::round(level);
  if (std::abs(level - nearest) <= 1e-9 * std::max(1.0, level)) {
    return {static_cast<std::size_t>(nearest), 0.0};
  }
  const auto lower = static_cast<std::size_t>(std::floor(level));
  return {std::min(lower, n_time - 1), level - std::floor(level)};
}

}  // namespace

void validate_config(const PdeConfig& cfg) {
  if (!(cfg.r_max > 0.0) || !std::isfinite(cfg.r_max)) {
    throw Error(ErrorKind::InvalidConfig, "r_max must be > 0");
  }
  if (cfg.n_space < 3) throw Error(ErrorKind::InvalidConfig, "n_space must be >= 3");
  if (cfg.n_time < 1) throw Error(ErrorKind::InvalidConfig, "n_time must be >= 1");
  if (!(cfg.t_final > 0.0) || !std::isfinite(cfg.t_final)) {
    throw Error(ErrorKind::InvalidConfig, "t_final must be > 0");
  }
  if (!(cfg.theta >= 0.5 && cfg.theta <= 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "theta must lie in [0.5, 1]");
  }
}

BoundaryDescription boundary_policy(const ModelParams& p, const PdeConfig& cfg) {
  const std::string order =
      cfg.lower_boundary == LowerBoundaryOrder::First ? "first-order" : "second-order";
  BoundaryDescription d;
  d.diffusion_vanishes_at_zero = p.gamma > 0.0;
  d.lower = "r = 0: -P_tau + alpha P_r = 0 with a " + order + " one-sided P_r";
  if (!d.diffusion_vanishes_at_zero) {
    d.lower += " (gamma = 0: diffusion is dropped at r = 0 as a modeling choice)";
  }
  d.upper = "r = r_max: zero curvature, ghost node P_N = 2 P_{N-1} - P_{N-2}";
  return d;
}

std::string to_string(DriftScheme s) {
  switch (s) {
    case DriftScheme::Fitted: return "fitted";
    case DriftScheme::Upwind: return "upwind";
    case DriftScheme::Central: return "central";
    case DriftScheme::Hybrid: return "hybrid";
  }
  return "unknown";
}

LogPriceCurve PdeSolution::curve(std::size_t k) const {
  return LogPriceCurve(grid(), taus.at(k), log_prices.at(k));
}

LogPriceCurve PdeSolution::curve_up_to(std::size_t k, double r_hi) const {
  const double dr = config.dr();
  const auto last = std::min<std::size_t>(config.n_space - 1,
                                          static_cast<std::size_t>(std::floor(r_hi / dr + 1e-9)));
  if (last < 1) throw Error(ErrorKind::InvalidGrid, "restriction keeps fewer than 2 nodes");
  const auto& row = log_prices.at(k);
  const double top = last == config.n_space - 1 ? config.r_max : static_cast<double>(last) * dr;
  return LogPriceCurve(RateGrid(0.0, top, last + 1),
                       taus.at(k), std::vector<double>(row.begin(), row.begin() + static_cast<long>(last) + 1));
}

std::size_t PdeSolution::snapshot_index(double tau) const {
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (std::abs(taus[k] - tau) <= 1e-12 * std::max(1.0, tau)) return k;
  }
  throw Error(ErrorKind::GridMismatch, "no snapshot at tau = " + format_shortest(tau));
}

std::size_t aligned_time_steps(std::span<const double> taus, double t_final, std::size_t min_steps) {
  for (std::size_t n = std::max<std::size_t>(min_steps, 1); n < 2 * std::max<std::size_t>(min_steps, 1); ++n) {
    const double dt = t_final / static_cast<double>(n);
    const bool aligned = std::all_of(taus.begin(), taus.end(), [dt](double tau) {
      const double level = tau / dt;
      return std::abs(level - std::round(level)) <= 1e-9 * std::max(1.0, level);
    });
    if (aligned) return n;
  }
  return min_steps;
}

PdeSolution solve(const ModelParams& p, const PdeConfig& cfg, std::span<const double> snapshot_taus) {
  validate_params(p);
  validate_config(cfg);
  if (p.gamma >= 1.5 && !cfg.allow_unsupported_gamma) {
    throw Error(ErrorKind::UnsupportedGamma,
                "gamma >= 3/2 is outside the supported range (set allow_unsupported_gamma to override)");
  }
  for (double tau : snapshot_taus) {
    if (!(tau >= 0.0) || tau > cfg.t_final * (1.0 + 1e-12)) {
      throw Error(ErrorKind::InvalidConfig, "snapshot maturities must lie in [0, t_final]");
    }
  }

  const std::size_t n = cfg.n_space;
  const double dt = cfg.dt();
  const SpatialOperator op = build_operator(p, cfg);

  PdeSolution sol;
  sol.config = cfg;
  sol.params = p;
  sol.taus.assign(snapshot_taus.begin(), snapshot_taus.end());
  sol.log_prices.assign(sol.taus.size(), std::vector<double>(n, 0.0));

  std::vector<SnapshotPlan> plans;
  for (double tau : sol.taus) plans.push_back(plan_snapshot(tau, dt, cfg.n_time));

  // March the excess U = P - 1 rather than P: the operator maps constants to
  // -r exactly, and U is small near r = 0, so far less roundoff accumulates.
  std::vector<double> excess(n, 0.0), prev(n, 0.0), lp(n), work(n);
  auto& diag = sol.diagnostics;

  auto record = [&](std::size_t level) {
    for (std::size_t k = 0; k < plans.size(); ++k) {
      const auto& plan = plans[k];
      if (plan.lower_level + (plan.weight_upper > 0.0 ? 1 : 0) != level) continue;
      auto& row = sol.log_prices[k];
      for (std::size_t i = 0; i < n; ++i) {
        const double u = plan.weight_upper > 0.0
                             ? (1.0 - plan.weight_upper) * prev[i] + plan.weight_upper * excess[i]
                             : excess[i];
        if (!(u > -1.0)) {
          throw Error(ErrorKind::UnstableSolve, "non-positive bond price at snapshot tau = " +
                                                    format_shortest(sol.taus[k]));
        }
        row[i] = level == 0 ? 0.0 : std::log1p(u);
      }
    }
  };
  record(0);

  const ImplicitMatrix implicit(op, dt);
  const ImplicitMatrix mixed(op, cfg.theta * dt);
  for (std::size_t step = 1; step <= cfg.n_time; ++step) {
    const bool fully_implicit = step <= cfg.rannacher_steps || cfg.theta == 1.0;
    const ImplicitMatrix& m = fully_implicit ? implicit : mixed;
    const double explicit_w = fully_implicit ? 0.0 : (1.0 - cfg.theta) * dt;

    prev = excess;
    if (explicit_w != 0.0) {
      op.apply(excess, lp);
      for (std::size_t i = 0; i < n; ++i) excess[i] += explicit_w * lp[i];
    }
    for (std::size_t i = 0; i < n; ++i) excess[i] += dt * op.source[i];
    diag.max_solve_residual = std::max(diag.max_solve_residual, m.solve(excess, work));
    ++diag.steps;
    if (fully_implicit) ++diag.implicit_steps;

    for (double v : excess) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::UnstableSolve, "non-finite value at step " + std::to_string(step));
      }
    }
    const auto [lo, hi] = std::minmax_element(excess.begin(), excess.end());
    diag.min_price = std::min(diag.min_price, 1.0 + *lo);
    diag.max_price = std::max(diag.max_price, 1.0 + *hi);
    record(step);
  }
  return sol;
}

void write_csv(std::ostream& out, const PdeSolution& sol, bool stamp) {
  const auto& c = sol.config;
  const auto& p = sol.params;
  out << "# bondkit pde solution\n"
      << "# params: alpha=" << format_shortest(p.alpha) << " beta=" << format_shortest(p.beta)
      << " sigma=" << format_shortest(p.sigma) << " gamma=" << format_shortest(p.gamma) << '\n'
      << "# config: r_max=" << format_shortest(c.r_max) << " n_space=" << c.n_space
      << " n_time=" << c.n_time << " t_final=" << format_shortest(c.t_final)
      << " theta=" << format_shortest(c.theta) << " rannacher_steps=" << c.rannacher_steps
      << " drift=" << to_string(c.drift)
      << " lower_boundary=" << (c.lower_boundary == LowerBoundaryOrder::First ? "first" : "second")
      << '\n'
      << "# diagnostics: steps=" << sol.diagnostics.steps
      << " max_solve_residual=" << format_shortest(sol.diagnostics.max_solve_residual) << '\n';
  if (stamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated: " << buf << '\n';
  }
  out << 'r';
  for (double tau : sol.taus) out << ",lnP_" << format_shortest(tau);
  out << '\n';
  const RateGrid g = sol.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << format_shortest(g[i]);
    for (const auto& row : sol.log_prices) out << ',' << format_shortest(row[i]);
    out << '\n';
  }
}

}  // namespace bondkit
