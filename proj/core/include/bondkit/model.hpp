#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bondkit/error.hpp"

namespace bondkit {

/// Risk-neutral CKLS parameters for dr = (alpha + beta r) dt + sigma r^gamma dw.
///
/// Rates are annualized decimals and maturities are in years. Mean reversion
/// requires beta < 0, but any finite beta is accepted.
struct ModelParams {
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  double gamma = 0.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Parameter set used in the CIR benchmark tables (gamma is supplied by the caller).
ModelParams benchmark_params(double gamma = 0.5);

/// Checks alpha > 0, sigma > 0, gamma >= 0 and finiteness. The CIR condition
/// 2 alpha >= sigma^2 is enforced only when `require_feller` is set and gamma == 1/2.
/// Returns the input unchanged on success.
ModelParams validate_params(const ModelParams& p, bool require_feller = false);

/// Uniform grid on [r_min, r_max] with n_points nodes.
class RateGrid {
 public:
  RateGrid(double r_min, double r_max, std::size_t n_points);

  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }

  /// Node i. The last node is exactly r_max.
  double operator[](std::size_t i) const noexcept {
    return i + 1 == n_ ? r_max_ : r_min_ + static_cast<double>(i) * h_;
  }

  std::vector<double> points() const;

  friend bool operator==(const RateGrid&, const RateGrid&) = default;

 private:
  double r_min_;
  double r_max_;
  std::size_t n_;
  double h_;
};

/// Rate interval and density used for every norm in the error tables.
RateGrid default_norm_grid();

/// Strictly monotone list of positive maturities.
class MaturityGrid {
 public:
  explicit MaturityGrid(std::vector<double> taus);

  const std::vector<double>& taus() const noexcept { return taus_; }
  std::size_t size() const noexcept { return taus_.size(); }
  double operator[](std::size_t i) const noexcept { return taus_[i]; }
  auto begin() const noexcept { return taus_.begin(); }
  auto end() const noexcept { return taus_.end(); }

 private:
  std::vector<double> taus_;
};

/// Log bond prices at a fixed maturity, one value per grid node.
struct LogPriceCurve {
  RateGrid grid;
  double tau;
  std::vector<double> values;

  LogPriceCurve(RateGrid g, double t, std::vector<double> v);
};

// Flat `key = value` parameter files with '#' comments.
ModelParams parse_params(std::istream& in, const ModelParams& defaults = benchmark_params());
ModelParams load_params(const std::filesystem::path& path,
                        const ModelParams& defaults = benchmark_params());
void write_params(std::ostream& out, const ModelParams& p);

}  // namespace bondkit
