#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bondkit/model.hpp"

namespace bondkit {

enum class NormKind { Linf, L2 };

/// Pricers that can be sampled on a rate grid without a PDE solve.
enum class Method { Cw, Improved, Cir, Vasicek };

std::string to_string(NormKind k);
std::string to_string(Method m);
/// Accepts "linf"/"inf" and "l2". Throws Error(ParseError).
NormKind parse_norm(std::string_view text);
/// Accepts "cw", "improved", "cir", "vasicek". Throws Error(ParseError).
Method parse_method(std::string_view text);

struct ErrorReport {
  double tau;
  NormKind norm_kind;
  double value;
  std::string method_pair;
};

/// One EOC estimate between consecutive maturities.
struct EocRow {
  double tau_coarse;
  double tau_fine;
  double err_coarse;
  double err_fine;
  double eoc;
};

/// max |f| over the grid nodes.
double linf_norm(const LogPriceCurve& diff);

/// sqrt of the trapezoid-rule integral of f^2 over [r_min, r_max].
double l2_norm(const LogPriceCurve& diff);

double norm(NormKind kind, const LogPriceCurve& diff);

/// ln(err_i / err_{i+1}) / ln(tau_i / tau_{i+1}) for each consecutive pair.
/// Returns errs.size() - 1 rows. Throws NonPositiveError if any err <= 0 and
/// GridMismatch if the lengths differ or fewer than two entries are given.
std::vector<EocRow> eoc(std::span<const double> errs, const MaturityGrid& taus);

/// R = -ln P / tau. Throws ZeroMaturity at tau = 0.
LogPriceCurve yield_curve(const LogPriceCurve& log_price);

/// exp(ap - ex) - 1 per node, i.e. (P_ap - P_ex) / P_ex.
LogPriceCurve relative_mispricing(const LogPriceCurve& ap, const LogPriceCurve& ex);

/// a - b per node. Throws GridMismatch unless grids and maturities agree.
LogPriceCurve difference(const LogPriceCurve& a, const LogPriceCurve& b);

/// Log prices of `method` at maturity tau on every grid node.
LogPriceCurve sample_curve(Method method, const ModelParams& p, const RateGrid& grid, double tau);

/// Norm of sample(a) - sample(b) at each maturity.
std::vector<ErrorReport> error_reports(Method a, Method b, NormKind kind, const ModelParams& p,
                                       const RateGrid& grid, std::span<const double> taus);

}  // namespace bondkit
