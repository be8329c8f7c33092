#include "bondkit/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "bondkit/approximation.hpp"
#include "bondkit/closed_form.hpp"

namespace bondkit {

std::string to_string(NormKind k) { return k == NormKind::Linf ? "linf" : "l2"; }

std::string to_string(Method m) {
  switch (m) {
    case Method::Cw: return "cw";
    case Method::Improved: return "improved";
    case Method::Cir: return "cir";
    case Method::Vasicek: return "vasicek";
  }
  return "?";
}

NormKind parse_norm(std::string_view text) {
  if (text == "linf" || text == "inf") return NormKind::Linf;
  if (text == "l2") return NormKind::L2;
  throw Error(ErrorKind::ParseError, "unknown norm '" + std::string(text) + "' (expected linf or l2)");
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::Cw, Method::Improved, Method::Cir, Method::Vasicek}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorKind::ParseError,
              "unknown method '" + std::string(text) + "' (expected cw, improved, cir or vasicek)");
}

double linf_norm(const LogPriceCurve& diff) {
  double m = 0.0;
  for (double v : diff.values) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const LogPriceCurve& diff) {
  const auto& v = diff.values;
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += v[i] * v[i];
  sum += 0.5 * (v.front() * v.front() + v.back() * v.back());
  return std::sqrt(sum * diff.grid.spacing());
}

double norm(NormKind kind, const LogPriceCurve& diff) {
  return kind == NormKind::Linf ? linf_norm(diff) : l2_norm(diff);
}

std::vector<EocRow> eoc(std::span<const double> errs, const MaturityGrid& taus) {
  if (errs.size() != taus.size() || errs.size() < 2) {
    throw Error(ErrorKind::GridMismatch, "eoc needs matching error and maturity lists of length >= 2");
  }
  for (double e : errs) {
    if (!(e > 0.0)) {
      throw Error(ErrorKind::NonPositiveError,
                  "eoc needs strictly positive errors; the two pricers agree to machine precision");
    }
  }
  std::vector<EocRow> rows;
  rows.reserve(errs.size() - 1);
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    rows.push_back({taus[i], taus[i + 1], errs[i], errs[i + 1],
                    std::log(errs[i] / errs[i + 1]) / std::log(taus[i] / taus[i + 1])});
  }
  return rows;
}

LogPriceCurve yield_curve(const LogPriceCurve& log_price) {
  if (!(log_price.tau > 0.0)) throw Error(ErrorKind::ZeroMaturity, "yield curve needs tau > 0");
  std::vector<double> y(log_price.values.size());
  std::transform(log_price.values.begin(), log_price.values.end(), y.begin(),
                 [t = log_price.tau](double v) { return -v / t; });
  return {log_price.grid, log_price.tau, std::move(y)};
}

namespace {

void require_same_support(const LogPriceCurve& a, const LogPriceCurve& b) {
  if (!(a.grid == b.grid) || a.tau != b.tau) {
    throw Error(ErrorKind::GridMismatch, "curves differ in rate grid or maturity");
  }
}

}  // namespace

LogPriceCurve relative_mispricing(const LogPriceCurve& ap, const LogPriceCurve& ex) {
  require_same_support(ap, ex);
  std::vector<double> out(ap.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::expm1(ap.values[i] - ex.values[i]);
  return {ap.grid, ap.tau, std::move(out)};
}

LogPriceCurve difference(const LogPriceCurve& a, const LogPriceCurve& b) {
  require_same_support(a, b);
  std::vector<double> out(a.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values[i] - b.values[i];
  return {a.grid, a.tau, std::move(out)};
}

LogPriceCurve sample_curve(Method method, const ModelParams& p, const RateGrid& grid, double tau) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = grid[i];
    switch (method) {
      case Method::Cw: v[i] = cw_log_price(p, tau, r); break;
      case Method::Improved: v[i] = improved_log_price(p, tau, r); break;
      case Method::Cir: v[i] = cir_log_price(p, tau, r); break;
      case Method::Vasicek: v[i] = vasicek_log_price(p, tau, r); break;
    }
  }
  return {grid, tau, std::move(v)};
}

std::vector<ErrorReport> error_reports(Method a, Method b, NormKind kind, const ModelParams& p,
                                       const RateGrid& grid, std::span<const double> taus) {
  std::vector<ErrorReport> out;
  out.reserve(taus.size());
  const std::string label = to_string(a) + "-" + to_string(b);
  for (double t : taus) {
    const auto d = difference(sample_curve(a, p, grid, t), sample_curve(b, p, grid, t));
    out.push_back({t, kind, norm(kind, d), label});
  }
  return out;
}

}  // namespace bondkit
