#include "bondkit/approximation.hpp"

namespace bondkit {

namespace {

struct FdPartials {
  double d_tau;
  double d_r;
  double d_rr;
};

FdPartials central_partials(const LogPriceFn& f, double tau, double r, double ht, double hr) {
  const double f0 = f(tau, r);
  const double fp = f(tau, r + hr);
  const double fm = f(tau, r - hr);
  return {(f(tau + ht, r) - f(tau - ht, r)) / (2.0 * ht), (fp - fm) / (2.0 * hr),
          (fp - 2.0 * f0 + fm) / (hr * hr)};
}

}  // namespace

double pde_residual_fd(const LogPriceFn& log_price, const ModelParams& p, double tau, double r,
                       const FdOptions& opts) {
  if (opts.h_tau > tau / 4.0 || opts.h_r > r / 4.0 || !(opts.h_tau > 0.0) || !(opts.h_r > 0.0)) {
    throw Error(ErrorKind::StepTooLarge, "finite-difference steps must be positive and at most tau/4, r/4");
  }
  const FdPartials coarse = central_partials(log_price, tau, r, opts.h_tau, opts.h_r);
  LogPricePartials<double> d{0.0, coarse.d_tau, coarse.d_r, coarse.d_rr};
  if (opts.richardson) {
    const FdPartials fine = central_partials(log_price, tau, r, opts.h_tau / 2.0, opts.h_r / 2.0);
    d.d_tau = (4.0 * fine.d_tau - coarse.d_tau) / 3.0;
    d.d_r = (4.0 * fine.d_r - coarse.d_r) / 3.0;
    d.d_rr = (4.0 * fine.d_rr - coarse.d_rr) / 3.0;
  }
  return pde_residual(p, r, d);
}

double cw_residual(const ModelParams& p, double tau, double r) {
  return pde_residual_analytic(
      [&p](const auto& t, const auto& x) { return cw_log_price(p, t, x); }, p, tau, r);
}

double vasicek_residual(const ModelParams& p, double tau, double r) {
  return pde_residual_analytic(
      [&p](const auto& t, const auto& x) { return vasicek_log_price(p, t, x); }, p, tau, r);
}

double cir_residual(const ModelParams& p, double tau, double r) {
  return pde_residual_analytic(
      [&p](const auto& t, const auto& x) { return cir_log_price(p, t, x); }, p, tau, r);
}

}  // namespace bondkit
