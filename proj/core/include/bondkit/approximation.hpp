#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "bondkit/closed_form.hpp"
#include "bondkit/detail/ckls_kernel.hpp"
#include "bondkit/error.hpp"
#include "bondkit/jet.hpp"
#include "bondkit/model.hpp"

namespace bondkit {

enum class ApproxOrder { Original, Improved };

/// Coefficient functions switch to their analytic CIR limits below this rate;
/// for other gamma they refuse to evaluate there.
inline constexpr double kRateFloor = 1e-6;

/// q(r) = gamma (2 gamma - 1) sigma^2 r^(2(2 gamma - 1)) + 2 gamma r^(2 gamma - 1) (alpha + beta r)
template <class T>
T q_factor(const ModelParams& p, const T& r) {
  return detail::rate_powers(p, r).q;
}

/// Closed-form approximate log bond price for general gamma. Exact for gamma = 0.
template <class T>
T cw_log_price(const ModelParams& p, const T& tau, const T& r) {
  detail::require_nonnegative_tau(tau);
  return detail::approximate_log_price(p, tau, r);
}

namespace detail {

// Each coefficient function is prefactor * sum_j coef_j * r^m_j * (r^(2 gamma))^n_j.
template <class Real>
struct PowerTerm {
  Real coef;
  int m;
  int n;
};

template <class Real, std::size_t N>
struct PowerSum {
  Real prefactor;
  std::array<PowerTerm<Real>, N> terms;
};

template <class Real>
struct CoefficientInputs {
  Real a, b, s2, s4, g;
  explicit CoefficientInputs(const ModelParams& p)
      : a(p.alpha), b(p.beta), s2(Real(p.sigma) * Real(p.sigma)), s4(s2 * s2), g(p.gamma) {}
};

/// Residual coefficient of tau^4.
template <class Real>
PowerSum<Real, 7> k4_terms(const ModelParams& p) {
  const CoefficientInputs<Real> c(p);
  const Real& g = c.g;
  return {c.g * c.s2 / Real(24),
          {{{Real(2) * c.a * c.a * (Real(2) * g - Real(1)), -2, 1},
            {Real(4) * c.b * c.b * g, 0, 1},
            {Real(-8) * c.s2, -1, 2},
            {Real(2) * c.b * c.s2 * (Real(1) - Real(5) * g + Real(6) * g * g), -2, 2},
            {c.s4 * (Real(-3) + Real(16) * g - Real(28) * g * g + Real(16) * g * g * g), -4, 3},
            {Real(2) * c.a * c.b * (Real(4) * g - Real(1)), -1, 1},
            {Real(2) * c.a * c.s2 * (Real(2) - Real(7) * g + Real(6) * g * g), -3, 2}}}};
}

/// Leading log-price error coefficient of tau^5, in its own factored form.
template <class Real>
PowerSum<Real, 7> c5_terms(const ModelParams& p) {
  const CoefficientInputs<Real> c(p);
  const Real& g = c.g;
  const Real two_g_1 = Real(2) * g - Real(1);
  return {-c.g * c.s2 / Real(120),
          {{{Real(2) * c.a * c.a * two_g_1, -2, 1},
            {Real(4) * c.b * c.b * g, 0, 1},
            {Real(-8) * c.s2, -1, 2},
            {Real(2) * c.b * c.s2 * (Real(1) - Real(5) * g + Real(6) * g * g), -2, 2},
            {c.s4 * two_g_1 * two_g_1 * (Real(4) * g - Real(3)), -4, 3},
            {Real(2) * c.a * c.b * (Real(4) * g - Real(1)), -1, 1},
            {Real(2) * c.a * c.s2 * two_g_1 * (Real(3) * g - Real(2)), -3, 2}}}};
}

/// Residual coefficient of tau^5.
template <class Real>
PowerSum<Real, 9> k5_terms(const ModelParams& p) {
  const CoefficientInputs<Real> c(p);
  const Real& g = c.g;
  const Real one_2g = Real(1) - Real(2) * g;
  return {c.g * c.s2 / Real(120),
          {{{Real(6) * c.a * c.a * c.b * (Real(2) * g - Real(1)), -2, 1},
            {Real(12) * c.b * c.b * c.b * g, 0, 1},
            {Real(-10) * one_2g * one_2g * c.s4, -3, 3},
            {Real(6) * c.b * c.b * c.s2 * (Real(1) - Real(5) * g + Real(6) * g * g), -2, 2},
            {Real(-10) * c.b * c.s2 * (Real(5) + Real(2) * g), -1, 2},
            {Real(3) * c.b * c.s4 * one_2g * one_2g * (Real(4) * g - Real(3)), -4, 3},
            {Real(6) * c.a * c.b * c.b * (Real(4) * g - Real(1)), -1, 1},
            {Real(6) * c.a * c.b * c.s2 * (Real(2) - Real(7) * g + Real(6) * g * g), -3, 2},
            {Real(-10) * c.a * c.s2 * (Real(2) * g - Real(1)), -2, 2}}}};
}

/// Value and first two r-derivatives of a PowerSum at r > 0.
template <class Real>
struct Derivs {
  Real f{};
  Real f1{};
  Real f2{};
};

template <class Real>
Real int_pow(const Real& x, int k) {
  Real out(1);
  const bool inv = k < 0;
  for (int i = 0; i < (inv ? -k : k); ++i) out *= x;
  return inv ? Real(1) / out : out;
}

template <class Real, std::size_t N>
Derivs<Real> eval_power_sum(const PowerSum<Real, N>& sum, const Real& gamma, const Real& r) {
  using std::pow;
  const Real s = pow(r, Real(2) * gamma);
  const Real inv_r = Real(1) / r;
  Derivs<Real> out;
  for (const auto& t : sum.terms) {
    if (t.coef == Real(0)) continue;
    const Real term = t.coef * int_pow(r, t.m) * int_pow(s, t.n);
    const Real e = Real(t.m) + Real(2) * gamma * Real(t.n);
    out.f += term;
    out.f1 += e * term * inv_r;
    out.f2 += e * (e - Real(1)) * term * inv_r * inv_r;
  }
  out.f *= sum.prefactor;
  out.f1 *= sum.prefactor;
  out.f2 *= sum.prefactor;
  return out;
}

enum class CoefRegime { Zero, CirLimit, General };

template <class Real>
CoefRegime coefficient_regime(const ModelParams& p, const Real& r, const char* name) {
  if (r < Real(0)) {
    throw Error(ErrorKind::DomainError, std::string(name) + " needs r >= 0");
  }
  if (p.gamma == 0.0) return CoefRegime::Zero;
  if (r < Real(kRateFloor)) {
    if (p.gamma == 0.5) return CoefRegime::CirLimit;
    throw Error(ErrorKind::DomainError,
                std::string(name) + " is singular or ill-conditioned below r = 1e-6 for gamma != 1/2");
  }
  return CoefRegime::General;
}

// Simplified CIR (gamma = 1/2) forms, used below the rate floor.
template <class Real>
Real cir_k4(const ModelParams& p, const Real& r) {
  const CoefficientInputs<Real> c(p);
  return c.s2 / Real(24) * (c.a * c.b + r * (c.b * c.b - Real(4) * c.s2));
}
template <class Real>
Real cir_k5(const ModelParams& p, const Real& r) {
  const CoefficientInputs<Real> c(p);
  return c.b * c.s2 / Real(40) * (c.a * c.b + (c.b * c.b - Real(10) * c.s2) * r);
}
template <class Real>
Derivs<Real> cir_c5(const ModelParams& p, const Real& r) {
  const CoefficientInputs<Real> c(p);
  const Real slope = c.b * c.b - Real(4) * c.s2;
  return {-c.s2 / Real(120) * (c.a * c.b + r * slope), -c.s2 / Real(120) * slope, Real(0)};
}
template <class Real>
Real cir_c6(const ModelParams& p, const Real& r) {
  const CoefficientInputs<Real> c(p);
  return c.s2 / Real(360) *
         (Real(-2) * c.a * c.b * c.b + Real(17) * c.b * c.s2 * r - Real(2) * c.b * c.b * c.b * r +
          Real(2) * c.a * c.s2);
}

}  // namespace detail

/// Coefficient k4(r) of tau^4 in the PDE residual of the approximate log-price.
template <class Real>
Real k4(const ModelParams& p, const Real& r) {
  switch (detail::coefficient_regime(p, r, "k4")) {
    case detail::CoefRegime::Zero: return Real(0);
    case detail::CoefRegime::CirLimit: return detail::cir_k4(p, r);
    case detail::CoefRegime::General: break;
  }
  return detail::eval_power_sum(detail::k4_terms<Real>(p), Real(p.gamma), r).f;
}

/// Coefficient k5(r) of tau^5 in the PDE residual of the approximate log-price.
template <class Real>
Real k5(const ModelParams& p, const Real& r) {
  switch (detail::coefficient_regime(p, r, "k5")) {
    case detail::CoefRegime::Zero: return Real(0);
    case detail::CoefRegime::CirLimit: return detail::cir_k5(p, r);
    case detail::CoefRegime::General: break;
  }
  return detail::eval_power_sum(detail::k5_terms<Real>(p), Real(p.gamma), r).f;
}

template <class Real>
struct C5Derivatives {
  Real first;
  Real second;
};

/// Leading coefficient of ln P^ap - ln P^ex = c5(r) tau^5 + o(tau^5). Equal to -k4/5.
template <class Real>
Real c5(const ModelParams& p, const Real& r) {
  switch (detail::coefficient_regime(p, r, "c5")) {
    case detail::CoefRegime::Zero: return Real(0);
    case detail::CoefRegime::CirLimit: return detail::cir_c5(p, r).f;
    case detail::CoefRegime::General: break;
  }
  return detail::eval_power_sum(detail::c5_terms<Real>(p), Real(p.gamma), r).f;
}

/// Analytic first and second r-derivatives of c5.
template <class Real>
C5Derivatives<Real> c5_derivatives(const ModelParams& p, const Real& r) {
  detail::Derivs<Real> d;
  switch (detail::coefficient_regime(p, r, "c5_derivatives")) {
    case detail::CoefRegime::Zero: return {Real(0), Real(0)};
    case detail::CoefRegime::CirLimit: d = detail::cir_c5(p, r); break;
    case detail::CoefRegime::General:
      d = detail::eval_power_sum(detail::c5_terms<Real>(p), Real(p.gamma), r);
      break;
  }
  return {d.f1, d.f2};
}

/// c6 = ( sigma^2 r^(2 gamma) c5'' / 2 + (alpha + beta r) c5' - k5 ) / 6
template <class Real>
Real c6(const ModelParams& p, const Real& r) {
  switch (detail::coefficient_regime(p, r, "c6")) {
    case detail::CoefRegime::Zero: return Real(0);
    case detail::CoefRegime::CirLimit: return detail::cir_c6(p, r);
    case detail::CoefRegime::General: break;
  }
  using std::pow;
  const Real gamma(p.gamma);
  const auto d = detail::eval_power_sum(detail::c5_terms<Real>(p), gamma, r);
  const Real sig2 = Real(p.sigma) * Real(p.sigma);
  const Real drift = Real(p.alpha) + Real(p.beta) * r;
  return (sig2 * pow(r, Real(2) * gamma) * d.f2 / Real(2) + drift * d.f1 - k5(p, r)) / Real(6);
}

/// ln P^ap2 = ln P^ap - c5 tau^5 - c6 tau^6.
template <class Real>
Real improved_log_price(const ModelParams& p, const Real& tau, const Real& r) {
  const Real base = cw_log_price(p, tau, r);
  if (tau == Real(0)) return base;
  const Real tau5 = tau * tau * tau * tau * tau;
  return base - c5(p, r) * tau5 - c6(p, r) * tau5 * tau;
}

template <class Real>
Real approx_log_price(ApproxOrder order, const ModelParams& p, const Real& tau, const Real& r) {
  return order == ApproxOrder::Original ? cw_log_price(p, tau, r) : improved_log_price(p, tau, r);
}

/// Residual of the log-transformed pricing equation
///   -f_tau + sigma^2 r^(2 gamma) (f_r^2 + f_rr) / 2 + (alpha + beta r) f_r - r
/// from supplied partials.
template <class Real>
Real pde_residual(const ModelParams& p, const Real& r, const LogPricePartials<Real>& f) {
  using std::pow;
  const Real sig2 = Real(p.sigma) * Real(p.sigma);
  const Real diff = p.gamma == 0.0 ? sig2 : sig2 * pow(r, Real(2) * Real(p.gamma));
  const Real drift = Real(p.alpha) + Real(p.beta) * r;
  return -f.d_tau + diff * (f.d_r * f.d_r + f.d_rr) / Real(2) + drift * f.d_r - r;
}

/// Residual with exact derivatives of a jet-capable log-price functor
/// `f(tau, r)` such as cw_log_price or cir_log_price.
template <class Real, class F>
Real pde_residual_analytic(F&& log_price, const ModelParams& p, const Real& tau, const Real& r) {
  return pde_residual(p, r, partials_of<Real>(std::forward<F>(log_price), tau, r));
}

struct FdOptions {
  double h_tau = 1e-5;
  double h_r = 1e-5;
  bool richardson = true;
};

using LogPriceFn = std::function<double(double tau, double r)>;

/// Residual with central finite-difference partials (one Richardson level by
/// default). Throws StepTooLarge when a step exceeds tau/4 or r/4.
double pde_residual_fd(const LogPriceFn& log_price, const ModelParams& p, double tau, double r,
                       const FdOptions& opts = {});

// Convenience overloads for double callers.
double cw_residual(const ModelParams& p, double tau, double r);
double vasicek_residual(const ModelParams& p, double tau, double r);
double cir_residual(const ModelParams& p, double tau, double r);

}  // namespace bondkit
