#pragma once

#include <cmath>

#include "bondkit/detail/ckls_kernel.hpp"
#include "bondkit/detail/series.hpp"
#include "bondkit/error.hpp"
#include "bondkit/jet.hpp"
#include "bondkit/model.hpp"

// Exact log bond prices for the Vasicek (gamma = 0) and CIR (gamma = 1/2)
// special cases. All functions are templates over the scalar type so they can
// be evaluated in double, in extended precision, or on jets.

namespace bondkit {

/// B(tau) = (e^(beta tau) - 1)/beta, continuous through beta = 0 where it equals tau.
template <class T>
T b_factor(const scalar_t<T>& beta, const T& tau) {
  detail::require_nonnegative_tau(tau);
  return tau * detail::expm1_over_x(T(beta) * tau);
}

/// Exact Vasicek log-price. Shares its arithmetic with the approximate formula,
/// which reduces to the exact solution when gamma = 0.
template <class T>
T vasicek_log_price(const ModelParams& p, const T& tau, const T& r) {
  if (p.gamma != 0.0) throw Error(ErrorKind::GammaMismatch, "Vasicek pricing needs gamma = 0");
  detail::require_nonnegative_tau(tau);
  return detail::approximate_log_price(p, tau, r);
}

/// Exact CIR log-price A(tau) - Bt(tau) r in the (alpha, beta, sigma) drift
/// parametrization:
///   theta = sqrt(beta^2 + 2 sigma^2),  D = (theta - beta)(e^(theta tau) - 1) + 2 theta
///   A     = (2 alpha / sigma^2) [ (theta - beta) tau / 2 - ln(D / (2 theta)) ]
///   Bt    = 2 (e^(theta tau) - 1) / D
template <class T>
T cir_log_price(const ModelParams& p, const T& tau, const T& r) {
  using S = scalar_t<T>;
  if (p.gamma != 0.5) throw Error(ErrorKind::GammaMismatch, "CIR pricing needs gamma = 1/2");
  detail::require_nonnegative_tau(tau);
  if (primal(r) < S(0)) throw Error(ErrorKind::DomainError, "CIR rate must be >= 0");

  using std::exp;
  using std::expm1;
  using std::log;
  using std::log1p;
  using std::sqrt;
  const S beta(p.beta);
  const S sig2 = S(p.sigma) * S(p.sigma);
  const S theta = sqrt(beta * beta + S(2) * sig2);
  const S kappa = theta - beta;
  const S two_theta = S(2) * theta;
  const T z = T(theta) * tau;

  T log_d_ratio;  // ln(D / (2 theta))
  T bt;
  if (primal(z) <= S(30)) {
    const T em = expm1(z);
    log_d_ratio = log1p(T(kappa / two_theta) * em);
    bt = T(S(2)) * em / (T(kappa) * em + T(two_theta));
  } else {
    // Factor e^z out of D to avoid overflow at long maturities.
    const T decay = exp(-z);
    const T one_minus = T(S(1)) - decay;
    const T scaled_d = T(kappa) * one_minus + T(two_theta) * decay;
    log_d_ratio = z + log(scaled_d / T(two_theta));
    bt = T(S(2)) * one_minus / scaled_d;
  }
  const T a = T(S(2) * S(p.alpha) / sig2) * (T(kappa / S(2)) * tau - log_d_ratio);
  return a - bt * r + T(S(0));
}

}  // namespace bondkit
