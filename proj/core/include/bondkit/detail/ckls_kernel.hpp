#pragma once

#include <cmath>

#include "bondkit/detail/series.hpp"
#include "bondkit/error.hpp"
#include "bondkit/jet.hpp"
#include "bondkit/model.hpp"

namespace bondkit::detail {

template <class T>
void require_nonnegative_tau(const T& tau) {
  if (!(primal(tau) >= scalar_t<T>(0))) throw Error(ErrorKind::DomainError, "tau must be >= 0");
}

/// r^(2 gamma) together with the drift adjustment q(r). Both come from a single
/// exponentiation u = r^(2 gamma - 1).
template <class T>
struct RatePowers {
  T s;
  T q;
};

template <class T>
RatePowers<T> rate_powers(const ModelParams& p, const T& r) {
  using S = scalar_t<T>;
  if (p.gamma == 0.0) return {T(S(1)), T(S(0))};
  if (primal(r) < S(0)) throw Error(ErrorKind::DomainError, "rate must be >= 0");
  if (primal(r) == S(0) && p.gamma < 0.5) {
    throw Error(ErrorKind::DomainError, "r^(2 gamma - 1) is singular at r = 0 for gamma < 1/2");
  }
  using std::pow;
  const S g(p.gamma);
  const S sig2 = S(p.sigma) * S(p.sigma);
  const S e = S(2) * g - S(1);
  const T u = pow(r, e);
  const T s = u * r;
  const T drift = T(S(p.alpha)) + T(S(p.beta)) * r;
  const T q = T(g * e * sig2) * u * u + T(S(2) * g) * u * drift;
  return {s, q};
}

/// The closed-form approximate log-price, written as
///   -r B + alpha tau^2 T1 + (s + q tau) sigma^2 tau^3 T2 / 4 - q sigma^2 tau^4 T3 / 8
/// with B = tau E1(beta tau). This is the same quantity as the familiar form
/// with (alpha/beta)(tau - B) etc., but stays accurate for beta tau -> 0.
template <class T>
T approximate_log_price(const ModelParams& p, const T& tau, const T& r) {
  using S = scalar_t<T>;
  const auto [s, q] = rate_powers(p, r);
  const T x = T(S(p.beta)) * tau;
  const auto br = affine_brackets(x);
  const S sig2 = S(p.sigma) * S(p.sigma);
  const T tau2 = tau * tau;
  const T tau3 = tau2 * tau;
  const T tau4 = tau2 * tau2;
  const T b = tau * br.e1;
  const T value = -(r * b) + T(S(p.alpha)) * tau2 * br.t1 +
                  (s + q * tau) * T(sig2 / S(4)) * tau3 * br.t2 -
                  q * T(sig2 / S(8)) * tau4 * br.t3;
  return value + T(S(0));  // folds -0 into +0
}

}  // namespace bondkit::detail
