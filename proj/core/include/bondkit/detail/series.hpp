#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "bondkit/jet.hpp"

namespace bondkit::detail {

// Power series in x = beta*tau for the removable singularities of the affine
// bond-price terms:
//   E1(x) = (e^x - 1)/x
//   T1(x) = (1 - E1)/x
//   T2(x) = (E1^2 + 2(1 - E1)/x)/x
//   T3(x) = (E1^2 (2x - 1) - 4 E1 + 6(E1 - 1)/x + 2)/x^2
// Coefficients are generated in Real from exact rationals so extended
// precision types keep every digit.
template <class Real>
struct BetaSeries {
  static constexpr std::size_t kTerms = 28;
  static constexpr double kSwitch = 0.5;

  std::array<Real, kTerms> e1{};
  std::array<Real, kTerms> t1{};
  std::array<Real, kTerms> t2{};
  std::array<Real, kTerms> t3{};

  BetaSeries() {
    constexpr std::size_t n = kTerms + 4;
    std::array<Real, n> inv_fact{};  // inv_fact[k] = 1/k!
    inv_fact[0] = Real(1);
    for (std::size_t k = 1; k < n; ++k) inv_fact[k] = inv_fact[k - 1] / Real(static_cast<int>(k));

    std::array<Real, n - 1> a{};  // E1 coefficients, then E1^2
    std::array<Real, n - 1> sq{};
    for (std::size_t k = 0; k + 1 < n; ++k) a[k] = inv_fact[k + 1];
    for (std::size_t k = 0; k + 1 < n; ++k) {
      Real s(0);
      for (std::size_t j = 0; j <= k; ++j) s += a[j] * a[k - j];
      sq[k] = s;
    }
    for (std::size_t k = 0; k < kTerms; ++k) {
      e1[k] = a[k];
      t1[k] = -inv_fact[k + 2];
      t2[k] = sq[k + 1] - Real(2) * inv_fact[k + 3];
      // numerator coefficient at x^(k+2): 2 sq[k+1] - sq[k+2] - 4/(k+3)! + 6/(k+4)!
      t3[k] = Real(2) * sq[k + 1] - sq[k + 2] - Real(4) * inv_fact[k + 3] +
              Real(6) * inv_fact[k + 4];
    }
  }

  static const BetaSeries& get() {
    static const BetaSeries s;
    return s;
  }

  template <class T>
  static T horner(const std::array<Real, kTerms>& c, const T& x) {
    T acc(c[kTerms - 1]);
    for (std::size_t k = kTerms - 1; k-- > 0;) acc = acc * x + T(c[k]);
    return acc;
  }
};

template <class T>
bool use_series(const T& x) {
  using std::abs;
  return abs(primal(x)) < scalar_t<T>(BetaSeries<scalar_t<T>>::kSwitch);
}

/// (e^x - 1)/x, equal to 1 at x = 0.
template <class T>
T expm1_over_x(const T& x) {
  using S = scalar_t<T>;
  if (use_series(x)) return BetaSeries<S>::horner(BetaSeries<S>::get().e1, x);
  using std::expm1;
  return expm1(x) / x;
}

/// The three bracket functions of the approximate log-price, all regular at x = 0.
template <class T>
struct AffineBrackets {
  T e1;
  T t1;
  T t2;
  T t3;
};

template <class T>
AffineBrackets<T> affine_brackets(const T& x) {
  using S = scalar_t<T>;
  if (use_series(x)) {
    const auto& s = BetaSeries<S>::get();
    return {BetaSeries<S>::horner(s.e1, x), BetaSeries<S>::horner(s.t1, x),
            BetaSeries<S>::horner(s.t2, x), BetaSeries<S>::horner(s.t3, x)};
  }
  using std::expm1;
  const T one(S(1)), two(S(2)), four(S(4)), six(S(6));
  const T e1 = expm1(x) / x;
  const T t1 = (one - e1) / x;
  const T t2 = (e1 * e1 + two * (one - e1) / x) / x;
  const T t3 = (e1 * e1 * (two * x - one) - four * e1 + six * (e1 - one) / x + two) / (x * x);
  return {e1, t1, t2, t3};
}

}  // namespace bondkit::detail
