#pragma once

#include <cmath>
#include <type_traits>

namespace bondkit {

/// Truncated Taylor number in two independent variables (tau, r).
///
/// Arithmetic is exact in the ring R[e, d] / (e^2, d^3, e d): `d_tau` carries
/// the first tau-derivative, `d_r` and `d_rr` the first and second
/// r-derivatives. Mixed derivatives are dropped, which is all the bond-pricing
/// operator -f_tau + a (f_r^2 + f_rr) + b f_r - r needs.
template <class Real>
struct Jet {
  Real v{};
  Real d_tau{};
  Real d_r{};
  Real d_rr{};

  Jet() = default;
  Jet(const Real& value) : v(value) {}  // NOLINT: implicit lift of constants
  Jet(const Real& value, const Real& dt, const Real& dr, const Real& drr)
      : v(value), d_tau(dt), d_r(dr), d_rr(drr) {}

  static Jet tau_seed(const Real& tau) { return Jet(tau, Real(1), Real(0), Real(0)); }
  static Jet rate_seed(const Real& r) { return Jet(r, Real(0), Real(1), Real(0)); }

  Jet& operator+=(const Jet& o) {
    v += o.v; d_tau += o.d_tau; d_r += o.d_r; d_rr += o.d_rr;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v; d_tau -= o.d_tau; d_r -= o.d_r; d_rr -= o.d_rr;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    const Real nv = v * o.v;
    const Real nt = d_tau * o.v + v * o.d_tau;
    const Real nr = d_r * o.v + v * o.d_r;
    const Real nrr = d_rr * o.v + Real(2) * d_r * o.d_r + v * o.d_rr;
    v = nv; d_tau = nt; d_r = nr; d_rr = nrr;
    return *this;
  }
  Jet& operator/=(const Jet& o) { return *this *= o.reciprocal(); }

  Jet operator-() const { return Jet(-v, -d_tau, -d_r, -d_rr); }

  /// g(v + e) = g(v) + g'(v) e + g''(v) e^2 / 2, with e^2 = d_r^2 d^2.
  Jet chain(const Real& g, const Real& g1, const Real& g2) const {
    return Jet(g, g1 * d_tau, g1 * d_r, g1 * d_rr + g2 * d_r * d_r);
  }

  Jet reciprocal() const {
    const Real inv = Real(1) / v;
    return chain(inv, -inv * inv, Real(2) * inv * inv * inv);
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

  friend Jet exp(const Jet& a) {
    using std::exp;
    const Real e = exp(a.v);
    return a.chain(e, e, e);
  }
  friend Jet expm1(const Jet& a) {
    using std::exp;
    using std::expm1;
    const Real e = exp(a.v);
    return a.chain(expm1(a.v), e, e);
  }
  friend Jet log(const Jet& a) {
    using std::log;
    const Real inv = Real(1) / a.v;
    return a.chain(log(a.v), inv, -inv * inv);
  }
  friend Jet log1p(const Jet& a) {
    using std::log1p;
    const Real inv = Real(1) / (Real(1) + a.v);
    return a.chain(log1p(a.v), inv, -inv * inv);
  }
  friend Jet sqrt(const Jet& a) {
    using std::sqrt;
    const Real s = sqrt(a.v);
    const Real g1 = Real(1) / (Real(2) * s);
    return a.chain(s, g1, -g1 / (Real(2) * a.v));
  }
  /// x^k for a constant exponent k.
  friend Jet pow(const Jet& a, const Real& k) {
    using std::pow;
    if (k == Real(0)) return Jet(Real(1));
    const Real pk2 = pow(a.v, k - Real(2));
    const Real pk1 = pk2 * a.v;
    return a.chain(pk1 * a.v, k * pk1, k * (k - Real(1)) * pk2);
  }
};

template <class T>
struct scalar_of {
  using type = T;
};
template <class Real>
struct scalar_of<Jet<Real>> {
  using type = Real;
};
/// Underlying real type of a (possibly jet-valued) quantity.
template <class T>
using scalar_t = typename scalar_of<T>::type;

template <class T>
constexpr bool is_jet_v = false;
template <class Real>
constexpr bool is_jet_v<Jet<Real>> = true;

/// Value part, for branch decisions.
template <class T>
scalar_t<T> primal(const T& x) {
  if constexpr (is_jet_v<T>) {
    return x.v;
  } else {
    return x;
  }
}

/// Analytic partial derivatives of a log-price surface at one point.
template <class Real>
struct LogPricePartials {
  Real value{};
  Real d_tau{};
  Real d_r{};
  Real d_rr{};
};

/// Seeds jets at (tau, r), evaluates f(tau, r) and unpacks the partials.
template <class Real, class F>
LogPricePartials<Real> partials_of(F&& f, const Real& tau, const Real& r) {
  const Jet<Real> out = f(Jet<Real>::tau_seed(tau), Jet<Real>::rate_seed(r));
  return {out.v, out.d_tau, out.d_r, out.d_rr};
}

}  // namespace bondkit
