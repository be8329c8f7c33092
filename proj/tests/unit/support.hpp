#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <algorithm>
#include <cmath>

#include "bondkit/model.hpp"

namespace bondkit::test {

using HP = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                         boost::multiprecision::et_off>;

inline HP hp(double x) { return HP(x); }

// Independent reference implementations, written out term by term in high
// precision. They deliberately share no code with the library.

/// Approximate log price in its original B-form (divides by beta).
inline HP ref_cw_log_price(const ModelParams& p, const HP& tau, const HP& r) {
  const HP a(p.alpha), b(p.beta), s(p.sigma), g(p.gamma);
  const HP B = (exp(b * tau) - 1) / b;
  const HP s2 = s * s;
  const HP q = g * (2 * g - 1) * s2 * pow(r, 2 * (2 * g - 1)) + 2 * g * pow(r, 2 * g - 1) * (a + b * r);
  return -r * B + a / b * (tau - B) +
         (pow(r, 2 * g) + q * tau) * s2 / (4 * b) * (B * B + 2 / b * (tau - B)) -
         q * s2 / (8 * b * b) *
             (B * B * (2 * b * tau - 1) - 2 * B * (2 * tau - 3 / b) + 2 * tau * tau - 6 * tau / b);
}

/// CIR bond price in the textbook kappa / long-run-mean form.
inline HP ref_cir_log_price(const ModelParams& p, const HP& tau, const HP& r) {
  const HP kappa = -HP(p.beta);
  const HP mean = HP(p.alpha) / kappa;
  const HP s2 = HP(p.sigma) * HP(p.sigma);
  const HP h = sqrt(kappa * kappa + 2 * s2);
  const HP e = exp(h * tau);
  const HP den = 2 * h + (kappa + h) * (e - 1);
  const HP A = pow(2 * h * exp((kappa + h) * tau / 2) / den, 2 * kappa * mean / s2);
  const HP B = 2 * (e - 1) / den;
  return log(A) - B * r;
}

inline HP ref_k4(const ModelParams& p, const HP& r) {
  const HP a(p.alpha), b(p.beta), s(p.sigma), g(p.gamma);
  const HP s2 = s * s;
  return g * pow(r, 2 * (g - 2)) * s2 / 24 *
         (2 * a * a * (2 * g - 1) * r * r + 4 * b * b * g * pow(r, 4) - 8 * pow(r, 3 + 2 * g) * s2 +
          2 * b * (1 - 5 * g + 6 * g * g) * pow(r, 2 * (1 + g)) * s2 +
          s2 * s2 * pow(r, 4 * g) * (-3 + 16 * g - 28 * g * g + 16 * g * g * g) +
          2 * a * r * (b * (4 * g - 1) * r * r + (2 - 7 * g + 6 * g * g) * pow(r, 2 * g) * s2));
}

inline HP ref_c5(const ModelParams& p, const HP& r) {
  const HP a(p.alpha), b(p.beta), s(p.sigma), g(p.gamma);
  const HP s2 = s * s;
  return -g * pow(r, 2 * (g - 2)) * s2 / 120 *
         (2 * a * a * (2 * g - 1) * r * r + 4 * b * b * g * pow(r, 4) - 8 * pow(r, 3 + 2 * g) * s2 +
          2 * b * (1 - 5 * g + 6 * g * g) * pow(r, 2 * (1 + g)) * s2 +
          s2 * s2 * pow(r, 4 * g) * (2 * g - 1) * (2 * g - 1) * (4 * g - 3) +
          2 * a * r * (b * (4 * g - 1) * r * r + (2 * g - 1) * (3 * g - 2) * pow(r, 2 * g) * s2));
}

inline HP ref_k5(const ModelParams& p, const HP& r) {
  const HP a(p.alpha), b(p.beta), s(p.sigma), g(p.gamma);
  const HP s2 = s * s;
  const HP one_m_2g = 1 - 2 * g;
  return g * s2 / 120 * pow(r, 2 * (g - 2)) *
         (6 * a * a * b * (2 * g - 1) * r * r + 12 * b * b * b * g * pow(r, 4) -
          10 * one_m_2g * one_m_2g * pow(r, 1 + 4 * g) * s2 * s2 +
          6 * b * b * s2 * (1 - 5 * g + 6 * g * g) * pow(r, 2 * (1 + g)) +
          b * pow(r, 2 * g) * s2 *
              (-10 * (5 + 2 * g) * pow(r, 3) + 3 * one_m_2g * one_m_2g * (4 * g - 3) * pow(r, 2 * g) * s2) +
          2 * a * r *
              (3 * b * b * (4 * g - 1) * r * r + 3 * b * (2 - 7 * g + 6 * g * g) * pow(r, 2 * g) * s2 -
               5 * (2 * g - 1) * pow(r, 1 + 2 * g) * s2));
}

/// Relative difference with a floor on the scale.
inline double rel_diff(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace bondkit::test
