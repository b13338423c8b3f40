#pragma once

#include <cmath>
#include <string>

#include "gainlab/error.hpp"

// Special functions needed by the inference and descriptive modules:
// the regularized incomplete beta (for Student-t tail probabilities)
// and the standard normal CDF and quantile.

namespace gainlab::special {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for the incomplete beta, evaluated with the
// modified Lentz method. Converges quickly for x < (a+1)/(a+b+2).
inline double ibeta_continued_fraction(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  constexpr int max_iter = 500;

  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;

    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0.
inline double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw OutOfRange("incomplete beta requires positive shape parameters");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw OutOfRange("incomplete beta argument " + std::to_string(x) +
                     " outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::ibeta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * detail::ibeta_continued_fraction(1.0 - x, b, a) / b;
}

/// CDF of the Student-t distribution with df degrees of freedom.
inline double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw OutOfRange("degrees of freedom must be positive");
  const double tail =
      regularized_incomplete_beta(df / (df + t * t), 0.5 * df, 0.5);
  return t >= 0.0 ? 1.0 - 0.5 * tail : 0.5 * tail;
}

/// Two-sided tail probability P(|T| >= |t|) for the t distribution.
inline double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw OutOfRange("degrees of freedom must be positive");
  return regularized_incomplete_beta(df / (df + t * t), 0.5 * df, 0.5);
}

/// Two-sided critical value t* with P(|T| <= t*) = level, found by
/// bisection on the tail probability.
inline double student_t_critical(double level, double df) {
  if (!(level > 0.0 && level < 1.0)) {
    throw OutOfRange("confidence level must lie in (0, 1)");
  }
  const double alpha = 1.0 - level;
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_two_sided_p(hi, df) > alpha) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_two_sided_p(mid, df) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Standard normal CDF.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

/// Standard normal quantile (inverse CDF) for p in (0, 1). Uses
/// Acklam's rational approximation followed by one Halley refinement
/// step against erfc, accurate to well below 1e-12.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw OutOfRange("normal quantile requires p in (0, 1)");
  }

  // Acklam's coefficients.
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step: e = Phi(x) - p, u = e / phi(x).
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace gainlab::special
