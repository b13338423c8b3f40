#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gainlab/descriptive.hpp"
#include "gainlab/error.hpp"
#include "gainlab/special.hpp"

namespace gainlab {

/// Two-sample t-test variants. Welch (unequal variances) is the
/// default everywhere; the pooled-variance form is available as an
/// option.
enum class TTestKind { welch, pooled };

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

struct RegressionFit {
  int degree = 1;
  std::vector<double> coefficients;  // ascending power order
  double r_squared = 0.0;
};

namespace detail {

struct SampleStats {
  std::size_t n;
  double mean;
  double var;  // sample variance, n-1 denominator
};

inline SampleStats sample_stats(std::span<const double> v, const char* name) {
  if (v.size() < 2) {
    throw DegenerateSample(std::string(name) + " sample needs at least 2 values");
  }
  const auto m = central_moments(v);
  return {m.n, m.mean,
          m.m2 * static_cast<double>(m.n) / static_cast<double>(m.n - 1)};
}

struct TIngredients {
  double mean_a, mean_b;
  double se;  // standard error of the mean difference
  double df;
};

inline TIngredients t_ingredients(std::span<const double> a,
                                  std::span<const double> b, TTestKind kind) {
  const auto sa = sample_stats(a, "first");
  const auto sb = sample_stats(b, "second");
  const double na = static_cast<double>(sa.n);
  const double nb = static_cast<double>(sb.n);

  if (kind == TTestKind::welch) {
    const double ta = sa.var / na;
    const double tb = sb.var / nb;
    if (!(ta + tb > 0.0)) {
      throw DegenerateSample("t-test undefined: both samples have zero variance");
    }
    const double df = (ta + tb) * (ta + tb) /
                      (ta * ta / (na - 1.0) + tb * tb / (nb - 1.0));
    return {sa.mean, sb.mean, std::sqrt(ta + tb), df};
  }

  const double pooled_var =
      ((na - 1.0) * sa.var + (nb - 1.0) * sb.var) / (na + nb - 2.0);
  if (!(pooled_var > 0.0)) {
    throw DegenerateSample("t-test undefined: both samples have zero variance");
  }
  return {sa.mean, sb.mean, std::sqrt(pooled_var * (1.0 / na + 1.0 / nb)),
          na + nb - 2.0};
}

}  // namespace detail

/// Two-sample t-test for the difference in means, t = (mean_a - mean_b)
/// / SE. Welch by default: SE = sqrt(sa^2/na + sb^2/nb) with
/// Welch-Satterthwaite degrees of freedom. The p-value is two-sided.
inline TTestResult t_test(std::span<const double> a, std::span<const double> b,
                          TTestKind kind = TTestKind::welch) {
  const auto ing = detail::t_ingredients(a, b, kind);
  TTestResult r;
  r.t = (ing.mean_a - ing.mean_b) / ing.se;
  r.df = ing.df;
  r.p = special::student_t_two_sided_p(r.t, r.df);
  return r;
}

inline TTestResult welch_t_test(std::span<const double> a,
                                std::span<const double> b) {
  return t_test(a, b, TTestKind::welch);
}

/// Confidence interval for mean_a - mean_b at the given two-sided
/// level: (mean_a - mean_b) +/- t*(df) * SE.
inline std::pair<double, double> mean_diff_ci(std::span<const double> a,
                                              std::span<const double> b,
                                              double level = 0.95,
                                              TTestKind kind = TTestKind::welch) {
  if (!(level > 0.0 && level < 1.0)) {
    throw OutOfRange("confidence level must lie in (0, 1)");
  }
  const auto ing = detail::t_ingredients(a, b, kind);
  const double diff = ing.mean_a - ing.mean_b;
  const double half = special::student_t_critical(level, ing.df) * ing.se;
  return {diff - half, diff + half};
}

/// Cohen's d with the pooled standard deviation,
/// d = (mean_b - mean_a) / s_pooled. Positive when the second sample
/// has the larger mean; note the sign runs opposite to the t statistic.
inline double cohens_d(std::span<const double> a, std::span<const double> b) {
  const auto sa = detail::sample_stats(a, "first");
  const auto sb = detail::sample_stats(b, "second");
  const double na = static_cast<double>(sa.n);
  const double nb = static_cast<double>(sb.n);
  const double pooled_var =
      ((na - 1.0) * sa.var + (nb - 1.0) * sb.var) / (na + nb - 2.0);
  if (!(pooled_var > 0.0)) {
    throw DegenerateSample("Cohen's d undefined: zero pooled variance");
  }
  return (sb.mean - sa.mean) / std::sqrt(pooled_var);
}

/// Common-language effect size under normal equal-variance assumptions:
/// the probability that a random member of the higher-scoring group
/// exceeds a random member of the other, Phi(d / sqrt(2)).
inline double probability_of_superiority(double d) {
  return special::normal_cdf(d / std::sqrt(2.0));
}

/// Squared Pearson correlation of two equal-length samples.
inline double pearson_r2(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("pearson_r2: samples must have equal length");
  }
  if (x.size() < 2) {
    throw DegenerateSample("correlation needs at least 2 observations");
  }
  const auto mx = detail::central_moments(x);
  const auto my = detail::central_moments(y);
  if (!(mx.m2 > 0.0) || !(my.m2 > 0.0)) {
    throw DegenerateSample("correlation undefined for a constant variable");
  }
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx.mean) * (y[i] - my.mean);
  }
  cov /= static_cast<double>(x.size());
  const double r = cov / std::sqrt(mx.m2 * my.m2);
  const double r2 = r * r;
  return r2 > 1.0 ? 1.0 : r2;
}

/// Least-squares polynomial fit of degree 1 or 2 with r^2 = 1 - SSE/SST.
/// Solved via normal equations on a centered and scaled predictor;
/// coefficients are returned in the original basis, ascending powers.
inline RegressionFit polyfit_r2(std::span<const double> x,
                                std::span<const double> y, int degree) {
  if (degree != 1 && degree != 2) {
    throw OutOfRange("polyfit supports degree 1 or 2");
  }
  if (x.size() != y.size()) {
    throw Error("polyfit_r2: samples must have equal length");
  }
  const std::size_t n = x.size();
  const std::size_t k = static_cast<std::size_t>(degree) + 1;
  if (n < k + 1) {
    throw RankDeficient("polyfit needs at least degree + 2 points");
  }

  const auto my = detail::central_moments(y);
  const double sst = my.m2 * static_cast<double>(n);
  if (!(sst > 0.0)) {
    throw DegenerateSample("r^2 undefined for a constant response");
  }

  const auto mx = detail::central_moments(x);
  const double x_scale = mx.m2 > 0.0 ? std::sqrt(mx.m2) : 1.0;

  // Normal equations in u = (x - mean) / scale.
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = (x[i] - mx.mean) / x_scale;

  double mat[3][4] = {};
  std::vector<double> pow_sum(2 * k - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double up = 1.0;
    for (std::size_t p = 0; p < pow_sum.size(); ++p) {
      pow_sum[p] += up;
      up *= u[i];
    }
    up = 1.0;
    for (std::size_t r = 0; r < k; ++r) {
      mat[r][k] += up * y[i];
      up *= u[i];
    }
  }
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) mat[r][c] = pow_sum[r + c];
  }

  // Gaussian elimination with partial pivoting.
  double max_initial = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      max_initial = std::max(max_initial, std::fabs(mat[r][c]));
    }
  }
  const double pivot_tol = 1e-12 * max_initial;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::fabs(mat[r][col]) > std::fabs(mat[pivot][col])) pivot = r;
    }
    if (std::fabs(mat[pivot][col]) <= pivot_tol) {
      throw RankDeficient("predictor values do not admit a unique fit");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c <= k; ++c) std::swap(mat[col][c], mat[pivot][c]);
    }
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = mat[r][col] / mat[col][col];
      for (std::size_t c = col; c <= k; ++c) mat[r][c] -= f * mat[col][c];
    }
  }
  double cu[3] = {};
  for (std::size_t r = k; r-- > 0;) {
    double s = mat[r][k];
    for (std::size_t c = r + 1; c < k; ++c) s -= mat[r][c] * cu[c];
    cu[r] = s / mat[r][r];
  }

  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = cu[0];
    double up = 1.0;
    for (std::size_t p = 1; p < k; ++p) {
      up *= u[i];
      pred += cu[p] * up;
    }
    const double res = y[i] - pred;
    sse += res * res;
  }

  // Expand p(u(x)) back to ascending powers of x.
  RegressionFit fit;
  fit.degree = degree;
  fit.coefficients.assign(k, 0.0);
  const double s1 = 1.0 / x_scale;
  const double mu = mx.mean;
  if (degree == 1) {
    fit.coefficients[0] = cu[0] - cu[1] * mu * s1;
    fit.coefficients[1] = cu[1] * s1;
  } else {
    fit.coefficients[0] = cu[0] - cu[1] * mu * s1 + cu[2] * mu * mu * s1 * s1;
    fit.coefficients[1] = cu[1] * s1 - 2.0 * cu[2] * mu * s1 * s1;
    fit.coefficients[2] = cu[2] * s1 * s1;
  }
  fit.r_squared = std::clamp(1.0 - sse / sst, 0.0, 1.0);
  return fit;
}

/// Evaluates a fitted polynomial at x.
inline double evaluate_fit(const RegressionFit& fit, double x) {
  double acc = 0.0;
  for (std::size_t p = fit.coefficients.size(); p-- > 0;) {
    acc = acc * x + fit.coefficients[p];
  }
  return acc;
}

}  // namespace gainlab
