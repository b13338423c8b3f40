#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gainlab/error.hpp"
#include "gainlab/special.hpp"

namespace gainlab {

/// Moment summary of a sample. sd is the sample standard deviation
/// (n-1 denominator); skewness and kurtosis use biased central-moment
/// estimators m_k = sum((v - mean)^k) / n, with kurtosis in the Pearson
/// convention (normal distribution = 3). Fields that need more
/// observations than the sample has are left empty.
struct DistributionSummary {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;
  std::optional<double> skewness;
  std::optional<double> kurtosis;
};

struct Histogram {
  std::vector<double> bin_edges;       // ascending, size = counts.size() + 1
  std::vector<std::size_t> counts;     // sums to the sample size
};

struct DensityCurve {
  std::vector<double> grid;            // ascending, uniform
  std::vector<double> density;         // non-negative, integrates to ~1
  double bandwidth = 0.0;
};

struct QQData {
  std::vector<double> theoretical_quantiles;  // standard normal, ascending
  std::vector<double> sample_quantiles;       // sorted data
};

namespace detail {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // central moments, divided by n
  double m3 = 0.0;
  double m4 = 0.0;
};

inline Moments central_moments(std::span<const double> values) {
  Moments m;
  m.n = values.size();
  if (m.n == 0) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  const double n = static_cast<double>(m.n);
  m.m2 = s2 / n;
  m.m3 = s3 / n;
  m.m4 = s4 / n;
  return m;
}

inline double sample_sd(const Moments& m) {
  return std::sqrt(m.m2 * static_cast<double>(m.n) /
                   static_cast<double>(m.n - 1));
}

}  // namespace detail

/// Quantile of a sample by linear interpolation between order
/// statistics (the common "type 7" rule). values need not be sorted.
inline double interpolated_quantile(std::span<const double> values, double p) {
  if (values.empty()) throw EmptySample("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("quantile level outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double interquartile_range(std::span<const double> values) {
  return interpolated_quantile(values, 0.75) -
         interpolated_quantile(values, 0.25);
}

/// Moment summary of a sample. Higher moments are filled only when the
/// sample is large enough (sd: n >= 2, skewness: n >= 3, kurtosis:
/// n >= 4). Throws DegenerateSample when skewness or kurtosis is due
/// but every value is equal, and EmptySample on empty input.
inline DistributionSummary summarize(std::span<const double> values) {
  if (values.empty()) throw EmptySample("summarize of an empty sample");
  const auto m = detail::central_moments(values);
  DistributionSummary s;
  s.n = m.n;
  s.mean = m.mean;
  if (m.n >= 2) s.sd = detail::sample_sd(m);
  if (m.n >= 3) {
    if (m.m2 <= 0.0) {
      throw DegenerateSample("skewness undefined: all values are equal");
    }
    s.skewness = m.m3 / std::pow(m.m2, 1.5);
  }
  if (m.n >= 4) s.kurtosis = m.m4 / (m.m2 * m.m2);
  return s;
}

/// Standardizes a sample: z_i = (v_i - mean) / sd. The output has mean
/// 0 and sample sd 1.
inline std::vector<double> z_scores(std::span<const double> values) {
  if (values.empty()) throw EmptySample("z_scores of an empty sample");
  if (values.size() < 2) {
    throw DegenerateSample("z-scores need at least 2 observations");
  }
  const auto m = detail::central_moments(values);
  const double sd = detail::sample_sd(m);
  if (!(sd > 0.0)) {
    throw DegenerateSample("z-scores undefined: zero standard deviation");
  }
  std::vector<double> z;
  z.reserve(values.size());
  for (double v : values) z.push_back((v - m.mean) / sd);
  return z;
}

/// Equal-width histogram over [min, max] with the given number of bins.
/// Bins are half-open [left, right) except the last, which includes its
/// right edge. A zero-range sample is widened to [v - 0.5, v + 0.5].
inline Histogram histogram(std::span<const double> values,
                           std::size_t bin_count) {
  if (values.empty()) throw EmptySample("histogram of an empty sample");
  if (bin_count == 0) throw OutOfRange("bin count must be at least 1");

  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  double lo = *min_it;
  double hi = *max_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bin_count);

  Histogram h;
  h.bin_edges.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i) {
    h.bin_edges[i] = lo + width * static_cast<double>(i);
  }
  h.bin_edges.back() = hi;
  h.counts.assign(bin_count, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / (hi - lo) *
                                        static_cast<double>(bin_count));
    if (idx >= bin_count) idx = bin_count - 1;
    ++h.counts[idx];
  }
  return h;
}

/// Default bin count by the Freedman-Diaconis rule, falling back to
/// Sturges when the IQR is zero. Capped at 4096 bins.
inline std::size_t freedman_diaconis_bins(std::span<const double> values) {
  if (values.empty()) throw EmptySample("bin rule on an empty sample");
  const std::size_t n = values.size();
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double range = *max_it - *min_it;
  if (range <= 0.0) return 1;
  const double iqr = interquartile_range(values);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  std::size_t bins;
  if (width > 0.0) {
    bins = static_cast<std::size_t>(std::ceil(range / width));
  } else {
    bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
  }
  return std::clamp<std::size_t>(bins, 1, 4096);
}

inline Histogram histogram(std::span<const double> values) {
  return histogram(values, freedman_diaconis_bins(values));
}

/// Gaussian-kernel density estimate on a uniform grid spanning
/// [min - 3h, max + 3h]. The default bandwidth follows Silverman's
/// rule, h = 0.9 * min(sd, IQR/1.34) * n^(-1/5), skipping whichever of
/// sd and IQR is zero.
inline DensityCurve kde(std::span<const double> values,
                        std::optional<double> bandwidth = std::nullopt,
                        std::size_t grid_size = 512) {
  if (values.empty()) throw EmptySample("kde of an empty sample");
  if (values.size() < 2) throw DegenerateSample("kde needs at least 2 observations");
  if (grid_size < 2) throw OutOfRange("kde grid needs at least 2 points");

  const std::size_t n = values.size();
  double h;
  if (bandwidth) {
    if (!(*bandwidth > 0.0)) throw OutOfRange("bandwidth must be positive");
    h = *bandwidth;
  } else {
    const auto m = detail::central_moments(values);
    const double sd = detail::sample_sd(m);
    const double iqr_scaled = interquartile_range(values) / 1.34;
    double scale = 0.0;
    if (sd > 0.0 && iqr_scaled > 0.0) {
      scale = std::min(sd, iqr_scaled);
    } else if (sd > 0.0) {
      scale = sd;
    } else if (iqr_scaled > 0.0) {
      scale = iqr_scaled;
    } else {
      throw DegenerateSample("kde bandwidth undefined: sample has no spread");
    }
    h = 0.9 * scale * std::pow(static_cast<double>(n), -0.2);
  }

  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it - 3.0 * h;
  const double hi = *max_it + 3.0 * h;
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  const double norm = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * M_PI));

  DensityCurve curve;
  curve.bandwidth = h;
  curve.grid.resize(grid_size);
  curve.density.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double x = lo + step * static_cast<double>(i);
    double sum = 0.0;
    for (double v : values) {
      const double u = (x - v) / h;
      sum += std::exp(-0.5 * u * u);
    }
    curve.grid[i] = x;
    curve.density[i] = norm * sum;
  }
  return curve;
}

/// Data for a normal quantile-quantile plot: sorted sample values
/// against standard-normal quantiles at the Hazen plotting positions
/// (i - 0.5) / n.
inline QQData qq_normal(std::span<const double> values) {
  if (values.empty()) throw EmptySample("qq plot of an empty sample");
  QQData q;
  q.sample_quantiles.assign(values.begin(), values.end());
  std::sort(q.sample_quantiles.begin(), q.sample_quantiles.end());
  const double n = static_cast<double>(values.size());
  q.theoretical_quantiles.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    q.theoretical_quantiles.push_back(
        special::normal_quantile((static_cast<double>(i) + 0.5) / n));
  }
  return q;
}

}  // namespace gainlab
