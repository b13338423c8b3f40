#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gainlab/descriptive.hpp"
#include "gainlab/simulate.hpp"
#include "oracle.hpp"

using namespace gainlab;

namespace {

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double area = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    area += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  }
  return area;
}

std::vector<double> random_sample(std::mt19937_64& rng, std::size_t n,
                                  double lo = -2.0, double hi = 3.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("summarize basics") {
  const auto two = summarize(std::vector<double>{0.0, 1.0});
  CHECK(two.n == 2);
  CHECK(two.mean == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(two.sd);
  CHECK(*two.sd == Catch::Approx(std::sqrt(0.5)).margin(1e-12));
  CHECK_FALSE(two.skewness);
  CHECK_FALSE(two.kurtosis);

  const auto sym = summarize(std::vector<double>{-1.0, 0.0, 1.0});
  REQUIRE(sym.skewness);
  CHECK(*sym.skewness == Catch::Approx(0.0).margin(1e-12));
  CHECK_FALSE(sym.kurtosis);

  // m2 = 1, m4 = 1 -> Pearson kurtosis 1.
  const auto flat = summarize(std::vector<double>{-1.0, -1.0, 1.0, 1.0});
  REQUIRE(flat.kurtosis);
  CHECK(*flat.kurtosis == Catch::Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(summarize(std::vector<double>{}), EmptySample);
  CHECK_THROWS_AS(summarize(std::vector<double>{2.0, 2.0, 2.0}),
                  DegenerateSample);
  const auto single = summarize(std::vector<double>{7.0});
  CHECK(single.mean == 7.0);
  CHECK_FALSE(single.sd);
}

TEST_CASE("summarize matches the long-double reference") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto v = random_sample(rng, 50);
    const auto s = summarize(v);
    CHECK(s.mean == Catch::Approx(oracle::ref_mean(v)).margin(1e-12));
    CHECK(*s.sd == Catch::Approx(oracle::ref_sample_sd(v)).margin(1e-12));
    CHECK(*s.skewness == Catch::Approx(oracle::ref_skewness(v)).margin(1e-10));
    CHECK(*s.kurtosis == Catch::Approx(oracle::ref_kurtosis(v)).margin(1e-10));
  }
}

TEST_CASE("summarize equivariance under translation and scaling") {
  std::mt19937_64 rng(12);
  const auto v = random_sample(rng, 200);
  const auto base = summarize(v);

  std::vector<double> shifted = v;
  for (double& x : shifted) x += 3.5;
  const auto s = summarize(shifted);
  CHECK(s.mean == Catch::Approx(base.mean + 3.5).margin(1e-10));
  CHECK(*s.sd == Catch::Approx(*base.sd).margin(1e-10));
  CHECK(*s.skewness == Catch::Approx(*base.skewness).margin(1e-10));
  CHECK(*s.kurtosis == Catch::Approx(*base.kurtosis).margin(1e-10));

  std::vector<double> scaled = v;
  for (double& x : scaled) x *= 2.5;
  const auto c = summarize(scaled);
  CHECK(*c.sd == Catch::Approx(*base.sd * 2.5).margin(1e-10));
  CHECK(*c.skewness == Catch::Approx(*base.skewness).margin(1e-10));
  CHECK(*c.kurtosis == Catch::Approx(*base.kurtosis).margin(1e-10));
}

TEST_CASE("z-scores") {
  const auto z = z_scores(std::vector<double>{0.0, 2.0});
  CHECK(z[0] == Catch::Approx(-std::sqrt(0.5)).margin(1e-12));
  CHECK(z[1] == Catch::Approx(std::sqrt(0.5)).margin(1e-12));

  const auto z3 = z_scores(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(z3[0] == Catch::Approx(-1.0).margin(1e-12));
  CHECK(z3[1] == Catch::Approx(0.0).margin(1e-12));
  CHECK(z3[2] == Catch::Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(z_scores(std::vector<double>{}), EmptySample);
  CHECK_THROWS_AS(z_scores(std::vector<double>{1.0}), DegenerateSample);
  CHECK_THROWS_AS(z_scores(std::vector<double>{1.0, 1.0}), DegenerateSample);
}

TEST_CASE("z-scores are translation invariant with mean 0 and sd 1") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto v = random_sample(rng, 80);
    const auto z = z_scores(v);

    std::vector<double> shifted = v;
    for (double& x : shifted) x += 17.25;
    const auto zs = z_scores(shifted);
    for (std::size_t k = 0; k < z.size(); ++k) {
      CHECK(z[k] == Catch::Approx(zs[k]).margin(1e-9));
    }

    double mean = 0.0;
    for (double x : z) mean += x;
    mean /= static_cast<double>(z.size());
    double m2 = 0.0;
    for (double x : z) m2 += (x - mean) * (x - mean);
    const double sd = std::sqrt(m2 / static_cast<double>(z.size() - 1));
    CHECK(mean == Catch::Approx(0.0).margin(1e-10));
    CHECK(sd == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("histogram") {
  const auto h = histogram(std::vector<double>{0.0, 0.5, 1.0}, 2);
  REQUIRE(h.counts.size() == 2);
  CHECK(h.counts[0] == 1);  // 0.5 lands in the second bin (half-open bins)
  CHECK(h.counts[1] == 2);
  CHECK(h.bin_edges.front() == 0.0);
  CHECK(h.bin_edges.back() == 1.0);

  const auto single = histogram(std::vector<double>{3.0}, 3);
  CHECK(single.bin_edges.front() == Catch::Approx(2.5));
  CHECK(single.bin_edges.back() == Catch::Approx(3.5));
  std::size_t total = 0;
  for (auto c : single.counts) total += c;
  CHECK(total == 1);

  CHECK_THROWS_AS(histogram(std::vector<double>{}, 2), EmptySample);
  CHECK_THROWS_AS(histogram(std::vector<double>{1.0}, 0), OutOfRange);
}

TEST_CASE("histogram conserves the sample size") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    std::uniform_int_distribution<std::size_t> n_dist(1, 500);
    std::uniform_int_distribution<std::size_t> b_dist(1, 40);
    const auto v = random_sample(rng, n_dist(rng));
    const auto h = histogram(v, b_dist(rng));
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == v.size());

    const auto auto_h = histogram(v);
    total = 0;
    for (auto c : auto_h.counts) total += c;
    CHECK(total == v.size());
    for (std::size_t k = 1; k < auto_h.bin_edges.size(); ++k) {
      CHECK(auto_h.bin_edges[k] > auto_h.bin_edges[k - 1]);
    }
  }
}

TEST_CASE("kde integrates to one and preserves symmetry") {
  const auto curve = kde(std::vector<double>{0.1, 0.5, 0.9});
  CHECK(trapezoid(curve.grid, curve.density) == Catch::Approx(1.0).margin(0.01));
  for (double d : curve.density) CHECK(d >= 0.0);

  const auto sym = kde(std::vector<double>{-0.7, 0.7});
  const std::size_t n = sym.density.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    CHECK(sym.density[i] == Catch::Approx(sym.density[n - 1 - i]).margin(1e-10));
  }

  CHECK_THROWS_AS(kde(std::vector<double>{}), EmptySample);
  CHECK_THROWS_AS(kde(std::vector<double>{1.0}), DegenerateSample);
  CHECK_THROWS_AS(kde(std::vector<double>{1.0, 1.0, 1.0}), DegenerateSample);
  CHECK_THROWS_AS(kde(std::vector<double>{0.0, 1.0}, -0.5), OutOfRange);

  const auto fixed = kde(std::vector<double>{0.0, 1.0}, 0.25);
  CHECK(fixed.bandwidth == 0.25);
}

TEST_CASE("kde approximates the standard normal density") {
  // 1000 seeded draws through the inverse CDF; compare against the
  // analytic density on the kde grid.
  SplitMix64 rng(314159);
  std::vector<double> draws(1000);
  for (double& d : draws) d = special::normal_quantile(rng.next_unit());

  const auto curve = kde(draws);
  CHECK(trapezoid(curve.grid, curve.density) == Catch::Approx(1.0).margin(0.01));
  double max_err = 0.0;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const double x = curve.grid[i];
    const double truth = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    max_err = std::max(max_err, std::fabs(curve.density[i] - truth));
  }
  CHECK(max_err < 0.05);
}

TEST_CASE("normal quantile plot data") {
  const auto q = qq_normal(std::vector<double>{1.0, -1.0});
  CHECK(q.sample_quantiles[0] == -1.0);
  CHECK(q.sample_quantiles[1] == 1.0);
  CHECK(q.theoretical_quantiles[0] ==
        Catch::Approx(oracle::normal_quantile(0.25)).margin(1e-8));
  CHECK(q.theoretical_quantiles[0] == Catch::Approx(-0.6744897502).margin(1e-8));
  CHECK(q.theoretical_quantiles[1] == Catch::Approx(0.6744897502).margin(1e-8));

  const auto odd = qq_normal(std::vector<double>{3.0, 1.0, 2.0});
  CHECK(odd.theoretical_quantiles[1] == Catch::Approx(0.0).margin(1e-8));

  CHECK_THROWS_AS(qq_normal(std::vector<double>{}), EmptySample);
}

TEST_CASE("qq data of exact normal quantiles lies on the identity line") {
  const std::size_t n = 50;
  std::vector<double> data;
  for (std::size_t i = 0; i < n; ++i) {
    data.push_back(special::normal_quantile((static_cast<double>(i) + 0.5) /
                                            static_cast<double>(n)));
  }
  const auto q = qq_normal(data);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_dev = std::max(max_dev, std::fabs(q.theoretical_quantiles[i] -
                                          q.sample_quantiles[i]));
  }
  CHECK(max_dev < 1e-6);
}

TEST_CASE("qq theoretical quantiles are antisymmetric") {
  std::mt19937_64 rng(15);
  const auto v = random_sample(rng, 37);
  const auto q = qq_normal(v);
  const std::size_t n = q.theoretical_quantiles.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(q.theoretical_quantiles[i] ==
          Catch::Approx(-q.theoretical_quantiles[n - 1 - i]).margin(1e-8));
  }
}

TEST_CASE("interpolated quantiles match the type-7 reference") {
  std::mt19937_64 rng(16);
  const auto v = random_sample(rng, 31);
  for (double p : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    CHECK(interpolated_quantile(v, p) ==
          Catch::Approx(oracle::ref_quantile_type7(v, p)).margin(1e-12));
  }
  CHECK_THROWS_AS(interpolated_quantile(std::vector<double>{}, 0.5), EmptySample);
  CHECK_THROWS_AS(interpolated_quantile(v, 1.5), OutOfRange);
}

TEST_CASE("normal quantile agrees with the series oracle") {
  for (double p : {0.001, 0.01, 0.1, 0.25, 0.5, 0.6, 0.9, 0.99, 0.999}) {
    CHECK(special::normal_quantile(p) ==
          Catch::Approx(oracle::normal_quantile(p)).margin(1e-8));
  }
  CHECK_THROWS_AS(special::normal_quantile(0.0), OutOfRange);
  CHECK_THROWS_AS(special::normal_quantile(1.0), OutOfRange);
}
