#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "gainlab/cohort.hpp"
#include "oracle.hpp"

using namespace gainlab;

namespace {

ScoreRecord rec(const char* id, const char* cohort, double initial,
                double final) {
  return ScoreRecord(id, cohort, UnitScore(initial), UnitScore(final));
}

std::vector<ScoreRecord> common_initial_cohort() {
  return {rec("s1", "A", 0.73, 0.93), rec("s2", "A", 0.73, 0.90),
          rec("s3", "A", 0.73, 0.85), rec("s4", "A", 0.73, 0.67)};
}

GainRecord synthetic(double gain_z, std::optional<double> initial_z) {
  GainRecord g{rec("x", "Z", 0.5, 0.6), ChangeValue(0.2, ChangeKind::gain),
               std::nullopt, std::nullopt, initial_z, gain_z};
  return g;
}

}  // namespace

TEST_CASE("gain records for a common-initial cohort") {
  const auto records = build_gain_records(common_initial_cohort());
  REQUIRE(records.size() == 4);
  CHECK(records[0].gain.value() == Catch::Approx(20.0 / 27.0).margin(1e-12));
  CHECK(records[1].gain.value() == Catch::Approx(17.0 / 27.0).margin(1e-12));
  CHECK(records[2].gain.value() == Catch::Approx(12.0 / 27.0).margin(1e-12));
  CHECK(records[3].gain.value() == Catch::Approx(-6.0 / 27.0).margin(1e-12));

  // No spread in the initial scores: initial_z unavailable.
  for (const auto& g : records) {
    CHECK_FALSE(g.initial_z.has_value());
    REQUIRE(g.increase.has_value());
    REQUIRE(g.log_diff.has_value());
    // Gain round trip reproduces the recorded final score.
    CHECK(final_from_gain(g.record.initial, g.gain).value() ==
          Catch::Approx(g.record.final.value()).margin(1e-12));
  }

  // gain_z has mean 0 and sample sd 1 within the cohort.
  std::vector<double> gz;
  for (const auto& g : records) gz.push_back(g.gain_z);
  CHECK(oracle::ref_mean(gz) == Catch::Approx(0.0).margin(1e-10));
  double m2 = 0.0;
  for (double z : gz) m2 += z * z;
  CHECK(std::sqrt(m2 / 3.0) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("gain records error and marker cases") {
  CHECK_THROWS_AS(
      build_gain_records(std::vector<ScoreRecord>{rec("s1", "A", 0.2, 0.4),
                                                  rec("s2", "A", 0.6, 0.7)}),
      DegenerateSample);  // both gains are 0.25, no spread

  CHECK_THROWS_AS(
      build_gain_records(std::vector<ScoreRecord>{rec("s1", "A", 1.0, 1.0),
                                                  rec("s2", "A", 0.5, 0.7)}),
      GainUndefined);

  const auto records = build_gain_records(std::vector<ScoreRecord>{
      rec("s1", "A", 0.0, 0.8), rec("s2", "A", 0.5, 0.7)});
  CHECK(records[0].gain.value() == Catch::Approx(0.8).margin(1e-12));
  CHECK_FALSE(records[0].increase.has_value());
  CHECK_FALSE(records[0].log_diff.has_value());
  CHECK(records[1].increase.has_value());
}

TEST_CASE("z basis selects the population") {
  const std::vector<ScoreRecord> two_cohorts{
      rec("a1", "A", 0.2, 0.4), rec("a2", "A", 0.4, 0.5),
      rec("b1", "B", 0.5, 0.9), rec("b2", "B", 0.6, 0.7)};
  const auto per_cohort = build_gain_records(two_cohorts, ZBasis::per_cohort);
  const auto combined = build_gain_records(two_cohorts, ZBasis::combined);

  // Per cohort: each pair standardizes within itself.
  std::vector<double> a_z{per_cohort[0].gain_z, per_cohort[1].gain_z};
  CHECK(a_z[0] + a_z[1] == Catch::Approx(0.0).margin(1e-10));

  // Combined: all four share one basis, checked against the reference.
  std::vector<double> gains;
  for (const auto& g : combined) gains.push_back(g.gain.value());
  const auto ref_z = oracle::ref_z_scores(gains);
  for (std::size_t i = 0; i < combined.size(); ++i) {
    CHECK(combined[i].gain_z == Catch::Approx(ref_z[i]).margin(1e-10));
  }
}

TEST_CASE("mean individual gain") {
  CHECK(mean_individual_gain(std::vector<ScoreRecord>{
            rec("s1", "A", 0.5, 0.6), rec("s2", "A", 0.8, 1.0)}) ==
        Catch::Approx(0.6).margin(1e-12));
  CHECK(mean_individual_gain(std::vector<ScoreRecord>{
            rec("s1", "A", 0.3, 0.58), rec("s2", "A", 0.5, 0.7)}) ==
        Catch::Approx(0.4).margin(1e-12));
  CHECK(mean_individual_gain(common_initial_cohort()) ==
        Catch::Approx(43.0 / 108.0).margin(1e-12));
  CHECK_THROWS_AS(mean_individual_gain(std::vector<ScoreRecord>{}), EmptySample);
}

TEST_CASE("hake gain versus mean individual gain") {
  // Distinct initial scores: the two statistics differ.
  const auto pair = hake_vs_individual(std::vector<ScoreRecord>{
      rec("s1", "A", 0.5, 0.6), rec("s2", "A", 0.8, 1.0)});
  CHECK(pair.mean_individual == Catch::Approx(0.6).margin(1e-12));
  CHECK(pair.hake == Catch::Approx(3.0 / 7.0).margin(1e-12));

  // Equal initial scores: they agree exactly.
  const auto equal = hake_vs_individual(std::vector<ScoreRecord>{
      rec("s1", "A", 0.73, 0.93), rec("s2", "A", 0.73, 0.67)});
  CHECK(equal.hake == Catch::Approx(7.0 / 27.0).margin(1e-12));
  CHECK(equal.mean_individual == Catch::Approx(equal.hake).margin(1e-12));

  const auto single = hake_vs_individual(std::vector<ScoreRecord>{
      rec("s1", "A", 0.4, 0.7)});
  CHECK(single.hake == Catch::Approx(single.mean_individual).margin(1e-12));
  CHECK(single.hake == Catch::Approx(0.5).margin(1e-12));

  CHECK_THROWS_AS(hake_vs_individual(std::vector<ScoreRecord>{}), EmptySample);
}

TEST_CASE("extreme gain counts") {
  // Gains {0,0,0,10}: z = {-0.5,-0.5,-0.5,+1.5}.
  std::vector<GainRecord> records;
  for (double gz : {-0.5, -0.5, -0.5, 1.5}) {
    records.push_back(synthetic(gz, 0.0));
  }
  const auto counts = extreme_gain_counts(records, 1.0);
  CHECK(counts.high == 1);
  CHECK(counts.low == 0);

  std::vector<GainRecord> sym;
  for (double gz : {-1.4, -0.3, 0.3, 1.4}) sym.push_back(synthetic(gz, 0.0));
  const auto sym_counts = extreme_gain_counts(sym, 1.0);
  CHECK(sym_counts.high == sym_counts.low);

  const auto none = extreme_gain_counts(sym, 10.0);
  CHECK(none.high == 0);
  CHECK(none.low == 0);

  CHECK_THROWS_AS(extreme_gain_counts(sym, 0.0), OutOfRange);
}

TEST_CASE("quadrant counts") {
  // (0.2 -> 0.9): gain 0.875; (0.8 -> 0.85): gain 0.25.
  const auto q = quadrant_counts(std::vector<ScoreRecord>{
      rec("s1", "A", 0.2, 0.9), rec("s2", "A", 0.8, 0.85)});
  CHECK(q.below_above == 1);
  CHECK(q.above_below == 1);
  CHECK(q.below_below == 0);
  CHECK(q.above_above == 0);

  // All identical: ties count as above.
  const auto ties = quadrant_counts(std::vector<ScoreRecord>{
      rec("s1", "A", 0.5, 0.7), rec("s2", "A", 0.5, 0.7),
      rec("s3", "A", 0.5, 0.7)});
  CHECK(ties.above_above == 3);

  CHECK_THROWS_AS(quadrant_counts(std::vector<ScoreRecord>{}), EmptySample);
}

TEST_CASE("quadrant counts partition the cohort") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> head(0.0, 0.95);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> n_dist(1, 60);
    const std::size_t n = n_dist(rng);
    std::vector<ScoreRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
      records.push_back(ScoreRecord("s" + std::to_string(i), "A",
                                    UnitScore(head(rng)), UnitScore(unit(rng))));
    }
    const auto q = quadrant_counts(records);
    CHECK(q.below_below + q.below_above + q.above_below + q.above_above == n);
  }
}

TEST_CASE("gain group classification") {
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(1.5, 0.0)})[0] ==
        GainGroup::very_high);
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(-1.2, 2.5)})[0] ==
        GainGroup::low_a);
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(-1.2, 1.0)})[0] ==
        GainGroup::low_b);
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(-1.2, -1.5)})[0] ==
        GainGroup::low_c);
  // The band initial_z in [-1, 0] with very low gain matches no group.
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(-1.2, -0.5)})[0] ==
        GainGroup::none);
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(0.5, 3.0)})[0] ==
        GainGroup::none);

  // Strict thresholds.
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(1.0, 0.0)})[0] ==
        GainGroup::none);
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(-1.0, 2.5)})[0] ==
        GainGroup::none);
  CHECK(classify_gain_groups(std::vector<GainRecord>{synthetic(-1.2, 2.0)})[0] ==
        GainGroup::low_b);

  CHECK_THROWS_AS(
      classify_gain_groups(std::vector<GainRecord>{synthetic(0.5, std::nullopt)}),
      DegenerateSample);
}

TEST_CASE("gain groups are mutually exclusive over random z pairs") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> z(-4.0, 4.0);
  std::vector<GainRecord> records;
  for (int i = 0; i < 5000; ++i) records.push_back(synthetic(z(rng), z(rng)));
  const auto labels = classify_gain_groups(records);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double gz = records[i].gain_z;
    const double iz = *records[i].initial_z;
    int matches = 0;
    if (gz > 1.0) ++matches;
    if (gz < -1.0 && iz > 2.0) ++matches;
    if (gz < -1.0 && iz > 0.0 && !(iz > 2.0)) ++matches;
    if (gz < -1.0 && iz < -1.0) ++matches;
    CHECK(matches <= 1);
    const bool labelled = labels[i] != GainGroup::none;
    CHECK(labelled == (matches == 1));
    // low_a absorbs the records low_b's raw predicate also covers.
    if (labels[i] == GainGroup::low_b) CHECK_FALSE(iz > 2.0);
  }
}

TEST_CASE("classification through build_gain_records end to end") {
  // Cohort engineered so one student has very low gain with a clearly
  // below-average initial score.
  std::vector<ScoreRecord> records{
      rec("s1", "A", 0.30, 0.50), rec("s2", "A", 0.55, 0.75),
      rec("s3", "A", 0.60, 0.80), rec("s4", "A", 0.65, 0.85),
      rec("s5", "A", 0.10, 0.05)};
  const auto gains = build_gain_records(records);
  const auto labels = classify_gain_groups(gains);
  CHECK(labels[4] == GainGroup::low_c);
  CHECK(gains[4].gain_z < -1.0);
  REQUIRE(gains[4].initial_z.has_value());
  CHECK(*gains[4].initial_z < -1.0);
}
