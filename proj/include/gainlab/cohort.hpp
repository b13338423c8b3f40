#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gainlab/change.hpp"
#include "gainlab/descriptive.hpp"
#include "gainlab/error.hpp"
#include "gainlab/score.hpp"

namespace gainlab {

/// Which population supplies the mean and sd for z-scores: each
/// record's own cohort (the default) or all records together.
enum class ZBasis { per_cohort, combined };

/// A score record augmented with its relative-change values and
/// z-scores. increase and log_diff are empty where their change
/// function is undefined (zero scores); initial_z is empty when the
/// population's initial scores have no spread.
struct GainRecord {
  ScoreRecord record;
  ChangeValue gain;
  std::optional<ChangeValue> increase;
  std::optional<ChangeValue> log_diff;
  std::optional<double> initial_z;
  double gain_z = 0.0;
};

/// Cross-classification of records by initial score and gain against
/// the cohort means. Values exactly at a mean count as "above".
struct QuadrantCounts {
  std::size_t below_below = 0;  // initial below mean, gain below mean
  std::size_t below_above = 0;
  std::size_t above_below = 0;
  std::size_t above_above = 0;
};

/// Subgroups defined by gain and initial-score z-score thresholds.
/// very_high: gain_z > 1. Among records with gain_z < -1, the most
/// specific rule wins: low_a (initial_z > 2), then low_b (initial_z > 0),
/// then low_c (initial_z < -1). Records matching no rule get none;
/// in particular gain_z < -1 with initial_z in [-1, 0] is unclassified.
enum class GainGroup { very_high, low_a, low_b, low_c, none };

inline const char* to_string(GainGroup g) noexcept {
  switch (g) {
    case GainGroup::very_high: return "VERY_HIGH";
    case GainGroup::low_a: return "LOW_A";
    case GainGroup::low_b: return "LOW_B";
    case GainGroup::low_c: return "LOW_C";
    case GainGroup::none: return "NONE";
  }
  return "?";
}

namespace detail {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample sd; 0 when n < 2 or no spread
};

inline MeanSd mean_sd(std::span<const double> v) {
  MeanSd r;
  if (v.empty()) return r;
  const auto m = central_moments(v);
  r.mean = m.mean;
  if (m.n >= 2) r.sd = sample_sd(m);
  return r;
}

}  // namespace detail

/// Computes a GainRecord for every input record, preserving input
/// order. Gains require every initial score < 1 (GainUndefined
/// otherwise); z-scores are computed within each record's cohort, or
/// over all records with ZBasis::combined. Throws DegenerateSample when
/// a z-score population's gains have no spread.
inline std::vector<GainRecord> build_gain_records(
    std::span<const ScoreRecord> records, ZBasis basis = ZBasis::per_cohort) {
  std::vector<GainRecord> out;
  out.reserve(records.size());
  for (const ScoreRecord& r : records) {
    if (r.initial.value() >= 1.0) {
      throw GainUndefined("student '" + r.student_id + "' in cohort '" +
                          r.cohort + "': gain undefined for initial score 1");
    }
    GainRecord g{r, individual_gain(r.initial, r.final), std::nullopt,
                 std::nullopt, std::nullopt, 0.0};
    if (r.initial.value() > 0.0) {
      g.increase = fractional_increase(r.initial, r.final);
      if (r.final.value() > 0.0) g.log_diff = log_difference(r.initial, r.final);
    }
    out.push_back(std::move(g));
  }

  // Group record indices by z-score population.
  std::map<std::string, std::vector<std::size_t>> groups;
  if (basis == ZBasis::combined) {
    auto& all = groups[""];
    for (std::size_t i = 0; i < out.size(); ++i) all.push_back(i);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) {
      groups[out[i].record.cohort].push_back(i);
    }
  }

  for (const auto& [label, idx] : groups) {
    std::vector<double> gains, initials;
    gains.reserve(idx.size());
    initials.reserve(idx.size());
    for (std::size_t i : idx) {
      gains.push_back(out[i].gain.value());
      initials.push_back(out[i].record.initial.value());
    }
    const auto gm = detail::mean_sd(gains);
    if (!(gm.sd > 0.0)) {
      const std::string where =
          basis == ZBasis::combined ? "combined records" : "cohort '" + label + "'";
      throw DegenerateSample("gain z-scores undefined for " + where +
                             ": gains have no spread");
    }
    const auto im = detail::mean_sd(initials);
    for (std::size_t i : idx) {
      out[i].gain_z = (out[i].gain.value() - gm.mean) / gm.sd;
      if (im.sd > 0.0) {
        out[i].initial_z = (out[i].record.initial.value() - im.mean) / im.sd;
      }
    }
  }
  return out;
}

/// Arithmetic mean of the individual gains.
inline double mean_individual_gain(std::span<const ScoreRecord> records) {
  if (records.empty()) throw EmptySample("mean gain of an empty cohort");
  double sum = 0.0;
  for (const ScoreRecord& r : records) {
    sum += individual_gain(r.initial, r.final).value();
  }
  return sum / static_cast<double>(records.size());
}

struct MeanGainPair {
  double hake = 0.0;             // gain formula applied to the mean scores
  double mean_individual = 0.0;  // mean of the per-student gains
};

/// Both cohort-level gain statistics side by side. They agree exactly
/// when every student shares the same initial score and differ in
/// general.
inline MeanGainPair hake_vs_individual(std::span<const ScoreRecord> records) {
  if (records.empty()) throw EmptySample("mean gain of an empty cohort");
  double sum_initial = 0.0;
  double sum_final = 0.0;
  for (const ScoreRecord& r : records) {
    sum_initial += r.initial.value();
    sum_final += r.final.value();
  }
  const double n = static_cast<double>(records.size());
  MeanGainPair pair;
  pair.hake = hake_mean_gain(UnitScore(sum_initial / n), UnitScore(sum_final / n))
                  .value();
  pair.mean_individual = mean_individual_gain(records);
  return pair;
}

struct ExtremeCounts {
  std::size_t high = 0;  // gain_z >= threshold
  std::size_t low = 0;   // gain_z <= -threshold
};

/// Counts records in the gain z-score tails at the given threshold.
inline ExtremeCounts extreme_gain_counts(std::span<const GainRecord> records,
                                         double z_threshold) {
  if (!(z_threshold > 0.0)) throw OutOfRange("z threshold must be positive");
  ExtremeCounts c;
  for (const GainRecord& r : records) {
    if (r.gain_z >= z_threshold) ++c.high;
    if (r.gain_z <= -z_threshold) ++c.low;
  }
  return c;
}

/// Classifies every record by initial score and gain against the
/// cohort means. The four counts partition the input.
inline QuadrantCounts quadrant_counts(std::span<const ScoreRecord> records) {
  if (records.empty()) throw EmptySample("quadrants of an empty cohort");
  std::vector<double> gains;
  gains.reserve(records.size());
  double sum_initial = 0.0;
  for (const ScoreRecord& r : records) {
    gains.push_back(individual_gain(r.initial, r.final).value());
    sum_initial += r.initial.value();
  }
  const double n = static_cast<double>(records.size());
  const double mean_initial = sum_initial / n;
  double mean_gain = 0.0;
  for (double g : gains) mean_gain += g;
  mean_gain /= n;

  QuadrantCounts q;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const bool initial_above = records[i].initial.value() >= mean_initial;
    const bool gain_above = gains[i] >= mean_gain;
    if (initial_above) {
      gain_above ? ++q.above_above : ++q.above_below;
    } else {
      gain_above ? ++q.below_above : ++q.below_below;
    }
  }
  return q;
}

/// Assigns each record its gain group. Requires initial z-scores on
/// every record (DegenerateSample otherwise). Labels are mutually
/// exclusive; the low_a/low_b overlap is resolved most-specific-first.
inline std::vector<GainGroup> classify_gain_groups(
    std::span<const GainRecord> records) {
  for (const GainRecord& r : records) {
    if (!r.initial_z) {
      throw DegenerateSample(
          "gain groups undefined: initial scores have no spread, so initial "
          "z-scores are unavailable");
    }
  }
  std::vector<GainGroup> out;
  out.reserve(records.size());
  for (const GainRecord& r : records) {
    GainGroup g = GainGroup::none;
    if (r.gain_z > 1.0) {
      g = GainGroup::very_high;
    } else if (r.gain_z < -1.0) {
      const double iz = *r.initial_z;
      if (iz > 2.0) {
        g = GainGroup::low_a;
      } else if (iz > 0.0) {
        g = GainGroup::low_b;
      } else if (iz < -1.0) {
        g = GainGroup::low_c;
      }
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace gainlab
