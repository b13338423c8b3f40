#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gainlab/cohort.hpp"
#include "gainlab/dataset.hpp"
#include "gainlab/descriptive.hpp"
#include "gainlab/error.hpp"
#include "gainlab/inference.hpp"

namespace gainlab {

struct AnalysisOptions {
  std::optional<std::size_t> bins;       // histogram override (plot data)
  std::optional<double> bandwidth;       // kde override (plot data)
  double z_threshold = 1.0;              // extreme-gain tail threshold
  double confidence = 0.95;              // CI level for cohort comparisons
  TTestKind t_test = TTestKind::welch;
  ZBasis z_basis = ZBasis::per_cohort;
  std::optional<std::pair<std::string, std::string>> compare;  // cohort pair
};

/// Moment block for one variable of one cohort. mean is empty when no
/// record defines the variable.
struct SummaryBlock {
  std::size_t n = 0;
  std::optional<double> mean;
  std::optional<double> sd;
  std::optional<double> skewness;
  std::optional<double> kurtosis;  // Pearson convention; excess = value - 3
};

struct GroupCounts {
  std::size_t very_high = 0;
  std::size_t low_a = 0;
  std::size_t low_b = 0;
  std::size_t low_c = 0;
  std::size_t none = 0;
  std::size_t denominator = 0;  // records classified
};

/// Two-cohort comparison of gains. diff, the CI and the t statistic
/// are oriented as (a - b); Cohen's d is oriented as (b - a), positive
/// when cohort b gained more.
struct CohortComparison {
  std::string label_a;
  std::string label_b;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double diff = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;
  double t_stat = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  double cohens_d = 0.0;
  double prob_superiority = 0.5;
};

/// Everything computed for one cohort. records holds the analyzed
/// records (initial < 1) in input order; group_labels runs parallel to
/// records when gain groups are defined.
struct CohortAnalysis {
  std::string label;
  std::size_t n_total = 0;                 // including excluded records
  std::vector<std::string> excluded_ids;   // initial == 1: gain undefined
  SummaryBlock initial_summary;
  SummaryBlock final_summary;
  SummaryBlock gain_summary;
  SummaryBlock increase_summary;
  std::optional<MeanGainPair> mean_gains;
  std::optional<ExtremeCounts> extremes;
  std::optional<QuadrantCounts> quadrants;
  std::optional<GroupCounts> groups;
  std::vector<GainRecord> records;
  std::vector<GainGroup> group_labels;
};

struct AnalysisReport {
  std::string source;
  Scale scale = Scale::percent;
  AnalysisOptions options;
  std::size_t n_records = 0;
  std::vector<CohortAnalysis> cohorts;  // sorted by label
  std::vector<CohortComparison> comparisons;
  std::optional<RegressionFit> fit_gain_on_initial;       // linear
  std::optional<RegressionFit> fit_logdiff_on_initial;    // linear
  std::optional<RegressionFit> fit_increase_on_initial;   // quadratic
  std::optional<RegressionFit> fit_gain_on_increase;      // linear
};

namespace detail {

// Like summarize() but never throws: fills whatever the sample size
// and spread allow. Used for report blocks, where a constant column
// should yield an incomplete summary rather than an error.
inline SummaryBlock lenient_summary(std::span<const double> values) {
  SummaryBlock b;
  b.n = values.size();
  if (values.empty()) return b;
  const auto m = central_moments(values);
  b.mean = m.mean;
  if (m.n >= 2) b.sd = sample_sd(m);
  if (m.n >= 3 && m.m2 > 0.0) b.skewness = m.m3 / std::pow(m.m2, 1.5);
  if (m.n >= 4 && m.m2 > 0.0) b.kurtosis = m.m4 / (m.m2 * m.m2);
  return b;
}

inline std::optional<RegressionFit> try_fit(std::span<const double> x,
                                            std::span<const double> y,
                                            int degree) {
  try {
    return polyfit_r2(x, y, degree);
  } catch (const RankDeficient&) {
    return std::nullopt;
  } catch (const DegenerateSample&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Runs the full analysis over a dataset. Deterministic: identical
/// datasets and options produce identical reports. Records with
/// initial score 1 are retained as exclusions (their gain is
/// undefined) and dropped from the gain statistics. Regressions pool
/// the analyzed records of all cohorts.
inline AnalysisReport run_analysis(const Dataset& dataset,
                                   const AnalysisOptions& options = {}) {
  if (dataset.records.empty()) throw EmptySample("dataset has no records");

  AnalysisReport report;
  report.source = dataset.source;
  report.scale = dataset.scale;
  report.options = options;
  report.n_records = dataset.records.size();

  // Partition records into analyzable ones and exclusions, per cohort.
  std::map<std::string, std::vector<ScoreRecord>> analyzable;
  std::map<std::string, CohortAnalysis> blocks;
  for (const ScoreRecord& r : dataset.records) {
    CohortAnalysis& block = blocks[r.cohort];
    block.label = r.cohort;
    ++block.n_total;
    if (r.initial.value() >= 1.0) {
      block.excluded_ids.push_back(r.student_id);
    } else {
      analyzable[r.cohort].push_back(r);
    }
  }

  // z-scores across all analyzable records at once, honoring z_basis.
  std::vector<ScoreRecord> all_analyzable;
  for (const auto& [label, recs] : analyzable) {
    all_analyzable.insert(all_analyzable.end(), recs.begin(), recs.end());
  }
  std::vector<GainRecord> all_gain_records;
  if (!all_analyzable.empty()) {
    all_gain_records = build_gain_records(all_analyzable, options.z_basis);
  }
  std::size_t cursor = 0;
  for (auto& [label, recs] : analyzable) {
    auto& block = blocks[label];
    block.records.assign(all_gain_records.begin() + cursor,
                         all_gain_records.begin() + cursor + recs.size());
    cursor += recs.size();
  }

  for (auto& [label, block] : blocks) {
    std::vector<double> initials, finals, gains, increases;
    for (const GainRecord& g : block.records) {
      initials.push_back(g.record.initial.value());
      finals.push_back(g.record.final.value());
      gains.push_back(g.gain.value());
      if (g.increase) increases.push_back(g.increase->value());
    }
    // Initial/final summaries cover every record, exclusions included.
    {
      std::vector<double> all_initials, all_finals;
      for (const ScoreRecord& r : dataset.records) {
        if (r.cohort != label) continue;
        all_initials.push_back(r.initial.value());
        all_finals.push_back(r.final.value());
      }
      block.initial_summary = detail::lenient_summary(all_initials);
      block.final_summary = detail::lenient_summary(all_finals);
    }
    block.gain_summary = detail::lenient_summary(gains);
    block.increase_summary = detail::lenient_summary(increases);

    if (!block.records.empty()) {
      std::vector<ScoreRecord> recs;
      for (const GainRecord& g : block.records) recs.push_back(g.record);
      block.mean_gains = hake_vs_individual(recs);
      block.extremes = extreme_gain_counts(block.records, options.z_threshold);
      block.quadrants = quadrant_counts(recs);
      const bool z_complete = std::all_of(
          block.records.begin(), block.records.end(),
          [](const GainRecord& g) { return g.initial_z.has_value(); });
      if (z_complete) {
        block.group_labels = classify_gain_groups(block.records);
        GroupCounts counts;
        counts.denominator = block.group_labels.size();
        for (GainGroup g : block.group_labels) {
          switch (g) {
            case GainGroup::very_high: ++counts.very_high; break;
            case GainGroup::low_a: ++counts.low_a; break;
            case GainGroup::low_b: ++counts.low_b; break;
            case GainGroup::low_c: ++counts.low_c; break;
            case GainGroup::none: ++counts.none; break;
          }
        }
        block.groups = counts;
      }
    }
    report.cohorts.push_back(std::move(block));
  }

  // Cohort comparison: the requested pair, or the first two labels.
  std::vector<std::pair<std::string, std::string>> pairs;
  if (options.compare) {
    pairs.push_back(*options.compare);
  } else if (analyzable.size() >= 2) {
    auto it = analyzable.begin();
    const std::string first = it->first;
    const std::string second = std::next(it)->first;
    pairs.emplace_back(first, second);
  }
  for (const auto& [label_a, label_b] : pairs) {
    auto gains_of = [&](const std::string& label) {
      const auto it = analyzable.find(label);
      if (it == analyzable.end() || it->second.empty()) {
        throw EmptySample("cohort '" + label + "' has no analyzable records");
      }
      std::vector<double> g;
      for (const ScoreRecord& r : it->second) {
        g.push_back(individual_gain(r.initial, r.final).value());
      }
      return g;
    };
    const std::vector<double> ga = gains_of(label_a);
    const std::vector<double> gb = gains_of(label_b);

    CohortComparison cmp;
    cmp.label_a = label_a;
    cmp.label_b = label_b;
    const TTestResult tt = t_test(ga, gb, options.t_test);
    cmp.t_stat = tt.t;
    cmp.df = tt.df;
    cmp.p_value = tt.p;
    const auto [lo, hi] = mean_diff_ci(ga, gb, options.confidence, options.t_test);
    cmp.ci_low = lo;
    cmp.ci_high = hi;
    cmp.level = options.confidence;
    const auto ma = detail::central_moments(ga);
    const auto mb = detail::central_moments(gb);
    cmp.mean_a = ma.mean;
    cmp.mean_b = mb.mean;
    cmp.diff = ma.mean - mb.mean;
    cmp.cohens_d = cohens_d(ga, gb);
    cmp.prob_superiority = probability_of_superiority(cmp.cohens_d);
    report.comparisons.push_back(std::move(cmp));
  }

  // Pooled regressions over every analyzed record.
  {
    std::vector<double> xi, yg, xl_i, yl, xinc_i, yinc, xinc, ygain2;
    for (const GainRecord& g : all_gain_records) {
      xi.push_back(g.record.initial.value());
      yg.push_back(g.gain.value());
      if (g.log_diff) {
        xl_i.push_back(g.record.initial.value());
        yl.push_back(g.log_diff->value());
      }
      if (g.increase) {
        xinc_i.push_back(g.record.initial.value());
        yinc.push_back(g.increase->value());
        xinc.push_back(g.increase->value());
        ygain2.push_back(g.gain.value());
      }
    }
    report.fit_gain_on_initial = detail::try_fit(xi, yg, 1);
    report.fit_logdiff_on_initial = detail::try_fit(xl_i, yl, 1);
    report.fit_increase_on_initial = detail::try_fit(xinc_i, yinc, 2);
    report.fit_gain_on_increase = detail::try_fit(xinc, ygain2, 1);
  }

  return report;
}

}  // namespace gainlab
