#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "json.hpp"

#include "gainlab/analysis.hpp"

namespace gainlab {

enum class ReportFormat { text, json };

namespace detail {

/// Formats a double with 6 significant digits (C locale).
inline std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Rounds a double to 6 significant digits, for schema-stable JSON.
inline double round6(double v) {
  return std::strtod(fmt6(v).c_str(), nullptr);
}

inline nlohmann::ordered_json json_num(std::optional<double> v) {
  if (!v) return nullptr;
  return round6(*v);
}

inline nlohmann::ordered_json json_summary(const SummaryBlock& b) {
  nlohmann::ordered_json j;
  j["n"] = b.n;
  j["mean"] = json_num(b.mean);
  j["sd"] = json_num(b.sd);
  j["skewness"] = json_num(b.skewness);
  j["kurtosis"] = json_num(b.kurtosis);
  j["excess_kurtosis"] =
      b.kurtosis ? nlohmann::ordered_json(round6(*b.kurtosis - 3.0)) : nullptr;
  return j;
}

inline nlohmann::ordered_json json_fit(const std::optional<RegressionFit>& fit) {
  if (!fit) return nullptr;
  nlohmann::ordered_json j;
  j["degree"] = fit->degree;
  auto coeffs = nlohmann::ordered_json::array();
  for (double c : fit->coefficients) coeffs.push_back(round6(c));
  j["coefficients"] = coeffs;
  j["r_squared"] = round6(fit->r_squared);
  return j;
}

inline nlohmann::ordered_json json_report(const AnalysisReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "gainlab-report-v1";
  j["source"] = report.source;
  j["scale"] = to_string(report.scale);

  {
    nlohmann::ordered_json o;
    o["z_threshold"] = round6(report.options.z_threshold);
    o["z_basis"] = report.options.z_basis == ZBasis::combined ? "combined"
                                                              : "per_cohort";
    o["confidence"] = round6(report.options.confidence);
    o["t_test"] =
        report.options.t_test == TTestKind::pooled ? "pooled" : "welch";
    o["compare"] = report.options.compare
                       ? nlohmann::ordered_json::array(
                             {report.options.compare->first,
                              report.options.compare->second})
                       : nlohmann::ordered_json(nullptr);
    j["options"] = o;
  }
  j["n_records"] = report.n_records;

  auto cohorts = nlohmann::ordered_json::array();
  for (const CohortAnalysis& c : report.cohorts) {
    nlohmann::ordered_json jc;
    jc["label"] = c.label;
    jc["n"] = c.n_total;
    jc["n_analyzed"] = c.records.size();
    jc["excluded"] = {{"count", c.excluded_ids.size()},
                      {"student_ids", c.excluded_ids}};
    jc["summaries"] = {{"initial", json_summary(c.initial_summary)},
                       {"final", json_summary(c.final_summary)},
                       {"gain", json_summary(c.gain_summary)},
                       {"increase", json_summary(c.increase_summary)}};
    if (c.mean_gains) {
      jc["mean_gains"] = {{"individual", round6(c.mean_gains->mean_individual)},
                          {"hake", round6(c.mean_gains->hake)}};
    } else {
      jc["mean_gains"] = nullptr;
    }
    if (c.extremes) {
      jc["gain_z_extremes"] = {{"threshold", round6(report.options.z_threshold)},
                               {"high", c.extremes->high},
                               {"low", c.extremes->low}};
    } else {
      jc["gain_z_extremes"] = nullptr;
    }
    if (c.quadrants) {
      jc["quadrants"] = {{"below_below", c.quadrants->below_below},
                         {"below_above", c.quadrants->below_above},
                         {"above_below", c.quadrants->above_below},
                         {"above_above", c.quadrants->above_above}};
    } else {
      jc["quadrants"] = nullptr;
    }
    if (c.groups) {
      jc["gain_groups"] = {{"very_high", c.groups->very_high},
                           {"low_a", c.groups->low_a},
                           {"low_b", c.groups->low_b},
                           {"low_c", c.groups->low_c},
                           {"none", c.groups->none},
                           {"denominator", c.groups->denominator}};
    } else {
      jc["gain_groups"] = nullptr;
    }
    cohorts.push_back(std::move(jc));
  }
  j["cohorts"] = cohorts;

  auto comparisons = nlohmann::ordered_json::array();
  for (const CohortComparison& c : report.comparisons) {
    nlohmann::ordered_json jc;
    jc["cohort_a"] = c.label_a;
    jc["cohort_b"] = c.label_b;
    jc["mean_a"] = round6(c.mean_a);
    jc["mean_b"] = round6(c.mean_b);
    jc["diff"] = round6(c.diff);
    jc["ci_low"] = round6(c.ci_low);
    jc["ci_high"] = round6(c.ci_high);
    jc["level"] = round6(c.level);
    jc["t"] = round6(c.t_stat);
    jc["df"] = round6(c.df);
    jc["p"] = round6(c.p_value);
    jc["cohens_d"] = round6(c.cohens_d);
    jc["prob_superiority"] = round6(c.prob_superiority);
    comparisons.push_back(std::move(jc));
  }
  j["comparisons"] = comparisons;

  j["regressions"] = {
      {"gain_on_initial", json_fit(report.fit_gain_on_initial)},
      {"log_difference_on_initial", json_fit(report.fit_logdiff_on_initial)},
      {"increase_on_initial", json_fit(report.fit_increase_on_initial)},
      {"gain_on_increase", json_fit(report.fit_gain_on_increase)}};

  auto records = nlohmann::ordered_json::array();
  for (std::size_t ci = 0; ci < report.cohorts.size(); ++ci) {
    const CohortAnalysis& c = report.cohorts[ci];
    for (std::size_t i = 0; i < c.records.size(); ++i) {
      const GainRecord& g = c.records[i];
      nlohmann::ordered_json jr;
      jr["student_id"] = g.record.student_id;
      jr["cohort"] = g.record.cohort;
      jr["initial"] = round6(g.record.initial.value());
      jr["final"] = round6(g.record.final.value());
      jr["gain"] = round6(g.gain.value());
      jr["increase"] =
          g.increase ? nlohmann::ordered_json(round6(g.increase->value()))
                     : nullptr;
      jr["log_difference"] =
          g.log_diff ? nlohmann::ordered_json(round6(g.log_diff->value()))
                     : nullptr;
      jr["initial_z"] = json_num(g.initial_z);
      jr["gain_z"] = round6(g.gain_z);
      jr["group"] = c.group_labels.empty()
                        ? nlohmann::ordered_json(nullptr)
                        : nlohmann::ordered_json(to_string(c.group_labels[i]));
      records.push_back(std::move(jr));
    }
  }
  j["records"] = records;
  return j;
}

inline std::string opt6(const std::optional<double>& v) {
  return v ? fmt6(*v) : std::string("n/a");
}

inline std::string text_report(const AnalysisReport& report) {
  std::string out;
  auto line = [&out](const std::string& s) {
    out += s;
    out += '\n';
  };

  line("gain analysis report");
  line("source: " + report.source);
  line(std::string("scale: ") + to_string(report.scale));
  line("records: " + std::to_string(report.n_records) + " in " +
       std::to_string(report.cohorts.size()) + " cohort(s)");

  for (const CohortAnalysis& c : report.cohorts) {
    line("");
    line("== cohort " + c.label + " (n=" + std::to_string(c.n_total) +
         ", analyzed=" + std::to_string(c.records.size()) + ") ==");
    if (!c.excluded_ids.empty()) {
      std::string ids;
      for (const auto& id : c.excluded_ids) {
        if (!ids.empty()) ids += ", ";
        ids += id;
      }
      line("excluded (initial = 1, gain undefined): " + ids);
    }
    auto summary_line = [&](const char* name, const SummaryBlock& b) {
      std::string s = "  ";
      s += name;
      s += ": n=" + std::to_string(b.n);
      s += " mean=" + opt6(b.mean);
      s += " sd=" + opt6(b.sd);
      s += " skewness=" + opt6(b.skewness);
      s += " kurtosis=" + opt6(b.kurtosis);
      if (b.kurtosis) s += " (excess " + fmt6(*b.kurtosis - 3.0) + ")";
      line(s);
    };
    summary_line("initial ", c.initial_summary);
    summary_line("final   ", c.final_summary);
    summary_line("gain    ", c.gain_summary);
    summary_line("increase", c.increase_summary);
    if (c.mean_gains) {
      line("  mean individual gain=" + fmt6(c.mean_gains->mean_individual) +
           "  Hake mean gain=" + fmt6(c.mean_gains->hake));
    }
    if (c.extremes) {
      line("  gain z extremes (threshold " + fmt6(report.options.z_threshold) +
           "): high=" + std::to_string(c.extremes->high) +
           " low=" + std::to_string(c.extremes->low));
    }
    if (c.quadrants) {
      line("  quadrants (initial x gain vs cohort means): below/below=" +
           std::to_string(c.quadrants->below_below) + " below/above=" +
           std::to_string(c.quadrants->below_above) + " above/below=" +
           std::to_string(c.quadrants->above_below) + " above/above=" +
           std::to_string(c.quadrants->above_above));
    }
    if (c.groups) {
      const auto& g = *c.groups;
      const std::string denom = "/" + std::to_string(g.denominator);
      line("  gain groups: very_high=" + std::to_string(g.very_high) + denom +
           " low_a=" + std::to_string(g.low_a) + denom + " low_b=" +
           std::to_string(g.low_b) + denom + " low_c=" +
           std::to_string(g.low_c) + denom + " none=" +
           std::to_string(g.none) + denom);
    } else {
      line("  gain groups: n/a (initial scores have no spread)");
    }
  }

  for (const CohortComparison& c : report.comparisons) {
    line("");
    line("== comparison " + c.label_a + " vs " + c.label_b + " (gain) ==");
    line("  mean " + c.label_a + "=" + fmt6(c.mean_a) + " mean " + c.label_b +
         "=" + fmt6(c.mean_b) + " diff=" + fmt6(c.diff));
    line("  " + fmt6(c.level * 100.0) + "% CI [" + fmt6(c.ci_low) + ", " +
         fmt6(c.ci_high) + "]");
    line("  t=" + fmt6(c.t_stat) + " df=" + fmt6(c.df) + " p=" +
         fmt6(c.p_value));
    line("  Cohen's d=" + fmt6(c.cohens_d) +
         " P(superiority)=" + fmt6(c.prob_superiority));
  }

  line("");
  line("== regressions (all cohorts pooled) ==");
  auto fit_line = [&](const char* name,
                      const std::optional<RegressionFit>& fit) {
    if (!fit) {
      line(std::string("  ") + name + ": n/a");
      return;
    }
    std::string coeffs;
    for (double c : fit->coefficients) {
      if (!coeffs.empty()) coeffs += ", ";
      coeffs += fmt6(c);
    }
    line(std::string("  ") + name + ": degree=" +
         std::to_string(fit->degree) + " r2=" + fmt6(fit->r_squared) +
         " coefficients=[" + coeffs + "]");
  };
  fit_line("gain ~ initial          ", report.fit_gain_on_initial);
  fit_line("log_difference ~ initial", report.fit_logdiff_on_initial);
  fit_line("increase ~ initial      ", report.fit_increase_on_initial);
  fit_line("gain ~ increase         ", report.fit_gain_on_increase);
  return out;
}

}  // namespace detail

/// Serializes a report. JSON output has a stable schema with fixed key
/// order; floats carry 6 significant digits in both formats. The same
/// report always serializes to identical bytes.
inline std::string emit_report(const AnalysisReport& report,
                               ReportFormat format) {
  if (format == ReportFormat::json) {
    return detail::json_report(report).dump(2) + "\n";
  }
  return detail::text_report(report);
}

/// The per-student gain table as delimited text. Undefined entries are
/// written as NA.
inline std::string emit_gain_table(const AnalysisReport& report,
                                   char delimiter = ',') {
  const char d = delimiter;
  std::string out = "student_id";
  for (const char* col : {"cohort", "initial", "final", "gain", "increase",
                          "log_difference", "initial_z", "gain_z", "group"}) {
    out += d;
    out += col;
  }
  out += '\n';
  for (const CohortAnalysis& c : report.cohorts) {
    for (std::size_t i = 0; i < c.records.size(); ++i) {
      const GainRecord& g = c.records[i];
      out += g.record.student_id;
      out += d;
      out += g.record.cohort;
      out += d;
      out += detail::fmt6(g.record.initial.value());
      out += d;
      out += detail::fmt6(g.record.final.value());
      out += d;
      out += detail::fmt6(g.gain.value());
      out += d;
      out += g.increase ? detail::fmt6(g.increase->value()) : "NA";
      out += d;
      out += g.log_diff ? detail::fmt6(g.log_diff->value()) : "NA";
      out += d;
      out += g.initial_z ? detail::fmt6(*g.initial_z) : "NA";
      out += d;
      out += detail::fmt6(g.gain_z);
      out += d;
      out += c.group_labels.empty() ? "NA" : to_string(c.group_labels[i]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace gainlab
