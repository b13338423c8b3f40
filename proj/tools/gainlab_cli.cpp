// Command-line front end: ingest delimited score tables, run the gain
// analysis, emit reports, plot data and synthetic cohorts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gainlab/gainlab.hpp"

namespace {

struct IngestFlags {
  std::string scale = "percent";
  std::string delimiter = ",";
  std::string z_basis = "per_cohort";
};

char delimiter_char(const std::string& flag) {
  if (flag == "tab" || flag == "\\t") return '\t';
  if (flag.size() != 1) {
    throw CLI::ValidationError("--delimiter takes a single character or 'tab'");
  }
  return flag[0];
}

gainlab::Scale scale_enum(const std::string& flag) {
  return flag == "unit" ? gainlab::Scale::unit : gainlab::Scale::percent;
}

gainlab::Dataset load(const std::string& path, const IngestFlags& flags) {
  gainlab::Dataset ds = gainlab::ingest(path, scale_enum(flags.scale),
                                        delimiter_char(flags.delimiter));
  for (const std::string& w : ds.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return ds;
}

void add_ingest_flags(CLI::App* cmd, IngestFlags& flags) {
  cmd->add_option("--scale", flags.scale, "Score scale of the input")
      ->check(CLI::IsMember({"percent", "unit"}))
      ->capture_default_str();
  cmd->add_option("--delimiter", flags.delimiter,
                  "Field delimiter (single character or 'tab')")
      ->capture_default_str();
  cmd->add_option("--z-basis", flags.z_basis,
                  "Population for z-scores: each cohort or all records")
      ->check(CLI::IsMember({"per_cohort", "combined"}))
      ->capture_default_str();
}

gainlab::MarginalDist parse_dist(const std::string& text, const char* name) {
  const auto colon = text.find(':');
  const auto comma = text.find(',', colon);
  if (colon == std::string::npos || comma == std::string::npos) {
    throw CLI::ValidationError(std::string(name) +
                               ": expected uniform:a,b or normal:mu,sigma");
  }
  const std::string kind = text.substr(0, colon);
  double p1 = 0.0, p2 = 0.0;
  try {
    p1 = std::stod(text.substr(colon + 1, comma - colon - 1));
    p2 = std::stod(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(name) + ": malformed parameters");
  }
  if (kind == "uniform") return gainlab::UniformDist{p1, p2};
  if (kind == "normal") return gainlab::NormalDist{p1, p2};
  throw CLI::ValidationError(std::string(name) +
                             ": distribution must be uniform or normal");
}

void write_output(const std::optional<std::string>& out_path,
                  const std::string& content) {
  if (!out_path) {
    std::cout << content;
    return;
  }
  std::ofstream out(*out_path, std::ios::binary);
  if (!out) throw gainlab::IoError("cannot open '" + *out_path + "' for writing");
  out << content;
  if (!out) throw gainlab::IoError("failed writing '" + *out_path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gain analysis for initial/final assessment scores"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Full analysis report");
  std::string analyze_input;
  IngestFlags analyze_flags;
  std::string analyze_format = "text";
  std::string analyze_ttest = "welch";
  double analyze_z_threshold = 1.0;
  double analyze_confidence = 0.95;
  std::optional<std::string> analyze_compare;
  std::optional<std::string> analyze_out;
  analyze->add_option("input", analyze_input, "Delimited score table")->required();
  add_ingest_flags(analyze, analyze_flags);
  analyze->add_option("--format", analyze_format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  analyze->add_option("--z-threshold", analyze_z_threshold,
                      "Gain z-score threshold for the extreme counts")
      ->capture_default_str();
  analyze->add_option("--confidence", analyze_confidence,
                      "Confidence level for the mean-difference interval")
      ->capture_default_str();
  analyze->add_option("--t-test", analyze_ttest, "Two-sample test variant")
      ->check(CLI::IsMember({"welch", "pooled"}))
      ->capture_default_str();
  analyze->add_option("--compare", analyze_compare,
                      "Cohort pair to compare, as LABEL,LABEL");
  analyze->add_option("--out", analyze_out, "Write the report here instead of stdout");

  // gains
  auto* gains = app.add_subcommand("gains", "Per-student gain table");
  std::string gains_input;
  IngestFlags gains_flags;
  std::string gains_format = "text";
  std::optional<std::string> gains_out;
  gains->add_option("input", gains_input, "Delimited score table")->required();
  add_ingest_flags(gains, gains_flags);
  gains->add_option("--format", gains_format, "Table format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  gains->add_option("--out", gains_out, "Write the table here instead of stdout");

  // plots
  auto* plots = app.add_subcommand("plots", "Plot-data files");
  std::string plots_input;
  IngestFlags plots_flags;
  std::string plots_out = ".";
  std::optional<std::size_t> plots_bins;
  std::optional<double> plots_bandwidth;
  bool plots_svg = false;
  plots->add_option("input", plots_input, "Delimited score table")->required();
  add_ingest_flags(plots, plots_flags);
  plots->add_option("--out", plots_out, "Output directory")->capture_default_str();
  plots->add_option("--bins", plots_bins, "Histogram bin count override");
  plots->add_option("--bandwidth", plots_bandwidth, "KDE bandwidth override");
  plots->add_flag("--svg", plots_svg, "Also write an .svg rendering per file");

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Emit a synthetic cohort in the standard input format");
  std::size_t sim_n = 100;
  std::string sim_cohort = "A";
  std::uint64_t sim_seed = 1;
  double sim_rho = 0.0;
  std::string sim_initial = "uniform:0.2,0.95";
  std::string sim_gain = "normal:0.5,0.2";
  std::string sim_scale = "percent";
  std::optional<std::string> sim_out;
  simulate->add_option("--n", sim_n, "Number of records")->capture_default_str();
  simulate->add_option("--cohort", sim_cohort, "Cohort label")
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  simulate->add_option("--rho", sim_rho,
                       "Copula correlation between initial score and gain")
      ->capture_default_str();
  simulate->add_option("--initial", sim_initial,
                       "Initial-score marginal (uniform:a,b or normal:mu,sigma)")
      ->capture_default_str();
  simulate->add_option("--gain", sim_gain, "Gain marginal")->capture_default_str();
  simulate->add_option("--scale", sim_scale, "Scale of the emitted scores")
      ->check(CLI::IsMember({"percent", "unit"}))
      ->capture_default_str();
  simulate->add_option("--out", sim_out, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    gainlab::AnalysisOptions options;

    if (*analyze) {
      const gainlab::Dataset ds = load(analyze_input, analyze_flags);
      options.z_threshold = analyze_z_threshold;
      options.confidence = analyze_confidence;
      options.t_test = analyze_ttest == "pooled" ? gainlab::TTestKind::pooled
                                                 : gainlab::TTestKind::welch;
      options.z_basis = analyze_flags.z_basis == "combined"
                            ? gainlab::ZBasis::combined
                            : gainlab::ZBasis::per_cohort;
      if (analyze_compare) {
        const auto comma = analyze_compare->find(',');
        if (comma == std::string::npos) {
          throw gainlab::Error("--compare expects LABEL,LABEL");
        }
        options.compare = {analyze_compare->substr(0, comma),
                           analyze_compare->substr(comma + 1)};
      }
      const gainlab::AnalysisReport report = gainlab::run_analysis(ds, options);
      const auto format = analyze_format == "json" ? gainlab::ReportFormat::json
                                                   : gainlab::ReportFormat::text;
      write_output(analyze_out, gainlab::emit_report(report, format));
    } else if (*gains) {
      const gainlab::Dataset ds = load(gains_input, gains_flags);
      options.z_basis = gains_flags.z_basis == "combined"
                            ? gainlab::ZBasis::combined
                            : gainlab::ZBasis::per_cohort;
      const gainlab::AnalysisReport report = gainlab::run_analysis(ds, options);
      if (gains_format == "json") {
        write_output(gains_out,
                     gainlab::detail::json_report(report)["records"].dump(2) +
                         "\n");
      } else {
        write_output(gains_out, gainlab::emit_gain_table(
                                    report, delimiter_char(gains_flags.delimiter)));
      }
    } else if (*plots) {
      const gainlab::Dataset ds = load(plots_input, plots_flags);
      options.bins = plots_bins;
      options.bandwidth = plots_bandwidth;
      options.z_basis = plots_flags.z_basis == "combined"
                            ? gainlab::ZBasis::combined
                            : gainlab::ZBasis::per_cohort;
      const gainlab::AnalysisReport report = gainlab::run_analysis(ds, options);
      gainlab::PlotOptions plot_options;
      plot_options.svg = plots_svg;
      plot_options.delimiter = delimiter_char(plots_flags.delimiter);
      const auto written =
          gainlab::emit_plot_data(report, plots_out, plot_options);
      for (const auto& path : written) {
        std::cerr << "wrote " << path.string() << "\n";
      }
    } else if (*simulate) {
      gainlab::CohortSpec spec;
      spec.n = sim_n;
      spec.seed = sim_seed;
      spec.dependence = sim_rho;
      spec.initial_dist = parse_dist(sim_initial, "--initial");
      spec.gain_dist = parse_dist(sim_gain, "--gain");
      const auto records = gainlab::generate_cohort(spec, sim_cohort);
      const double factor = sim_scale == "percent" ? 100.0 : 1.0;
      std::string out = "student_id,cohort,initial,final\n";
      char buf[80];
      for (const gainlab::ScoreRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.12g,%.12g\n",
                      r.student_id.c_str(), r.cohort.c_str(),
                      r.initial.value() * factor, r.final.value() * factor);
        out += buf;
      }
      write_output(sim_out, out);
    }
  } catch (const gainlab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gainlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
