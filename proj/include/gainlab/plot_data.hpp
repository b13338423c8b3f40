#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gainlab/analysis.hpp"
#include "gainlab/descriptive.hpp"
#include "gainlab/error.hpp"
#include "gainlab/report.hpp"

namespace gainlab {

namespace detail {

inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// Minimal SVG scatter/line/bar renderer used for the optional
// vector-graphic siblings of the plot-data files.
class SvgCanvas {
 public:
  SvgCanvas(double x_min, double x_max, double y_min, double y_max)
      : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
    if (x_max_ <= x_min_) x_max_ = x_min_ + 1.0;
    if (y_max_ <= y_min_) y_max_ = y_min_ + 1.0;
  }

  void add_polyline(const std::vector<double>& x, const std::vector<double>& y,
                    const char* color) {
    std::string pts;
    for (std::size_t i = 0; i < x.size(); ++i) {
      pts += fmt9(px(x[i])) + "," + fmt9(py(y[i])) + " ";
    }
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  }

  void add_points(const std::vector<double>& x, const std::vector<double>& y,
                  const char* color) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      body_ += "<circle cx=\"" + fmt9(px(x[i])) + "\" cy=\"" + fmt9(py(y[i])) +
               "\" r=\"2.5\" fill=\"" + color + "\" fill-opacity=\"0.7\"/>\n";
    }
  }

  void add_bar(double x_left, double x_right, double height, const char* color) {
    const double top = py(height);
    const double bottom = py(0.0);
    body_ += "<rect x=\"" + fmt9(px(x_left)) + "\" y=\"" + fmt9(top) +
             "\" width=\"" + fmt9(px(x_right) - px(x_left)) + "\" height=\"" +
             fmt9(bottom - top) + "\" fill=\"" + color +
             "\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }

  std::string finish(const std::string& title) const {
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width_) + "\" height=\"" + std::to_string(height_) +
           "\" viewBox=\"0 0 " + std::to_string(width_) + " " +
           std::to_string(height_) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt9(width_ / 2.0) +
           "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">" + title + "</text>\n";
    // Axis frame and corner labels.
    svg += "<rect x=\"" + fmt9(margin_) + "\" y=\"" + fmt9(top_) + "\" width=\"" +
           fmt9(width_ - margin_ - pad_) + "\" height=\"" +
           fmt9(height_ - top_ - bottom_) +
           "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    auto label = [](double x, double y, const std::string& text,
                    const char* anchor) {
      return "<text x=\"" + fmt9(x) + "\" y=\"" + fmt9(y) +
             "\" text-anchor=\"" + anchor +
             "\" font-family=\"sans-serif\" font-size=\"10\">" + text +
             "</text>\n";
    };
    svg += label(margin_, height_ - 8.0, fmt6(x_min_), "start");
    svg += label(width_ - pad_, height_ - 8.0, fmt6(x_max_), "end");
    svg += label(margin_ - 4.0, height_ - bottom_, fmt6(y_min_), "end");
    svg += label(margin_ - 4.0, top_ + 10.0, fmt6(y_max_), "end");
    svg += body_;
    svg += "</svg>\n";
    return svg;
  }

 private:
  double px(double x) const {
    return margin_ + (x - x_min_) / (x_max_ - x_min_) * (width_ - margin_ - pad_);
  }
  double py(double y) const {
    return height_ - bottom_ -
           (y - y_min_) / (y_max_ - y_min_) * (height_ - top_ - bottom_);
  }

  static constexpr double width_ = 640.0;
  static constexpr double height_ = 480.0;
  static constexpr double margin_ = 56.0;
  static constexpr double pad_ = 16.0;
  static constexpr double top_ = 32.0;
  static constexpr double bottom_ = 28.0;

  double x_min_, x_max_, y_min_, y_max_;
  std::string body_;
};

}  // namespace detail

struct PlotOptions {
  bool svg = false;       // also write an .svg rendering per file
  char delimiter = ',';
};

/// Writes the plot-data files for a report into out_dir:
/// gain_histogram, gain_kde, gain_qq (combined cohorts),
/// cohort_kde_overlay (one block per cohort), and the two scatter
/// files with their fitted curves. Each file starts with one '#'
/// comment line naming its columns (and r^2 for the scatter fits).
/// Returns the paths written.
inline std::vector<std::filesystem::path> emit_plot_data(
    const AnalysisReport& report, const std::filesystem::path& out_dir,
    const PlotOptions& plot_options = {}) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir.string() + "'");

  const char d = plot_options.delimiter;
  std::vector<fs::path> written;
  auto emit = [&](const char* name, const std::string& content) {
    const fs::path path = out_dir / name;
    detail::write_file(path, content);
    written.push_back(path);
  };
  auto emit_svg = [&](const char* name, const std::string& content) {
    if (!plot_options.svg) return;
    const fs::path path = out_dir / name;
    detail::write_file(path, content);
    written.push_back(path);
  };

  std::vector<double> gains;
  for (const CohortAnalysis& c : report.cohorts) {
    for (const GainRecord& g : c.records) gains.push_back(g.gain.value());
  }
  if (gains.empty()) throw EmptySample("no analyzable records to plot");

  // Gain histogram (density-normalized column included).
  {
    const Histogram h = report.options.bins
                            ? histogram(gains, *report.options.bins)
                            : histogram(gains);
    std::string out = "# gain_histogram n=" + std::to_string(gains.size()) +
                      " bins=" + std::to_string(h.counts.size()) +
                      " columns=bin_left,bin_right,count,density\n";
    double max_density = 0.0;
    std::vector<double> mids, densities;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      const double width = h.bin_edges[i + 1] - h.bin_edges[i];
      const double density = static_cast<double>(h.counts[i]) /
                             (static_cast<double>(gains.size()) * width);
      out += detail::fmt9(h.bin_edges[i]) + std::string(1, d) +
             detail::fmt9(h.bin_edges[i + 1]) + std::string(1, d) +
             std::to_string(h.counts[i]) + std::string(1, d) +
             detail::fmt9(density) + "\n";
      mids.push_back(0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]));
      densities.push_back(density);
      max_density = std::max(max_density, density);
    }
    emit("gain_histogram.csv", out);
    if (plot_options.svg) {
      detail::SvgCanvas canvas(h.bin_edges.front(), h.bin_edges.back(), 0.0,
                               max_density * 1.05);
      for (std::size_t i = 0; i < h.counts.size(); ++i) {
        canvas.add_bar(h.bin_edges[i], h.bin_edges[i + 1], densities[i],
                       "steelblue");
      }
      emit_svg("gain_histogram.svg", canvas.finish("gain histogram (density)"));
    }
  }

  // Smoothed gain density, combined cohorts.
  {
    const DensityCurve curve = kde(gains, report.options.bandwidth);
    std::string out = "# gain_kde n=" + std::to_string(gains.size()) +
                      " bandwidth=" + detail::fmt9(curve.bandwidth) +
                      " columns=x,density\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      out += detail::fmt9(curve.grid[i]) + std::string(1, d) +
             detail::fmt9(curve.density[i]) + "\n";
    }
    emit("gain_kde.csv", out);
    if (plot_options.svg) {
      const double peak =
          *std::max_element(curve.density.begin(), curve.density.end());
      detail::SvgCanvas canvas(curve.grid.front(), curve.grid.back(), 0.0,
                               peak * 1.05);
      canvas.add_polyline(curve.grid, curve.density, "steelblue");
      emit_svg("gain_kde.svg", canvas.finish("gain density (Gaussian kde)"));
    }
  }

  // Normal quantile plot of the gains.
  {
    const QQData q = qq_normal(gains);
    std::string out = "# gain_qq n=" + std::to_string(gains.size()) +
                      " columns=theoretical,sample\n";
    for (std::size_t i = 0; i < q.sample_quantiles.size(); ++i) {
      out += detail::fmt9(q.theoretical_quantiles[i]) + std::string(1, d) +
             detail::fmt9(q.sample_quantiles[i]) + "\n";
    }
    emit("gain_qq.csv", out);
    if (plot_options.svg) {
      detail::SvgCanvas canvas(q.theoretical_quantiles.front(),
                               q.theoretical_quantiles.back(),
                               q.sample_quantiles.front(),
                               q.sample_quantiles.back());
      canvas.add_points(q.theoretical_quantiles, q.sample_quantiles,
                        "steelblue");
      emit_svg("gain_qq.svg", canvas.finish("gain vs normal quantiles"));
    }
  }

  // Per-cohort gain densities, long format.
  {
    std::string out = "# cohort_kde_overlay columns=cohort,x,density\n";
    detail::SvgCanvas canvas(
        *std::min_element(gains.begin(), gains.end()) - 0.2,
        *std::max_element(gains.begin(), gains.end()) + 0.2, 0.0, 1.0);
    double peak = 0.0;
    std::vector<std::pair<std::string, DensityCurve>> curves;
    for (const CohortAnalysis& c : report.cohorts) {
      if (c.records.size() < 2) continue;
      std::vector<double> cohort_gains;
      for (const GainRecord& g : c.records) cohort_gains.push_back(g.gain.value());
      DensityCurve curve = kde(cohort_gains, report.options.bandwidth);
      for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        out += c.label + std::string(1, d) + detail::fmt9(curve.grid[i]) +
               std::string(1, d) + detail::fmt9(curve.density[i]) + "\n";
      }
      peak = std::max(
          peak, *std::max_element(curve.density.begin(), curve.density.end()));
      curves.emplace_back(c.label, std::move(curve));
    }
    emit("cohort_kde_overlay.csv", out);
    if (plot_options.svg && !curves.empty()) {
      detail::SvgCanvas overlay(curves.front().second.grid.front(),
                                curves.front().second.grid.back(), 0.0,
                                peak * 1.05);
      static const char* colors[] = {"steelblue", "darkorange", "seagreen",
                                     "crimson", "slategray"};
      for (std::size_t i = 0; i < curves.size(); ++i) {
        overlay.add_polyline(curves[i].second.grid, curves[i].second.density,
                             colors[i % 5]);
      }
      emit_svg("cohort_kde_overlay.svg",
               overlay.finish("per-cohort gain densities"));
    }
  }

  // Scatter files: rows sorted by the x variable for stable output.
  auto scatter = [&](const char* name, const char* x_name, const char* y_name,
                     std::vector<std::pair<double, double>> points,
                     const std::optional<RegressionFit>& fit,
                     const std::string& title) {
    std::sort(points.begin(), points.end());
    std::string header = "# " + std::string(name) + " n=" +
                         std::to_string(points.size());
    if (fit) {
      header += " fit_degree=" + std::to_string(fit->degree) +
                " r2=" + detail::fmt6(fit->r_squared);
    }
    header += " columns=" + std::string(x_name) + "," + y_name;
    if (fit) header += ",fit";
    header += "\n";
    std::string out = header;
    std::vector<double> xs, ys, fits;
    for (const auto& [x, y] : points) {
      out += detail::fmt9(x) + std::string(1, d) + detail::fmt9(y);
      xs.push_back(x);
      ys.push_back(y);
      if (fit) {
        const double f = evaluate_fit(*fit, x);
        out += std::string(1, d) + detail::fmt9(f);
        fits.push_back(f);
      }
      out += "\n";
    }
    emit((std::string(name) + ".csv").c_str(), out);
    if (plot_options.svg && !xs.empty()) {
      double y_lo = *std::min_element(ys.begin(), ys.end());
      double y_hi = *std::max_element(ys.begin(), ys.end());
      for (double f : fits) {
        y_lo = std::min(y_lo, f);
        y_hi = std::max(y_hi, f);
      }
      detail::SvgCanvas canvas(xs.front(), xs.back(), y_lo, y_hi);
      canvas.add_points(xs, ys, "steelblue");
      if (fit) canvas.add_polyline(xs, fits, "crimson");
      emit_svg((std::string(name) + ".svg").c_str(), canvas.finish(title));
    }
  };

  {
    std::vector<std::pair<double, double>> pts;
    for (const CohortAnalysis& c : report.cohorts) {
      for (const GainRecord& g : c.records) {
        pts.emplace_back(g.record.initial.value(), g.gain.value());
      }
    }
    std::string title = "gain vs initial score";
    if (report.fit_gain_on_initial) {
      title += " (r2=" + detail::fmt6(report.fit_gain_on_initial->r_squared) + ")";
    }
    scatter("gain_vs_initial_scatter", "initial", "gain", std::move(pts),
            report.fit_gain_on_initial, title);
  }
  {
    std::vector<std::pair<double, double>> pts;
    for (const CohortAnalysis& c : report.cohorts) {
      for (const GainRecord& g : c.records) {
        if (g.increase) {
          pts.emplace_back(g.record.initial.value(), g.increase->value());
        }
      }
    }
    std::string title = "fractional increase vs initial score";
    if (report.fit_increase_on_initial) {
      title +=
          " (r2=" + detail::fmt6(report.fit_increase_on_initial->r_squared) + ")";
    }
    scatter("increase_vs_initial_scatter", "initial", "increase",
            std::move(pts), report.fit_increase_on_initial, title);
  }

  return written;
}

}  // namespace gainlab
