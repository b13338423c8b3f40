#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gainlab/error.hpp"
#include "gainlab/score.hpp"

namespace gainlab {

/// Scale of the score columns in an input file. Percent values are
/// divided by 100 at ingestion so the library always works on [0, 1].
enum class Scale { percent, unit };

inline const char* to_string(Scale s) noexcept {
  return s == Scale::percent ? "percent" : "unit";
}

struct Dataset {
  std::vector<ScoreRecord> records;
  Scale scale = Scale::percent;
  std::string source;
  std::vector<std::string> warnings;  // e.g. ignored columns
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_fields(const std::string& line,
                                             char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    fields.push_back(trim(std::string_view(line).substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

inline double parse_score(const std::string& field, const std::string& column,
                          std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw ParseError("column '" + column + "': invalid number '" + field + "'",
                     line_no);
  }
  return value;
}

}  // namespace detail

/// Parses a delimited score table. The first line must be a header
/// naming the columns student_id, cohort, initial and final (any
/// order); unknown columns are ignored with a warning. Scores are
/// divided by 100 under Scale::percent and must land in [0, 1]. Blank
/// lines are skipped. Quoting is not supported.
inline Dataset ingest_stream(std::istream& in, Scale scale = Scale::percent,
                             char delimiter = ',',
                             std::string source_name = "<stream>") {
  Dataset ds;
  ds.scale = scale;
  ds.source = std::move(source_name);

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("missing header row", 1);
  }
  const std::vector<std::string> header = detail::split_fields(line, delimiter);
  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "student_id" || header[i] == "cohort" ||
        header[i] == "initial" || header[i] == "final") {
      if (!columns.emplace(header[i], i).second) {
        throw ParseError("duplicate column '" + header[i] + "'", 1);
      }
    } else {
      ds.warnings.push_back("ignoring unknown column '" + header[i] + "'");
    }
  }
  for (const char* required : {"student_id", "cohort", "initial", "final"}) {
    if (!columns.count(required)) {
      throw ParseError("missing required column '" + std::string(required) + "'",
                       1);
    }
  }

  std::set<std::pair<std::string, std::string>> seen;  // (cohort, student_id)
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> fields = detail::split_fields(line, delimiter);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    }
    const std::string& id = fields[columns["student_id"]];
    const std::string& cohort = fields[columns["cohort"]];
    if (id.empty()) throw ParseError("empty student_id", line_no);
    if (cohort.empty()) throw ParseError("empty cohort label", line_no);

    double initial = detail::parse_score(fields[columns["initial"]], "initial",
                                         line_no);
    double final = detail::parse_score(fields[columns["final"]], "final",
                                       line_no);
    if (scale == Scale::percent) {
      initial /= 100.0;
      final /= 100.0;
    }
    if (!(initial >= 0.0 && initial <= 1.0)) {
      throw RangeError("initial score " + fields[columns["initial"]] +
                           " outside the valid range",
                       line_no);
    }
    if (!(final >= 0.0 && final <= 1.0)) {
      throw RangeError("final score " + fields[columns["final"]] +
                           " outside the valid range",
                       line_no);
    }
    if (!seen.emplace(cohort, id).second) {
      throw DuplicateId("duplicate student_id '" + id + "' in cohort '" +
                            cohort + "'",
                        line_no);
    }
    ds.records.emplace_back(id, cohort, UnitScore(initial), UnitScore(final));
  }
  return ds;
}

inline Dataset ingest(const std::filesystem::path& path,
                      Scale scale = Scale::percent, char delimiter = ',') {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open input file '" + path.string() + "'");
  }
  return ingest_stream(in, scale, delimiter, path.string());
}

}  // namespace gainlab
