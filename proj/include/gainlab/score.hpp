#pragma once

#include <compare>
#include <string>
#include <utility>

#include "gainlab/error.hpp"

namespace gainlab {

/// A test score on the unit scale: a dimensionless fraction of the
/// maximum marks, in [0, 1]. Percent inputs are divided by 100 at
/// construction time via from_percent().
class UnitScore {
 public:
  explicit UnitScore(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw OutOfRange("score " + std::to_string(value) +
                       " outside the unit interval [0, 1]");
    }
  }

  static UnitScore from_percent(double percent) {
    return UnitScore(percent / 100.0);
  }

  double value() const noexcept { return value_; }

  friend auto operator<=>(UnitScore, UnitScore) = default;

 private:
  double value_;
};

/// One student's scores: an opaque identifier, a cohort label, and the
/// initial and final test scores on the unit scale.
struct ScoreRecord {
  ScoreRecord(std::string id, std::string cohort_label, UnitScore initial_score,
              UnitScore final_score)
      : student_id(std::move(id)),
        cohort(std::move(cohort_label)),
        initial(initial_score),
        final(final_score) {
    if (student_id.empty()) throw OutOfRange("student_id must be non-empty");
    if (cohort.empty()) throw OutOfRange("cohort label must be non-empty");
  }

  std::string student_id;
  std::string cohort;
  UnitScore initial;
  UnitScore final;
};

}  // namespace gainlab
