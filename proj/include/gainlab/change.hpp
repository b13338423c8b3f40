#pragma once

#include <cmath>
#include <string>

#include "gainlab/error.hpp"
#include "gainlab/score.hpp"

namespace gainlab {

/// The relative-change functions supported on (initial, final) score pairs.
enum class ChangeKind { gain, fractional_increase, log_difference };

inline const char* to_string(ChangeKind kind) noexcept {
  switch (kind) {
    case ChangeKind::gain: return "gain";
    case ChangeKind::fractional_increase: return "fractional_increase";
    case ChangeKind::log_difference: return "log_difference";
  }
  return "?";
}

/// The result of a relative-change function, tagged with which function
/// produced it. Gain values never exceed 1; the other kinds are
/// unrestricted reals.
class ChangeValue {
 public:
  ChangeValue(double value, ChangeKind kind) : value_(value), kind_(kind) {
    if (kind == ChangeKind::gain && !(value <= 1.0)) {
      throw OutOfRange("gain value " + std::to_string(value) + " exceeds 1");
    }
  }

  double value() const noexcept { return value_; }
  ChangeKind kind() const noexcept { return kind_; }

 private:
  double value_;
  ChangeKind kind_;
};

/// Individual gain g(x, y) = (y - x) / (1 - x): the fraction of the
/// headroom between the initial score and a perfect score that the
/// student actually achieved. Equals 1 exactly when the final score is
/// 1, is negative when the final score dropped, and is undefined when
/// the initial score is 1 (no headroom left).
inline ChangeValue individual_gain(UnitScore initial, UnitScore final) {
  const double x = initial.value();
  if (x >= 1.0) {
    throw GainUndefined("gain undefined for initial score 1 (no headroom)");
  }
  return ChangeValue((final.value() - x) / (1.0 - x), ChangeKind::gain);
}

/// Fractional increase (y - x) / x: proportional change relative to the
/// initial score. Undefined when the initial score is 0.
inline ChangeValue fractional_increase(UnitScore initial, UnitScore final) {
  const double x = initial.value();
  if (x <= 0.0) {
    throw IncreaseUndefined("fractional increase undefined for initial score 0");
  }
  return ChangeValue((final.value() - x) / x, ChangeKind::fractional_increase);
}

/// Logarithmic difference log(y / x), the unique additive relative-change
/// function: L(x, z) = L(x, y) + L(y, z). Undefined when either score is 0.
inline ChangeValue log_difference(UnitScore initial, UnitScore final) {
  if (initial.value() <= 0.0 || final.value() <= 0.0) {
    throw LogUndefined("log difference undefined when a score is 0");
  }
  return ChangeValue(std::log(final.value() / initial.value()),
                     ChangeKind::log_difference);
}

/// Evaluates the named change function on a score pair.
inline ChangeValue relative_change(ChangeKind kind, UnitScore initial,
                                   UnitScore final) {
  switch (kind) {
    case ChangeKind::gain: return individual_gain(initial, final);
    case ChangeKind::fractional_increase: return fractional_increase(initial, final);
    case ChangeKind::log_difference: return log_difference(initial, final);
  }
  throw OutOfRange("unknown change kind");
}

/// Converts a fractional increase into the gain for the same score pair:
/// gain = increase * x / (1 - x). Requires 0 < x < 1.
inline ChangeValue gain_from_increase(ChangeValue increase, UnitScore initial) {
  if (increase.kind() != ChangeKind::fractional_increase) {
    throw KindMismatch(std::string("expected a fractional_increase value, got ") +
                       to_string(increase.kind()));
  }
  const double x = initial.value();
  if (x <= 0.0) {
    throw IncreaseUndefined("fractional increase undefined for initial score 0");
  }
  if (x >= 1.0) {
    throw GainUndefined("gain undefined for initial score 1");
  }
  return ChangeValue(increase.value() * x / (1.0 - x), ChangeKind::gain);
}

/// Recovers the final score from an initial score and a gain:
/// final = gain + x * (1 - gain). Exact inverse of individual_gain in
/// its second argument. Throws OutOfRange when the reconstructed final
/// falls outside [0, 1] (possible for strongly negative gains).
inline UnitScore final_from_gain(UnitScore initial, ChangeValue gain) {
  if (gain.kind() != ChangeKind::gain) {
    throw KindMismatch(std::string("expected a gain value, got ") +
                       to_string(gain.kind()));
  }
  const double x = initial.value();
  if (x >= 1.0) {
    throw GainUndefined("gain undefined for initial score 1");
  }
  const double g = gain.value();
  const double final = g + x * (1.0 - g);
  if (!(final >= 0.0 && final <= 1.0)) {
    throw OutOfRange("reconstructed final score " + std::to_string(final) +
                     " outside [0, 1]");
  }
  return UnitScore(final);
}

/// Hake's mean gain: the gain formula applied to cohort mean scores,
/// (mean final - mean initial) / (1 - mean initial).
inline ChangeValue hake_mean_gain(UnitScore mean_initial, UnitScore mean_final) {
  return individual_gain(mean_initial, mean_final);
}

/// The composition law the gain function preserves. Gains compose along
/// a path of tests via a + b - a*b: if a = g(x, y) and b = g(y, z) then
/// compose_gains(a, b) = g(x, z). The operation is commutative and
/// associative, 0 is its identity and 1 is absorbing.
inline ChangeValue compose_gains(ChangeValue a, ChangeValue b) {
  if (a.kind() != ChangeKind::gain || b.kind() != ChangeKind::gain) {
    throw KindMismatch("compose_gains needs two gain values");
  }
  return ChangeValue(a.value() + b.value() - a.value() * b.value(),
                     ChangeKind::gain);
}

/// True iff the named change function returns equal values (within
/// 1e-12) at (x, y) and (lambda*x, lambda*y). Holds for
/// fractional_increase and log_difference, which are functions of y/x
/// alone; fails for gain, whose normalization ties it to the unit scale.
inline bool scale_invariance_check(ChangeKind kind, UnitScore x, UnitScore y,
                                   double lambda) {
  if (!(lambda > 0.0)) throw OutOfRange("lambda must be positive");
  const ChangeValue base = relative_change(kind, x, y);
  const ChangeValue scaled = relative_change(
      kind, UnitScore(lambda * x.value()), UnitScore(lambda * y.value()));
  return std::fabs(base.value() - scaled.value()) <= 1e-12;
}

}  // namespace gainlab
