#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gainlab/change.hpp"
#include "gainlab/error.hpp"
#include "gainlab/score.hpp"
#include "gainlab/special.hpp"

namespace gainlab {

/// SplitMix64: a small, fast generator with a 64-bit state and a
/// trivially splittable seeding scheme. Streams derived from distinct
/// (seed, counter) pairs are independent for practical purposes, which
/// keeps record generation deterministic regardless of evaluation
/// order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Stream for the counter-th substream of a seed.
  static SplitMix64 for_counter(std::uint64_t seed, std::uint64_t counter) {
    SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ULL * (counter + 1)));
    return SplitMix64(mixer.next());
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in the open interval (0, 1).
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

struct UniformDist {
  double lo = 0.0;
  double hi = 1.0;
};

struct NormalDist {
  double mean = 0.0;
  double sd = 1.0;
};

using MarginalDist = std::variant<UniformDist, NormalDist>;

/// Recipe for one synthetic cohort. Initial scores and gains are drawn
/// from the two marginals, linked by a Gaussian copula with correlation
/// `dependence`; finals are derived via final_from_gain, so each
/// record's computed gain equals its sampled gain. Draws that violate
/// the truncation constraints (initial in [0,1), gain <= 1, final in
/// [0,1]) are rejected and resampled, up to 10^6 attempts per record.
struct CohortSpec {
  std::size_t n = 0;
  MarginalDist initial_dist = UniformDist{0.2, 0.95};
  MarginalDist gain_dist = NormalDist{0.5, 0.2};
  double dependence = 0.0;  // copula correlation in [-1, 1]
  std::uint64_t seed = 1;
};

namespace detail {

inline void validate_marginal(const MarginalDist& dist, const char* name) {
  if (const auto* u = std::get_if<UniformDist>(&dist)) {
    if (!(u->lo <= u->hi)) {
      throw SpecError(std::string(name) + ": uniform bounds are inverted");
    }
  } else {
    const auto& nd = std::get<NormalDist>(dist);
    if (!(nd.sd >= 0.0)) {
      throw SpecError(std::string(name) + ": normal sd must be non-negative");
    }
  }
}

// Marginal inverse CDF. For normal marginals the underlying standard
// normal draw z is used directly (mean + sd * z).
inline double marginal_value(const MarginalDist& dist, double u, double z) {
  if (const auto* ud = std::get_if<UniformDist>(&dist)) {
    return ud->lo + (ud->hi - ud->lo) * u;
  }
  const auto& nd = std::get<NormalDist>(dist);
  return nd.mean + nd.sd * z;
}

}  // namespace detail

/// Generates a synthetic cohort. Deterministic for a given spec: each
/// record draws from its own counter-derived stream, so the first k
/// records are identical for any n >= k with the same seed.
inline std::vector<ScoreRecord> generate_cohort(const CohortSpec& spec,
                                                std::string_view cohort_label = "A",
                                                std::string_view id_prefix = "s") {
  detail::validate_marginal(spec.initial_dist, "initial_dist");
  detail::validate_marginal(spec.gain_dist, "gain_dist");
  if (!(spec.dependence >= -1.0 && spec.dependence <= 1.0)) {
    throw SpecError("dependence must lie in [-1, 1]");
  }
  if (cohort_label.empty()) throw SpecError("cohort label must be non-empty");

  constexpr std::size_t max_attempts = 1'000'000;
  const double rho = spec.dependence;
  const double rho_comp = std::sqrt(1.0 - rho * rho);

  std::size_t id_width = 1;
  for (std::size_t v = spec.n; v >= 10; v /= 10) ++id_width;

  std::vector<ScoreRecord> out;
  out.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    SplitMix64 rng = SplitMix64::for_counter(spec.seed, i);
    double initial = 0.0;
    double gain = 0.0;
    double final = 0.0;
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
      const double z1 = special::normal_quantile(rng.next_unit());
      const double z2 = special::normal_quantile(rng.next_unit());
      const double w = rho * z1 + rho_comp * z2;
      initial = detail::marginal_value(spec.initial_dist,
                                       special::normal_cdf(z1), z1);
      gain = detail::marginal_value(spec.gain_dist, special::normal_cdf(w), w);
      if (!(initial >= 0.0 && initial < 1.0)) continue;
      if (!(gain <= 1.0)) continue;
      final = gain + initial * (1.0 - gain);
      if (!(final >= 0.0 && final <= 1.0)) continue;
      accepted = true;
      break;
    }
    if (!accepted) {
      throw SpecError("record " + std::to_string(i) +
                      ": no draw satisfied the truncation constraints within " +
                      std::to_string(max_attempts) + " attempts");
    }

    std::string id(id_prefix);
    const std::string digits = std::to_string(i + 1);
    id.append(id_width > digits.size() ? id_width - digits.size() : 0, '0');
    id += digits;
    out.emplace_back(std::move(id), std::string(cohort_label),
                     UnitScore(initial), UnitScore(final));
  }
  return out;
}

}  // namespace gainlab
