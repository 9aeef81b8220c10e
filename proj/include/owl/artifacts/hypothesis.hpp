#pragma once

#include <array>
#include <optional>
#include <vector>

#include "owl/types.hpp"
#include "owl/world/world.hpp"

namespace owl::artifacts {

struct HypothesisConfig {
  double sphere_radius = 1.0;  ///< R_a, m
  double p_true_pos = 0.9;
  double p_false_pos = 0.2;
  /// Posterior freeze threshold per class (probability).
  std::array<double, world::kNumArtifactClasses> freeze_threshold{
      0.95, 0.95, 0.95, 0.95, 0.95, 0.95, 0.95, 0.95};

  void validate() const {
    if (sphere_radius <= 0.0) throw ConfigError("artifacts: R_a must be > 0");
    if (p_true_pos <= 0.0 || p_true_pos >= 1.0 || p_false_pos <= 0.0 ||
        p_false_pos >= 1.0 || p_true_pos <= p_false_pos)
      throw ConfigError("artifacts: need 0 < p_false_pos < p_true_pos < 1");
    for (const double t : freeze_threshold)
      if (t <= 0.5 || t >= 1.0)
        throw ConfigError("artifacts: freeze thresholds must be in (0.5, 1)");
  }

  double log_odds_up() const { return std::log(p_true_pos / p_false_pos); }
  double log_odds_down() const {
    return std::log((1.0 - p_true_pos) / (1.0 - p_false_pos));
  }
};

/// Multi-view consensus sphere: a_j is the running mean of absorbed
/// detection points; one binary Bayes filter per class. Once any class
/// posterior crosses its freeze threshold the hypothesis is immutable.
struct ArtifactHypothesis {
  int id = 0;
  Vec3 center{0.0, 0.0, 0.0};  ///< a_j, mean of absorbed points
  Vec3 point_sum{0.0, 0.0, 0.0};
  int detection_count = 0;
  std::array<double, world::kNumArtifactClasses> class_log_odds{};
  bool frozen = false;
  std::optional<world::ArtifactClass> frozen_class;
  bool reported = false;

  double posterior(world::ArtifactClass c) const {
    const double l = class_log_odds[static_cast<size_t>(c)];
    return 1.0 / (1.0 + std::exp(-l));
  }
};

struct ArtifactReport {
  double stamp = 0.0;
  world::ArtifactClass cls = world::ArtifactClass::Survivor;
  Vec3 location{0.0, 0.0, 0.0};
  std::array<double, world::kNumArtifactClasses> class_probabilities{};
  int detection_count = 0;
};

/// Absorbs a localized detection into the nearest unfrozen sphere within R_a
/// (spawning a new hypothesis otherwise): a_j becomes the mean of absorbed
/// points, the detected class's filter moves up by log(p_tp/p_fp) and every
/// other class's moves down by log((1-p_tp)/(1-p_fp)). Crossing a freeze
/// threshold freezes the hypothesis.
void update_hypotheses(std::vector<ArtifactHypothesis>& hypotheses,
                       world::ArtifactClass cls, const Vec3& point,
                       const HypothesisConfig& cfg);

/// One report per frozen, not-yet-reported hypothesis (idempotent).
std::vector<ArtifactReport> report_frozen(
    std::vector<ArtifactHypothesis>& hypotheses, double stamp = 0.0);

}  // namespace owl::artifacts
