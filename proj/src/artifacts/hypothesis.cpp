#include "owl/artifacts/hypothesis.hpp"

#include <cmath>

namespace owl::artifacts {

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

void update_hypotheses(std::vector<ArtifactHypothesis>& hypotheses,
                       world::ArtifactClass cls, const Vec3& point,
                       const HypothesisConfig& cfg) {
  if (!point.allFinite())
    throw InvariantError("update_hypotheses: detection point is not finite");

  // Nearest unfrozen sphere containing the point; smaller id on ties.
  int target = -1;
  double best = cfg.sphere_radius;
  for (const auto& h : hypotheses) {
    if (h.frozen) continue;
    const double d = (h.center - point).norm();
    if (d < best || (d == best && target < 0)) {
      best = d;
      target = h.id;
    }
  }

  if (target < 0) {
    // Frozen spheres still claim their region: a detection inside one is the
    // already-reported object, not a new hypothesis.
    for (const auto& h : hypotheses) {
      if (h.frozen && (h.center - point).norm() <= cfg.sphere_radius) return;
    }
  }

  if (target < 0) {
    ArtifactHypothesis h;
    h.id = static_cast<int>(hypotheses.size());
    h.center = point;
    h.point_sum = point;
    h.detection_count = 1;
    hypotheses.push_back(h);
    target = h.id;
  } else {
    ArtifactHypothesis& h = hypotheses[target];
    h.point_sum += point;
    h.detection_count += 1;
    h.center = h.point_sum / h.detection_count;
  }

  ArtifactHypothesis& h = hypotheses[target];
  const double up = cfg.log_odds_up();
  const double down = cfg.log_odds_down();
  for (int c = 0; c < world::kNumArtifactClasses; ++c)
    h.class_log_odds[c] += (c == static_cast<int>(cls)) ? up : down;

  for (int c = 0; c < world::kNumArtifactClasses; ++c) {
    if (h.class_log_odds[c] >= logit(cfg.freeze_threshold[c])) {
      h.frozen = true;
      h.frozen_class = static_cast<world::ArtifactClass>(c);
      break;
    }
  }
}

std::vector<ArtifactReport> report_frozen(
    std::vector<ArtifactHypothesis>& hypotheses, double stamp) {
  std::vector<ArtifactReport> reports;
  for (auto& h : hypotheses) {
    if (!h.frozen || h.reported) continue;
    ArtifactReport r;
    r.stamp = stamp;
    r.cls = *h.frozen_class;
    r.location = h.center;
    for (int c = 0; c < world::kNumArtifactClasses; ++c)
      r.class_probabilities[c] =
          h.posterior(static_cast<world::ArtifactClass>(c));
    r.detection_count = h.detection_count;
    reports.push_back(r);
    h.reported = true;
  }
  return reports;
}

}  // namespace owl::artifacts
