#include "owl/mission/scoring.hpp"

namespace owl::mission {

ScoreResult score_artifacts(const std::vector<artifacts::ArtifactReport>& reports,
                            const std::vector<world::GroundTruthArtifact>& truth,
                            double tolerance) {
  if (tolerance <= 0.0) throw ConfigError("score: tolerance must be > 0");
  ScoreResult result;
  result.ground_truth_count = static_cast<int>(truth.size());
  std::vector<uint8_t> claimed(truth.size(), 0);

  for (const auto& report : reports) {
    int best = -1;
    double best_dist = tolerance;
    for (size_t i = 0; i < truth.size(); ++i) {
      if (claimed[i] || truth[i].cls != report.cls) continue;
      const double d = (truth[i].center - report.location).norm();
      if (d <= best_dist) {
        best_dist = d;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) {
      claimed[best] = 1;
      ++result.true_positives;
    } else {
      ++result.false_positives;
    }
  }
  const int total = result.true_positives + result.false_positives;
  result.precision =
      total == 0 ? 1.0 : static_cast<double>(result.true_positives) / total;
  result.recall = truth.empty() ? 0.0
                                : static_cast<double>(result.true_positives) /
                                      static_cast<double>(truth.size());
  return result;
}

}  // namespace owl::mission
