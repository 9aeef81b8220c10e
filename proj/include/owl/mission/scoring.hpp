#pragma once

#include <vector>

#include "owl/artifacts/hypothesis.hpp"
#include "owl/world/world.hpp"

namespace owl::mission {

struct ScoreResult {
  int true_positives = 0;
  int false_positives = 0;
  int ground_truth_count = 0;
  double precision = 1.0;  ///< 1 by convention when there are no reports
  double recall = 0.0;
};

/// A report is a true positive iff its class matches a ground-truth artifact
/// within `tolerance` meters; each ground-truth artifact is claimable once.
ScoreResult score_artifacts(const std::vector<artifacts::ArtifactReport>& reports,
                            const std::vector<world::GroundTruthArtifact>& truth,
                            double tolerance);

}  // namespace owl::mission
