#pragma once

#include <map>
#include <vector>

#include "owl/artifacts/hypothesis.hpp"
#include "owl/types.hpp"

namespace owl::artifacts {

/// Accumulates the robot position at every tick a bluetooth device is heard;
/// a device is reported at the mean of those positions (class cellphone).
class BluetoothLog {
 public:
  void record(const std::vector<int>& device_ids, const Pose& robot_pose,
              double stamp) {
    for (const int id : device_ids) {
      auto& e = entries_[id];
      e.position_sum += robot_pose.position;
      e.count += 1;
      e.last_stamp = stamp;
    }
  }

  std::vector<ArtifactReport> finalize() const {
    std::vector<ArtifactReport> reports;
    for (const auto& [id, e] : entries_) {
      ArtifactReport r;
      r.stamp = e.last_stamp;
      r.cls = world::ArtifactClass::Cellphone;
      r.location = e.position_sum / e.count;
      r.class_probabilities[static_cast<size_t>(world::ArtifactClass::Cellphone)] = 1.0;
      r.detection_count = e.count;
      reports.push_back(r);
    }
    return reports;
  }

  bool empty() const { return entries_.empty(); }

 private:
  struct Entry {
    Vec3 position_sum{0.0, 0.0, 0.0};
    int count = 0;
    double last_stamp = 0.0;
  };
  std::map<int, Entry> entries_;  // ordered: deterministic report order
};

}  // namespace owl::artifacts
