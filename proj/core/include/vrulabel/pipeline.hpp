#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vrulabel/regions.hpp"
#include "vrulabel/trajectory.hpp"
#include "vrulabel/types.hpp"

namespace vrulabel::pipeline {

struct PipelineParams {
  int smoothing_window = 9;
  trajectory::MotionParams motion;
  double speed_gate_mps = 0.05;
  double edge_tolerance_s = 0.05;
};

struct ClockOffsets {
  double ego_s = 0.0;
  double vru_s = 0.0;
  double radar_s = 0.0;
};

/// Ego reference input. A single fix (or a track the motion estimator deems
/// stationary) needs fixed_yaw_rad for the heading.
struct EgoInput {
  std::vector<GeoFix> fixes;
  std::optional<double> fixed_yaw_rad;
};

struct RunReport {
  long long frames_processed = 0;
  long long frames_skipped = 0;
  long long ambiguous_detections = 0;
  long long detections_total = 0;
};

struct RunResult {
  std::vector<LabeledDetection> labels;
  RunReport report;
};

/// Labels one frame against regions expressed in the vehicle frame at the
/// frame time. Inside several regions: nearest center wins, flagged
/// ambiguous. Inside none: BACKGROUND.
std::vector<LabeledDetection> label_frame(
    const RadarFrame& frame, const EgoPose& ego,
    const std::vector<std::pair<std::string, regions::SelectionRegion>>& gate_list,
    const SensorMount& mount);

/// Full batch run: transform, smooth, spline-fit, then per radar timestamp
/// interpolate VRU position, estimate motion, build the region and label.
RunResult run(const PipelineParams& params, const ClockOffsets& offsets,
              const EgoInput& ego, const std::vector<VruTrack>& vru_tracks,
              const std::vector<RadarFrame>& frames,
              const std::map<std::string, SensorMount>& mounts);

}  // namespace vrulabel::pipeline
