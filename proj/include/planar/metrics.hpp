// Copyright 2026 The planar-geometry Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "planar/benchmark.hpp"
#include "planar/geometry.hpp"
#include "planar/plane.hpp"
#include "planar/segmentation.hpp"

namespace planar {

struct DetectionResult {
  Plane plane;
  InstanceMask mask;
  double confidence = 1.0;
};

inline constexpr double kDefaultIouThreshold = 0.5;
// Depth errors pass a threshold τ when error <= τ + kThresholdSlack.
inline constexpr double kThresholdSlack = 1e-9;

struct PlaneMatching {
  std::vector<std::optional<std::size_t>> pred_to_gt;
  std::vector<std::optional<std::size_t>> gt_to_pred;
  std::vector<double> iou;  // per prediction, IOU with its match (0 if none)
};

double mask_iou(const InstanceMask& a, const InstanceMask& b);

/// Greedy one-to-one matching in descending IOU order over pairs with
/// IOU >= iou_min. Ties resolve toward the lower (pred, gt) index pair.
PlaneMatching match_planes(const std::vector<DetectionResult>& preds,
                           const FrameAnnotation& gts,
                           double iou_min = kDefaultIouThreshold);

/// Mean |pred plane depth − gt plane depth| over the pixels both masks share
/// where both depths exist; +inf when there are none.
double plane_depth_error(const DetectionResult& pred, std::size_t gt_index,
                         const FrameAnnotation& gts);

struct RecallCurve {
  std::vector<double> thresholds;  // 0.00, 0.05, ..., 1.00 m
  std::vector<double> recall;
};

std::vector<double> recall_thresholds();

/// Per ground-truth plane: depth error of its match, +inf when unmatched.
std::vector<double> plane_recall_errors(const std::vector<DetectionResult>& preds,
                                        const FrameAnnotation& gts,
                                        double iou_min = kDefaultIouThreshold);

RecallCurve recall_curve_from_errors(const std::vector<double>& errors);

RecallCurve recall_curve(const std::vector<DetectionResult>& preds,
                         const FrameAnnotation& gts);

/// Detections of one frame ranked by confidence, each flagged TP or FP.
struct RankedDetections {
  std::vector<double> confidence;
  std::vector<bool> true_positive;
  std::size_t gt_count = 0;
};

RankedDetections rank_detections(const std::vector<DetectionResult>& preds,
                                 const FrameAnnotation& gts, double iou_min,
                                 double depth_max);

/// All-point interpolated AP over one or more frames' ranked detections.
double average_precision_pooled(const std::vector<RankedDetections>& frames);

double average_precision(const std::vector<DetectionResult>& preds,
                         const FrameAnnotation& gts,
                         double iou_min = kDefaultIouThreshold,
                         double depth_max = 0.4);

struct ClusteringScores {
  double voi = 0.0;
  double ri = 1.0;
  double sc = 1.0;
};

/// VOI (natural log), Rand index and segmentation covering of `pred` against
/// `gt`. kNonPlanar is an ordinary segment.
ClusteringScores clustering_metrics(const SegmentationMap& pred,
                                    const SegmentationMap& gt);

struct DepthScores {
  double rel = 0.0;
  double log10 = 0.0;
  double rmse = 0.0;
  std::size_t pixels = 0;
};

DepthScores depth_metrics(const DepthMap& pred, const DepthMap& gt);

struct ParameterAccuracy {
  double mean = 0.0;
  double area_weighted_mean = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  // Raw sums so frames can be pooled.
  double sum = 0.0;
  double weighted_sum = 0.0;
  double total_area = 0.0;
};

/// Fits a plane to the predicted depth inside every ground-truth segment and
/// compares it with the ground-truth plane. Segments with fewer than three
/// valid pixels (or collinear support) are skipped and counted.
ParameterAccuracy parameter_accuracy(const DepthMap& pred_depth,
                                     const FrameAnnotation& gts,
                                     ParamForm form = ParamForm::kNormalOffset);

struct EvalReport {
  RecallCurve recall_curve;
  double ap_04 = 0.0;
  double ap_06 = 0.0;
  double ap_09 = 0.0;
  double voi = 0.0;
  double ri = 0.0;
  double sc = 0.0;
  double rel = 0.0;
  double log10 = 0.0;
  double rmse = 0.0;
  double param_mean = 0.0;
  double param_weighted = 0.0;
};

/// What a reconstruction provides for one frame.
struct FramePrediction {
  std::vector<DetectionResult> detections;
  DepthMap depth;  // per-pixel depth used outside detected planes
  std::optional<SegmentationMap> segmentation;
};

/// Ordered fold of per-frame measurements into one EvalReport.
class EvalAccumulator {
 public:
  explicit EvalAccumulator(ParamForm form = ParamForm::kNormalOffset) : form_(form) {}

  void add(const FramePrediction& pred, const FrameAnnotation& gt);
  EvalReport report() const;
  std::size_t frames() const { return frames_; }

 private:
  ParamForm form_;
  std::size_t frames_ = 0;
  std::vector<double> recall_errors_;
  std::vector<RankedDetections> ranked_04_, ranked_06_, ranked_09_;
  ClusteringScores cluster_sum_{0.0, 0.0, 0.0};
  DepthScores depth_sum_{};
  ParameterAccuracy params_{};
};

}  // namespace planar
