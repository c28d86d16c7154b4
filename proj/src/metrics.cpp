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

#include "planar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "planar/view_consistency.hpp"

namespace planar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_frame(const InstanceMask& m, const FrameAnnotation& gts) {
  if (!m.membership.same_shape(gts.K.width(), gts.K.height())) {
    throw Error(ErrorKind::kShape, "prediction mask does not match frame size");
  }
}

}  // namespace

double mask_iou(const InstanceMask& a, const InstanceMask& b) {
  if (!a.membership.same_shape(b.membership)) {
    throw Error(ErrorKind::kShape, "masks differ in size");
  }
  std::size_t inter = 0, uni = 0;
  for (std::size_t p = 0; p < a.membership.size(); ++p) {
    const bool ia = a.contains(p), ib = b.contains(p);
    inter += (ia && ib) ? 1 : 0;
    uni += (ia || ib) ? 1 : 0;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

PlaneMatching match_planes(const std::vector<DetectionResult>& preds,
                           const FrameAnnotation& gts, double iou_min) {
  const auto& gt_masks = gts.visible_masks;
  PlaneMatching m;
  m.pred_to_gt.assign(preds.size(), std::nullopt);
  m.gt_to_pred.assign(gt_masks.size(), std::nullopt);
  m.iou.assign(preds.size(), 0.0);

  struct Pair {
    double iou;
    std::size_t pred, gt;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    require_frame(preds[i].mask, gts);
    for (std::size_t j = 0; j < gt_masks.size(); ++j) {
      const double iou = mask_iou(preds[i].mask, gt_masks[j]);
      if (iou >= iou_min && iou > 0.0) pairs.push_back({iou, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    return std::tie(a.pred, a.gt) < std::tie(b.pred, b.gt);
  });
  for (const auto& p : pairs) {
    if (m.pred_to_gt[p.pred] || m.gt_to_pred[p.gt]) continue;
    m.pred_to_gt[p.pred] = p.gt;
    m.gt_to_pred[p.gt] = p.pred;
    m.iou[p.pred] = p.iou;
  }
  return m;
}

double plane_depth_error(const DetectionResult& pred, std::size_t gt_index,
                         const FrameAnnotation& gts) {
  const auto& K = gts.K;
  const auto& gt_mask = gts.visible_masks.at(gt_index);
  const Plane& gt_plane = gts.planes.at(gt_index);
  double sum = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      if (!pred.mask.contains(x, y) || !gt_mask.contains(x, y)) continue;
      const PixelCoord px{double(x), double(y)};
      const auto zp = plane_depth(pred.plane, px, K);
      const auto zg = plane_depth(gt_plane, px, K);
      if (!zp || !zg) continue;
      sum += std::abs(*zp - *zg);
      ++n;
    }
  }
  return n == 0 ? kInf : sum / static_cast<double>(n);
}

std::vector<double> recall_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 20; ++i) t.push_back(i / 20.0);
  return t;
}

std::vector<double> plane_recall_errors(const std::vector<DetectionResult>& preds,
                                        const FrameAnnotation& gts, double iou_min) {
  const PlaneMatching m = match_planes(preds, gts, iou_min);
  std::vector<double> errors(gts.visible_masks.size(), kInf);
  for (std::size_t j = 0; j < errors.size(); ++j) {
    if (m.gt_to_pred[j]) errors[j] = plane_depth_error(preds[*m.gt_to_pred[j]], j, gts);
  }
  return errors;
}

RecallCurve recall_curve_from_errors(const std::vector<double>& errors) {
  if (errors.empty()) {
    throw Error(ErrorKind::kUndefinedRecall, "recall is undefined without ground-truth planes");
  }
  RecallCurve curve;
  curve.thresholds = recall_thresholds();
  for (double tau : curve.thresholds) {
    std::size_t hit = 0;
    for (double e : errors) hit += e <= tau + kThresholdSlack ? 1 : 0;
    curve.recall.push_back(static_cast<double>(hit) / static_cast<double>(errors.size()));
  }
  return curve;
}

RecallCurve recall_curve(const std::vector<DetectionResult>& preds,
                         const FrameAnnotation& gts) {
  return recall_curve_from_errors(plane_recall_errors(preds, gts));
}

RankedDetections rank_detections(const std::vector<DetectionResult>& preds,
                                 const FrameAnnotation& gts, double iou_min,
                                 double depth_max) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].confidence > preds[b].confidence;
  });

  RankedDetections out;
  out.gt_count = gts.visible_masks.size();
  std::vector<bool> claimed(out.gt_count, false);
  for (std::size_t i : order) {
    require_frame(preds[i].mask, gts);
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t j = 0; j < out.gt_count; ++j) {
      if (claimed[j]) continue;
      const double iou = mask_iou(preds[i].mask, gts.visible_masks[j]);
      if (iou >= iou_min && iou > 0.0 && iou > best_iou) {
        best_iou = iou;
        best = j;
      }
    }
    bool tp = false;
    if (best && plane_depth_error(preds[i], *best, gts) <= depth_max + kThresholdSlack) {
      claimed[*best] = true;
      tp = true;
    }
    out.confidence.push_back(preds[i].confidence);
    out.true_positive.push_back(tp);
  }
  return out;
}

double average_precision_pooled(const std::vector<RankedDetections>& frames) {
  struct Entry {
    double confidence;
    bool tp;
  };
  std::vector<Entry> all;
  std::size_t gt_total = 0;
  for (const auto& f : frames) {
    gt_total += f.gt_count;
    for (std::size_t i = 0; i < f.confidence.size(); ++i) {
      all.push_back({f.confidence[i], f.true_positive[i]});
    }
  }
  if (gt_total == 0) {
    warn("average precision requested without ground-truth planes; reporting 0");
    return 0.0;
  }
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    return a.confidence > b.confidence;
  });

  // Precision/recall after each detection, framed by (0, 0) and (1, 0).
  std::vector<double> rec{0.0}, prec{0.0};
  std::size_t tp = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    tp += all[i].tp ? 1 : 0;
    rec.push_back(static_cast<double>(tp) / static_cast<double>(gt_total));
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  rec.push_back(1.0);
  prec.push_back(0.0);
  for (std::size_t i = prec.size() - 1; i-- > 0;) {
    prec[i] = std::max(prec[i], prec[i + 1]);
  }
  double ap = 0.0;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    if (rec[i] != rec[i - 1]) ap += (rec[i] - rec[i - 1]) * prec[i];
  }
  return ap;
}

double average_precision(const std::vector<DetectionResult>& preds,
                         const FrameAnnotation& gts, double iou_min,
                         double depth_max) {
  return average_precision_pooled({rank_detections(preds, gts, iou_min, depth_max)});
}

ClusteringScores clustering_metrics(const SegmentationMap& pred,
                                    const SegmentationMap& gt) {
  if (!pred.same_shape(gt)) {
    throw Error(ErrorKind::kShape, "segmentations differ in size");
  }
  const std::size_t total = pred.size();
  if (total == 0) {
    throw Error(ErrorKind::kEmptySupport, "segmentations are empty");
  }
  std::map<std::pair<Label, Label>, std::size_t> joint;
  std::map<Label, std::size_t> pred_sizes, gt_sizes;
  for (std::size_t p = 0; p < total; ++p) {
    ++joint[{pred[p], gt[p]}];
    ++pred_sizes[pred[p]];
    ++gt_sizes[gt[p]];
  }
  const double n = static_cast<double>(total);

  ClusteringScores s;
  // VOI = H(P|G) + H(G|P); each log term is <= 0 so the sum is exact at 0.
  double voi = 0.0;
  for (const auto& [labels, count] : joint) {
    const double c = static_cast<double>(count);
    voi -= c / n *
           (std::log(c / static_cast<double>(pred_sizes[labels.first])) +
            std::log(c / static_cast<double>(gt_sizes[labels.second])));
  }
  s.voi = voi;

  auto pairs = [](std::size_t k) {
    return static_cast<double>(k) * static_cast<double>(k - (k > 0 ? 1 : 0)) / 2.0;
  };
  const double all_pairs = pairs(total);
  if (all_pairs == 0.0) {
    s.ri = 1.0;
  } else {
    double same_both = 0.0, same_pred = 0.0, same_gt = 0.0;
    for (const auto& [labels, count] : joint) same_both += pairs(count);
    for (const auto& [label, count] : pred_sizes) same_pred += pairs(count);
    for (const auto& [label, count] : gt_sizes) same_gt += pairs(count);
    s.ri = (all_pairs + 2.0 * same_both - same_pred - same_gt) / all_pairs;
  }

  std::map<Label, double> best_iou;
  for (const auto& [labels, count] : joint) {
    const double inter = static_cast<double>(count);
    const double uni = static_cast<double>(pred_sizes[labels.first] +
                                           gt_sizes[labels.second]) - inter;
    double& b = best_iou[labels.second];
    b = std::max(b, inter / uni);
  }
  double covering = 0.0;
  for (const auto& [label, size] : gt_sizes) {
    covering += static_cast<double>(size) * best_iou[label];
  }
  s.sc = covering / n;
  return s;
}

DepthScores depth_metrics(const DepthMap& pred, const DepthMap& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw Error(ErrorKind::kShape, "depth maps differ in size");
  }
  DepthScores s;
  double rel = 0.0, lg = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred.valid(i) || !gt.valid(i)) continue;
    const double p = pred[i], g = gt[i];
    rel += std::abs(p - g) / g;
    lg += std::abs(std::log10(p) - std::log10(g));
    sq += (p - g) * (p - g);
    ++s.pixels;
  }
  if (s.pixels == 0) {
    throw Error(ErrorKind::kEmptySupport, "no pixel is valid in both depth maps");
  }
  const double n = static_cast<double>(s.pixels);
  s.rel = rel / n;
  s.log10 = lg / n;
  s.rmse = std::sqrt(sq / n);
  return s;
}

ParameterAccuracy parameter_accuracy(const DepthMap& pred_depth,
                                     const FrameAnnotation& gts, ParamForm form) {
  const auto& K = gts.K;
  if (pred_depth.width() != K.width() || pred_depth.height() != K.height()) {
    throw Error(ErrorKind::kShape, "predicted depth does not match frame size");
  }
  ParameterAccuracy acc;
  for (std::size_t j = 0; j < gts.visible_masks.size(); ++j) {
    const auto& mask = gts.visible_masks[j];
    std::vector<Point3> pts;
    for (int y = 0; y < K.height(); ++y) {
      for (int x = 0; x < K.width(); ++x) {
        if (mask.contains(x, y) && pred_depth.valid(x, y)) {
          pts.push_back(unproject({double(x), double(y)}, pred_depth.at(x, y), K));
        }
      }
    }
    if (pts.size() < 3) {
      ++acc.skipped;
      continue;
    }
    double diff = 0.0;
    try {
      diff = param_difference(fit_plane_svd(pts).plane, gts.planes[j], form);
    } catch (const Error&) {
      ++acc.skipped;
      continue;
    }
    const double area = static_cast<double>(pts.size());
    acc.sum += diff;
    acc.weighted_sum += area * diff;
    acc.total_area += area;
    ++acc.evaluated;
  }
  if (acc.evaluated == 0) {
    throw Error(ErrorKind::kEmptySupport, "no ground-truth segment could be fitted");
  }
  acc.mean = acc.sum / static_cast<double>(acc.evaluated);
  acc.area_weighted_mean = acc.weighted_sum / acc.total_area;
  return acc;
}

void EvalAccumulator::add(const FramePrediction& pred, const FrameAnnotation& gt) {
  const auto errors = plane_recall_errors(pred.detections, gt);
  recall_errors_.insert(recall_errors_.end(), errors.begin(), errors.end());
  ranked_04_.push_back(rank_detections(pred.detections, gt, kDefaultIouThreshold, 0.4));
  ranked_06_.push_back(rank_detections(pred.detections, gt, kDefaultIouThreshold, 0.6));
  ranked_09_.push_back(rank_detections(pred.detections, gt, kDefaultIouThreshold, 0.9));

  const SegmentationMap gt_seg =
      segmentation_from_masks(gt.visible_masks, gt.K.width(), gt.K.height());
  std::vector<InstanceMask> pred_masks;
  PlanarScene scene;
  for (const auto& d : pred.detections) {
    pred_masks.push_back(d.mask);
    scene.planes.push_back(d.plane);
    scene.masks.push_back(d.mask);
  }
  const SegmentationMap pred_seg =
      pred.segmentation ? *pred.segmentation
                        : segmentation_from_masks(pred_masks, gt.K.width(), gt.K.height());
  const ClusteringScores c = clustering_metrics(pred_seg, gt_seg);
  cluster_sum_.voi += c.voi;
  cluster_sum_.ri += c.ri;
  cluster_sum_.sc += c.sc;

  scene.fallback_depth = pred.depth;
  const DepthMap assembled = assemble_depth(scene, gt.K);
  const DepthScores d = depth_metrics(assembled, gt.gt_depth);
  depth_sum_.rel += d.rel;
  depth_sum_.log10 += d.log10;
  depth_sum_.rmse += d.rmse;
  depth_sum_.pixels += d.pixels;

  const ParameterAccuracy p = parameter_accuracy(assembled, gt, form_);
  params_.sum += p.sum;
  params_.weighted_sum += p.weighted_sum;
  params_.total_area += p.total_area;
  params_.evaluated += p.evaluated;
  params_.skipped += p.skipped;
  ++frames_;
}

EvalReport EvalAccumulator::report() const {
  if (frames_ == 0) {
    throw Error(ErrorKind::kEmptySupport, "no frames were evaluated");
  }
  EvalReport r;
  r.recall_curve = recall_curve_from_errors(recall_errors_);
  r.ap_04 = average_precision_pooled(ranked_04_);
  r.ap_06 = average_precision_pooled(ranked_06_);
  r.ap_09 = average_precision_pooled(ranked_09_);
  const double f = static_cast<double>(frames_);
  r.voi = cluster_sum_.voi / f;
  r.ri = cluster_sum_.ri / f;
  r.sc = cluster_sum_.sc / f;
  r.rel = depth_sum_.rel / f;
  r.log10 = depth_sum_.log10 / f;
  r.rmse = depth_sum_.rmse / f;
  r.param_mean = params_.sum / static_cast<double>(params_.evaluated);
  r.param_weighted = params_.weighted_sum / params_.total_area;
  return r;
}

}  // namespace planar
