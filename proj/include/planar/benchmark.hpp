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
#include <cstdint>
#include <optional>
#include <vector>

#include "planar/geometry.hpp"
#include "planar/plane.hpp"

namespace planar {

inline constexpr std::size_t kDefaultMinPlaneArea = 500;
inline constexpr double kDefaultPoseFailureThreshold = 0.1;
inline constexpr double kDefaultLayoutTolerance = 0.2;
inline constexpr double kDefaultBehindFraction = 0.9;
inline constexpr std::size_t kMaxEnumeratedLayoutPlanes = 8;

/// Ground truth for one frame.
struct FrameAnnotation {
  explicit FrameAnnotation(CameraIntrinsics intrinsics) : K(intrinsics) {}

  std::vector<Plane> planes;
  std::vector<InstanceMask> visible_masks;
  std::optional<std::vector<InstanceMask>> complete_masks;
  std::vector<bool> is_layout;
  DepthMap gt_depth;
  Pose pose;  // world_from_camera
  CameraIntrinsics K;

  std::size_t plane_count() const { return planes.size(); }
};

/// Throws kShape/kDomain if the annotation breaks its invariants: matching
/// counts and sizes, visible areas >= min_area, disjoint visible masks and
/// complete masks containing their visible counterpart.
void validate_annotation(const FrameAnnotation& annotation,
                         std::size_t min_area = kDefaultMinPlaneArea);

struct ExtractionOptions {
  std::size_t min_area = kDefaultMinPlaneArea;
  double inlier_tol = 0.01;
  std::size_t max_planes = 64;
  std::size_t trials = 256;
  std::uint64_t seed = 0;
};

struct ExtractedPlane {
  Plane plane;
  InstanceMask mask;
};

/// Greedy sequential RANSAC over the unprojected depth frame, followed by a
/// nearest-plane reassignment of inliers and an SVD refit per mask. Masks are
/// disjoint; planes whose final support drops under min_area are discarded.
std::vector<ExtractedPlane> extract_planes(const DepthMap& depth,
                                           const CameraIntrinsics& K,
                                           const ExtractionOptions& options);

struct PoseCheck {
  double discrepancy = 0.0;  // mean |plane depth − sensor depth|
  std::size_t pixels = 0;
  bool keep = true;
};

PoseCheck pose_failure_filter(const FrameAnnotation& annotation,
                              const DepthMap& sensor_depth,
                              double threshold = kDefaultPoseFailureThreshold);

/// Depth-tested rasterization: each pixel goes to the claiming plane with the
/// smallest positive depth (lowest index on ties).
std::vector<InstanceMask> rasterize_visible(
    const std::vector<Plane>& planes, const std::vector<InstanceMask>& full_masks,
    const CameraIntrinsics& K);

/// Same claims without the depth test; pixels where the plane has no
/// positive depth are still dropped.
std::vector<InstanceMask> rasterize_complete(
    const std::vector<Plane>& planes, const std::vector<InstanceMask>& full_masks,
    const CameraIntrinsics& K);

enum class PairRelation { kConvex, kConcave };

/// Concave when each visible centroid lies strictly on the camera side of the
/// other plane, convex otherwise; nullopt for planes parallel within 0.5°.
/// Centroids use `depth` where valid and the plane's own depth elsewhere.
std::optional<PairRelation> classify_pair(const Plane& a, const InstanceMask& mask_a,
                                          const Plane& b, const InstanceMask& mask_b,
                                          const DepthMap& depth,
                                          const CameraIntrinsics& K);

/// A composed layout depth together with which plane supplied each pixel.
struct LayoutCandidate {
  std::vector<std::size_t> planes;  // annotation plane indices
  DepthMap depth;                   // 0 where no member plane is defined
  Grid<int> owner;                  // annotation plane index, -1 when undefined
};

/// Folds the member planes pixel-wise: concave pairs keep the smaller depth,
/// convex pairs the larger. Pairs without a relation keep the smaller depth.
/// `relations[i][j]` is indexed by annotation plane index.
LayoutCandidate compose_layout(
    const std::vector<std::size_t>& members, const std::vector<Plane>& planes,
    const std::vector<std::vector<std::optional<PairRelation>>>& relations,
    const CameraIntrinsics& K);

struct BehindCheck {
  double fraction = 0.0;  // share of compared pixels at >= visible − tolerance
  std::size_t compared = 0;
  bool valid = false;
};

/// Compares a candidate against the visible depth over pixels where both are
/// defined.
BehindCheck check_behind(const DepthMap& candidate, const DepthMap& visible,
                         double tolerance = kDefaultLayoutTolerance,
                         double behind_fraction = kDefaultBehindFraction);

struct LayoutCompletion {
  std::vector<std::size_t> selected;  // layout planes in the chosen candidate
  DepthMap depth;
  BehindCheck behind;
  std::size_t support = 0;
  /// One mask per annotation plane: completed for selected layout planes,
  /// otherwise the existing complete mask (or the visible one).
  std::vector<InstanceMask> complete_masks;
};

/// Picks the valid layout candidate with the most supporting visible layout
/// pixels. nullopt when no candidate passes the behind test.
std::optional<LayoutCompletion> complete_layout(
    const FrameAnnotation& annotation, double tolerance = kDefaultLayoutTolerance,
    double behind_fraction = kDefaultBehindFraction);

}  // namespace planar
