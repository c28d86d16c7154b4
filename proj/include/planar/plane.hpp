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

#include <optional>
#include <span>
#include <vector>

#include "planar/geometry.hpp"

namespace planar {

/// Plane n·X = d in the camera frame, stored with unit n and d >= 0.
class Plane {
 public:
  Plane() : normal_(0.0, 0.0, 1.0), offset_(0.0) {}
  /// `normal` must be unit length within 1e-6; it is renormalized and the
  /// pair is flipped to (−n, −d) when d < 0.
  Plane(const Vec3& normal, double offset);

  const Vec3& normal() const { return normal_; }
  double offset() const { return offset_; }

  /// Signed distance n·p − d; negative on the camera side.
  double signed_distance(const Point3& p) const {
    return normal_.dot(p) - offset_;
  }

 private:
  Vec3 normal_;
  double offset_;
};

/// Binary per-pixel membership of one plane instance.
struct InstanceMask {
  Grid<std::uint8_t> membership;
  double confidence = 1.0;

  InstanceMask() = default;
  InstanceMask(int width, int height, double confidence = 1.0)
      : membership(width, height, 0), confidence(confidence) {}

  int width() const { return membership.width(); }
  int height() const { return membership.height(); }
  bool contains(int x, int y) const { return membership.at(x, y) != 0; }
  bool contains(std::size_t i) const { return membership[i] != 0; }
  void set(int x, int y, bool on = true) { membership.at(x, y) = on ? 1 : 0; }
  std::size_t area() const;
};

/// Mean of n·(z K^-1 x) over masked pixels with valid depth.
double offset_from_depth(const Vec3& normal, const DepthMap& depth,
                         const InstanceMask& mask, const CameraIntrinsics& K);

/// Depth where the ray through `pixel` meets `plane`; nullopt for grazing
/// rays (|n·K^-1 x| < 1e-6) or intersections at z <= 0.
std::optional<double> plane_depth(const Plane& plane, PixelCoord pixel,
                                  const CameraIntrinsics& K);

/// Depth of `plane` at every pixel; 0 where plane_depth is undefined.
DepthMap render_plane(const Plane& plane, const CameraIntrinsics& K);

struct PlaneFit {
  Plane plane;
  double residual_rms = 0.0;
};

/// Total least squares plane through `points` via SVD of the centered matrix.
PlaneFit fit_plane_svd(std::span<const Point3> points);

enum class ParamForm {
  kNormalOffset,  // ‖(n_a, d_a) − (n_b, d_b)‖ over the 4-vector
  kScaledNormal,  // ‖n_a/d_a − n_b/d_b‖ over the 3-vector
};

double param_difference(const Plane& a, const Plane& b,
                        ParamForm form = ParamForm::kNormalOffset);

}  // namespace planar
