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
#include <vector>

#include "planar/geometry.hpp"
#include "planar/plane.hpp"

namespace planar {

/// Planes with their masks over a per-pixel fallback depth.
struct PlanarScene {
  std::vector<Plane> planes;
  std::vector<InstanceMask> masks;
  DepthMap fallback_depth;
};

/// Piecewise-planar depth: masked pixels take their plane's depth (the lowest
/// mask index wins on overlap), everything else keeps the fallback value.
DepthMap assemble_depth(const PlanarScene& scene, const CameraIntrinsics& K);

enum class WarpLossForm {
  kMeanDistance,    // Σ‖e‖ / N
  kRootSumSquares,  // sqrt(Σ‖e‖²) / N
};

struct WarpLossReport {
  double loss = 0.0;
  std::size_t contributing_pixels = 0;
  std::size_t skipped_out_of_frame = 0;
  std::size_t skipped_invalid = 0;
};

/// Reads every valid nearby point back from the current map and measures the
/// 3D disagreement in the nearby frame. `nearby_from_current` maps current
/// camera coordinates into the nearby camera. Throws kEmptyOverlap when no
/// nearby pixel lands on a fully valid bilinear footprint.
WarpLossReport warping_loss(const CoordinateMap& current,
                            const CoordinateMap& nearby,
                            const Pose& nearby_from_current,
                            const CameraIntrinsics& K,
                            WarpLossForm form = WarpLossForm::kMeanDistance);

struct WarpLossGradient {
  WarpLossReport report;
  /// d loss / d current.at(x, y), same layout as the current map.
  Grid<Vec3> d_current;
};

/// Analytic gradient with respect to every entry of `current`. Pixels whose
/// residual is exactly zero contribute a zero subgradient.
WarpLossGradient warping_loss_grad(
    const CoordinateMap& current, const CoordinateMap& nearby,
    const Pose& nearby_from_current, const CameraIntrinsics& K,
    WarpLossForm form = WarpLossForm::kMeanDistance);

struct GradCheckResult {
  std::size_t checked = 0;
  std::size_t excluded_near_zero = 0;
  double max_relative_error = 0.0;
  bool passed = false;
};

/// Central finite-difference check of warping_loss_grad at `samples` entries
/// drawn (seeded) from the entries touched by a contributing footprint.
/// Entries touched by a residual shorter than 1e-8 are excluded.
GradCheckResult check_warping_gradient(
    const CoordinateMap& current, const CoordinateMap& nearby,
    const Pose& nearby_from_current, const CameraIntrinsics& K,
    std::size_t samples, std::uint64_t seed, double step = 1e-4,
    double tolerance = 1e-4, WarpLossForm form = WarpLossForm::kMeanDistance);

}  // namespace planar
