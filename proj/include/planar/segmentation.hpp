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

#include <cstdint>
#include <optional>
#include <vector>

#include "planar/geometry.hpp"
#include "planar/plane.hpp"

namespace planar {

using Label = std::uint16_t;
inline constexpr Label kNonPlanar = 65535;

/// Per-pixel plane index, or kNonPlanar.
using SegmentationMap = Grid<Label>;

/// Per-pixel probabilities in [0, 1].
class SoftMask {
 public:
  SoftMask() = default;
  SoftMask(int width, int height, double fill = 0.0);
  static SoftMask from_values(int width, int height, std::vector<double> values);

  int width() const { return grid_.width(); }
  int height() const { return grid_.height(); }
  double at(int x, int y) const { return grid_.at(x, y); }
  double operator[](std::size_t i) const { return grid_[i]; }
  /// Clamps nothing: values outside [0, 1] are rejected.
  void set(int x, int y, double p);
  const Grid<double>& grid() const { return grid_; }

 private:
  Grid<double> grid_;
};

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
};

/// For each prediction, the ground-truth mask sharing the most pixels with
/// it (lowest index on ties); nullopt when it overlaps none.
std::vector<std::optional<std::size_t>> assign_targets(
    const std::vector<InstanceMask>& predictions,
    const std::vector<InstanceMask>& ground_truth);

/// Resamples `mask` into `bbox` of an out_w x out_h canvas. Sampling uses
/// pixel-center alignment with edge clamping; pixels outside the box are 0.
SoftMask align_mask(const SoftMask& mask, const PixelRect& bbox, int out_w,
                    int out_h);

/// Per-pixel argmax over masks (lowest index on ties), kNonPlanar where the
/// winning probability is below `threshold`.
SegmentationMap assemble_segmentation(const std::vector<SoftMask>& masks,
                                      double threshold = 0.5);

/// Labels pixels with the index of the containing mask (first wins).
SegmentationMap segmentation_from_masks(const std::vector<InstanceMask>& masks,
                                        int width, int height);

}  // namespace planar
