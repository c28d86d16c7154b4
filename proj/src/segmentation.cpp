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

#include "planar/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace planar {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

SoftMask::SoftMask(int width, int height, double fill) : grid_(width, height, fill) {
  if (!is_probability(fill)) {
    throw Error(ErrorKind::kDomain, "soft mask values must lie in [0, 1]");
  }
}

SoftMask SoftMask::from_values(int width, int height, std::vector<double> values) {
  SoftMask m(width, height);
  if (values.size() != m.grid_.size()) {
    throw Error(ErrorKind::kShape, "soft mask value count does not match size");
  }
  for (double v : values) {
    if (!is_probability(v)) {
      throw Error(ErrorKind::kDomain, "soft mask values must lie in [0, 1]");
    }
  }
  m.grid_.data() = std::move(values);
  return m;
}

void SoftMask::set(int x, int y, double p) {
  if (!is_probability(p)) {
    throw Error(ErrorKind::kDomain, "soft mask values must lie in [0, 1]");
  }
  grid_.at(x, y) = p;
}

std::vector<std::optional<std::size_t>> assign_targets(
    const std::vector<InstanceMask>& predictions,
    const std::vector<InstanceMask>& ground_truth) {
  std::vector<std::optional<std::size_t>> out;
  out.reserve(predictions.size());
  for (const auto& pred : predictions) {
    std::optional<std::size_t> best;
    std::size_t best_overlap = 0;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      const auto& gt = ground_truth[g];
      if (!gt.membership.same_shape(pred.membership)) {
        throw Error(ErrorKind::kShape, "prediction and ground-truth sizes differ");
      }
      std::size_t overlap = 0;
      for (std::size_t p = 0; p < gt.membership.size(); ++p) {
        overlap += (pred.contains(p) && gt.contains(p)) ? 1 : 0;
      }
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = g;
      }
    }
    out.push_back(best);
  }
  return out;
}

SoftMask align_mask(const SoftMask& mask, const PixelRect& bbox, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1 || mask.width() < 1 || mask.height() < 1) {
    throw Error(ErrorKind::kDomain, "align_mask needs non-empty input and canvas");
  }
  if (bbox.width() <= 0 || bbox.height() <= 0 || bbox.x0 < 0 || bbox.y0 < 0 ||
      bbox.x1 > out_w || bbox.y1 > out_h) {
    throw Error(ErrorKind::kDomain, "bounding box is empty or leaves the canvas");
  }
  SoftMask out(out_w, out_h);
  const double sx = static_cast<double>(mask.width()) / bbox.width();
  const double sy = static_cast<double>(mask.height()) / bbox.height();
  const double max_u = mask.width() - 1;
  const double max_v = mask.height() - 1;
  for (int y = bbox.y0; y < bbox.y1; ++y) {
    const double v = std::clamp((y - bbox.y0 + 0.5) * sy - 0.5, 0.0, max_v);
    const int v0 = static_cast<int>(std::floor(v));
    const int v1 = std::min(v0 + 1, mask.height() - 1);
    const double fv = v - v0;
    for (int x = bbox.x0; x < bbox.x1; ++x) {
      const double u = std::clamp((x - bbox.x0 + 0.5) * sx - 0.5, 0.0, max_u);
      const int u0 = static_cast<int>(std::floor(u));
      const int u1 = std::min(u0 + 1, mask.width() - 1);
      const double fu = u - u0;
      double value = mask.at(u0, v0);
      if (fu != 0.0 || fv != 0.0) {
        const double top = (1.0 - fu) * mask.at(u0, v0) + fu * mask.at(u1, v0);
        const double bottom = (1.0 - fu) * mask.at(u0, v1) + fu * mask.at(u1, v1);
        value = (1.0 - fv) * top + fv * bottom;
      }
      out.set(x, y, std::clamp(value, 0.0, 1.0));
    }
  }
  return out;
}

SegmentationMap assemble_segmentation(const std::vector<SoftMask>& masks,
                                      double threshold) {
  if (masks.empty()) return {};
  if (masks.size() >= kNonPlanar) {
    throw Error(ErrorKind::kRange, "too many masks for 16-bit labels");
  }
  const int w = masks.front().width();
  const int h = masks.front().height();
  for (const auto& m : masks) {
    if (m.width() != w || m.height() != h) {
      throw Error(ErrorKind::kShape, "soft masks differ in size");
    }
  }
  SegmentationMap seg(w, h, kNonPlanar);
  for (std::size_t p = 0; p < seg.size(); ++p) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (masks[i][p] > best) {
        best = masks[i][p];
        arg = i;
      }
    }
    if (best >= threshold) seg[p] = static_cast<Label>(arg);
  }
  return seg;
}

SegmentationMap segmentation_from_masks(const std::vector<InstanceMask>& masks,
                                        int width, int height) {
  if (masks.size() >= kNonPlanar) {
    throw Error(ErrorKind::kRange, "too many masks for 16-bit labels");
  }
  SegmentationMap seg(width, height, kNonPlanar);
  for (std::size_t i = masks.size(); i-- > 0;) {
    if (!masks[i].membership.same_shape(width, height)) {
      throw Error(ErrorKind::kShape, "mask size does not match segmentation");
    }
    for (std::size_t p = 0; p < seg.size(); ++p) {
      if (masks[i].contains(p)) seg[p] = static_cast<Label>(i);
    }
  }
  return seg;
}

}  // namespace planar
