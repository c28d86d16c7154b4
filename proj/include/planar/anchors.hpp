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
#include <span>
#include <vector>

#include "planar/geometry.hpp"

namespace planar {

/// k unit anchor normals. Construction validates unit length and
/// distinctness.
class AnchorSet {
 public:
  explicit AnchorSet(std::vector<Vec3> anchors);

  std::size_t size() const { return anchors_.size(); }
  const Vec3& operator[](std::size_t i) const { return anchors_[i]; }
  const std::vector<Vec3>& anchors() const { return anchors_; }

 private:
  std::vector<Vec3> anchors_;
};

struct EncodedNormal {
  std::size_t anchor_id = 0;
  Vec3 residual = Vec3::Zero();
};

inline constexpr std::size_t kDefaultAnchorCount = 7;
inline constexpr int kMaxKMeansIterations = 100;

/// Spherical k-means over unit normals. Centers are renormalized after every
/// update, empty clusters are reseeded with the point farthest from its
/// center, and the best of several k-means++ restarts (lowest inertia) wins.
/// The output is sorted lexicographically so results do not depend on input
/// order.
AnchorSet cluster_anchors(std::span<const Vec3> normals,
                          std::size_t k = kDefaultAnchorCount,
                          std::uint64_t seed = 0);

EncodedNormal encode_normal(const Vec3& normal, const AnchorSet& anchors);
Vec3 decode_normal(const EncodedNormal& encoded, const AnchorSet& anchors);

}  // namespace planar
