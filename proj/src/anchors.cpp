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

#include "planar/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace planar {
namespace {

constexpr int kRestarts = 8;

struct Clustering {
  std::vector<Vec3> centers;
  double inertia = std::numeric_limits<double>::infinity();
};

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

std::size_t nearest(const Vec3& p, const std::vector<Vec3>& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = (p - centers[c]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// k-means++ seeding restricted to distinct points.
std::vector<Vec3> seed_centers(const std::vector<Vec3>& points, std::size_t k,
                               std::mt19937_64& rng) {
  std::vector<Vec3> centers;
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  centers.push_back(points[pick(rng)]);
  std::vector<double> dist(points.size());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) d = std::min(d, (points[i] - c).squaredNorm());
      dist[i] = d;
      total += d;
    }
    std::size_t chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      chosen = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (dist[i] <= 0.0) continue;
        if (r < dist[i]) {
          chosen = i;
          break;
        }
        r -= dist[i];
      }
      // Guard against landing on a zero-distance tail after rounding.
      if (dist[chosen] <= 0.0) {
        chosen = static_cast<std::size_t>(
            std::max_element(dist.begin(), dist.end()) - dist.begin());
      }
    }
    centers.push_back(points[chosen]);
  }
  return centers;
}

Clustering run_kmeans(const std::vector<Vec3>& points, std::size_t k,
                      std::mt19937_64& rng) {
  Clustering result;
  result.centers = seed_centers(points, k, rng);
  std::vector<std::size_t> assign(points.size(), k);

  for (int iter = 0; iter < kMaxKMeansIterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = nearest(points[i], result.centers);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<Vec3> sums(k, Vec3::Zero());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      sums[assign[i]] += points[i];
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Empty cluster: take the point worst served by its current center.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double d = (points[i] - result.centers[assign[i]]).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        result.centers[c] = points[far];
        assign[far] = c;
        continue;
      }
      const double n = sums[c].norm();
      // An antipodal cluster mean can vanish; keep the previous center then.
      if (n > 1e-12) result.centers[c] = sums[c] / n;
    }
  }

  result.inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.inertia += (points[i] - result.centers[nearest(points[i], result.centers)])
                          .squaredNorm();
  }
  return result;
}

}  // namespace

AnchorSet::AnchorSet(std::vector<Vec3> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.empty()) {
    throw Error(ErrorKind::kDomain, "anchor set must not be empty");
  }
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    if (!anchors_[i].allFinite() || std::abs(anchors_[i].norm() - 1.0) > 1e-9) {
      throw Error(ErrorKind::kDomain,
                  "anchor " + std::to_string(i) + " is not unit length");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (anchors_[i] == anchors_[j]) {
        throw Error(ErrorKind::kDomain, "anchors " + std::to_string(j) +
                                            " and " + std::to_string(i) +
                                            " coincide");
      }
    }
  }
}

AnchorSet cluster_anchors(std::span<const Vec3> normals, std::size_t k,
                          std::uint64_t seed) {
  if (k == 0) throw Error(ErrorKind::kDomain, "k must be at least 1");
  for (const auto& n : normals) {
    if (!n.allFinite() || std::abs(n.norm() - 1.0) > 1e-6) {
      throw Error(ErrorKind::kDomain, "cluster_anchors inputs must be unit length");
    }
  }
  // Work on the sorted distinct set so the result is independent of input
  // order; duplicates keep their weight through the multiplicity list.
  std::vector<Vec3> points(normals.begin(), normals.end());
  std::sort(points.begin(), points.end(), lex_less);
  std::size_t distinct = points.empty() ? 0 : 1;
  for (std::size_t i = 1; i < points.size(); ++i) {
    distinct += points[i] != points[i - 1] ? 1 : 0;
  }
  if (distinct < k) {
    throw Error(ErrorKind::kInsufficientData,
                "need at least " + std::to_string(k) + " distinct normals, got " +
                    std::to_string(distinct));
  }

  std::mt19937_64 rng(seed);
  Clustering best;
  for (int r = 0; r < kRestarts; ++r) {
    Clustering c = run_kmeans(points, k, rng);
    if (c.inertia < best.inertia) best = std::move(c);
  }
  for (auto& c : best.centers) c.normalize();
  std::sort(best.centers.begin(), best.centers.end(), lex_less);
  return AnchorSet(std::move(best.centers));
}

EncodedNormal encode_normal(const Vec3& normal, const AnchorSet& anchors) {
  if (!normal.allFinite() || std::abs(normal.norm() - 1.0) > 1e-6) {
    throw Error(ErrorKind::kDomain, "encode_normal expects a unit normal");
  }
  EncodedNormal enc;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double d = (normal - anchors[i]).norm();
    if (d < best) {
      best = d;
      enc.anchor_id = i;
    }
  }
  enc.residual = normal - anchors[enc.anchor_id];
  return enc;
}

Vec3 decode_normal(const EncodedNormal& encoded, const AnchorSet& anchors) {
  if (encoded.anchor_id >= anchors.size()) {
    throw Error(ErrorKind::kDomain, "anchor id out of range");
  }
  const Vec3 sum = anchors[encoded.anchor_id] + encoded.residual;
  const double n = sum.norm();
  if (!(n > 1e-9) || !std::isfinite(n)) {
    throw Error(ErrorKind::kDegenerateEncoding,
                "anchor plus residual is (near) zero");
  }
  return sum / n;
}

}  // namespace planar
