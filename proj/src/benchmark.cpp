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

#include "planar/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Geometry>

namespace planar {
namespace {

void require_frame_shape(const InstanceMask& mask, const CameraIntrinsics& K,
                         const char* what) {
  if (!mask.membership.same_shape(K.width(), K.height())) {
    throw Error(ErrorKind::kShape, std::string(what) + " does not match intrinsics");
  }
}

struct IndexedPoint {
  std::size_t pixel;
  Point3 p;
};

std::optional<Plane> plane_through(const Point3& a, const Point3& b, const Point3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double len = n.norm();
  if (!(len > 1e-12)) return std::nullopt;
  const Vec3 unit = n / len;
  return Plane(unit, unit.dot(a));
}

std::vector<std::size_t> inliers_of(const Plane& plane,
                                    const std::vector<IndexedPoint>& pts,
                                    const std::vector<std::size_t>& pool,
                                    double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i : pool) {
    if (std::abs(plane.signed_distance(pts[i].p)) <= tol) out.push_back(i);
  }
  return out;
}

std::vector<Point3> gather(const std::vector<IndexedPoint>& pts,
                           const std::vector<std::size_t>& ids) {
  std::vector<Point3> out;
  out.reserve(ids.size());
  for (std::size_t i : ids) out.push_back(pts[i].p);
  return out;
}

// Each point goes to the closest plane within tol; -1 when none qualifies.
std::vector<int> assign_nearest(const std::vector<Plane>& planes,
                                const std::vector<bool>& alive,
                                const std::vector<IndexedPoint>& pts, double tol) {
  std::vector<int> owner(pts.size(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < planes.size(); ++k) {
      if (!alive[k]) continue;
      const double d = std::abs(planes[k].signed_distance(pts[i].p));
      if (d <= tol && d < best) {
        best = d;
        owner[i] = static_cast<int>(k);
      }
    }
  }
  return owner;
}

double min_positive_depth_claim(const std::vector<Plane>& planes,
                                const std::vector<InstanceMask>& masks, int x,
                                int y, const CameraIntrinsics& K, int& winner) {
  double best = std::numeric_limits<double>::infinity();
  winner = -1;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (!masks[i].contains(x, y)) continue;
    const auto z = plane_depth(planes[i], {double(x), double(y)}, K);
    if (z && *z < best) {
      best = *z;
      winner = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

void validate_annotation(const FrameAnnotation& a, std::size_t min_area) {
  const std::size_t n = a.planes.size();
  if (a.visible_masks.size() != n || a.is_layout.size() != n) {
    throw Error(ErrorKind::kShape, "annotation plane, mask and flag counts differ");
  }
  if (a.gt_depth.width() != a.K.width() || a.gt_depth.height() != a.K.height()) {
    throw Error(ErrorKind::kShape, "annotation depth does not match intrinsics");
  }
  Grid<std::uint8_t> claimed(a.K.width(), a.K.height(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = a.visible_masks[i];
    require_frame_shape(m, a.K, "visible mask");
    if (m.area() < min_area) {
      throw Error(ErrorKind::kDomain, "visible mask " + std::to_string(i) +
                                          " is smaller than the minimum area");
    }
    for (std::size_t p = 0; p < m.membership.size(); ++p) {
      if (!m.contains(p)) continue;
      if (claimed[p]) {
        throw Error(ErrorKind::kDomain, "visible masks overlap");
      }
      claimed[p] = 1;
    }
  }
  if (a.complete_masks) {
    if (a.complete_masks->size() != n) {
      throw Error(ErrorKind::kShape, "complete mask count differs from planes");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = (*a.complete_masks)[i];
      require_frame_shape(c, a.K, "complete mask");
      for (std::size_t p = 0; p < c.membership.size(); ++p) {
        if (a.visible_masks[i].contains(p) && !c.contains(p)) {
          throw Error(ErrorKind::kDomain, "complete mask " + std::to_string(i) +
                                              " misses visible pixels");
        }
      }
    }
  }
}

std::vector<ExtractedPlane> extract_planes(const DepthMap& depth,
                                           const CameraIntrinsics& K,
                                           const ExtractionOptions& opt) {
  if (depth.width() != K.width() || depth.height() != K.height()) {
    throw Error(ErrorKind::kShape, "depth map does not match intrinsics");
  }
  if (!(opt.inlier_tol > 0.0)) {
    throw Error(ErrorKind::kDomain, "inlier tolerance must be positive");
  }
  std::vector<IndexedPoint> pts;
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      if (depth.valid(x, y)) {
        pts.push_back({depth.grid().index(x, y),
                       unproject({double(x), double(y)}, depth.at(x, y), K)});
      }
    }
  }
  const std::size_t min_area = std::max<std::size_t>(opt.min_area, 3);
  if (pts.size() < min_area) {
    throw Error(ErrorKind::kInsufficientData,
                "depth frame has " + std::to_string(pts.size()) +
                    " valid pixels, fewer than the minimum plane area");
  }

  std::mt19937_64 rng(opt.seed);
  std::vector<std::size_t> remaining(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) remaining[i] = i;
  std::vector<Plane> planes;

  while (planes.size() < opt.max_planes && remaining.size() >= min_area) {
    std::uniform_int_distribution<std::size_t> pick(0, remaining.size() - 1);
    std::optional<Plane> best;
    std::size_t best_support = 0;
    for (std::size_t trial = 0; trial < opt.trials; ++trial) {
      const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
      if (a == b || b == c || a == c) continue;
      const auto hyp = plane_through(pts[remaining[a]].p, pts[remaining[b]].p,
                                     pts[remaining[c]].p);
      if (!hyp) continue;
      std::size_t support = 0;
      for (std::size_t i : remaining) {
        support += std::abs(hyp->signed_distance(pts[i].p)) <= opt.inlier_tol;
      }
      if (support > best_support) {
        best_support = support;
        best = hyp;
      }
    }
    if (!best || best_support < min_area) break;

    auto inliers = inliers_of(*best, pts, remaining, opt.inlier_tol);
    Plane refined = *best;
    try {
      refined = fit_plane_svd(gather(pts, inliers)).plane;
      inliers = inliers_of(refined, pts, remaining, opt.inlier_tol);
    } catch (const Error&) {
      // Degenerate inlier set; keep the minimal-sample plane.
    }
    if (inliers.size() < min_area) break;
    planes.push_back(refined);

    std::vector<std::size_t> next;
    next.reserve(remaining.size() - inliers.size());
    std::size_t j = 0;
    for (std::size_t i : remaining) {
      if (j < inliers.size() && inliers[j] == i) {
        ++j;
      } else {
        next.push_back(i);
      }
    }
    remaining = std::move(next);
  }

  // Greedy removal lets early planes steal pixels near their intersection
  // with later ones; hand every point to its closest plane, then drop planes
  // that fall under the area threshold and repeat until stable.
  std::vector<bool> alive(planes.size(), true);
  std::vector<int> owner;
  for (;;) {
    owner = assign_nearest(planes, alive, pts, opt.inlier_tol);
    std::vector<std::size_t> area(planes.size(), 0);
    for (int o : owner) {
      if (o >= 0) ++area[static_cast<std::size_t>(o)];
    }
    bool dropped = false;
    for (std::size_t k = 0; k < planes.size(); ++k) {
      if (alive[k] && area[k] < min_area) {
        alive[k] = false;
        dropped = true;
      }
    }
    if (!dropped) break;
  }

  std::vector<ExtractedPlane> out;
  for (std::size_t k = 0; k < planes.size(); ++k) {
    if (!alive[k]) continue;
    ExtractedPlane ep{planes[k], InstanceMask(depth.width(), depth.height())};
    std::vector<Point3> members;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (owner[i] == static_cast<int>(k)) {
        ep.mask.membership[pts[i].pixel] = 1;
        members.push_back(pts[i].p);
      }
    }
    try {
      ep.plane = fit_plane_svd(members).plane;
    } catch (const Error&) {
    }
    out.push_back(std::move(ep));
  }
  return out;
}

PoseCheck pose_failure_filter(const FrameAnnotation& annotation,
                              const DepthMap& sensor_depth, double threshold) {
  const auto& K = annotation.K;
  if (sensor_depth.width() != K.width() || sensor_depth.height() != K.height()) {
    throw Error(ErrorKind::kShape, "sensor depth does not match intrinsics");
  }
  if (annotation.visible_masks.size() != annotation.planes.size()) {
    throw Error(ErrorKind::kShape, "plane and mask counts differ");
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      if (!sensor_depth.valid(x, y)) continue;
      for (std::size_t i = 0; i < annotation.planes.size(); ++i) {
        if (!annotation.visible_masks[i].contains(x, y)) continue;
        if (auto z = plane_depth(annotation.planes[i], {double(x), double(y)}, K)) {
          sum += std::abs(*z - sensor_depth.at(x, y));
          ++n;
        }
        break;
      }
    }
  }
  if (n == 0) {
    throw Error(ErrorKind::kEmptySupport,
                "no planar pixel has a valid sensor depth");
  }
  PoseCheck check;
  check.discrepancy = sum / static_cast<double>(n);
  check.pixels = n;
  check.keep = !(check.discrepancy > threshold);
  return check;
}

std::vector<InstanceMask> rasterize_visible(const std::vector<Plane>& planes,
                                            const std::vector<InstanceMask>& full,
                                            const CameraIntrinsics& K) {
  if (planes.size() != full.size()) {
    throw Error(ErrorKind::kShape, "plane and mask counts differ");
  }
  std::vector<InstanceMask> out;
  for (const auto& m : full) {
    require_frame_shape(m, K, "mask");
    out.emplace_back(K.width(), K.height(), m.confidence);
  }
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      int winner = -1;
      min_positive_depth_claim(planes, full, x, y, K, winner);
      if (winner >= 0) out[static_cast<std::size_t>(winner)].set(x, y);
    }
  }
  return out;
}

std::vector<InstanceMask> rasterize_complete(const std::vector<Plane>& planes,
                                             const std::vector<InstanceMask>& full,
                                             const CameraIntrinsics& K) {
  if (planes.size() != full.size()) {
    throw Error(ErrorKind::kShape, "plane and mask counts differ");
  }
  std::vector<InstanceMask> out;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    require_frame_shape(full[i], K, "mask");
    InstanceMask m(K.width(), K.height(), full[i].confidence);
    for (int y = 0; y < K.height(); ++y) {
      for (int x = 0; x < K.width(); ++x) {
        if (full[i].contains(x, y) &&
            plane_depth(planes[i], {double(x), double(y)}, K)) {
          m.set(x, y);
        }
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<PairRelation> classify_pair(const Plane& a, const InstanceMask& mask_a,
                                          const Plane& b, const InstanceMask& mask_b,
                                          const DepthMap& depth,
                                          const CameraIntrinsics& K) {
  const double cos_limit = std::cos(0.5 * std::numbers::pi / 180.0);
  if (std::abs(a.normal().dot(b.normal())) >= cos_limit) return std::nullopt;

  auto centroid = [&](const Plane& plane, const InstanceMask& mask) {
    require_frame_shape(mask, K, "mask");
    Vec3 sum = Vec3::Zero();
    std::size_t n = 0;
    for (int y = 0; y < K.height(); ++y) {
      for (int x = 0; x < K.width(); ++x) {
        if (!mask.contains(x, y)) continue;
        const PixelCoord px{double(x), double(y)};
        double z = depth.valid(x, y) ? depth.at(x, y) : 0.0;
        if (z <= 0.0) {
          const auto pz = plane_depth(plane, px, K);
          if (!pz) continue;
          z = *pz;
        }
        sum += unproject(px, z, K);
        ++n;
      }
    }
    if (n == 0) {
      throw Error(ErrorKind::kEmptySupport, "layout plane has no usable pixels");
    }
    return Vec3(sum / static_cast<double>(n));
  };
  if (depth.width() != K.width() || depth.height() != K.height()) {
    throw Error(ErrorKind::kShape, "depth map does not match intrinsics");
  }
  const Vec3 ca = centroid(a, mask_a);
  const Vec3 cb = centroid(b, mask_b);
  const bool concave = b.signed_distance(ca) < 0.0 && a.signed_distance(cb) < 0.0;
  return concave ? PairRelation::kConcave : PairRelation::kConvex;
}

LayoutCandidate compose_layout(
    const std::vector<std::size_t>& members, const std::vector<Plane>& planes,
    const std::vector<std::vector<std::optional<PairRelation>>>& relations,
    const CameraIntrinsics& K) {
  LayoutCandidate c{members, DepthMap(K.width(), K.height()),
                    Grid<int>(K.width(), K.height(), -1)};
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      double& z = c.depth.at(x, y);
      int& own = c.owner.at(x, y);
      for (std::size_t j : members) {
        const auto zj = plane_depth(planes[j], {double(x), double(y)}, K);
        if (!zj) continue;
        if (own < 0) {
          z = *zj;
          own = static_cast<int>(j);
          continue;
        }
        const auto rel = relations[static_cast<std::size_t>(own)][j];
        const bool take = rel == PairRelation::kConvex ? *zj > z : *zj < z;
        if (take) {
          z = *zj;
          own = static_cast<int>(j);
        }
      }
    }
  }
  return c;
}

BehindCheck check_behind(const DepthMap& candidate, const DepthMap& visible,
                         double tolerance, double behind_fraction) {
  if (candidate.width() != visible.width() || candidate.height() != visible.height()) {
    throw Error(ErrorKind::kShape, "candidate and visible depth sizes differ");
  }
  BehindCheck check;
  std::size_t behind = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (!candidate.valid(i) || !visible.valid(i)) continue;
    ++check.compared;
    behind += candidate[i] >= visible[i] - tolerance ? 1 : 0;
  }
  if (check.compared == 0) return check;
  check.fraction = static_cast<double>(behind) / static_cast<double>(check.compared);
  check.valid = check.fraction >= behind_fraction;
  return check;
}

std::optional<LayoutCompletion> complete_layout(const FrameAnnotation& annotation,
                                                double tolerance,
                                                double behind_fraction) {
  const auto& K = annotation.K;
  const std::size_t n = annotation.planes.size();
  if (annotation.visible_masks.size() != n || annotation.is_layout.size() != n) {
    throw Error(ErrorKind::kShape, "annotation plane, mask and flag counts differ");
  }
  if (annotation.gt_depth.width() != K.width() ||
      annotation.gt_depth.height() != K.height()) {
    throw Error(ErrorKind::kShape, "annotation depth does not match intrinsics");
  }
  std::vector<std::size_t> layout;
  for (std::size_t i = 0; i < n; ++i) {
    if (annotation.is_layout[i]) layout.push_back(i);
  }
  if (layout.empty()) {
    throw Error(ErrorKind::kInsufficientData, "frame has no layout plane");
  }

  std::vector<std::vector<std::optional<PairRelation>>> relations(
      n, std::vector<std::optional<PairRelation>>(n));
  for (std::size_t a = 0; a < layout.size(); ++a) {
    for (std::size_t b = a + 1; b < layout.size(); ++b) {
      const std::size_t i = layout[a], j = layout[b];
      const auto rel = classify_pair(annotation.planes[i], annotation.visible_masks[i],
                                     annotation.planes[j], annotation.visible_masks[j],
                                     annotation.gt_depth, K);
      relations[i][j] = relations[j][i] = rel;
    }
  }

  Grid<std::uint8_t> layout_visible(K.width(), K.height(), 0);
  for (std::size_t i : layout) {
    for (std::size_t p = 0; p < layout_visible.size(); ++p) {
      if (annotation.visible_masks[i].contains(p)) layout_visible[p] = 1;
    }
  }
  auto support_of = [&](const DepthMap& cand) {
    std::size_t s = 0;
    for (std::size_t p = 0; p < cand.size(); ++p) {
      if (!layout_visible[p] || !cand.valid(p) || !annotation.gt_depth.valid(p)) continue;
      s += std::abs(cand[p] - annotation.gt_depth[p]) <= tolerance ? 1 : 0;
    }
    return s;
  };

  struct Scored {
    LayoutCandidate cand;
    BehindCheck behind;
    std::size_t support;
  };
  std::optional<Scored> best;
  auto consider = [&](std::vector<std::size_t> members) -> std::optional<Scored> {
    LayoutCandidate cand =
        compose_layout(members, annotation.planes, relations, K);
    const BehindCheck behind =
        check_behind(cand.depth, annotation.gt_depth, tolerance, behind_fraction);
    if (!behind.valid) return std::nullopt;
    const std::size_t support = support_of(cand.depth);
    return Scored{std::move(cand), behind, support};
  };

  if (layout.size() <= kMaxEnumeratedLayoutPlanes) {
    const std::size_t combos = std::size_t{1} << layout.size();
    for (std::size_t bits = 1; bits < combos; ++bits) {
      std::vector<std::size_t> members;
      for (std::size_t k = 0; k < layout.size(); ++k) {
        if (bits & (std::size_t{1} << k)) members.push_back(layout[k]);
      }
      auto scored = consider(std::move(members));
      if (scored && (!best || scored->support > best->support)) best = std::move(scored);
    }
  } else {
    // Too many subsets to enumerate: grow the member set one plane at a time,
    // keeping the addition with the best support while it stays valid.
    std::vector<std::size_t> members;
    std::vector<bool> used(layout.size(), false);
    for (;;) {
      std::optional<Scored> step;
      std::size_t step_k = 0;
      for (std::size_t k = 0; k < layout.size(); ++k) {
        if (used[k]) continue;
        auto trial = members;
        trial.push_back(layout[k]);
        std::sort(trial.begin(), trial.end());
        auto scored = consider(std::move(trial));
        if (scored && (!step || scored->support > step->support)) {
          step = std::move(scored);
          step_k = k;
        }
      }
      if (!step || (best && step->support <= best->support)) break;
      used[step_k] = true;
      members = step->cand.planes;
      best = std::move(step);
    }
  }
  if (!best) return std::nullopt;

  LayoutCompletion out;
  out.selected = best->cand.planes;
  out.depth = best->cand.depth;
  out.behind = best->behind;
  out.support = best->support;
  for (std::size_t i = 0; i < n; ++i) {
    const bool selected =
        std::find(out.selected.begin(), out.selected.end(), i) != out.selected.end();
    if (!selected) {
      out.complete_masks.push_back(annotation.complete_masks
                                       ? (*annotation.complete_masks)[i]
                                       : annotation.visible_masks[i]);
      continue;
    }
    InstanceMask m = annotation.visible_masks[i];
    for (std::size_t p = 0; p < m.membership.size(); ++p) {
      if (best->cand.owner[p] == static_cast<int>(i)) m.membership[p] = 1;
    }
    out.complete_masks.push_back(std::move(m));
  }
  return out;
}

}  // namespace planar
