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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "planar/benchmark.hpp"
#include "planar/metrics.hpp"
#include "scenes.hpp"

using namespace planar;
using planar::testing::angle_between;
using planar::testing::error_kind;

namespace {

constexpr double kDeg = M_PI / 180.0;

FrameAnnotation annotate(const testing::ThreePlaneScene& s) {
  FrameAnnotation a(s.K);
  a.planes = s.planes;
  a.visible_masks = s.masks;
  a.is_layout.assign(s.planes.size(), false);
  a.gt_depth = s.depth;
  return a;
}

// Index of the extracted plane whose mask best overlaps `mask`.
std::size_t best_overlap(const std::vector<ExtractedPlane>& found, const InstanceMask& mask) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < found.size(); ++i) {
    if (mask_iou(found[i].mask, mask) > mask_iou(found[best].mask, mask)) best = i;
  }
  return best;
}

void check_recovers(const testing::ThreePlaneScene& s, const std::vector<ExtractedPlane>& found) {
  REQUIRE(found.size() == s.planes.size());
  std::vector<int> claimed(found.size(), 0);
  for (std::size_t i = 0; i < s.planes.size(); ++i) {
    const std::size_t j = best_overlap(found, s.masks[i]);
    ++claimed[j];
    CHECK(mask_iou(found[j].mask, s.masks[i]) >= 0.99);
    CHECK(angle_between(found[j].plane.normal(), s.planes[i].normal()) < kDeg);
    CHECK(std::abs(found[j].plane.offset() - s.planes[i].offset()) < 0.01);
  }
  for (int c : claimed) CHECK(c == 1);
}

DepthMap biased(const DepthMap& d, double bias) {
  DepthMap out = d;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.valid(i)) out[i] += bias;
  }
  return out;
}

// Sized 64x48 frame: a far fronto-parallel backdrop with a near patch of
// `patch_area` pixels (a 20-wide block, the last row partial).
DepthMap backdrop_with_patch(std::size_t patch_area) {
  DepthMap d(64, 48, 3.0);
  for (std::size_t k = 0; k < patch_area; ++k) {
    d.at(static_cast<int>(10 + k % 20), static_cast<int>(5 + k / 20)) = 1.5;
  }
  return d;
}

}  // namespace

TEST_CASE("extraction recovers three rendered planes") {
  const auto s = testing::three_plane_scene();
  check_recovers(s, extract_planes(s.depth, s.K, {.inlier_tol = 0.01, .seed = 7}));
}

TEST_CASE("extraction of a single fronto-parallel plane covers the frame") {
  const CameraIntrinsics K(50, 50, 31.5, 23.5, 64, 48);
  const auto found = extract_planes(DepthMap(64, 48, 2.5), K, {});
  REQUIRE(found.size() == 1);
  CHECK(found[0].mask.area() == 64u * 48u);
  CHECK(std::abs(found[0].plane.offset() - 2.5) < 1e-9);
  CHECK((found[0].plane.normal() - Vec3(0, 0, 1)).norm() < 1e-9);
}

TEST_CASE("minimum area threshold is inclusive at 500 pixels") {
  const CameraIntrinsics K(50, 50, 31.5, 23.5, 64, 48);
  const auto small = extract_planes(backdrop_with_patch(499), K, {.min_area = 500});
  REQUIRE(small.size() == 1);
  CHECK(std::abs(small[0].plane.offset() - 3.0) < 1e-9);
  CHECK(small[0].mask.area() == 64u * 48u - 499u);

  const auto kept = extract_planes(backdrop_with_patch(500), K, {.min_area = 500});
  REQUIRE(kept.size() == 2);
  std::vector<std::size_t> areas = {kept[0].mask.area(), kept[1].mask.area()};
  std::sort(areas.begin(), areas.end());
  CHECK(areas[0] == 500u);
  CHECK(areas[1] == 64u * 48u - 500u);
}

TEST_CASE("extraction input errors") {
  const CameraIntrinsics K(50, 50, 31.5, 23.5, 64, 48);
  DepthMap sparse(64, 48);
  for (int x = 0; x < 64; ++x) sparse.at(x, 0) = 2.0;
  CHECK(error_kind([&] { extract_planes(sparse, K, {}); }) == ErrorKind::kInsufficientData);
  CHECK(error_kind([&] { extract_planes(DepthMap(10, 10, 1.0), K, {}); }) == ErrorKind::kShape);
}

TEST_CASE("extraction respects max_planes and is deterministic") {
  const auto s = testing::three_plane_scene();
  const auto two = extract_planes(s.depth, s.K, {.max_planes = 2, .seed = 1});
  CHECK(two.size() == 2);
  const auto a = extract_planes(s.depth, s.K, {.seed = 5});
  const auto b = extract_planes(s.depth, s.K, {.seed = 5});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].plane.normal() == b[i].plane.normal());
    CHECK(a[i].plane.offset() == b[i].plane.offset());
    CHECK(a[i].mask.membership == b[i].mask.membership);
  }
}

TEST_CASE("property: extraction recovers k <= 5 random strip planes") {
  for (int k = 1; k <= 5; ++k) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto s = testing::random_strip_scene(k, 1000 * k + seed);
      const auto found = extract_planes(s.depth, s.K, {.seed = seed});
      check_recovers(s, found);
      for (std::size_t i = 0; i < found.size(); ++i) {
        for (std::size_t j = i + 1; j < found.size(); ++j) {
          CHECK(mask_iou(found[i].mask, found[j].mask) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("pose filter keeps exact sensors and drops biased ones") {
  const auto s = testing::three_plane_scene();
  const FrameAnnotation a = annotate(s);
  const PoseCheck exact = pose_failure_filter(a, s.depth);
  CHECK(exact.keep);
  CHECK(exact.discrepancy < 1e-12);
  CHECK(exact.pixels == s.depth.valid_count());

  const PoseCheck far = pose_failure_filter(a, biased(s.depth, 0.2), 0.1);
  CHECK_FALSE(far.keep);
  CHECK(far.discrepancy == doctest::Approx(0.2).epsilon(1e-9));
  const PoseCheck near = pose_failure_filter(a, biased(s.depth, 0.05), 0.1);
  CHECK(near.keep);
  CHECK(near.discrepancy == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("pose filter ignores invalid sensor pixels and needs planar support") {
  const auto s = testing::three_plane_scene();
  FrameAnnotation a = annotate(s);
  DepthMap sensor = s.depth;
  for (int y = 0; y < 72; ++y) sensor.at(40, y) = 0.0;
  CHECK(pose_failure_filter(a, sensor).pixels == s.depth.valid_count() - 72);
  a.visible_masks.assign(3, InstanceMask(96, 72));
  CHECK(error_kind([&] { pose_failure_filter(a, s.depth); }) == ErrorKind::kEmptySupport);
  CHECK(error_kind([&] { pose_failure_filter(annotate(s), DepthMap(3, 3, 1.0)); }) ==
        ErrorKind::kShape);
}

TEST_CASE("property: pose filter decision is monotone in bias") {
  const auto s = testing::three_plane_scene();
  const FrameAnnotation a = annotate(s);
  bool dropped = false;
  double last = -1.0;
  for (int step = 0; step <= 40; ++step) {
    const PoseCheck c = pose_failure_filter(a, biased(s.depth, 0.005 * step));
    CHECK(c.discrepancy >= last);
    last = c.discrepancy;
    if (dropped) CHECK_FALSE(c.keep);
    dropped = dropped || !c.keep;
  }
  CHECK(dropped);
}

TEST_CASE("depth test keeps the nearest plane") {
  const CameraIntrinsics K(10, 10, 4.5, 4.5, 10, 10);
  const std::vector<Plane> planes = {Plane(Vec3(0, 0, 1), 2.0), Plane(Vec3(0, 0, 1), 1.0)};
  const std::vector<InstanceMask> full = {testing::rect_mask(10, 10, 0, 0, 6, 10),
                                          testing::rect_mask(10, 10, 4, 0, 10, 10)};
  const auto vis = rasterize_visible(planes, full, K);
  CHECK(vis[0].membership == testing::rect_mask(10, 10, 0, 0, 4, 10).membership);
  CHECK(vis[1].membership == full[1].membership);
  const auto comp = rasterize_complete(planes, full, K);
  CHECK(comp[0].membership == full[0].membership);
  CHECK(comp[1].membership == full[1].membership);

  const std::vector<InstanceMask> apart = {testing::rect_mask(10, 10, 0, 0, 5, 10),
                                           testing::rect_mask(10, 10, 5, 0, 10, 10)};
  const auto same = rasterize_visible(planes, apart, K);
  CHECK(same[0].membership == apart[0].membership);
  CHECK(same[1].membership == apart[1].membership);
}

TEST_CASE("property: rasterization matches a per-pixel min-depth oracle") {
  const CameraIntrinsics K(30, 30, 15.5, 11.5, 32, 24);
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> tilt(-0.6, 0.6), off(0.5, 4);
  std::uniform_int_distribution<int> cx(0, 31), cy(0, 23);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Plane> planes;
    std::vector<InstanceMask> full;
    for (int i = 0; i < 3; ++i) {
      planes.emplace_back(Vec3(tilt(rng), tilt(rng), 1.0).normalized(), off(rng));
      int x0 = cx(rng), x1 = cx(rng), y0 = cy(rng), y1 = cy(rng);
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      full.push_back(testing::rect_mask(32, 24, x0, y0, x1 + 1, y1 + 1));
    }
    const auto vis = rasterize_visible(planes, full, K);
    const auto comp = rasterize_complete(planes, full, K);
    for (int y = 0; y < 24; ++y) {
      for (int x = 0; x < 32; ++x) {
        int winner = -1;
        double best = 0.0;
        for (int i = 0; i < 3; ++i) {
          if (!full[i].contains(x, y)) continue;
          const auto z = plane_depth(planes[i], {double(x), double(y)}, K);
          if (z && (winner < 0 || *z < best)) {
            winner = i;
            best = *z;
          }
        }
        int owners = 0;
        for (int i = 0; i < 3; ++i) {
          CHECK(vis[i].contains(x, y) == (i == winner));
          owners += vis[i].contains(x, y) ? 1 : 0;
          if (vis[i].contains(x, y)) CHECK(comp[i].contains(x, y));
          const bool defined = plane_depth(planes[i], {double(x), double(y)}, K).has_value();
          CHECK(comp[i].contains(x, y) == (full[i].contains(x, y) && defined));
        }
        CHECK(owners <= 1);
      }
    }
  }
}

TEST_CASE("pair classification") {
  const CameraIntrinsics K(8, 8, 7.5, 7.5, 16, 16);
  const DepthMap none(16, 16);
  auto classify = [&](const Plane& a, const Plane& b,
                      InstanceMask ma = testing::full_mask(16, 16),
                      InstanceMask mb = testing::full_mask(16, 16)) {
    const auto vis = rasterize_visible({a, b}, {ma, mb}, K);
    return classify_pair(a, vis[0], b, vis[1], none, K);
  };
  // Left wall x = -2 and back wall z = 3, seen from inside the room.
  CHECK(classify(Plane(Vec3(-1, 0, 0), 2.0), Plane(Vec3(0, 0, 1), 3.0)) == PairRelation::kConcave);
  // Box edge pointing at the camera: left face z = 2 - x, right face z = 2 + x.
  CHECK(classify(Plane(Vec3(1, 0, 1).normalized(), std::sqrt(2.0)),
                 Plane(Vec3(-1, 0, 1).normalized(), std::sqrt(2.0)),
                 testing::rect_mask(16, 16, 0, 0, 8, 16),
                 testing::rect_mask(16, 16, 8, 0, 16, 16)) == PairRelation::kConvex);
  CHECK_FALSE(classify(Plane(Vec3(0, 0, 1), 2.0), Plane(Vec3(0, 0, 1), 3.0)).has_value());
  CHECK_FALSE(classify(Plane(Vec3(0, 0, 1), 2.0),
                       Plane(Vec3(0, std::sin(0.3 * kDeg), std::cos(0.3 * kDeg)), 3.0))
                  .has_value());
}

TEST_CASE("floor and wall form a concave pair by explicit coordinates") {
  const FrameAnnotation a = testing::floor_wall_box_annotation();
  const auto& floor = a.planes[0];
  const auto& wall = a.planes[1];
  // Hand check: a floor point in front of the wall and a wall point above
  // the floor both sit on the camera side of the other plane.
  CHECK(wall.signed_distance(Point3(0, 1, 2)) < 0);
  CHECK(floor.signed_distance(Point3(0, -0.5, 3)) < 0);
  CHECK(classify_pair(floor, a.visible_masks[0], wall, a.visible_masks[1], a.gt_depth, a.K) ==
        PairRelation::kConcave);
}

TEST_CASE("layout composition uses min for concave and max for convex pairs") {
  const CameraIntrinsics K(8, 8, 7.5, 7.5, 16, 16);
  const std::vector<Plane> planes = {Plane(Vec3(0, 1, 0), 1.0), Plane(Vec3(0, 0, 1), 3.0)};
  for (auto rel : {PairRelation::kConcave, PairRelation::kConvex}) {
    std::vector<std::vector<std::optional<PairRelation>>> relations(2, std::vector<std::optional<PairRelation>>(2));
    relations[0][1] = relations[1][0] = rel;
    const LayoutCandidate c = compose_layout({0, 1}, planes, relations, K);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        const auto f = plane_depth(planes[0], {double(x), double(y)}, K);
        const double w = 3.0;
        const double expected = !f ? w : (rel == PairRelation::kConcave ? std::min(*f, w) : std::max(*f, w));
        CHECK(c.depth.at(x, y) == expected);
        const int owner = (!f || expected == w) && !(f && *f == w) ? 1 : 0;
        CHECK(c.owner.at(x, y) == owner);
      }
    }
  }
}

TEST_CASE("property: layout fold is independent of member order") {
  const CameraIntrinsics K(12, 12, 11.5, 8.5, 24, 18);
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> tilt(-1, 1), off(0.5, 4);
  std::bernoulli_distribution concave(0.5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Plane> planes;
    for (int i = 0; i < 4; ++i) planes.emplace_back(Vec3(tilt(rng), tilt(rng), 1).normalized(), off(rng));
    std::vector<std::vector<std::optional<PairRelation>>> rel(4, std::vector<std::optional<PairRelation>>(4));
    const auto r = concave(rng) ? PairRelation::kConcave : PairRelation::kConvex;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) rel[i][j] = r;
      }
    }
    std::vector<std::size_t> members = {0, 1, 2, 3};
    const LayoutCandidate base = compose_layout(members, planes, rel, K);
    for (int perm = 0; perm < 5; ++perm) {
      std::shuffle(members.begin(), members.end(), rng);
      const LayoutCandidate other = compose_layout(members, planes, rel, K);
      CHECK(other.depth == base.depth);
    }
  }
}

TEST_CASE("behind check counts pixels within tolerance as behind") {
  DepthMap visible(10, 10, 2.0), cand(10, 10, 2.0);
  for (int i = 0; i < 15; ++i) cand[i] = 1.7;          // 0.3 m in front
  BehindCheck r = check_behind(cand, visible, 0.2, 0.9);
  CHECK(r.compared == 100);
  CHECK(r.fraction == doctest::Approx(0.85));
  CHECK_FALSE(r.valid);
  for (int i = 0; i < 15; ++i) cand[i] = 1.8;          // exactly at the tolerance
  r = check_behind(cand, visible, 0.2, 0.9);
  CHECK(r.fraction == 1.0);
  CHECK(r.valid);
  for (int i = 0; i < 10; ++i) cand[i] = 1.0;          // 10% in front: still valid
  CHECK(check_behind(cand, visible, 0.2, 0.9).valid);
  cand[50] = 0.0;
  visible[51] = 0.0;
  CHECK(check_behind(cand, visible, 0.2, 0.9).compared == 98);
  CHECK_FALSE(check_behind(DepthMap(10, 10), visible).valid);
}

TEST_CASE("room corner completion selects the min composition of floor and wall") {
  const FrameAnnotation a = testing::floor_wall_box_annotation();
  CHECK(a.visible_masks[0].area() == 50);
  CHECK(a.visible_masks[1].area() == 176);
  CHECK(a.visible_masks[2].area() == 30);
  const auto done = complete_layout(a);
  REQUIRE(done.has_value());
  CHECK(done->selected == std::vector<std::size_t>{0, 1});
  CHECK(done->support == 226);
  CHECK(done->behind.valid);
  CHECK(done->behind.fraction >= 0.9);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const auto f = plane_depth(a.planes[0], {double(x), double(y)}, a.K);
      CHECK(done->depth.at(x, y) == (f ? std::min(*f, 3.0) : 3.0));
    }
  }
  const InstanceMask box = testing::box_footprint();
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      if (box.contains(x, y)) CHECK(done->complete_masks[0].contains(x, y));
      for (std::size_t i = 0; i < 3; ++i) {
        if (a.visible_masks[i].contains(x, y)) CHECK(done->complete_masks[i].contains(x, y));
      }
    }
  }
  CHECK(done->complete_masks[2].membership == a.visible_masks[2].membership);
  CHECK(check_behind(done->depth, a.gt_depth).fraction == done->behind.fraction);
}

TEST_CASE("single floor with an occluding box") {
  FrameAnnotation a = testing::floor_wall_box_annotation();
  a.planes.erase(a.planes.begin() + 1);
  a.visible_masks.erase(a.visible_masks.begin() + 1);
  a.is_layout = {true, false};
  // Without the wall the upper rows are empty.
  a.gt_depth = testing::render_masked(a.planes, a.visible_masks, a.K);
  const auto done = complete_layout(a);
  REQUIRE(done.has_value());
  CHECK(done->selected == std::vector<std::size_t>{0});
  const InstanceMask box = testing::box_footprint();
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      if (box.contains(x, y)) CHECK(done->complete_masks[0].contains(x, y));
      if (done->depth.valid(x, y) && a.gt_depth.valid(x, y)) {
        CHECK(done->depth.at(x, y) >= a.gt_depth.at(x, y));
      }
    }
  }
}

TEST_CASE("a candidate in front of the visible depth is rejected") {
  const FrameAnnotation a = testing::floor_wall_box_annotation();
  DepthMap cand = a.gt_depth;
  int moved = 0;
  for (std::size_t i = 0; i < cand.size() && moved < 39; ++i) {  // 39 / 256 > 15%
    if (cand.valid(i)) {
      cand[i] -= 0.25;
      ++moved;
    }
  }
  const BehindCheck r = check_behind(cand, a.gt_depth, 0.2, 0.9);
  CHECK(r.fraction < 0.9);
  CHECK_FALSE(r.valid);
}

TEST_CASE("completion needs a layout plane") {
  FrameAnnotation a = testing::floor_wall_box_annotation();
  a.is_layout = {false, false, false};
  CHECK(error_kind([&] { complete_layout(a); }) == ErrorKind::kInsufficientData);
}

TEST_CASE("annotation validation") {
  const auto s = testing::three_plane_scene();
  FrameAnnotation a = annotate(s);
  CHECK_FALSE(error_kind([&] { validate_annotation(a); }));
  FrameAnnotation overlapping = a;
  overlapping.visible_masks[1].set(0, 0);
  CHECK(error_kind([&] { validate_annotation(overlapping); }).has_value());
  FrameAnnotation tiny = a;
  tiny.visible_masks[0] = testing::rect_mask(96, 72, 0, 0, 10, 10);
  CHECK(error_kind([&] { validate_annotation(tiny); }).has_value());
  CHECK_FALSE(error_kind([&] { validate_annotation(tiny, 100); }));
  FrameAnnotation partial = a;
  partial.complete_masks = std::vector<InstanceMask>(3, InstanceMask(96, 72));
  CHECK(error_kind([&] { validate_annotation(partial); }).has_value());
  FrameAnnotation missing = a;
  missing.is_layout.pop_back();
  CHECK(error_kind([&] { validate_annotation(missing); }) == ErrorKind::kShape);
}
