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
#include <set>

#include "planar/view_consistency.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

using namespace planar;
using planar::testing::error_kind;

namespace {

PlanarScene half_tilted_scene(const CameraIntrinsics& K) {
  PlanarScene s{{Plane(Vec3(0.4, -0.2, 1.0).normalized(), 1.8)},
                {testing::rect_mask(K.width(), K.height(), 0, 0, K.width() / 2, K.height())},
                DepthMap(K.width(), K.height(), 5.0)};
  s.fallback_depth.at(K.width() - 1, 0) = 0.0;
  return s;
}

}  // namespace

TEST_CASE("assemble_depth without planes returns the fallback") {
  const CameraIntrinsics K(20, 20, 9.5, 7.5, 20, 16);
  DepthMap fallback(20, 16, 1.5);
  fallback.at(3, 3) = 0.0;
  CHECK(assemble_depth({{}, {}, fallback}, K) == fallback);
}

TEST_CASE("assemble_depth with a full fronto-parallel plane") {
  const CameraIntrinsics K(20, 20, 9.5, 7.5, 20, 16);
  const DepthMap out =
      assemble_depth({{Plane(Vec3(0, 0, 1), 2.0)}, {testing::full_mask(20, 16)}, DepthMap(20, 16)}, K);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 2.0);
}

TEST_CASE("assemble_depth matches a per-pixel oracle") {
  const CameraIntrinsics K(20, 20, 9.5, 7.5, 20, 16);
  const PlanarScene s = half_tilted_scene(K);
  const DepthMap out = assemble_depth(s, K);
  const Vec3 n = s.planes[0].normal();
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 20; ++x) {
      double expected = s.fallback_depth.at(x, y);
      if (x < 10) {
        const double den = (n.x() * (x - 9.5) + n.y() * (y - 7.5)) / 20.0 + n.z();
        expected = 1.8 / den;
      }
      CHECK(std::abs(out.at(x, y) - expected) < 1e-12);
    }
  }
  CHECK(out.at(19, 0) == 0.0);
}

TEST_CASE("assemble_depth falls back where the plane is undefined") {
  const CameraIntrinsics K(20, 20, 9.5, 7.5, 20, 16);
  // x = 0 plane: rays left of the principal point never reach it.
  const PlanarScene s{{Plane(Vec3(1, 0, 0), 0.2)}, {testing::full_mask(20, 16)},
                      DepthMap(20, 16, 4.0)};
  const DepthMap out = assemble_depth(s, K);
  CHECK(out.at(0, 0) == 4.0);
  CHECK(out.at(19, 0) == doctest::Approx(0.2 * 20 / 9.5));
  CHECK(error_kind([&] { assemble_depth({{}, {}, DepthMap(5, 5)}, K); }) == ErrorKind::kShape);
  CHECK(error_kind([&] {
          assemble_depth({{Plane(Vec3(0, 0, 1), 1.0)}, {}, DepthMap(20, 16)}, K);
        }) == ErrorKind::kShape);
}

TEST_CASE("identity pose and identical maps give zero loss") {
  const auto scene = testing::three_plane_scene();
  const CoordinateMap m = depthmap_to_coords(scene.depth, scene.K);
  const WarpLossReport r = warping_loss(m, m, Pose::identity(), scene.K);
  CHECK(r.loss < 1e-15);
  CHECK(r.contributing_pixels == m.valid_count());
  CHECK(r.skipped_out_of_frame == 0);
  CHECK(r.skipped_invalid == 0);
  // Every residual is round-off sized, so nothing is left to check.
  const GradCheckResult c = check_warping_gradient(m, m, Pose::identity(), scene.K, 50, 0);
  CHECK(c.checked == 0);
  CHECK_FALSE(c.passed);
  CHECK(c.excluded_near_zero > 0);
}

TEST_CASE("exactly zero residuals contribute a zero gradient") {
  // Unit focal length, corner principal point and depth 2 keep every
  // projection round trip exact, so each residual is exactly zero.
  const CameraIntrinsics K(1, 1, 0, 0, 8, 8);
  const CoordinateMap m = depthmap_to_coords(DepthMap(8, 8, 2.0), K);
  const WarpLossGradient g = warping_loss_grad(m, m, Pose::identity(), K);
  CHECK(g.report.loss == 0.0);
  CHECK(g.report.contributing_pixels == 64);
  for (const auto& v : g.d_current.data()) CHECK(v == Vec3::Zero());
}

TEST_CASE("rigidly consistent views have zero loss") {
  for (const Vec3& t : {Vec3(0.1, 0, 0), Vec3(-0.05, 0.07, 0.2), Vec3(0, 0, -0.3)}) {
    const auto s = testing::fronto_parallel_pair(2.0, t, 0.0);
    const WarpLossReport r = warping_loss(s.current, s.nearby, s.nearby_from_current, s.K);
    CHECK(r.contributing_pixels > 0);
    CHECK(r.loss < 1e-9);
  }
}

TEST_CASE("perturbed offset matches the scalar oracle") {
  const auto s = testing::fronto_parallel_pair(2.0, Vec3(0.1, 0, 0), 0.05);
  for (bool squared : {false, true}) {
    const auto form = squared ? WarpLossForm::kRootSumSquares : WarpLossForm::kMeanDistance;
    const WarpLossReport r = warping_loss(s.current, s.nearby, s.nearby_from_current, s.K, form);
    const testing::WarpOracle o = testing::oracle_warping_loss(s.current, s.nearby, s.nearby_from_current, s.K, squared);
    CHECK(r.loss > 0.0);
    CHECK(r.contributing_pixels == o.contributing);
    CHECK(std::abs(r.loss - o.loss) <= 1e-12);
  }
}

TEST_CASE("property: loss agrees with the oracle on random scenes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = testing::random_gradient_scene(seed);
    const WarpLossReport r = warping_loss(s.current, s.nearby, s.nearby_from_current, s.K);
    const testing::WarpOracle o = testing::oracle_warping_loss(s.current, s.nearby, s.nearby_from_current, s.K, false);
    CHECK(r.loss >= 0.0);
    CHECK(r.contributing_pixels == o.contributing);
    CHECK(std::abs(r.loss - o.loss) <= 1e-12);
  }
}

TEST_CASE("property: report counts cover every valid nearby pixel") {
  std::mt19937_64 rng(41);
  std::bernoulli_distribution hole(0.05);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = testing::random_gradient_scene(seed);
    for (int y = 0; y < s.K.height(); ++y) {
      for (int x = 0; x < s.K.width(); ++x) {
        if (hole(rng)) s.current.invalidate(x, y);
        if (hole(rng)) s.nearby.invalidate(x, y);
      }
    }
    const WarpLossReport r = warping_loss(s.current, s.nearby, s.nearby_from_current, s.K);
    CHECK(r.contributing_pixels + r.skipped_out_of_frame + r.skipped_invalid ==
          s.nearby.valid_count());
    CHECK(r.skipped_invalid > 0);
  }
}

TEST_CASE("no overlap raises empty-overlap") {
  const auto s = testing::fronto_parallel_pair(2.0, Vec3(10.0, 0, 0), 0.0);
  CHECK(error_kind([&] { warping_loss(s.current, s.nearby, s.nearby_from_current, s.K); }) ==
        ErrorKind::kEmptyOverlap);
  CHECK(error_kind([&] { warping_loss_grad(s.current, s.nearby, s.nearby_from_current, s.K); }) ==
        ErrorKind::kEmptyOverlap);
  CoordinateMap small(3, 3);
  CHECK(error_kind([&] { warping_loss(small, s.nearby, s.nearby_from_current, s.K); }) ==
        ErrorKind::kShape);
}

TEST_CASE("gradient matches finite differences on the perturbed configuration") {
  const auto s = testing::fronto_parallel_pair(2.0, Vec3(0.1, 0, 0), 0.05);
  for (auto form : {WarpLossForm::kMeanDistance, WarpLossForm::kRootSumSquares}) {
    const GradCheckResult c =
        check_warping_gradient(s.current, s.nearby, s.nearby_from_current, s.K, 200, 3, 1e-4,
                               1e-4, form);
    CHECK(c.checked == 200);
    CHECK(c.max_relative_error < 1e-4);
    CHECK(c.passed);
  }
}

TEST_CASE("gradient is exactly zero outside every bilinear footprint") {
  const auto s = testing::fronto_parallel_pair(2.0, Vec3(0.6, 0.1, 0), 0.05);
  const WarpLossGradient g = warping_loss_grad(s.current, s.nearby, s.nearby_from_current, s.K);
  const testing::WarpOracle o = testing::oracle_warping_loss(s.current, s.nearby, s.nearby_from_current, s.K, false);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < g.d_current.size(); ++i) {
    if (!o.footprint.count(i)) {
      CHECK(g.d_current[i] == Vec3::Zero());
      ++zeros;
    }
  }
  CHECK(zeros > 0);
}

TEST_CASE("property: gradient check across random scenes") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = testing::random_gradient_scene(seed);
    const GradCheckResult c =
        check_warping_gradient(s.current, s.nearby, s.nearby_from_current, s.K, 100, seed);
    CHECK(c.passed);
    CHECK(c.max_relative_error < 1e-4);
    checked += c.checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("warping loss is deterministic") {
  const auto s = testing::random_gradient_scene(77);
  const double a = warping_loss(s.current, s.nearby, s.nearby_from_current, s.K).loss;
  const double b = warping_loss(s.current, s.nearby, s.nearby_from_current, s.K).loss;
  CHECK(a == b);
}
