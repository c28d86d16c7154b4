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

#include "scenes.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "planar/io.hpp"

namespace planar::testing {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Vec3 v(g(rng), g(rng), g(rng));
    const double n = v.norm();
    if (n > 1e-6) return v / n;
  }
}

Mat3 random_rotation(std::mt19937_64& rng, double max_angle_rad) {
  std::uniform_real_distribution<double> u(-max_angle_rad, max_angle_rad);
  return Eigen::AngleAxisd(u(rng), random_unit(rng)).toRotationMatrix();
}

Vec3 cone_sample(const Vec3& center, double max_angle_rad, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, max_angle_rad), azimuth(0.0, 2.0 * M_PI);
  const Vec3 c = center.normalized();
  const Vec3 helper = std::abs(c.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = c.cross(helper).normalized();
  const Vec3 e2 = c.cross(e1);
  const double theta = angle(rng), phi = azimuth(rng);
  return (std::cos(theta) * c +
          std::sin(theta) * (std::cos(phi) * e1 + std::sin(phi) * e2)).normalized();
}

std::vector<Vec3> separated_directions(int k, double min_angle_rad, std::mt19937_64& rng) {
  std::vector<Vec3> out;
  while (static_cast<int>(out.size()) < k) {
    const Vec3 v = random_unit(rng);
    bool ok = true;
    for (const auto& w : out) ok = ok && angle_between(v, w) >= min_angle_rad;
    if (ok) out.push_back(v);
  }
  return out;
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

std::vector<InstanceMask> strip_masks(int width, int height, int n) {
  std::vector<InstanceMask> masks;
  for (int k = 0; k < n; ++k) {
    InstanceMask m(width, height);
    const int x0 = k * width / n, x1 = (k + 1) * width / n;
    for (int y = 0; y < height; ++y) {
      for (int x = x0; x < x1; ++x) m.set(x, y);
    }
    masks.push_back(std::move(m));
  }
  return masks;
}

InstanceMask full_mask(int width, int height) {
  return rect_mask(width, height, 0, 0, width, height);
}

InstanceMask rect_mask(int width, int height, int x0, int y0, int x1, int y1) {
  InstanceMask m(width, height);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m.set(x, y);
  }
  return m;
}

DepthMap render_masked(const std::vector<Plane>& planes,
                       const std::vector<InstanceMask>& masks,
                       const CameraIntrinsics& K) {
  DepthMap d(K.width(), K.height());
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      for (std::size_t i = 0; i < planes.size(); ++i) {
        if (!masks[i].contains(x, y)) continue;
        if (auto z = plane_depth(planes[i], {double(x), double(y)}, K)) d.at(x, y) = *z;
        break;
      }
    }
  }
  return d;
}

ThreePlaneScene three_plane_scene() {
  ThreePlaneScene s{CameraIntrinsics(80, 80, 47.5, 35.5, 96, 72), {}, {}, {}};
  s.planes = {Plane(Vec3(-0.4, 0.1, 1.0).normalized(), 2.0),
              Plane(Vec3(0.0, 0.0, 1.0), 3.0),
              Plane(Vec3(0.35, -0.25, 1.0).normalized(), 2.5)};
  s.masks = strip_masks(96, 72, 3);
  s.depth = render_masked(s.planes, s.masks, s.K);
  return s;
}

ThreePlaneScene random_strip_scene(int k, std::uint64_t seed) {
  ThreePlaneScene s{CameraIntrinsics(80, 80, 47.5, 35.5, 96, 72), {}, {}, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tilt(-0.5, 0.5), off(1.5, 4.0);
  while (static_cast<int>(s.planes.size()) < k) {
    Plane p(Vec3(tilt(rng), tilt(rng), 1.0).normalized(), off(rng));
    bool distinct = true;
    for (const auto& q : s.planes) {
      const double angle = std::acos(std::min(1.0, p.normal().dot(q.normal())));
      if (angle < 10.0 * M_PI / 180.0 && std::abs(p.offset() - q.offset()) < 0.5) {
        distinct = false;
      }
    }
    if (distinct) s.planes.push_back(p);
  }
  s.masks = strip_masks(96, 72, k);
  s.depth = render_masked(s.planes, s.masks, s.K);
  return s;
}

InstanceMask box_footprint() { return rect_mask(16, 16, 5, 11, 11, 16); }

FrameAnnotation floor_wall_box_annotation() {
  const CameraIntrinsics K(8, 8, 7.5, 7.5, 16, 16);
  FrameAnnotation a(K);
  a.planes = {Plane(Vec3(0, 1, 0), 1.0), Plane(Vec3(0, 0, 1), 3.0),
              Plane(Vec3(0, 0, 1), 1.0)};
  const std::vector<InstanceMask> full = {full_mask(16, 16), full_mask(16, 16),
                                          box_footprint()};
  a.visible_masks = rasterize_visible(a.planes, full, K);
  a.is_layout = {true, true, false};
  a.gt_depth = render_masked(a.planes, a.visible_masks, K);
  return a;
}

TwoViewScene fronto_parallel_pair(double d_true, const Vec3& translation,
                                  double current_offset_delta) {
  const CameraIntrinsics K(35, 35, 19.5, 14.5, 40, 30);
  TwoViewScene s{K, Pose(Mat3::Identity(), translation), {}, {}};
  const Plane current_plane(Vec3(0, 0, 1), d_true + current_offset_delta);
  s.current = depthmap_to_coords(render_plane(current_plane, K), K);
  // With R = I the plane z = d in the current frame is z = d + t_z nearby.
  const Plane nearby_plane(Vec3(0, 0, 1), d_true + translation.z());
  s.nearby = depthmap_to_coords(render_plane(nearby_plane, K), K);
  return s;
}

namespace {

// Ray-casts the nearby camera against masked planes defined in the current
// frame; a hit counts only if it lands inside that plane's current mask.
CoordinateMap render_nearby(const std::vector<Plane>& planes,
                            const std::vector<InstanceMask>& masks,
                            const Pose& nearby_from_current,
                            const CameraIntrinsics& K) {
  const Mat3 Rt = nearby_from_current.rotation().transpose();
  const Vec3 origin = -(Rt * nearby_from_current.translation());
  CoordinateMap out(K.width(), K.height());
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      const Vec3 ray = K.ray({double(x), double(y)});
      const Vec3 dir = Rt * ray;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < planes.size(); ++i) {
        const double denom = planes[i].normal().dot(dir);
        if (std::abs(denom) < 1e-9) continue;
        const double s = (planes[i].offset() - planes[i].normal().dot(origin)) / denom;
        if (!(s > 0.0) || s >= best) continue;
        const Vec3 hit = origin + s * dir;
        if (!(hit.z() > 0.0)) continue;
        const PixelCoord px = project(hit, K);
        const int u = static_cast<int>(std::lround(px.u));
        const int v = static_cast<int>(std::lround(px.v));
        if (u < 0 || v < 0 || u >= K.width() || v >= K.height()) continue;
        if (!masks[i].contains(u, v)) continue;
        best = s;
      }
      if (std::isfinite(best)) out.set(x, y, best * ray);
    }
  }
  return out;
}

}  // namespace

TwoViewScene random_gradient_scene(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CameraIntrinsics K(35, 35, 19.5, 14.5, 40, 30);
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_real_distribution<double> tilt(-0.3, 0.3), off(2.0, 3.5), shift(-0.1, 0.1);
  const int k = count(rng);
  std::vector<Plane> planes;
  for (int i = 0; i < k; ++i) {
    planes.emplace_back(Vec3(tilt(rng), tilt(rng), 1.0).normalized(), off(rng));
  }
  const auto masks = strip_masks(K.width(), K.height(), k);
  const Pose pose(random_rotation(rng, 3.0 * M_PI / 180.0),
                  Vec3(shift(rng), shift(rng), shift(rng)));

  TwoViewScene s{K, pose, depthmap_to_coords(render_masked(planes, masks, K), K),
                 render_nearby(planes, masks, pose, K)};
  const Vec3 bias = 0.05 * random_unit(rng);
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      if (s.current.valid(x, y)) s.current.set(x, y, s.current.at(x, y) + bias);
    }
  }
  return s;
}

void write_fixtures(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  {
    const auto scene = three_plane_scene();
    io::FrameBundle f(scene.K);
    f.pose = Pose::identity();
    f.depth = scene.depth;
    fs::create_directories(root / "three_planes");
    io::write_intrinsics(root / "three_planes" / "intrinsics.txt", f.K);
    io::write_pose(root / "three_planes" / "pose.txt", *f.pose);
    io::write_depth(root / "three_planes" / "depth.pgdm", f.depth);

    DepthMap biased = scene.depth;
    for (std::size_t i = 0; i < biased.size(); ++i) {
      if (biased.valid(i)) biased[i] += 0.2;
    }
    io::write_depth(root / "three_planes_sensor_bias.pgdm", biased);
  }
  {
    const CameraIntrinsics K(35, 35, 19.5, 14.5, 40, 30);
    const std::vector<Plane> truth = {Plane(Vec3(-0.2, 0.1, 1.0).normalized(), 2.2),
                                      Plane(Vec3(0.0, 0.0, 1.0), 2.8),
                                      Plane(Vec3(0.25, -0.15, 1.0).normalized(), 2.4)};
    const auto masks = strip_masks(K.width(), K.height(), 3);
    const Pose nearby_from_current(
        Eigen::AngleAxisd(2.0 * M_PI / 180.0, Vec3(0, 1, 0)).toRotationMatrix(),
        Vec3(0.08, -0.02, 0.03));

    io::FrameBundle cur(K);
    cur.pose = Pose::identity();  // world = current camera
    cur.depth = render_masked(truth, masks, K);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      // Predicted planes carry an offset error, as a network's would.
      const Plane predicted(truth[i].normal(), truth[i].offset() + 0.05 * (i + 1));
      cur.planes.push_back({static_cast<int>(i), predicted, -1, 1.0, false});
      cur.masks.push_back(masks[i]);
    }
    io::write_frame(root / "warp_current", cur);

    io::FrameBundle near(K);
    near.pose = nearby_from_current.inverse();  // world_from_nearby
    const CoordinateMap nearby_coords = render_nearby(truth, masks, nearby_from_current, K);
    near.depth = DepthMap(K.width(), K.height());
    for (int y = 0; y < K.height(); ++y) {
      for (int x = 0; x < K.width(); ++x) {
        if (nearby_coords.valid(x, y)) near.depth.at(x, y) = nearby_coords.at(x, y).z();
      }
    }
    fs::create_directories(root / "warp_nearby");
    io::write_intrinsics(root / "warp_nearby" / "intrinsics.txt", K);
    io::write_pose(root / "warp_nearby" / "pose.txt", *near.pose);
    io::write_depth(root / "warp_nearby" / "depth.pgdm", near.depth);
  }
  {
    const auto a = floor_wall_box_annotation();
    io::FrameBundle f(a.K);
    f.pose = Pose::identity();
    f.depth = a.gt_depth;
    for (std::size_t i = 0; i < a.planes.size(); ++i) {
      f.planes.push_back({static_cast<int>(i), a.planes[i], -1, 1.0, a.is_layout[i] != 0});
    }
    f.masks = a.visible_masks;
    io::write_frame(root / "layout", f);
  }
}

}  // namespace planar::testing
