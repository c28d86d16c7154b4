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

#include "planar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace planar {

CameraIntrinsics::CameraIntrinsics(double fx, double fy, double cx, double cy,
                                   int width, int height)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy), width_(width), height_(height) {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw Error(ErrorKind::kDomain, "focal lengths must be positive and finite");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw Error(ErrorKind::kDomain, "principal point must be finite");
  }
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kShape, "image size must be at least 1x1");
  }
}

Mat3 CameraIntrinsics::as_matrix() const {
  Mat3 k;
  k << fx_, 0.0, cx_,
       0.0, fy_, cy_,
       0.0, 0.0, 1.0;
  return k;
}

Vec3 CameraIntrinsics::ray(PixelCoord pixel) const {
  return Vec3((pixel.u - cx_) / fx_, (pixel.v - cy_) / fy_, 1.0);
}

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  const double orth = (rotation.transpose() * rotation - Mat3::Identity())
                          .cwiseAbs()
                          .maxCoeff();
  if (!(orth <= 1e-9) || !(std::abs(rotation.determinant() - 1.0) <= 1e-9)) {
    throw Error(ErrorKind::kDomain, "rotation is not a proper orthonormal matrix");
  }
  if (!translation.allFinite()) {
    throw Error(ErrorKind::kDomain, "translation must be finite");
  }
}

Pose Pose::inverse() const {
  Pose inv;
  inv.rotation_ = rotation_.transpose();
  inv.translation_ = -(inv.rotation_ * translation_);
  return inv;
}

Pose Pose::compose(const Pose& other) const {
  Pose out;
  out.rotation_ = rotation_ * other.rotation_;
  out.translation_ = rotation_ * other.translation_ + translation_;
  return out;
}

std::size_t DepthMap::valid_count() const {
  std::size_t n = 0;
  for (double z : grid_.data()) n += is_valid_depth(z) ? 1 : 0;
  return n;
}

void CoordinateMap::set(int x, int y, const Point3& p) {
  if (!(p.z() > 0.0) || !p.allFinite()) {
    throw Error(ErrorKind::kDomain, "coordinate map entries need finite z > 0");
  }
  points_.at(x, y) = p;
  valid_.at(x, y) = 1;
}

void CoordinateMap::invalidate(int x, int y) {
  points_.at(x, y) = Point3::Zero();
  valid_.at(x, y) = 0;
}

std::size_t CoordinateMap::valid_count() const {
  std::size_t n = 0;
  for (auto v : valid_.data()) n += v ? 1 : 0;
  return n;
}

Point3 unproject(PixelCoord pixel, double depth, const CameraIntrinsics& K) {
  if (!(depth > 0.0) || !std::isfinite(depth)) {
    throw Error(ErrorKind::kDomain,
                "unproject needs a positive finite depth, got " +
                    std::to_string(depth));
  }
  return depth * K.ray(pixel);
}

PixelCoord project(const Point3& point, const CameraIntrinsics& K) {
  if (!(point.z() > 0.0)) {
    throw Error(ErrorKind::kBehindCamera, "cannot project a point with z <= 0");
  }
  return {K.fx() * point.x() / point.z() + K.cx(),
          K.fy() * point.y() / point.z() + K.cy()};
}

Point3 transform(const Point3& point, const Pose& pose) {
  return pose.apply(point);
}

CoordinateMap depthmap_to_coords(const DepthMap& depth,
                                 const CameraIntrinsics& K) {
  if (depth.width() != K.width() || depth.height() != K.height()) {
    throw Error(ErrorKind::kShape, "depth map size does not match intrinsics");
  }
  CoordinateMap coords(depth.width(), depth.height());
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      if (depth.valid(x, y)) {
        coords.set(x, y, unproject({double(x), double(y)}, depth.at(x, y), K));
      }
    }
  }
  return coords;
}

std::optional<BilinearStencil> bilinear_stencil(int width, int height,
                                                PixelCoord at) {
  const double max_u = width - 1, max_v = height - 1;
  if (!(at.u >= -kFrameEdgeSlack && at.u <= max_u + kFrameEdgeSlack) ||
      !(at.v >= -kFrameEdgeSlack && at.v <= max_v + kFrameEdgeSlack)) {
    return std::nullopt;
  }
  at.u = std::clamp(at.u, 0.0, max_u);
  at.v = std::clamp(at.v, 0.0, max_v);
  BilinearStencil s;
  s.x0 = std::min(static_cast<int>(std::floor(at.u)), std::max(width - 2, 0));
  s.y0 = std::min(static_cast<int>(std::floor(at.v)), std::max(height - 2, 0));
  s.x1 = std::min(s.x0 + 1, width - 1);
  s.y1 = std::min(s.y0 + 1, height - 1);
  s.fx = at.u - s.x0;
  s.fy = at.v - s.y0;
  return s;
}

std::optional<Point3> bilinear_sample(const CoordinateMap& map, PixelCoord at) {
  const auto s = bilinear_stencil(map.width(), map.height(), at);
  if (!s) return std::nullopt;
  if (!map.valid(s->x0, s->y0) || !map.valid(s->x1, s->y0) ||
      !map.valid(s->x0, s->y1) || !map.valid(s->x1, s->y1)) {
    return std::nullopt;
  }
  const Point3 top =
      (1.0 - s->fx) * map.at(s->x0, s->y0) + s->fx * map.at(s->x1, s->y0);
  const Point3 bottom =
      (1.0 - s->fx) * map.at(s->x0, s->y1) + s->fx * map.at(s->x1, s->y1);
  return Point3((1.0 - s->fy) * top + s->fy * bottom);
}

}  // namespace planar
