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

#include "planar/plane.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace planar {

Plane::Plane(const Vec3& normal, double offset) {
  const double norm = normal.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
    throw Error(ErrorKind::kDomain, "plane normal must be unit length");
  }
  if (!std::isfinite(offset)) {
    throw Error(ErrorKind::kDomain, "plane offset must be finite");
  }
  // Already-unit normals are kept bit-for-bit so serialization round trips.
  normal_ = std::abs(norm - 1.0) > 1e-15 ? Vec3(normal / norm) : normal;
  offset_ = offset;
  if (offset_ < 0.0) {
    normal_ = -normal_;
    offset_ = -offset_;
  }
}

std::size_t InstanceMask::area() const {
  std::size_t n = 0;
  for (auto v : membership.data()) n += v ? 1 : 0;
  return n;
}

double offset_from_depth(const Vec3& normal, const DepthMap& depth,
                         const InstanceMask& mask, const CameraIntrinsics& K) {
  if (!mask.membership.same_shape(depth.width(), depth.height()) ||
      depth.width() != K.width() || depth.height() != K.height()) {
    throw Error(ErrorKind::kShape, "mask, depth and intrinsics sizes differ");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      if (!mask.contains(x, y) || !depth.valid(x, y)) continue;
      sum += normal.dot(unproject({double(x), double(y)}, depth.at(x, y), K));
      ++count;
    }
  }
  if (count == 0) {
    throw Error(ErrorKind::kEmptySupport,
                "mask covers no pixel with valid depth");
  }
  return sum / static_cast<double>(count);
}

std::optional<double> plane_depth(const Plane& plane, PixelCoord pixel,
                                  const CameraIntrinsics& K) {
  const double denom = plane.normal().dot(K.ray(pixel));
  if (std::abs(denom) < 1e-6) return std::nullopt;
  const double z = plane.offset() / denom;
  if (!(z > 0.0) || !std::isfinite(z)) return std::nullopt;
  return z;
}

DepthMap render_plane(const Plane& plane, const CameraIntrinsics& K) {
  DepthMap out(K.width(), K.height());
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      if (auto z = plane_depth(plane, {double(x), double(y)}, K)) {
        out.at(x, y) = *z;
      }
    }
  }
  return out;
}

PlaneFit fit_plane_svd(std::span<const Point3> points) {
  if (points.size() < 3) {
    throw Error(ErrorKind::kInsufficientData,
                "plane fit needs at least 3 points, got " +
                    std::to_string(points.size()));
  }
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::MatrixX3d centered(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    centered.row(static_cast<Eigen::Index>(i)) = (points[i] - centroid).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(centered, Eigen::ComputeThinV);
  const Vec3 sigma = svd.singularValues();
  if (!(sigma(0) > 0.0) || sigma(1) <= 1e-9 * sigma(0)) {
    throw Error(ErrorKind::kDegenerateGeometry,
                "points are collinear or coincident");
  }
  Vec3 normal = svd.matrixV().col(2).normalized();
  if (points.size() == 3) {
    // The plane through exactly three points, from the edge cross product.
    normal = (points[1] - points[0]).cross(points[2] - points[0]).normalized();
  }
  PlaneFit fit{Plane(normal, normal.dot(centroid)), 0.0};

  double sq = 0.0;
  for (const auto& p : points) {
    const double r = fit.plane.signed_distance(p);
    sq += r * r;
  }
  fit.residual_rms = std::sqrt(sq / static_cast<double>(points.size()));
  return fit;
}

double param_difference(const Plane& a, const Plane& b, ParamForm form) {
  if (form == ParamForm::kNormalOffset) {
    const Vec3 dn = a.normal() - b.normal();
    const double dd = a.offset() - b.offset();
    return std::sqrt(dn.squaredNorm() + dd * dd);
  }
  if (a.offset() == 0.0 || b.offset() == 0.0) {
    throw Error(ErrorKind::kDomain,
                "scaled-normal form is undefined for planes through the camera");
  }
  return (a.normal() / a.offset() - b.normal() / b.offset()).norm();
}

}  // namespace planar
