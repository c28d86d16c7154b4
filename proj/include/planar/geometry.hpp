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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "planar/error.hpp"

namespace planar {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Point3 = Eigen::Vector3d;

/// Continuous pixel coordinate; (u, v) = (column, row). Pixel centers sit on
/// integer coordinates.
struct PixelCoord {
  double u = 0.0;
  double v = 0.0;
};

/// Row-major 2D container shared by depth, coordinate, mask and label maps.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw Error(ErrorKind::kShape, "grid dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(int width, int height) const {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return same_shape(other.width(), other.height());
  }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  bool operator==(const Grid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

class CameraIntrinsics {
 public:
  CameraIntrinsics(double fx, double fy, double cx, double cy, int width,
                   int height);

  double fx() const { return fx_; }
  double fy() const { return fy_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }
  int width() const { return width_; }
  int height() const { return height_; }

  Mat3 as_matrix() const;
  /// K^-1 [u v 1]^T, the ray through `pixel` scaled to unit depth.
  Vec3 ray(PixelCoord pixel) const;

  bool operator==(const CameraIntrinsics&) const = default;

 private:
  double fx_, fy_, cx_, cy_;
  int width_, height_;
};

/// Rigid transform x -> R x + t.
class Pose {
 public:
  Pose() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}
  /// Rejects rotations that are not orthonormal with det +1 within 1e-9.
  Pose(const Mat3& rotation, const Vec3& translation);

  static Pose identity() { return Pose(); }

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Pose inverse() const;
  /// (this ∘ other)(x) = this(other(x)).
  Pose compose(const Pose& other) const;
  Point3 apply(const Point3& p) const { return rotation_ * p + translation_; }

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

/// Depth in meters; 0 marks a missing measurement.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, double fill = 0.0) : grid_(width, height, fill) {}

  int width() const { return grid_.width(); }
  int height() const { return grid_.height(); }
  std::size_t size() const { return grid_.size(); }

  double& at(int x, int y) { return grid_.at(x, y); }
  double at(int x, int y) const { return grid_.at(x, y); }
  double& operator[](std::size_t i) { return grid_[i]; }
  double operator[](std::size_t i) const { return grid_[i]; }

  bool valid(int x, int y) const { return is_valid_depth(grid_.at(x, y)); }
  bool valid(std::size_t i) const { return is_valid_depth(grid_[i]); }
  std::size_t valid_count() const;

  const Grid<double>& grid() const { return grid_; }
  Grid<double>& grid() { return grid_; }

  static bool is_valid_depth(double z) { return z > 0.0 && std::isfinite(z); }

  bool operator==(const DepthMap&) const = default;

 private:
  Grid<double> grid_;
};

/// Per-pixel 3D points with an explicit validity flag.
class CoordinateMap {
 public:
  CoordinateMap() = default;
  CoordinateMap(int width, int height)
      : points_(width, height, Point3::Zero()), valid_(width, height, 0) {}

  int width() const { return points_.width(); }
  int height() const { return points_.height(); }
  std::size_t size() const { return points_.size(); }

  const Point3& at(int x, int y) const { return points_.at(x, y); }
  Point3& at(int x, int y) { return points_.at(x, y); }
  bool valid(int x, int y) const { return valid_.at(x, y) != 0; }
  bool valid(std::size_t i) const { return valid_[i] != 0; }

  /// Stores a point and marks it valid; z must be positive.
  void set(int x, int y, const Point3& p);
  void invalidate(int x, int y);

  const Grid<Point3>& points() const { return points_; }
  Grid<Point3>& points() { return points_; }
  std::size_t valid_count() const;

 private:
  Grid<Point3> points_;
  Grid<std::uint8_t> valid_;
};

Point3 unproject(PixelCoord pixel, double depth, const CameraIntrinsics& K);
PixelCoord project(const Point3& point, const CameraIntrinsics& K);
Point3 transform(const Point3& point, const Pose& pose);

CoordinateMap depthmap_to_coords(const DepthMap& depth,
                                 const CameraIntrinsics& K);

/// Integer footprint and weights of a bilinear read. Exposed so gradient code
/// can scatter through exactly the same stencil the forward pass used.
struct BilinearStencil {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  double fx = 0.0;  // weight of column x1
  double fy = 0.0;  // weight of row y1
};

/// Reads at most this far outside the frame (in pixels) snap onto the border.
inline constexpr double kFrameEdgeSlack = 1e-9;

/// Stencil for `at`, or nullopt when `at` lies outside [0,W-1]x[0,H-1]
/// by more than kFrameEdgeSlack.
std::optional<BilinearStencil> bilinear_stencil(int width, int height,
                                                PixelCoord at);

/// Bilinear read; nullopt when out of frame or any footprint entry is invalid.
std::optional<Point3> bilinear_sample(const CoordinateMap& map, PixelCoord at);

}  // namespace planar
