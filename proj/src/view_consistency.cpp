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

#include "planar/view_consistency.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace planar {
namespace {

struct Correspondence {
  BilinearStencil stencil;
  Vec3 residual;  // p_c^t − p_n
};

struct Traversal {
  WarpLossReport report;
  std::vector<Correspondence> hits;
};

void require_shapes(const CoordinateMap& current, const CoordinateMap& nearby,
                    const CameraIntrinsics& K) {
  if (current.width() != K.width() || current.height() != K.height() ||
      nearby.width() != K.width() || nearby.height() != K.height()) {
    throw Error(ErrorKind::kShape,
                "coordinate maps must match the intrinsics image size");
  }
}

// Row-major scan of the nearby map; the fixed order keeps sums reproducible.
Traversal traverse(const CoordinateMap& current, const CoordinateMap& nearby,
                   const Pose& nearby_from_current, const CameraIntrinsics& K) {
  require_shapes(current, nearby, K);
  const Pose current_from_nearby = nearby_from_current.inverse();
  const Mat3& R = nearby_from_current.rotation();
  const Vec3& t = nearby_from_current.translation();

  Traversal out;
  for (int y = 0; y < nearby.height(); ++y) {
    for (int x = 0; x < nearby.width(); ++x) {
      if (!nearby.valid(x, y)) continue;
      const Point3& p_n = nearby.at(x, y);
      const Point3 in_current = current_from_nearby.apply(p_n);
      if (!(in_current.z() > 0.0)) {
        ++out.report.skipped_out_of_frame;
        continue;
      }
      const auto stencil =
          bilinear_stencil(current.width(), current.height(), project(in_current, K));
      if (!stencil) {
        ++out.report.skipped_out_of_frame;
        continue;
      }
      const auto p_c = bilinear_sample(current, project(in_current, K));
      if (!p_c) {
        ++out.report.skipped_invalid;
        continue;
      }
      out.hits.push_back({*stencil, Vec3(R * *p_c + t - p_n)});
    }
  }
  out.report.contributing_pixels = out.hits.size();
  if (out.hits.empty()) {
    throw Error(ErrorKind::kEmptyOverlap,
                "no nearby pixel reads a valid footprint in the current map");
  }
  return out;
}

double accumulate_loss(const Traversal& tr, WarpLossForm form) {
  double sum = 0.0;
  for (const auto& h : tr.hits) {
    sum += form == WarpLossForm::kMeanDistance ? h.residual.norm()
                                               : h.residual.squaredNorm();
  }
  const double n = static_cast<double>(tr.hits.size());
  return form == WarpLossForm::kMeanDistance ? sum / n : std::sqrt(sum) / n;
}

template <typename Fn>
void for_each_footprint(const BilinearStencil& s, Fn&& fn) {
  fn(s.x0, s.y0, (1.0 - s.fx) * (1.0 - s.fy));
  fn(s.x1, s.y0, s.fx * (1.0 - s.fy));
  fn(s.x0, s.y1, (1.0 - s.fx) * s.fy);
  fn(s.x1, s.y1, s.fx * s.fy);
}

}  // namespace

DepthMap assemble_depth(const PlanarScene& scene, const CameraIntrinsics& K) {
  if (scene.planes.size() != scene.masks.size()) {
    throw Error(ErrorKind::kShape, "plane and mask counts differ");
  }
  const DepthMap& fallback = scene.fallback_depth;
  if (fallback.width() != K.width() || fallback.height() != K.height()) {
    throw Error(ErrorKind::kShape, "fallback depth does not match intrinsics");
  }
  for (const auto& m : scene.masks) {
    if (!m.membership.same_shape(K.width(), K.height())) {
      throw Error(ErrorKind::kShape, "mask does not match intrinsics");
    }
  }
  DepthMap out = fallback;
  for (int y = 0; y < K.height(); ++y) {
    for (int x = 0; x < K.width(); ++x) {
      for (std::size_t i = 0; i < scene.planes.size(); ++i) {
        if (!scene.masks[i].contains(x, y)) continue;
        if (auto z = plane_depth(scene.planes[i], {double(x), double(y)}, K)) {
          out.at(x, y) = *z;
        }
        break;
      }
    }
  }
  return out;
}

WarpLossReport warping_loss(const CoordinateMap& current,
                            const CoordinateMap& nearby,
                            const Pose& nearby_from_current,
                            const CameraIntrinsics& K, WarpLossForm form) {
  Traversal tr = traverse(current, nearby, nearby_from_current, K);
  tr.report.loss = accumulate_loss(tr, form);
  return tr.report;
}

WarpLossGradient warping_loss_grad(const CoordinateMap& current,
                                   const CoordinateMap& nearby,
                                   const Pose& nearby_from_current,
                                   const CameraIntrinsics& K,
                                   WarpLossForm form) {
  Traversal tr = traverse(current, nearby, nearby_from_current, K);
  tr.report.loss = accumulate_loss(tr, form);

  WarpLossGradient out{tr.report,
                       Grid<Vec3>(current.width(), current.height(), Vec3::Zero())};
  const Mat3 Rt = nearby_from_current.rotation().transpose();
  const double n = static_cast<double>(tr.hits.size());

  // Both forms reduce to scale * Σ w · Rᵀ g(e) with g the per-pixel direction.
  double root = 0.0;
  if (form == WarpLossForm::kRootSumSquares) {
    for (const auto& h : tr.hits) root += h.residual.squaredNorm();
    root = std::sqrt(root);
  }
  for (const auto& h : tr.hits) {
    Vec3 g;
    if (form == WarpLossForm::kMeanDistance) {
      const double len = h.residual.norm();
      if (len == 0.0) continue;
      g = Rt * h.residual / (len * n);
    } else {
      if (root == 0.0) continue;
      g = Rt * h.residual / (root * n);
    }
    for_each_footprint(h.stencil, [&](int x, int y, double w) {
      if (w != 0.0) out.d_current.at(x, y) += w * g;
    });
  }
  return out;
}

GradCheckResult check_warping_gradient(
    const CoordinateMap& current, const CoordinateMap& nearby,
    const Pose& nearby_from_current, const CameraIntrinsics& K,
    std::size_t samples, std::uint64_t seed, double step, double tolerance,
    WarpLossForm form) {
  const Traversal tr = traverse(current, nearby, nearby_from_current, K);
  const WarpLossGradient analytic =
      warping_loss_grad(current, nearby, nearby_from_current, K, form);

  std::set<std::size_t> touched;
  std::set<std::size_t> near_zero;
  for (const auto& h : tr.hits) {
    const bool tiny = h.residual.norm() < 1e-8;
    for_each_footprint(h.stencil, [&](int x, int y, double w) {
      if (w == 0.0) return;
      const std::size_t idx = current.points().index(x, y);
      touched.insert(idx);
      if (tiny) near_zero.insert(idx);
    });
  }
  std::vector<std::size_t> candidates;
  for (std::size_t idx : touched) {
    if (!near_zero.count(idx)) candidates.push_back(idx);
  }

  GradCheckResult result;
  result.excluded_near_zero = near_zero.size();
  if (candidates.empty()) return result;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_entry(0, candidates.size() - 1);
  std::uniform_int_distribution<int> pick_axis(0, 2);
  CoordinateMap probe = current;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t idx = candidates[pick_entry(rng)];
    const int axis = pick_axis(rng);
    const int x = static_cast<int>(idx % current.width());
    const int y = static_cast<int>(idx / current.width());

    Point3& entry = probe.points().at(x, y);
    const double saved = entry[axis];
    entry[axis] = saved + step;
    const double plus = warping_loss(probe, nearby, nearby_from_current, K, form).loss;
    entry[axis] = saved - step;
    const double minus = warping_loss(probe, nearby, nearby_from_current, K, form).loss;
    entry[axis] = saved;

    const double numeric = (plus - minus) / (2.0 * step);
    const double exact = analytic.d_current.at(x, y)[axis];
    const double scale = std::max(std::abs(numeric), std::abs(exact));
    const double rel = scale == 0.0 ? 0.0 : std::abs(numeric - exact) / scale;
    result.max_relative_error = std::max(result.max_relative_error, rel);
    ++result.checked;
  }
  result.passed = result.checked > 0 && result.max_relative_error < tolerance;
  return result;
}

}  // namespace planar
