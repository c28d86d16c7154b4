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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "planar/anchors.hpp"
#include "planar/benchmark.hpp"
#include "planar/geometry.hpp"
#include "planar/metrics.hpp"
#include "planar/plane.hpp"
#include "planar/segmentation.hpp"
#include "planar/view_consistency.hpp"

namespace py = pybind11;
using namespace planar;

namespace {

using Doubles = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Labels = py::array_t<Label, py::array::c_style | py::array::forcecast>;
using Flags = py::array_t<bool, py::array::c_style | py::array::forcecast>;

void require_2d(const py::array& a, const char* name) {
  if (a.ndim() != 2) {
    throw Error(ErrorKind::kShape, std::string(name) + " must be a 2-D array");
  }
}

DepthMap to_depth(const Doubles& a) {
  require_2d(a, "depth");
  DepthMap d(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), d.grid().data().begin());
  return d;
}

Doubles from_depth(const DepthMap& d) {
  Doubles out({d.height(), d.width()});
  std::copy(d.grid().data().begin(), d.grid().data().end(), out.mutable_data());
  return out;
}

InstanceMask to_mask(const Flags& a) {
  require_2d(a, "mask");
  InstanceMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.size(); ++i) m.membership[i] = a.data()[i] ? 1 : 0;
  return m;
}

py::array_t<bool> from_mask(const InstanceMask& m) {
  py::array_t<bool> out({m.height(), m.width()});
  for (std::size_t i = 0; i < m.membership.size(); ++i) out.mutable_data()[i] = m.contains(i);
  return out;
}

SegmentationMap to_segmentation(const Labels& a) {
  require_2d(a, "segmentation");
  SegmentationMap s(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), s.data().begin());
  return s;
}

std::vector<Vec3> to_vectors(const Doubles& a, const char* name) {
  if (a.ndim() != 2 || a.shape(1) != 3) {
    throw Error(ErrorKind::kShape, std::string(name) + " must have shape (N, 3)");
  }
  std::vector<Vec3> out(static_cast<std::size_t>(a.shape(0)));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Vec3(a.at(i, 0), a.at(i, 1), a.at(i, 2));
  }
  return out;
}

Doubles from_vectors(const std::vector<Vec3>& v) {
  Doubles out({static_cast<py::ssize_t>(v.size()), py::ssize_t{3}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (int j = 0; j < 3; ++j) w(i, j) = v[i][j];
  }
  return out;
}

WarpLossForm form_of(bool squared) {
  return squared ? WarpLossForm::kRootSumSquares : WarpLossForm::kMeanDistance;
}

py::dict report_dict(const WarpLossReport& r, bool squared) {
  py::dict d;
  d["loss"] = r.loss;
  d["contributing_pixels"] = r.contributing_pixels;
  d["skipped_out_of_frame"] = r.skipped_out_of_frame;
  d["skipped_invalid"] = r.skipped_invalid;
  d["form"] = squared ? "root_sum_squares" : "mean_distance";
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Plane geometry, view consistency and evaluation primitives.";

  static PyObject* planar_error =
      PyErr_NewException("planar_geometry.PlanarError", PyExc_ValueError, nullptr);
  m.attr("PlanarError") = py::handle(planar_error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(planar_error)(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(planar_error, inst.ptr());
    }
  });

  py::class_<CameraIntrinsics>(m, "Intrinsics")
      .def(py::init<double, double, double, double, int, int>(), py::arg("fx"),
           py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"),
           py::arg("height"))
      .def_property_readonly("fx", &CameraIntrinsics::fx)
      .def_property_readonly("fy", &CameraIntrinsics::fy)
      .def_property_readonly("cx", &CameraIntrinsics::cx)
      .def_property_readonly("cy", &CameraIntrinsics::cy)
      .def_property_readonly("width", &CameraIntrinsics::width)
      .def_property_readonly("height", &CameraIntrinsics::height)
      .def("matrix", &CameraIntrinsics::as_matrix);

  py::class_<Pose>(m, "Pose")
      .def(py::init<>())
      .def(py::init<const Mat3&, const Vec3&>(), py::arg("rotation"), py::arg("translation"))
      .def_property_readonly("rotation", &Pose::rotation)
      .def_property_readonly("translation", &Pose::translation)
      .def("inverse", &Pose::inverse)
      .def("apply", &Pose::apply);

  py::class_<Plane>(m, "Plane")
      .def(py::init<const Vec3&, double>(), py::arg("normal"), py::arg("offset"))
      .def_property_readonly("normal", &Plane::normal)
      .def_property_readonly("offset", &Plane::offset)
      .def("signed_distance", &Plane::signed_distance)
      .def("__repr__", [](const Plane& p) {
        return "Plane(normal=[" + std::to_string(p.normal().x()) + ", " +
               std::to_string(p.normal().y()) + ", " + std::to_string(p.normal().z()) +
               "], offset=" + std::to_string(p.offset()) + ")";
      });

  m.def("unproject", [](double u, double v, double depth, const CameraIntrinsics& K) {
    return unproject({u, v}, depth, K);
  }, py::arg("u"), py::arg("v"), py::arg("depth"), py::arg("intrinsics"));
  m.def("project", [](const Point3& p, const CameraIntrinsics& K) {
    const PixelCoord c = project(p, K);
    return py::make_tuple(c.u, c.v);
  }, py::arg("point"), py::arg("intrinsics"));

  m.def("render_plane", [](const Plane& p, const CameraIntrinsics& K) {
    return from_depth(render_plane(p, K));
  }, py::arg("plane"), py::arg("intrinsics"),
        "Exact depth of a plane at every pixel center; 0 where the ray misses.");
  m.def("offset_from_depth", [](const Vec3& n, const Doubles& depth, const Flags& mask,
                                const CameraIntrinsics& K) {
    return offset_from_depth(n, to_depth(depth), to_mask(mask), K);
  }, py::arg("normal"), py::arg("depth"), py::arg("mask"), py::arg("intrinsics"));
  m.def("fit_plane", [](const Doubles& points) {
    const auto pts = to_vectors(points, "points");
    const PlaneFit fit = fit_plane_svd(pts);
    return py::make_tuple(fit.plane, fit.residual_rms);
  }, py::arg("points"), "Least-squares plane through (N, 3) points; returns (plane, rms).");

  m.def("cluster_anchors", [](const Doubles& normals, std::size_t k, std::uint64_t seed) {
    const auto n = to_vectors(normals, "normals");
    return from_vectors(cluster_anchors(n, k, seed).anchors());
  }, py::arg("normals"), py::arg("k") = kDefaultAnchorCount, py::arg("seed") = 0);
  m.def("encode_normal", [](const Vec3& n, const Doubles& anchors) {
    const EncodedNormal e = encode_normal(n, AnchorSet(to_vectors(anchors, "anchors")));
    return py::make_tuple(e.anchor_id, e.residual);
  }, py::arg("normal"), py::arg("anchors"));
  m.def("decode_normal", [](std::size_t id, const Vec3& residual, const Doubles& anchors) {
    return decode_normal({id, residual}, AnchorSet(to_vectors(anchors, "anchors")));
  }, py::arg("anchor_id"), py::arg("residual"), py::arg("anchors"));

  m.def("warping_loss", [](const Doubles& current, const Doubles& nearby,
                           const Pose& nearby_from_current, const CameraIntrinsics& K,
                           bool squared) {
    const auto r = warping_loss(depthmap_to_coords(to_depth(current), K),
                                depthmap_to_coords(to_depth(nearby), K),
                                nearby_from_current, K, form_of(squared));
    return report_dict(r, squared);
  }, py::arg("current_depth"), py::arg("nearby_depth"), py::arg("nearby_from_current"),
        py::arg("intrinsics"), py::arg("squared") = false);
  m.def("warping_loss_grad", [](const Doubles& current, const Doubles& nearby,
                                const Pose& nearby_from_current, const CameraIntrinsics& K,
                                bool squared) {
    const auto g = warping_loss_grad(depthmap_to_coords(to_depth(current), K),
                                     depthmap_to_coords(to_depth(nearby), K),
                                     nearby_from_current, K, form_of(squared));
    Doubles grad({g.d_current.height(), g.d_current.width(), 3});
    auto w = grad.mutable_unchecked<3>();
    for (int y = 0; y < g.d_current.height(); ++y) {
      for (int x = 0; x < g.d_current.width(); ++x) {
        for (int j = 0; j < 3; ++j) w(y, x, j) = g.d_current.at(x, y)[j];
      }
    }
    return py::make_tuple(report_dict(g.report, squared), grad);
  }, py::arg("current_depth"), py::arg("nearby_depth"), py::arg("nearby_from_current"),
        py::arg("intrinsics"), py::arg("squared") = false,
        "Loss report and d loss / d point for the current coordinate map, shape (H, W, 3).");
  m.def("check_warping_gradient", [](const Doubles& current, const Doubles& nearby,
                                     const Pose& nearby_from_current,
                                     const CameraIntrinsics& K, std::size_t samples,
                                     std::uint64_t seed, bool squared) {
    const auto r = check_warping_gradient(depthmap_to_coords(to_depth(current), K),
                                          depthmap_to_coords(to_depth(nearby), K),
                                          nearby_from_current, K, samples, seed, 1e-4,
                                          1e-4, form_of(squared));
    py::dict d;
    d["checked"] = r.checked;
    d["excluded_near_zero"] = r.excluded_near_zero;
    d["max_relative_error"] = r.max_relative_error;
    d["passed"] = r.passed;
    return d;
  }, py::arg("current_depth"), py::arg("nearby_depth"), py::arg("nearby_from_current"),
        py::arg("intrinsics"), py::arg("samples") = 200, py::arg("seed") = 0,
        py::arg("squared") = false);

  m.def("extract_planes", [](const Doubles& depth, const CameraIntrinsics& K,
                             std::size_t min_area, double inlier_tol, std::uint64_t seed) {
    ExtractionOptions options;
    options.min_area = min_area;
    options.inlier_tol = inlier_tol;
    options.seed = seed;
    py::list out;
    for (const auto& e : extract_planes(to_depth(depth), K, options)) {
      out.append(py::make_tuple(e.plane, from_mask(e.mask)));
    }
    return out;
  }, py::arg("depth"), py::arg("intrinsics"), py::arg("min_area") = kDefaultMinPlaneArea,
        py::arg("inlier_tol") = 0.01, py::arg("seed") = 0,
        "RANSAC plane extraction; returns a list of (plane, mask) pairs.");

  m.def("mask_iou", [](const Flags& a, const Flags& b) {
    return mask_iou(to_mask(a), to_mask(b));
  }, py::arg("a"), py::arg("b"));
  m.def("clustering_metrics", [](const Labels& pred, const Labels& gt) {
    const auto s = clustering_metrics(to_segmentation(pred), to_segmentation(gt));
    py::dict d;
    d["voi"] = s.voi;
    d["ri"] = s.ri;
    d["sc"] = s.sc;
    return d;
  }, py::arg("pred"), py::arg("gt"));
  m.def("depth_metrics", [](const Doubles& pred, const Doubles& gt) {
    const auto s = depth_metrics(to_depth(pred), to_depth(gt));
    py::dict d;
    d["rel"] = s.rel;
    d["log10"] = s.log10;
    d["rmse"] = s.rmse;
    d["pixels"] = s.pixels;
    return d;
  }, py::arg("pred"), py::arg("gt"));
  m.def("recall_curve", [](const std::vector<double>& errors) {
    const RecallCurve c = recall_curve_from_errors(errors);
    return py::make_tuple(c.thresholds, c.recall);
  }, py::arg("errors"), "Per-plane depth errors (inf for unmatched) to (thresholds, recall).");

  m.attr("NON_PLANAR") = kNonPlanar;
}
