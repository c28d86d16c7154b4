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

// planar: command-line front end for the planar reconstruction toolkit.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "planar/anchors.hpp"
#include "planar/benchmark.hpp"
#include "planar/io.hpp"
#include "planar/metrics.hpp"
#include "planar/plane.hpp"
#include "planar/view_consistency.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCheckFailed = 1;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

planar::Vec3 parse_vec3(const std::string& text) {
  std::istringstream in(text);
  planar::Vec3 v;
  std::string extra;
  if (!(in >> v.x() >> v.y() >> v.z()) || (in >> extra)) {
    throw planar::Error(planar::ErrorKind::kParse,
                        "expected three numbers \"nx ny nz\", got \"" + text + "\"");
  }
  return v;
}

void write_planes_and_masks(const fs::path& dir, const planar::io::FrameBundle& frame) {
  planar::io::write_plane_table(dir / "planes.csv", frame.planes);
  fs::remove_all(dir / "masks");
  for (std::size_t i = 0; i < frame.planes.size(); ++i) {
    planar::io::write_mask(dir / "masks" / ("mask_" + std::to_string(frame.planes[i].id) + ".png"),
                           frame.masks[i]);
  }
}

bool same_dir(const fs::path& a, const fs::path& b) {
  return fs::exists(b) && fs::equivalent(a, b);
}

// ---- anchors cluster -------------------------------------------------------

struct ClusterArgs {
  std::string input, out;
  std::size_t k = planar::kDefaultAnchorCount;
  std::uint64_t seed = 0;
};

int run_cluster(const ClusterArgs& a) {
  const auto normals = planar::io::read_normals(a.input);
  const auto anchors = planar::cluster_anchors(normals, a.k, a.seed);
  planar::io::write_anchors(a.out, anchors);
  std::cout << planar::io::format_anchors(anchors);
  return 0;
}

// ---- plane offset ----------------------------------------------------------

struct OffsetArgs {
  std::string frame, normal;
  int mask = 0;
};

int run_offset(const OffsetArgs& a) {
  const fs::path dir(a.frame);
  const auto K = planar::io::read_intrinsics(dir / "intrinsics.txt");
  const auto frame = planar::io::read_frame(dir);
  const fs::path mask_file = dir / "masks" / ("mask_" + std::to_string(a.mask) + ".png");
  const auto mask = planar::io::read_mask(mask_file);
  planar::Vec3 n = parse_vec3(a.normal);
  if (std::abs(n.norm() - 1.0) > 1e-6) {
    planar::warn("normal renormalized to unit length");
    n.normalize();
  }
  std::cout << fmt(planar::offset_from_depth(n, frame.depth, mask, K)) << "\n";
  return 0;
}

// ---- warp-loss -------------------------------------------------------------

struct WarpArgs {
  std::string current, nearby;
  bool squared = false;
  bool grad_check = false;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
};

int run_warp(const WarpArgs& a) {
  const auto cur = planar::io::read_frame(a.current);
  const auto near = planar::io::read_frame(a.nearby);
  if (!cur.pose || !near.pose) {
    throw planar::Error(planar::ErrorKind::kIo, "warp-loss needs pose.txt in both frames");
  }
  if (!(cur.K == near.K)) {
    throw planar::Error(planar::ErrorKind::kShape, "frames use different intrinsics");
  }
  const auto& K = cur.K;
  const planar::Pose nearby_from_current = near.pose->inverse().compose(*cur.pose);
  const auto M_current = planar::depthmap_to_coords(
      planar::assemble_depth(planar::io::to_scene(cur), K), K);
  const auto M_nearby = planar::depthmap_to_coords(near.depth, K);
  const auto form = a.squared ? planar::WarpLossForm::kRootSumSquares
                              : planar::WarpLossForm::kMeanDistance;

  const auto report = planar::warping_loss(M_current, M_nearby, nearby_from_current, K, form);
  json j;
  j["loss"] = report.loss;
  j["contributing_pixels"] = report.contributing_pixels;
  j["skipped_out_of_frame"] = report.skipped_out_of_frame;
  j["skipped_invalid"] = report.skipped_invalid;
  j["form"] = a.squared ? "root_sum_squares" : "mean_distance";
  int code = 0;
  if (a.grad_check) {
    const auto check = planar::check_warping_gradient(
        M_current, M_nearby, nearby_from_current, K, a.samples, a.seed, 1e-4, 1e-4, form);
    j["grad_check"]["checked"] = check.checked;
    j["grad_check"]["excluded_near_zero"] = check.excluded_near_zero;
    j["grad_check"]["max_relative_error"] = check.max_relative_error;
    j["grad_check"]["passed"] = check.passed;
    if (!check.passed) code = kExitCheckFailed;
  }
  std::cout << j.dump(2) << "\n";
  return code;
}

// ---- build-gt --------------------------------------------------------------

struct BuildArgs {
  std::string frame, out;
  planar::ExtractionOptions options;
};

int run_build(const BuildArgs& a) {
  const fs::path dir(a.frame);
  auto frame = planar::io::read_frame(dir);
  const auto planes = planar::extract_planes(frame.depth, frame.K, a.options);
  frame.planes.clear();
  frame.masks.clear();
  frame.complete_masks.reset();
  frame.segmentation.reset();
  for (std::size_t i = 0; i < planes.size(); ++i) {
    frame.planes.push_back({static_cast<int>(i), planes[i].plane, -1, 1.0, false});
    frame.masks.push_back(planes[i].mask);
  }
  const fs::path out = a.out.empty() ? dir : fs::path(a.out);
  if (same_dir(dir, out)) {
    fs::remove_all(out / "complete_masks");
    fs::remove(out / "segmentation.png");
    write_planes_and_masks(out, frame);
  } else {
    planar::io::write_frame(out, frame);
  }
  std::cout << planar::io::format_plane_table(frame.planes);
  return 0;
}

// ---- filter-pose -----------------------------------------------------------

struct FilterArgs {
  std::string frame, sensor;
  double threshold = planar::kDefaultPoseFailureThreshold;
  bool header = false;
};

int run_filter(const FilterArgs& a) {
  const fs::path dir(a.frame);
  const auto frame = planar::io::read_frame(dir);
  const auto sensor = planar::io::read_depth(a.sensor);
  const auto check =
      planar::pose_failure_filter(planar::io::to_annotation(frame), sensor, a.threshold);
  const std::string id = fs::absolute(dir).lexically_normal().filename().empty()
                             ? fs::absolute(dir).lexically_normal().parent_path().filename().string()
                             : fs::absolute(dir).lexically_normal().filename().string();
  if (a.header) std::cout << "frame_id,discrepancy,kept\n";
  std::cout << id << "," << fmt(check.discrepancy) << "," << (check.keep ? 1 : 0) << "\n";
  return 0;
}

// ---- complete-masks --------------------------------------------------------

struct CompleteArgs {
  std::string frame, out;
  double tolerance = planar::kDefaultLayoutTolerance;
  double behind = planar::kDefaultBehindFraction;
};

int run_complete(const CompleteArgs& a) {
  const fs::path dir(a.frame);
  auto frame = planar::io::read_frame(dir);
  const auto completion =
      planar::complete_layout(planar::io::to_annotation(frame), a.tolerance, a.behind);
  json j;
  if (!completion) {
    j["status"] = "unavailable";
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::vector<int> ids;
  for (std::size_t i : completion->selected) ids.push_back(frame.planes[i].id);
  j["status"] = "completed";
  j["selected"] = ids;
  j["behind_fraction"] = completion->behind.fraction;
  j["support"] = completion->support;

  const fs::path out = a.out.empty() ? dir : fs::path(a.out);
  frame.complete_masks = completion->complete_masks;
  if (!same_dir(dir, out)) {
    planar::io::write_frame(out, frame);
  } else {
    fs::remove_all(out / "complete_masks");
    for (std::size_t i = 0; i < frame.planes.size(); ++i) {
      planar::io::write_mask(
          out / "complete_masks" / ("mask_" + std::to_string(frame.planes[i].id) + ".png"),
          completion->complete_masks[i]);
    }
  }
  planar::io::write_depth(out / "layout_depth.pgdm", completion->depth);
  std::cout << j.dump(2) << "\n";
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string pred, gt, out, curve;
  bool scaled_normal = false;
};

int run_eval(const EvalArgs& a) {
  const fs::path pred_root(a.pred), gt_root(a.gt);
  std::vector<std::pair<fs::path, fs::path>> frames;
  if (planar::io::is_frame_dir(gt_root)) {
    frames.emplace_back(pred_root, gt_root);
  } else {
    std::vector<fs::path> names;
    for (const auto& e : fs::directory_iterator(gt_root)) {
      if (e.is_directory() && planar::io::is_frame_dir(e.path())) names.push_back(e.path().filename());
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) {
      throw planar::Error(planar::ErrorKind::kIo, "no frames under " + gt_root.string());
    }
    for (const auto& n : names) frames.emplace_back(pred_root / n, gt_root / n);
  }

  planar::EvalAccumulator acc(a.scaled_normal ? planar::ParamForm::kScaledNormal
                                              : planar::ParamForm::kNormalOffset);
  for (const auto& [p, g] : frames) {
    const auto gt = planar::io::read_frame(g);
    const auto pred = planar::io::read_frame(p);
    if (!(gt.K == pred.K)) {
      throw planar::Error(planar::ErrorKind::kShape, p.string() + ": intrinsics differ from ground truth");
    }
    acc.add(planar::io::to_prediction(pred), planar::io::to_annotation(gt));
  }
  const auto report = acc.report();
  const std::string text = planar::io::format_report_json(report);
  if (!a.out.empty()) {
    planar::io::write_text(a.out, text);
  } else {
    std::cout << text;
  }
  if (!a.curve.empty()) planar::io::write_text(a.curve, planar::io::format_curve_csv(report.recall_curve));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-planar reconstruction toolkit: plane geometry, warping loss, "
               "benchmark construction and evaluation."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("planar ") + planar::io::kToolVersion +
                                        " (frame format " +
                                        std::to_string(planar::io::kFormatVersion) + ")");

  ClusterArgs cluster;
  auto* anchors = app.add_subcommand("anchors", "Anchor-normal utilities");
  anchors->require_subcommand(1);
  auto* cl = anchors->add_subcommand("cluster", "K-means anchor normals from a normal list");
  cl->add_option("--input", cluster.input, "Text file with one 'nx ny nz' per line")->required()->check(CLI::ExistingFile);
  cl->add_option("--k", cluster.k, "Number of anchors")->capture_default_str()->check(CLI::PositiveNumber);
  cl->add_option("--seed", cluster.seed, "Random seed")->required();
  cl->add_option("--out", cluster.out, "Anchor file to write")->required();

  OffsetArgs offset;
  auto* plane = app.add_subcommand("plane", "Plane utilities");
  plane->require_subcommand(1);
  auto* off = plane->add_subcommand("offset", "Plane offset from depth for a masked normal");
  off->add_option("--frame", offset.frame, "Frame directory")->required()->check(CLI::ExistingDirectory);
  off->add_option("--mask", offset.mask, "Plane id of masks/mask_<id>.png")->required();
  off->add_option("--normal", offset.normal, "Unit normal \"nx ny nz\"")->required();

  WarpArgs warp;
  auto* wl = app.add_subcommand("warp-loss", "Two-view warping loss between frame bundles");
  wl->add_option("--current", warp.current, "Current frame directory")->required()->check(CLI::ExistingDirectory);
  wl->add_option("--nearby", warp.nearby, "Nearby frame directory")->required()->check(CLI::ExistingDirectory);
  wl->add_flag("--squared", warp.squared, "Use sqrt(sum of squared distances)/N");
  wl->add_flag("--grad-check", warp.grad_check, "Compare the analytic gradient with finite differences");
  wl->add_option("--samples", warp.samples, "Entries checked by --grad-check")->capture_default_str();
  wl->add_option("--seed", warp.seed, "Seed for --grad-check sampling")->capture_default_str();

  BuildArgs build;
  auto* bg = app.add_subcommand("build-gt", "Extract ground-truth planes from a depth frame");
  bg->add_option("--frame", build.frame, "Frame directory")->required()->check(CLI::ExistingDirectory);
  bg->add_option("--min-area", build.options.min_area, "Minimum plane area in pixels")->capture_default_str();
  bg->add_option("--inlier-tol", build.options.inlier_tol, "RANSAC inlier distance in meters")->required();
  bg->add_option("--seed", build.options.seed, "RANSAC seed")->required();
  bg->add_option("--max-planes", build.options.max_planes, "Upper bound on extracted planes")->capture_default_str();
  bg->add_option("--trials", build.options.trials, "RANSAC hypotheses per plane")->capture_default_str();
  bg->add_option("--out", build.out, "Output frame directory (default: the input frame)");

  FilterArgs filter;
  auto* fp = app.add_subcommand("filter-pose", "Drop frames whose planes disagree with sensor depth");
  fp->add_option("--frame", filter.frame, "Annotated frame directory")->required()->check(CLI::ExistingDirectory);
  fp->add_option("--sensor", filter.sensor, "Sensor depth (.pgdm or .png)")->required()->check(CLI::ExistingFile);
  fp->add_option("--threshold", filter.threshold, "Maximum mean discrepancy in meters")->capture_default_str();
  fp->add_flag("--header", filter.header, "Print the CSV header row");

  CompleteArgs complete;
  auto* cm = app.add_subcommand("complete-masks", "Complete masks and layout depth behind occluders");
  cm->add_option("--frame", complete.frame, "Annotated frame directory")->required()->check(CLI::ExistingDirectory);
  cm->add_option("--tolerance", complete.tolerance, "Depth tolerance in meters")->capture_default_str();
  cm->add_option("--behind", complete.behind, "Required behind fraction")->capture_default_str();
  cm->add_option("--out", complete.out, "Output frame directory (default: the input frame)");

  EvalArgs eval;
  auto* ev = app.add_subcommand("eval", "Evaluate predictions against ground truth");
  ev->add_option("--pred", eval.pred, "Predicted frame (or directory of frames)")->required()->check(CLI::ExistingDirectory);
  ev->add_option("--gt", eval.gt, "Ground-truth frame (or directory of frames)")->required()->check(CLI::ExistingDirectory);
  ev->add_option("--out", eval.out, "Report JSON path (default: stdout)");
  ev->add_option("--curve", eval.curve, "Recall curve CSV path");
  ev->add_flag("--scaled-normal", eval.scaled_normal, "Compare planes as n/d 3-vectors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "planar: " << msg << "\n";
    return kExitUsage;
  }

  try {
    if (cl->parsed()) return run_cluster(cluster);
    if (off->parsed()) return run_offset(offset);
    if (wl->parsed()) return run_warp(warp);
    if (bg->parsed()) return run_build(build);
    if (fp->parsed()) return run_filter(filter);
    if (cm->parsed()) return run_complete(complete);
    if (ev->parsed()) return run_eval(eval);
  } catch (const planar::Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "planar: " << planar::to_string(e.kind()) << " error: " << msg << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "planar: " << msg << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
