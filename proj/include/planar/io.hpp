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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "planar/anchors.hpp"
#include "planar/benchmark.hpp"
#include "planar/geometry.hpp"
#include "planar/metrics.hpp"
#include "planar/plane.hpp"
#include "planar/segmentation.hpp"
#include "planar/view_consistency.hpp"

namespace planar::io {

namespace fs = std::filesystem;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

// Raw depth: "PGDM", u32 width, u32 height, u32 reserved (0), then
// width*height little-endian float32 values, row-major.
inline constexpr std::size_t kRawDepthHeaderBytes = 16;

std::vector<std::uint8_t> encode_depth_raw(const DepthMap& depth);
DepthMap decode_depth_raw(std::span<const std::uint8_t> bytes);

/// 16-bit grayscale PNG in millimeters; throws kRange for depths that do not
/// fit in 16 bits.
std::vector<std::uint8_t> encode_depth_png(const DepthMap& depth);
DepthMap decode_depth_png(std::span<const std::uint8_t> bytes);

/// Chooses the encoding from the extension (.pgdm or .png).
void write_depth(const fs::path& path, const DepthMap& depth);
DepthMap read_depth(const fs::path& path);

/// 8-bit grayscale PNG; nonzero pixels are members.
void write_mask(const fs::path& path, const InstanceMask& mask);
InstanceMask read_mask(const fs::path& path);

/// 16-bit grayscale PNG; kNonPlanar is stored as 65535.
void write_segmentation(const fs::path& path, const SegmentationMap& seg);
SegmentationMap read_segmentation(const fs::path& path);

struct PlaneRecord {
  int id = 0;
  Plane plane;
  int anchor_id = -1;  // -1 when no anchor was assigned
  double confidence = 1.0;
  bool is_layout = false;
};

inline constexpr const char* kPlaneTableHeader =
    "id,nx,ny,nz,d,anchor_id,confidence,is_layout";

std::string format_plane_table(const std::vector<PlaneRecord>& rows);
std::vector<PlaneRecord> parse_plane_table(const std::string& text);
void write_plane_table(const fs::path& path, const std::vector<PlaneRecord>& rows);
std::vector<PlaneRecord> read_plane_table(const fs::path& path);

/// One line: "fx fy cx cy width height".
void write_intrinsics(const fs::path& path, const CameraIntrinsics& K);
CameraIntrinsics read_intrinsics(const fs::path& path);

/// Three lines "r0 r1 r2 t" holding world_from_camera.
void write_pose(const fs::path& path, const Pose& pose);
Pose read_pose(const fs::path& path);

/// Line "k", then k lines "nx ny nz" with 9 significant digits.
std::string format_anchors(const AnchorSet& anchors);
AnchorSet parse_anchors(const std::string& text);
void write_anchors(const fs::path& path, const AnchorSet& anchors);
AnchorSet read_anchors(const fs::path& path);
/// Whitespace separated "nx ny nz" per line; blank lines and '#' comments skipped.
std::vector<Vec3> read_normals(const fs::path& path);

/// On-disk frame directory:
///   intrinsics.txt, pose.txt, depth.pgdm|depth.png,
///   sensor_depth.pgdm|sensor_depth.png, planes.csv, masks/mask_<id>.png,
///   complete_masks/mask_<id>.png, segmentation.png, layout_depth.pgdm
/// Only intrinsics and depth are required; planes.csv and masks/ go together.
struct FrameBundle {
  explicit FrameBundle(CameraIntrinsics intrinsics) : K(intrinsics) {}

  CameraIntrinsics K;
  std::optional<Pose> pose;
  DepthMap depth;
  std::optional<DepthMap> sensor_depth;
  std::vector<PlaneRecord> planes;
  std::vector<InstanceMask> masks;
  std::optional<std::vector<InstanceMask>> complete_masks;
  std::optional<SegmentationMap> segmentation;
};

FrameBundle read_frame(const fs::path& dir);
void write_frame(const fs::path& dir, const FrameBundle& frame);
/// True when `dir` holds a frame (has intrinsics.txt).
bool is_frame_dir(const fs::path& dir);

FrameAnnotation to_annotation(const FrameBundle& frame);
FramePrediction to_prediction(const FrameBundle& frame);
PlanarScene to_scene(const FrameBundle& frame);

/// JSON with fields in declaration order of EvalReport.
std::string format_report_json(const EvalReport& report);
/// "threshold,recall" header plus one row per threshold.
std::string format_curve_csv(const RecallCurve& curve);

std::string read_text(const fs::path& path);
std::vector<std::uint8_t> read_bytes(const fs::path& path);
void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes);
void write_text(const fs::path& path, const std::string& text);

}  // namespace planar::io
