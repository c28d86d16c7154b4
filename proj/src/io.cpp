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

#include "planar/io.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "png_codec.hpp"

namespace planar::io {
namespace {

constexpr std::size_t kMaxRawPixels = std::size_t{1} << 28;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
         (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

Error format_error(const std::string& what, std::size_t offset) {
  return Error(ErrorKind::kFormat, what + " at byte offset " + std::to_string(offset));
}

Error parse_error(const fs::path& path, std::size_t line, const std::string& what) {
  return Error(ErrorKind::kParse,
               path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

// Strict numeric parsing: the whole token must be consumed.
bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno == 0 && std::isfinite(out);
}

bool parse_int(const std::string& s, long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtol(s.c_str(), &end, 10);
  return end == s.c_str() + s.size() && errno == 0;
}

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<double> read_numbers(const fs::path& path, std::size_t expected) {
  std::vector<double> values;
  const auto lines = content_lines(read_text(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const auto& tok : tokens(lines[i])) {
      double v;
      if (!parse_double(tok, v)) throw parse_error(path, i + 1, "bad number '" + tok + "'");
      values.push_back(v);
    }
  }
  if (values.size() != expected) {
    throw Error(ErrorKind::kParse, path.string() + ": expected " +
                                       std::to_string(expected) + " numbers, found " +
                                       std::to_string(values.size()));
  }
  return values;
}

fs::path first_existing(const fs::path& dir, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (fs::exists(dir / n)) return dir / n;
  }
  return {};
}

fs::path mask_path(const fs::path& dir, const char* sub, int id) {
  return dir / sub / ("mask_" + std::to_string(id) + ".png");
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "short write to " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                              text.size()));
}

std::vector<std::uint8_t> encode_depth_raw(const DepthMap& depth) {
  std::vector<std::uint8_t> out;
  out.reserve(kRawDepthHeaderBytes + depth.size() * 4);
  for (char c : {'P', 'G', 'D', 'M'}) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, static_cast<std::uint32_t>(depth.width()));
  put_u32(out, static_cast<std::uint32_t>(depth.height()));
  put_u32(out, 0);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const double z = depth.valid(i) ? depth[i] : 0.0;
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(z)));
  }
  return out;
}

DepthMap decode_depth_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kRawDepthHeaderBytes) {
    throw format_error("truncated raw depth header", bytes.size());
  }
  if (std::memcmp(bytes.data(), "PGDM", 4) != 0) {
    throw format_error("bad raw depth magic", 0);
  }
  const std::uint32_t w = get_u32(bytes.data() + 4);
  const std::uint32_t h = get_u32(bytes.data() + 8);
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20) ||
      std::size_t{w} * h > kMaxRawPixels) {
    throw format_error("raw depth dimensions out of range", 4);
  }
  if (get_u32(bytes.data() + 12) != 0) {
    throw format_error("reserved raw depth field is not zero", 12);
  }
  const std::size_t expected = kRawDepthHeaderBytes + std::size_t{w} * h * 4;
  if (bytes.size() < expected) {
    throw format_error("truncated raw depth payload", bytes.size());
  }
  if (bytes.size() > expected) {
    throw format_error("trailing bytes after raw depth payload", expected);
  }
  DepthMap depth(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < depth.size(); ++i) {
    const std::size_t off = kRawDepthHeaderBytes + 4 * i;
    const float z = std::bit_cast<float>(get_u32(bytes.data() + off));
    if (!std::isfinite(z) || z < 0.0f) {
      throw format_error("depth value is negative or not finite", off);
    }
    depth[i] = z;
  }
  return depth;
}

std::vector<std::uint8_t> encode_depth_png(const DepthMap& depth) {
  detail::GrayImage img{depth.width(), depth.height(), 16, {}};
  img.samples.resize(depth.size());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (!depth.valid(i)) continue;
    const double mm = std::round(depth[i] * 1000.0);
    if (mm > 65535.0) {
      throw Error(ErrorKind::kRange, "depth " + format_double(depth[i]) +
                                         " m exceeds the 16-bit millimeter range");
    }
    img.samples[i] = static_cast<std::uint16_t>(mm);
  }
  return detail::encode_gray_png(img);
}

DepthMap decode_depth_png(std::span<const std::uint8_t> bytes) {
  const auto img = detail::decode_gray_png(bytes);
  if (img.bit_depth != 16) {
    throw Error(ErrorKind::kFormat, "depth PNG must be 16-bit (byte offset 24)");
  }
  DepthMap depth(img.width, img.height);
  for (std::size_t i = 0; i < depth.size(); ++i) depth[i] = img.samples[i] / 1000.0;
  return depth;
}

void write_depth(const fs::path& path, const DepthMap& depth) {
  if (path.extension() == ".png") {
    write_bytes(path, encode_depth_png(depth));
  } else if (path.extension() == ".pgdm") {
    write_bytes(path, encode_depth_raw(depth));
  } else {
    throw Error(ErrorKind::kFormat, "unknown depth extension: " + path.string());
  }
}

DepthMap read_depth(const fs::path& path) {
  try {
    if (path.extension() == ".png") return decode_depth_png(read_bytes(path));
    if (path.extension() == ".pgdm") return decode_depth_raw(read_bytes(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
  throw Error(ErrorKind::kFormat, "unknown depth extension: " + path.string());
}

void write_mask(const fs::path& path, const InstanceMask& mask) {
  detail::GrayImage img{mask.width(), mask.height(), 8, {}};
  img.samples.resize(mask.membership.size());
  for (std::size_t i = 0; i < img.samples.size(); ++i) {
    img.samples[i] = mask.contains(i) ? 255 : 0;
  }
  write_bytes(path, detail::encode_gray_png(img));
}

InstanceMask read_mask(const fs::path& path) {
  detail::GrayImage img;
  try {
    img = detail::decode_gray_png(read_bytes(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
  if (img.bit_depth != 8) {
    throw Error(ErrorKind::kFormat, path.string() + ": mask PNG must be 8-bit");
  }
  InstanceMask mask(img.width, img.height);
  for (std::size_t i = 0; i < img.samples.size(); ++i) {
    mask.membership[i] = img.samples[i] ? 1 : 0;
  }
  return mask;
}

void write_segmentation(const fs::path& path, const SegmentationMap& seg) {
  detail::GrayImage img{seg.width(), seg.height(), 16, {}};
  img.samples.assign(seg.data().begin(), seg.data().end());
  write_bytes(path, detail::encode_gray_png(img));
}

SegmentationMap read_segmentation(const fs::path& path) {
  const auto img = detail::decode_gray_png(read_bytes(path));
  if (img.bit_depth != 16) {
    throw Error(ErrorKind::kFormat, path.string() + ": segmentation PNG must be 16-bit");
  }
  SegmentationMap seg(img.width, img.height);
  for (std::size_t i = 0; i < seg.size(); ++i) seg[i] = img.samples[i];
  return seg;
}

std::string format_plane_table(const std::vector<PlaneRecord>& rows) {
  std::string out = std::string(kPlaneTableHeader) + "\n";
  for (const auto& r : rows) {
    const Vec3& n = r.plane.normal();
    out += std::to_string(r.id) + "," + format_double(n.x()) + "," +
           format_double(n.y()) + "," + format_double(n.z()) + "," +
           format_double(r.plane.offset()) + "," + std::to_string(r.anchor_id) + "," +
           format_double(r.confidence) + "," + (r.is_layout ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<PlaneRecord> parse_plane_table(const std::string& text) {
  const auto lines = content_lines(text);
  auto fail = [](std::size_t line, const std::string& what) {
    return Error(ErrorKind::kParse, "plane table line " + std::to_string(line) + ": " + what);
  };
  if (lines.empty() || lines[0] != kPlaneTableHeader) {
    throw fail(1, std::string("expected header '") + kPlaneTableHeader + "'");
  }
  std::vector<PlaneRecord> rows;
  std::map<long, std::size_t> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;
      throw fail(lineno, "empty row");
    }
    const auto f = split(lines[i], ',');
    if (f.size() != 8) throw fail(lineno, "expected 8 fields, found " + std::to_string(f.size()));
    long id, anchor, layout;
    double nx, ny, nz, d, conf;
    if (!parse_int(f[0], id) || id < 0 || id > std::numeric_limits<int>::max()) {
      throw fail(lineno, "bad id '" + f[0] + "'");
    }
    if (!parse_double(f[1], nx) || !parse_double(f[2], ny) || !parse_double(f[3], nz)) {
      throw fail(lineno, "bad normal");
    }
    if (!parse_double(f[4], d)) throw fail(lineno, "bad offset '" + f[4] + "'");
    if (!parse_int(f[5], anchor) || anchor < -1 || anchor > std::numeric_limits<int>::max()) {
      throw fail(lineno, "bad anchor_id '" + f[5] + "'");
    }
    if (!parse_double(f[6], conf) || conf < 0.0 || conf > 1.0) {
      throw fail(lineno, "confidence must lie in [0, 1]");
    }
    if (!parse_int(f[7], layout) || (layout != 0 && layout != 1)) {
      throw fail(lineno, "is_layout must be 0 or 1");
    }
    if (seen.count(id)) throw fail(lineno, "duplicate id " + f[0]);
    seen[id] = rows.size();

    Vec3 n(nx, ny, nz);
    const double norm = n.norm();
    if (!(norm > 1e-9)) throw fail(lineno, "zero normal");
    if (std::abs(norm - 1.0) > 1e-6) {
      warn("plane table line " + std::to_string(lineno) + ": normal norm " +
           format_double(norm) + " renormalized");
    }
    if (std::abs(norm - 1.0) > 1e-15) n /= norm;
    rows.push_back({static_cast<int>(id), Plane(n, d), static_cast<int>(anchor), conf,
                    layout == 1});
  }
  return rows;
}

void write_plane_table(const fs::path& path, const std::vector<PlaneRecord>& rows) {
  write_text(path, format_plane_table(rows));
}

std::vector<PlaneRecord> read_plane_table(const fs::path& path) {
  try {
    return parse_plane_table(read_text(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kParse) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_intrinsics(const fs::path& path, const CameraIntrinsics& K) {
  write_text(path, format_double(K.fx()) + " " + format_double(K.fy()) + " " +
                       format_double(K.cx()) + " " + format_double(K.cy()) + " " +
                       std::to_string(K.width()) + " " + std::to_string(K.height()) +
                       "\n");
}

CameraIntrinsics read_intrinsics(const fs::path& path) {
  const auto v = read_numbers(path, 6);
  if (v[4] != std::floor(v[4]) || v[5] != std::floor(v[5]) || v[4] < 1 || v[5] < 1 ||
      v[4] > (1 << 20) || v[5] > (1 << 20)) {
    throw Error(ErrorKind::kParse, path.string() + ": width and height must be positive integers");
  }
  try {
    return CameraIntrinsics(v[0], v[1], v[2], v[3], static_cast<int>(v[4]),
                            static_cast<int>(v[5]));
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

void write_pose(const fs::path& path, const Pose& pose) {
  std::string out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out += format_double(pose.rotation()(r, c)) + " ";
    out += format_double(pose.translation()(r)) + "\n";
  }
  write_text(path, out);
}

Pose read_pose(const fs::path& path) {
  const auto v = read_numbers(path, 12);
  Mat3 R;
  Vec3 t;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) R(r, c) = v[static_cast<std::size_t>(4 * r + c)];
    t(r) = v[static_cast<std::size_t>(4 * r + 3)];
  }
  try {
    return Pose(R, t);
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

std::string format_anchors(const AnchorSet& anchors) {
  std::string out = std::to_string(anchors.size()) + "\n";
  char buf[96];
  for (const auto& a : anchors.anchors()) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", a.x(), a.y(), a.z());
    out += buf;
  }
  return out;
}

AnchorSet parse_anchors(const std::string& text) {
  const auto lines = content_lines(text);
  auto fail = [](std::size_t line, const std::string& what) {
    return Error(ErrorKind::kParse, "anchor file line " + std::to_string(line) + ": " + what);
  };
  long k;
  if (lines.empty() || !parse_int(lines[0], k) || k < 1) throw fail(1, "expected anchor count");
  if (lines.size() < static_cast<std::size_t>(k) + 1) throw fail(lines.size(), "too few anchors");
  std::vector<Vec3> anchors;
  for (std::size_t i = 1; i <= static_cast<std::size_t>(k); ++i) {
    const auto t = tokens(lines[i]);
    Vec3 a;
    if (t.size() != 3 || !parse_double(t[0], a.x()) || !parse_double(t[1], a.y()) ||
        !parse_double(t[2], a.z())) {
      throw fail(i + 1, "expected 'nx ny nz'");
    }
    // Nine significant digits leave ~1e-9 of slack in the norm.
    if (std::abs(a.norm() - 1.0) > 1e-6) throw fail(i + 1, "anchor is not unit length");
    anchors.push_back(a.normalized());
  }
  for (std::size_t i = static_cast<std::size_t>(k) + 1; i < lines.size(); ++i) {
    if (!tokens(lines[i]).empty()) throw fail(i + 1, "unexpected trailing content");
  }
  return AnchorSet(std::move(anchors));
}

void write_anchors(const fs::path& path, const AnchorSet& anchors) {
  write_text(path, format_anchors(anchors));
}

AnchorSet read_anchors(const fs::path& path) { return parse_anchors(read_text(path)); }

std::vector<Vec3> read_normals(const fs::path& path) {
  std::vector<Vec3> out;
  const auto lines = content_lines(read_text(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto t = tokens(lines[i]);
    if (t.empty() || t[0][0] == '#') continue;
    Vec3 n;
    if (t.size() != 3 || !parse_double(t[0], n.x()) || !parse_double(t[1], n.y()) ||
        !parse_double(t[2], n.z())) {
      throw parse_error(path, i + 1, "expected 'nx ny nz'");
    }
    out.push_back(n);
  }
  return out;
}

bool is_frame_dir(const fs::path& dir) { return fs::exists(dir / "intrinsics.txt"); }

FrameBundle read_frame(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::kIo, "not a directory: " + dir.string());
  FrameBundle frame(read_intrinsics(dir / "intrinsics.txt"));
  const auto& K = frame.K;
  auto check_size = [&](int w, int h, const fs::path& p) {
    if (w != K.width() || h != K.height()) {
      throw Error(ErrorKind::kShape, p.string() + " is " + std::to_string(w) + "x" +
                                         std::to_string(h) + ", intrinsics say " +
                                         std::to_string(K.width()) + "x" +
                                         std::to_string(K.height()));
    }
  };

  if (fs::exists(dir / "pose.txt")) frame.pose = read_pose(dir / "pose.txt");

  const fs::path depth_path = first_existing(dir, {"depth.pgdm", "depth.png"});
  if (depth_path.empty()) throw Error(ErrorKind::kIo, dir.string() + ": missing depth.pgdm or depth.png");
  frame.depth = read_depth(depth_path);
  check_size(frame.depth.width(), frame.depth.height(), depth_path);

  const fs::path sensor = first_existing(dir, {"sensor_depth.pgdm", "sensor_depth.png"});
  if (!sensor.empty()) {
    frame.sensor_depth = read_depth(sensor);
    check_size(frame.sensor_depth->width(), frame.sensor_depth->height(), sensor);
  }

  if (fs::exists(dir / "planes.csv")) {
    frame.planes = read_plane_table(dir / "planes.csv");
    for (const auto& r : frame.planes) {
      const fs::path mp = mask_path(dir, "masks", r.id);
      if (!fs::exists(mp)) throw Error(ErrorKind::kIo, "missing mask for plane " + std::to_string(r.id) + ": " + mp.string());
      InstanceMask m = read_mask(mp);
      check_size(m.width(), m.height(), mp);
      m.confidence = r.confidence;
      frame.masks.push_back(std::move(m));
    }
    if (fs::is_directory(dir / "complete_masks")) {
      std::vector<InstanceMask> complete;
      for (const auto& r : frame.planes) {
        const fs::path mp = mask_path(dir, "complete_masks", r.id);
        if (!fs::exists(mp)) throw Error(ErrorKind::kIo, "missing complete mask: " + mp.string());
        InstanceMask m = read_mask(mp);
        check_size(m.width(), m.height(), mp);
        complete.push_back(std::move(m));
      }
      frame.complete_masks = std::move(complete);
    }
  }

  if (fs::exists(dir / "segmentation.png")) {
    frame.segmentation = read_segmentation(dir / "segmentation.png");
    check_size(frame.segmentation->width(), frame.segmentation->height(),
               dir / "segmentation.png");
    for (Label l : frame.segmentation->data()) {
      if (l != kNonPlanar && l >= frame.planes.size()) {
        throw Error(ErrorKind::kFormat, "segmentation label " + std::to_string(l) +
                                            " references a missing plane");
      }
    }
  }
  return frame;
}

void write_frame(const fs::path& dir, const FrameBundle& frame) {
  fs::create_directories(dir);
  write_intrinsics(dir / "intrinsics.txt", frame.K);
  if (frame.pose) write_pose(dir / "pose.txt", *frame.pose);
  write_depth(dir / "depth.pgdm", frame.depth);
  if (frame.sensor_depth) write_depth(dir / "sensor_depth.pgdm", *frame.sensor_depth);
  if (frame.masks.size() != frame.planes.size()) {
    throw Error(ErrorKind::kShape, "plane and mask counts differ");
  }
  write_plane_table(dir / "planes.csv", frame.planes);
  fs::remove_all(dir / "masks");
  for (std::size_t i = 0; i < frame.planes.size(); ++i) {
    write_mask(mask_path(dir, "masks", frame.planes[i].id), frame.masks[i]);
  }
  if (frame.complete_masks) {
    fs::remove_all(dir / "complete_masks");
    for (std::size_t i = 0; i < frame.planes.size(); ++i) {
      write_mask(mask_path(dir, "complete_masks", frame.planes[i].id),
                 (*frame.complete_masks)[i]);
    }
  }
  if (frame.segmentation) write_segmentation(dir / "segmentation.png", *frame.segmentation);
}

FrameAnnotation to_annotation(const FrameBundle& frame) {
  FrameAnnotation a(frame.K);
  for (const auto& r : frame.planes) {
    a.planes.push_back(r.plane);
    a.is_layout.push_back(r.is_layout);
  }
  a.visible_masks = frame.masks;
  a.complete_masks = frame.complete_masks;
  a.gt_depth = frame.depth;
  a.pose = frame.pose.value_or(Pose::identity());
  return a;
}

FramePrediction to_prediction(const FrameBundle& frame) {
  FramePrediction p;
  for (std::size_t i = 0; i < frame.planes.size(); ++i) {
    p.detections.push_back({frame.planes[i].plane, frame.masks[i], frame.planes[i].confidence});
  }
  p.depth = frame.depth;
  p.segmentation = frame.segmentation;
  return p;
}

PlanarScene to_scene(const FrameBundle& frame) {
  PlanarScene s;
  for (const auto& r : frame.planes) s.planes.push_back(r.plane);
  s.masks = frame.masks;
  s.fallback_depth = frame.depth;
  return s;
}

std::string format_report_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["recall_curve"]["thresholds"] = r.recall_curve.thresholds;
  j["recall_curve"]["recall"] = r.recall_curve.recall;
  j["ap_04"] = r.ap_04;
  j["ap_06"] = r.ap_06;
  j["ap_09"] = r.ap_09;
  j["voi"] = r.voi;
  j["ri"] = r.ri;
  j["sc"] = r.sc;
  j["rel"] = r.rel;
  j["log10"] = r.log10;
  j["rmse"] = r.rmse;
  j["param_mean"] = r.param_mean;
  j["param_weighted"] = r.param_weighted;
  return j.dump(2) + "\n";
}

std::string format_curve_csv(const RecallCurve& curve) {
  std::string out = "threshold,recall\n";
  char buf[64];
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.17g\n", curve.thresholds[i], curve.recall[i]);
    out += buf;
  }
  return out;
}

}  // namespace planar::io
