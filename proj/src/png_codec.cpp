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

#include "png_codec.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <string>

#include "planar/error.hpp"

// libpng reports errors through longjmp. The functions that call setjmp keep
// only trivially destructible state alive across the jump.

namespace planar::io::detail {
namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 28;

struct ErrorSlot {
  char message[256];
};

void on_error(png_structp png, png_const_charp msg) {
  auto* slot = static_cast<ErrorSlot*>(png_get_error_ptr(png));
  std::snprintf(slot->message, sizeof(slot->message), "%s", msg);
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

struct MemoryReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t offset;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->offset + length > r->size) {
    png_error(png, "unexpected end of data");
  }
  std::memcpy(out, r->data + r->offset, length);
  r->offset += length;
}

struct MemoryWriter {
  std::vector<std::uint8_t>* out;
};

void write_to_memory(png_structp png, png_bytep data, png_size_t length) {
  auto* w = static_cast<MemoryWriter*>(png_get_io_ptr(png));
  w->out->insert(w->out->end(), data, data + length);
}

void flush_noop(png_structp) {}

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

// Returns false and fills `err` on failure. `rows` must hold height*rowbytes.
bool decode_rows(const std::uint8_t* data, std::size_t size, std::uint8_t* rows,
                 std::size_t rowbytes, int height, ErrorSlot* err) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, err, on_error, on_warning);
  if (!png) {
    std::snprintf(err->message, sizeof(err->message), "cannot allocate PNG reader");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  MemoryReader reader{data, size, 0};
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    return false;
  }
  png_set_read_fn(png, &reader, read_from_memory);
  png_read_info(png, info);
  if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) {
    png_set_interlace_handling(png);
  }
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != rowbytes) {
    png_error(png, "unexpected row size");
  }
  const int passes = png_get_interlace_type(png, info) != PNG_INTERLACE_NONE ? 7 : 1;
  for (int pass = 0; pass < passes; ++pass) {
    for (int y = 0; y < height; ++y) {
      png_read_row(png, rows + static_cast<std::size_t>(y) * rowbytes, nullptr);
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool encode_rows(const std::uint8_t* rows, int width, int height, int bit_depth,
                 std::vector<std::uint8_t>* out, ErrorSlot* err) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, err, on_error, on_warning);
  if (!png) {
    std::snprintf(err->message, sizeof(err->message), "cannot allocate PNG writer");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  MemoryWriter writer{out};
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, info ? &info : nullptr);
    return false;
  }
  png_set_write_fn(png, &writer, write_to_memory, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t rowbytes = static_cast<std::size_t>(width) * (bit_depth / 8);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, rows + static_cast<std::size_t>(y) * rowbytes);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

std::vector<std::uint8_t> encode_gray_png(const GrayImage& image) {
  if (image.bit_depth != 8 && image.bit_depth != 16) {
    throw Error(ErrorKind::kFormat, "PNG bit depth must be 8 or 16");
  }
  if (image.width < 1 || image.height < 1 ||
      image.samples.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw Error(ErrorKind::kShape, "PNG image has inconsistent dimensions");
  }
  const std::size_t bytes_per = static_cast<std::size_t>(image.bit_depth / 8);
  std::vector<std::uint8_t> rows(image.samples.size() * bytes_per);
  for (std::size_t i = 0; i < image.samples.size(); ++i) {
    if (bytes_per == 1) {
      rows[i] = static_cast<std::uint8_t>(image.samples[i]);
    } else {
      rows[2 * i] = static_cast<std::uint8_t>(image.samples[i] >> 8);
      rows[2 * i + 1] = static_cast<std::uint8_t>(image.samples[i] & 0xff);
    }
  }
  std::vector<std::uint8_t> out;
  ErrorSlot err{};
  if (!encode_rows(rows.data(), image.width, image.height, image.bit_depth, &out, &err)) {
    throw Error(ErrorKind::kFormat, std::string("PNG encode failed: ") + err.message);
  }
  return out;
}

GrayImage decode_gray_png(std::span<const std::uint8_t> bytes) {
  static const std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
    throw Error(ErrorKind::kFormat, "bad PNG signature at byte offset 0");
  }
  // IHDR must be the first chunk: length(4) type(4) width height depth color.
  if (bytes.size() < 8 + 8 + 13 || std::memcmp(bytes.data() + 12, "IHDR", 4) != 0) {
    throw Error(ErrorKind::kFormat, "missing IHDR chunk at byte offset 8");
  }
  const std::uint32_t width = be32(bytes.data() + 16);
  const std::uint32_t height = be32(bytes.data() + 20);
  const int bit_depth = bytes[24];
  const int color_type = bytes[25];
  if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20) ||
      std::size_t{width} * height > kMaxPixels) {
    throw Error(ErrorKind::kFormat, "PNG dimensions out of range at byte offset 16");
  }
  if (color_type != PNG_COLOR_TYPE_GRAY || (bit_depth != 8 && bit_depth != 16)) {
    throw Error(ErrorKind::kFormat,
                "PNG must be 8- or 16-bit grayscale (byte offset 24)");
  }
  GrayImage image;
  image.width = static_cast<int>(width);
  image.height = static_cast<int>(height);
  image.bit_depth = bit_depth;
  const std::size_t rowbytes = std::size_t{width} * (bit_depth / 8);
  std::vector<std::uint8_t> rows(rowbytes * height);
  ErrorSlot err{};
  if (!decode_rows(bytes.data(), bytes.size(), rows.data(), rowbytes,
                   image.height, &err)) {
    throw Error(ErrorKind::kFormat, std::string("PNG decode failed: ") + err.message);
  }
  image.samples.resize(std::size_t{width} * height);
  for (std::size_t i = 0; i < image.samples.size(); ++i) {
    image.samples[i] = bit_depth == 8
                           ? rows[i]
                           : static_cast<std::uint16_t>((rows[2 * i] << 8) | rows[2 * i + 1]);
  }
  return image;
}

}  // namespace planar::io::detail
