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
#include <span>
#include <vector>

namespace planar::io::detail {

/// Single-channel PNG pixels, widened to 16 bits.
struct GrayImage {
  int width = 0;
  int height = 0;
  int bit_depth = 8;  // 8 or 16
  std::vector<std::uint16_t> samples;
};

std::vector<std::uint8_t> encode_gray_png(const GrayImage& image);
/// Accepts 8- and 16-bit grayscale only; throws kFormat otherwise.
GrayImage decode_gray_png(std::span<const std::uint8_t> bytes);

}  // namespace planar::io::detail
