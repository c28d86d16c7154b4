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

#include "planar/error.hpp"

#include <atomic>
#include <iostream>

namespace planar {
namespace {

void stderr_sink(std::string_view message) {
  std::cerr << "warning: " << message << '\n';
}

std::atomic<WarningSink> g_sink{&stderr_sink};

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kBehindCamera: return "behind-camera";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kInsufficientData: return "insufficient-data";
    case ErrorKind::kDegenerateGeometry: return "degenerate-geometry";
    case ErrorKind::kDegenerateEncoding: return "degenerate-encoding";
    case ErrorKind::kEmptySupport: return "empty-support";
    case ErrorKind::kEmptyOverlap: return "empty-overlap";
    case ErrorKind::kUndefinedRecall: return "undefined-recall";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

WarningSink set_warning_sink(WarningSink sink) {
  return g_sink.exchange(sink ? sink : &stderr_sink);
}

void warn(std::string_view message) { g_sink.load()(message); }

}  // namespace planar
