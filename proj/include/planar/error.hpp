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

#include <stdexcept>
#include <string>
#include <string_view>

namespace planar {

enum class ErrorKind {
  kDomain,
  kBehindCamera,
  kShape,
  kInsufficientData,
  kDegenerateGeometry,
  kDegenerateEncoding,
  kEmptySupport,
  kEmptyOverlap,
  kUndefinedRecall,
  kFormat,
  kRange,
  kParse,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. The kind lets callers branch
/// without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Non-fatal diagnostics (renormalized normals, AP without ground truth).
// Defaults to stderr; tests and bindings may redirect or silence it.
using WarningSink = void (*)(std::string_view);
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace planar
