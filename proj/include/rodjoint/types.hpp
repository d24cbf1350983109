// Copyright 2026 The Rodjoint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rodjoint {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Every failure the library reports carries one of these codes so that the
/// CLI and the session protocol can surface a stable identifier.
enum class ErrorCode {
  kStaleReference,
  kDegenerateEdge,
  kInvalidSides,
  kDegenerateHull,
  kBooleanFailure,
  kNotSolid,
  kIoError,
  kMalformedStl,
  kSwallowedEdge,
  kDegenerateAngle,
  kNoGroundContact,
  kEngraveFailure,
  kOversizeRod,
  kIndexOutOfRange,
  kStaleRevision,
  kInvalidDocument,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rodjoint
