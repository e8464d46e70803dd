#pragma once

#include <stdexcept>
#include <string>

namespace mapalign {

// Rotation too close to a gimbal singularity to extract a meaningful yaw.
struct DegenerateAttitudeError : std::runtime_error {
  explicit DegenerateAttitudeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Point configuration does not determine a rigid transform (e.g. collinear).
struct DegenerateGeometryError : std::runtime_error {
  explicit DegenerateGeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientPointsError : std::runtime_error {
  explicit InsufficientPointsError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ProblemTooLargeError : std::runtime_error {
  explicit ProblemTooLargeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mapalign
