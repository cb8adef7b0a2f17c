#pragma once

// End-to-end planar pose from pixels.
//
// The reported pose is that of the planar frame P in R = P * blockdiag(C, 1),
// where C is the mounting rotation given in the request. Internally the
// solver folds the ZYZ angle alpha of C into P and spins the image by gamma;
// both are undone before returning, so callers never see the absorbed frame.
// A body pose composed with C reproduces the camera-to-world transform.

#include <optional>
#include <vector>

#include "planar_pnp/geometry.hpp"
#include "planar_pnp/initializer.hpp"
#include "planar_pnp/refiner.hpp"

namespace planar_pnp {

struct SolveRequest {
  std::vector<WorldPoint> world_points;
  std::vector<PixelPoint> pixels;
  Intrinsics intrinsics;
  CameraOffset camera_offset;
  /// Heading of P in radians; skips the polynomial initializer when set.
  std::optional<double> heading_prior;
  RefineOptions refine_options;
};

struct Solution {
  Pose2D pose;
  double reprojection_error{0.0};
  /// Absent when the heading prior was used.
  std::optional<InitDiagnostics> init_diagnostics;
  RefineResult refine_result;
  /// Only two correspondences: exactly determined up to noise.
  bool low_redundancy{false};
};

/// Throws InvalidInput, DegenerateRotation, TooFewValidTerms,
/// DegenerateResultant, NoCandidates, RankDeficient or NumericalFailure.
Solution Solve(const SolveRequest& req);

/// Normalized, gamma-rectified correspondences of a request.
std::vector<Correspondence> RectifiedCorrespondences(const SolveRequest& req);

}  // namespace planar_pnp
