#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "planar_pnp/errors.hpp"
#include "planar_pnp/geometry.hpp"
#include "planar_pnp/polysolve.hpp"

namespace planar_pnp {

struct CandidatePose {
  Pose2D pose;
  /// +inf when any point falls behind the camera.
  double reproj_error{std::numeric_limits<double>::infinity()};
  std::size_t depth_violations{0};
};

struct InitDiagnostics {
  std::size_t n_position_candidates{0};
  std::size_t n_pose_candidates{0};
  std::size_t chosen_index{0};
  std::vector<CandidatePose> candidates;
  /// Every candidate had a point behind the camera; the pose with the
  /// fewest violations was used.
  bool all_rejected{false};
};

/// Thrown by InitialPose when every candidate puts a point behind the camera.
/// Carries the fallback (fewest violations, then lowest error) so callers can
/// continue with it.
class AllCandidatesRejected : public PnpError {
 public:
  AllCandidatesRejected(const std::string& what, Pose2D fallback,
                        InitDiagnostics diagnostics)
      : PnpError(what),
        fallback_(fallback),
        diagnostics_(std::move(diagnostics)) {}

  const Pose2D& fallback() const { return fallback_; }
  const InitDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  Pose2D fallback_;
  InitDiagnostics diagnostics_;
};

/// Rays in the gamma-rectified camera frame for a set of correspondences.
std::vector<RectifiedRay> ComputeRays(std::span<const Correspondence> corrs,
                                      double beta);

/// Elevation terms for BuildSystem. A ray's elevation is measured from the
/// point back toward the camera, so the sight-line elevation is its negation.
std::vector<ElevationTermInput> ElevationTerms(
    std::span<const Correspondence> corrs, std::span<const RectifiedRay> rays);

/// The two headings maximizing sum_i w_i cos(dtheta_i) at (x, y), with
/// w_i = 1 / |(x, y) - (px_i, py_i)|: returns (-delta, pi - delta), wrapped.
/// Throws DegeneratePosition when every point sits at (x, y) in the plane.
std::pair<double, double> HeadingCandidates(double x, double y,
                                            std::span<const RectifiedRay> rays,
                                            std::span<const WorldPoint> points);

/// Index of the lowest-error candidate with no depth violations, the lowest
/// index winning ties; nullopt when every candidate has a violation.
std::optional<std::size_t> SelectCandidate(std::span<const CandidatePose> candidates);

/// Best of up to 50 candidate poses by reprojection error. Throws
/// NoCandidates (from polysolve) or AllCandidatesRejected.
std::pair<Pose2D, InitDiagnostics> InitialPose(
    std::span<const Correspondence> corrs, std::span<const RectifiedRay> rays,
    const CubicSystem& sys, double beta);

/// Least-squares position for a known heading: minimizes the summed squared
/// perpendicular distances from the points to the camera rays, projected
/// onto the plane. Throws RankDeficient when every ray is parallel.
PlanarPosition PositionFromHeading(double theta,
                                   std::span<const RectifiedRay> rays,
                                   std::span<const WorldPoint> points);

}  // namespace planar_pnp
