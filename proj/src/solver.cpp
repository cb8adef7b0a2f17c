#include "planar_pnp/solver.hpp"

#include <cmath>
#include <string>

#include "planar_pnp/errors.hpp"
#include "planar_pnp/reprojection.hpp"

namespace planar_pnp {

namespace {

void Validate(const SolveRequest& req) {
  if (req.world_points.size() != req.pixels.size()) {
    throw InvalidInput("world_points and pixels differ in length (" +
                       std::to_string(req.world_points.size()) + " vs " +
                       std::to_string(req.pixels.size()) + ")");
  }
  if (req.world_points.size() < 2) {
    throw InvalidInput("at least 2 correspondences are required, got " +
                       std::to_string(req.world_points.size()));
  }
  const Intrinsics& k = req.intrinsics;
  if (!(k.fx > 0.0) || !(k.fy > 0.0) || !std::isfinite(k.fx) ||
      !std::isfinite(k.fy) || !std::isfinite(k.cx) || !std::isfinite(k.cy)) {
    throw InvalidInput("intrinsics must have finite fx > 0 and fy > 0");
  }
  for (std::size_t i = 0; i < req.world_points.size(); ++i) {
    const WorldPoint& p = req.world_points[i];
    const PixelPoint& q = req.pixels[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) ||
        !std::isfinite(q.u) || !std::isfinite(q.v)) {
      throw InvalidInput("correspondence " + std::to_string(i) +
                         " is not finite");
    }
  }
  if (req.heading_prior && !std::isfinite(*req.heading_prior)) {
    throw InvalidInput("heading prior is not finite");
  }
}

}  // namespace

std::vector<Correspondence> RectifiedCorrespondences(const SolveRequest& req) {
  std::vector<Correspondence> corrs;
  corrs.reserve(req.world_points.size());
  const double gamma = req.camera_offset.gamma();
  for (std::size_t i = 0; i < req.world_points.size(); ++i) {
    corrs.push_back({req.world_points[i],
                     Rectify(Normalize(req.intrinsics, req.pixels[i]), gamma)});
  }
  return corrs;
}

Solution Solve(const SolveRequest& req) {
  Validate(req);
  const double alpha = req.camera_offset.alpha();
  const double beta = req.camera_offset.beta();
  const std::vector<Correspondence> corrs = RectifiedCorrespondences(req);
  const std::vector<RectifiedRay> rays = ComputeRays(corrs, beta);

  Solution sol;
  sol.low_redundancy = corrs.size() == 2;
  Pose2D start;
  if (req.heading_prior) {
    std::vector<WorldPoint> points(req.world_points);
    const double theta = WrapAngle(*req.heading_prior + alpha);
    const PlanarPosition pos = PositionFromHeading(theta, rays, points);
    start = {pos.x, pos.y, theta};
  } else {
    const std::vector<ElevationTermInput> terms = ElevationTerms(corrs, rays);
    const CubicSystem sys = BuildSystem(terms);
    try {
      auto [pose, diag] = InitialPose(corrs, rays, sys, beta);
      start = pose;
      sol.init_diagnostics = std::move(diag);
    } catch (const AllCandidatesRejected& e) {
      start = e.fallback();
      sol.init_diagnostics = e.diagnostics();
    }
  }

  sol.refine_result = Refine(start, beta, corrs, req.refine_options);
  if (sol.refine_result.termination_reason ==
      TerminationReason::kNumericalFailure) {
    throw NumericalFailure(
        "refinement failed: damped normal equations stayed singular after " +
        std::to_string(sol.refine_result.iterations) + " iterations");
  }
  sol.reprojection_error = ReprojectionError(sol.refine_result.pose, beta, corrs);
  sol.pose = {sol.refine_result.pose.x, sol.refine_result.pose.y,
              WrapAngle(sol.refine_result.pose.theta - alpha)};
  return sol;
}

}  // namespace planar_pnp
