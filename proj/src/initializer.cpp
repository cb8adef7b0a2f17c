#include "planar_pnp/initializer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "planar_pnp/reprojection.hpp"

namespace planar_pnp {

namespace {

constexpr double kMaxNormalCondition = 1e12;

CandidatePose ScoreCandidate(const Pose2D& pose,
                             std::span<const Correspondence> corrs,
                             double beta, double* raw_error) {
  CandidatePose cand;
  cand.pose = pose;
  double err = 0.0;
  for (const Correspondence& c : corrs) {
    Projection proj;
    try {
      proj = Project(pose, beta, c.world);
    } catch (const ProjectionSingular&) {
      ++cand.depth_violations;
      continue;
    }
    if (!(proj.depth > 0.0)) ++cand.depth_violations;
    const double rx = c.image.qx - proj.q.qx;
    const double ry = c.image.qy - proj.q.qy;
    err += rx * rx + ry * ry;
  }
  *raw_error = err;
  if (cand.depth_violations == 0) cand.reproj_error = err;
  return cand;
}

}  // namespace

std::optional<std::size_t> SelectCandidate(
    std::span<const CandidatePose> candidates) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].depth_violations != 0) continue;
    // Strict comparison keeps the lowest index on ties.
    if (!best || candidates[i].reproj_error < candidates[*best].reproj_error) {
      best = i;
    }
  }
  return best;
}

std::vector<RectifiedRay> ComputeRays(std::span<const Correspondence> corrs,
                                      double beta) {
  std::vector<RectifiedRay> rays;
  rays.reserve(corrs.size());
  for (const Correspondence& c : corrs) rays.push_back(SphericalRay(c.image, beta));
  return rays;
}

std::vector<ElevationTermInput> ElevationTerms(
    std::span<const Correspondence> corrs, std::span<const RectifiedRay> rays) {
  std::vector<ElevationTermInput> terms;
  terms.reserve(corrs.size());
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const WorldPoint& p = corrs[i].world;
    terms.push_back({p.x, p.y, p.z, -rays[i].phi});
  }
  return terms;
}

std::pair<double, double> HeadingCandidates(double x, double y,
                                            std::span<const RectifiedRay> rays,
                                            std::span<const WorldPoint> points) {
  double sin_sum = 0.0;
  double cos_sum = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dx = x - points[i].x;
    const double dy = y - points[i].y;
    const double dist = std::hypot(dx, dy);
    if (dist == 0.0) continue;
    any = true;
    const double c = std::cos(rays[i].theta);
    const double s = std::sin(rays[i].theta);
    sin_sum += (dx * s - dy * c) / dist;
    cos_sum += (dx * c + dy * s) / dist;
  }
  if (!any) {
    throw DegeneratePosition(
        "every point coincides with the candidate position in the plane");
  }
  const double delta = std::atan2(sin_sum, cos_sum);
  return {WrapAngle(-delta), WrapAngle(std::numbers::pi - delta)};
}

std::pair<Pose2D, InitDiagnostics> InitialPose(
    std::span<const Correspondence> corrs, std::span<const RectifiedRay> rays,
    const CubicSystem& sys, double beta) {
  const std::vector<PlanarPosition> positions = CandidatePositions(sys);
  std::vector<WorldPoint> points;
  points.reserve(corrs.size());
  for (const Correspondence& c : corrs) points.push_back(c.world);

  InitDiagnostics diag;
  diag.n_position_candidates = positions.size();
  std::vector<double> raw_errors;
  for (const PlanarPosition& pos : positions) {
    std::pair<double, double> headings;
    try {
      headings = HeadingCandidates(pos.x, pos.y, rays, points);
    } catch (const DegeneratePosition&) {
      continue;
    }
    for (double theta : {headings.first, headings.second}) {
      double raw = 0.0;
      diag.candidates.push_back(
          ScoreCandidate({pos.x, pos.y, theta}, corrs, beta, &raw));
      raw_errors.push_back(raw);
    }
  }
  diag.n_pose_candidates = diag.candidates.size();
  if (diag.candidates.empty()) {
    throw NoCandidates("no candidate position admits a heading");
  }

  if (const auto chosen = SelectCandidate(diag.candidates)) {
    diag.chosen_index = *chosen;
    return {diag.candidates[diag.chosen_index].pose, std::move(diag)};
  }

  diag.all_rejected = true;
  diag.chosen_index = 0;
  for (std::size_t i = 1; i < diag.candidates.size(); ++i) {
    const CandidatePose& c = diag.candidates[i];
    const CandidatePose& best = diag.candidates[diag.chosen_index];
    if (c.depth_violations < best.depth_violations ||
        (c.depth_violations == best.depth_violations &&
         raw_errors[i] < raw_errors[diag.chosen_index])) {
      diag.chosen_index = i;
    }
  }
  const Pose2D fallback = diag.candidates[diag.chosen_index].pose;
  throw AllCandidatesRejected(
      "every initial candidate places a point behind the camera", fallback,
      std::move(diag));
}

PlanarPosition PositionFromHeading(double theta,
                                   std::span<const RectifiedRay> rays,
                                   std::span<const WorldPoint> points) {
  // Normal n_i = (sin psi_i, -cos psi_i) of the ray through point i with
  // world direction psi_i = theta + theta_i; solve sum n n^T X = sum n n^T p.
  double sxx = 0.0, sxy = 0.0, syy = 0.0, bx = 0.0, by = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double psi = theta + rays[i].theta;
    const double nx = std::sin(psi);
    const double ny = -std::cos(psi);
    const double offset = nx * points[i].x + ny * points[i].y;
    sxx += nx * nx;
    sxy += nx * ny;
    syy += ny * ny;
    bx += nx * offset;
    by += ny * offset;
  }
  // Eigenvalues of the symmetric 2x2 normal matrix.
  const double mean = 0.5 * (sxx + syy);
  const double radius = std::hypot(0.5 * (sxx - syy), sxy);
  const double lo = mean - radius;
  const double hi = mean + radius;
  if (!(hi > 0.0) || !(lo * kMaxNormalCondition > hi)) {
    throw RankDeficient(
        "camera rays are parallel in the plane; position is unobservable");
  }
  const double det = sxx * syy - sxy * sxy;
  return {(syy * bx - sxy * by) / det, (sxx * by - sxy * bx) / det};
}

}  // namespace planar_pnp
