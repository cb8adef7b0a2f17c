#include "planar_pnp/reprojection.hpp"

#include <cmath>

#include "planar_pnp/errors.hpp"

namespace planar_pnp {

ResidualVector Residuals(const Pose2D& pose, double beta,
                         std::span<const Correspondence> corrs) {
  ResidualVector r(2 * static_cast<Eigen::Index>(corrs.size()));
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const Projection proj = Project(pose, beta, corrs[i].world);
    r(2 * i) = corrs[i].image.qx - proj.q.qx;
    r(2 * i + 1) = corrs[i].image.qy - proj.q.qy;
  }
  return r;
}

double ReprojectionError(const Pose2D& pose, double beta,
                         std::span<const Correspondence> corrs) {
  return Residuals(pose, beta, corrs).squaredNorm();
}

void Linearize(const Pose2D& pose, double beta,
               std::span<const Correspondence> corrs, ResidualVector* residuals,
               JacobianMatrix* jacobian) {
  const auto rows = 2 * static_cast<Eigen::Index>(corrs.size());
  if (residuals != nullptr) residuals->resize(rows);
  if (jacobian != nullptr) jacobian->resize(rows, 3);

  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);

  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const WorldPoint& p = corrs[i].world;
    const double dx = pose.x - p.x;
    const double dy = pose.y - p.y;
    // along = dx c + dy s, lateral = dy c - dx s
    // qx = (along cb + pz sb) / depth, qy = lateral / depth
    const double along = dx * c + dy * s;
    const double lateral = dy * c - dx * s;
    const double depth = along * sb - p.z * cb;
    if (std::abs(depth) < kDepthGuard) {
      throw ProjectionSingular("point " + std::to_string(i) +
                               " lies on the camera's principal plane");
    }
    const double inv_depth = 1.0 / depth;
    const double qx = (along * cb + p.z * sb) * inv_depth;
    const double qy = lateral * inv_depth;
    const auto row = 2 * static_cast<Eigen::Index>(i);
    if (residuals != nullptr) {
      (*residuals)(row) = corrs[i].image.qx - qx;
      (*residuals)(row + 1) = corrs[i].image.qy - qy;
    }
    if (jacobian == nullptr) continue;

    // Partials of (along, lateral) w.r.t. (x, y, theta).
    const double d_along[3] = {c, s, lateral};
    const double d_lateral[3] = {-s, c, -along};
    // d(qx) = -pz d(along) / depth^2 after the cb/sb terms cancel.
    const double inv_depth2 = inv_depth * inv_depth;
    for (int k = 0; k < 3; ++k) {
      const double dqx = -p.z * d_along[k] * inv_depth2;
      const double dqy = (d_lateral[k] * depth - lateral * sb * d_along[k]) *
                         inv_depth2;
      (*jacobian)(row, k) = -dqx;
      (*jacobian)(row + 1, k) = -dqy;
    }
  }
}

JacobianMatrix Jacobian(const Pose2D& pose, double beta,
                        std::span<const Correspondence> corrs) {
  JacobianMatrix j;
  Linearize(pose, beta, corrs, nullptr, &j);
  return j;
}

}  // namespace planar_pnp
