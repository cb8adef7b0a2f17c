#pragma once

#include <Eigen/Core>

#include <span>

#include "planar_pnp/geometry.hpp"

namespace planar_pnp {

/// Residuals ordered (r1x, r1y, r2x, r2y, ...), observation minus projection.
using ResidualVector = Eigen::VectorXd;

/// 2n x 3 Jacobian of the residuals, columns (d/dx, d/dy, d/dtheta).
using JacobianMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

ResidualVector Residuals(const Pose2D& pose, double beta,
                         std::span<const Correspondence> corrs);

/// Sum of squared residuals.
double ReprojectionError(const Pose2D& pose, double beta,
                         std::span<const Correspondence> corrs);

JacobianMatrix Jacobian(const Pose2D& pose, double beta,
                        std::span<const Correspondence> corrs);

/// Residuals and Jacobian from one pass over the points.
void Linearize(const Pose2D& pose, double beta,
               std::span<const Correspondence> corrs, ResidualVector* residuals,
               JacobianMatrix* jacobian);

}  // namespace planar_pnp
