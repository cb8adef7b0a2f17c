#include "planar_pnp/geometry.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

#include "planar_pnp/errors.hpp"

namespace planar_pnp {

namespace {

constexpr double kOrthonormalityTolerance = 1e-6;

// Nearest proper rotation in the Frobenius sense.
Mat3 Orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

Mat3 RotZ(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

Mat3 RotY(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return r;
}

Mat3 ComposeZyz(const ZyzAngles& angles) {
  return RotZ(angles.alpha) * RotY(angles.beta) * RotZ(angles.gamma);
}

double WrapAngle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
  return wrapped;
}

ZyzAngles ZyzDecompose(const Mat3& rotation) {
  //   R(0,2) = cos(a) sin(b)   R(1,2) = sin(a) sin(b)   R(2,2) = cos(b)
  //   R(2,0) = -sin(b) cos(g)  R(2,1) = sin(b) sin(g)
  const double sin_beta = std::hypot(rotation(0, 2), rotation(1, 2));
  if (sin_beta < kBetaGuard) {
    throw DegenerateRotation(
        "camera axis is perpendicular to the plane of motion (sin(beta) = " +
        std::to_string(sin_beta) + "); planar heading is undefined");
  }
  ZyzAngles out;
  out.beta = std::atan2(sin_beta, rotation(2, 2));
  out.alpha = std::atan2(rotation(1, 2), rotation(0, 2));
  out.gamma = std::atan2(rotation(2, 1), -rotation(2, 0));
  return out;
}

CameraOffset::CameraOffset()
    : rotation_(RotY(std::numbers::pi / 2)),
      angles_{0.0, std::numbers::pi / 2, 0.0} {}

CameraOffset::CameraOffset(const Mat3& rotation) {
  if (!rotation.allFinite()) throw InvalidInput("camera rotation is not finite");
  const double orth_err =
      (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (orth_err > kOrthonormalityTolerance || rotation.determinant() <= 0.0) {
    std::ostringstream msg;
    msg << "camera rotation is not a proper rotation (|R^T R - I|max = "
        << orth_err << ", det = " << rotation.determinant() << ")";
    throw InvalidInput(msg.str());
  }
  rotation_ = Orthonormalize(rotation);
  angles_ = ZyzDecompose(rotation_);
}

CameraOffset CameraOffset::FromAngles(double alpha, double beta,
                                      double gamma) {
  return CameraOffset(ComposeZyz({alpha, beta, gamma}));
}

NormalizedImagePoint Rectify(const NormalizedImagePoint& q, double gamma) {
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  return {c * q.qx - s * q.qy, s * q.qx + c * q.qy};
}

RectifiedRay SphericalRay(const NormalizedImagePoint& q_prime, double beta) {
  const Vec3 v = RotY(beta) * Vec3(q_prime.qx, q_prime.qy, 1.0);
  const double norm = v.norm();
  return {std::atan2(v.y(), v.x()), std::asin(v.z() / norm), norm};
}

Projection Project(const Pose2D& pose, double beta, const WorldPoint& p) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  const double dx = pose.x - p.x;
  const double dy = pose.y - p.y;
  const double along = dx * c + dy * s;
  const double depth = along * sb - p.z * cb;
  if (std::abs(depth) < kDepthGuard) {
    throw ProjectionSingular("world point (" + std::to_string(p.x) + ", " +
                             std::to_string(p.y) + ", " + std::to_string(p.z) +
                             ") lies on the camera's principal plane");
  }
  Projection out;
  out.depth = depth;
  out.q.qx = (along * cb + p.z * sb) / depth;
  out.q.qy = (dy * c - dx * s) / depth;
  return out;
}

NormalizedImagePoint Normalize(const Intrinsics& intr, const PixelPoint& pix) {
  return {(pix.u - intr.cx) / intr.fx, (pix.v - intr.cy) / intr.fy};
}

PixelPoint Denormalize(const Intrinsics& intr, const NormalizedImagePoint& q) {
  return {q.qx * intr.fx + intr.cx, q.qy * intr.fy + intr.cy};
}

}  // namespace planar_pnp
