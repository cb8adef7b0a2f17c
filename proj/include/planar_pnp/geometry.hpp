#pragma once

// Camera model and coordinate conventions shared by every other module.
//
// World frame: z is up, the camera origin sits at (x, y, 0) and moves in the
// xy-plane. The camera is mounted with a fixed rotation C relative to the
// planar body frame P, so the full camera-to-world transform is
// R = P * blockdiag(C, 1). C is factored into ZYZ Euler angles
// C = Rz(alpha) * Ry(beta) * Rz(gamma). Rz(alpha) commutes into P (it only
// changes the heading), Rz(gamma) spins the image about the optical axis and
// is undone by rotating the image points, which leaves the pitch beta as the
// only mounting parameter seen by the solver.
//
// Depth sign: for pose (0, 0, 0) and beta = pi/2 the point (-5, 0, 0) is
// visible at depth 5 and projects to the image centre. Visible points have
// depth > 0.

#include <Eigen/Core>

#include <numbers>

namespace planar_pnp {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// Guard band on sin(beta) below which the planar heading is undefined.
inline constexpr double kBetaGuard = 1e-9;

/// |depth| below which a point counts as lying on the principal plane.
inline constexpr double kDepthGuard = 1e-12;

struct WorldPoint {
  double x{0.0};
  double y{0.0};
  double z{0.0};  // height above the plane of motion
};

struct PixelPoint {
  double u{0.0};
  double v{0.0};
};

struct NormalizedImagePoint {
  double qx{0.0};
  double qy{0.0};
};

struct Intrinsics {
  double fx{1.0};
  double fy{1.0};
  double cx{0.0};
  double cy{0.0};
};

/// Planar pose (x, y, theta). theta is kept wrapped to (-pi, pi].
struct Pose2D {
  double x{0.0};
  double y{0.0};
  double theta{0.0};
};

/// One world point paired with its gamma-rectified normalized observation.
struct Correspondence {
  WorldPoint world;
  NormalizedImagePoint image;
};

/// Azimuth / elevation of R_beta * (qx', qy', 1), with r its norm.
struct RectifiedRay {
  double theta{0.0};
  double phi{0.0};
  double r{1.0};
};

struct ZyzAngles {
  double alpha{0.0};
  double beta{0.0};
  double gamma{0.0};
};

/// Known mounting rotation and its ZYZ factorization.
class CameraOffset {
 public:
  /// Optical axis horizontal (beta = pi/2), no roll.
  CameraOffset();

  /// Throws DegenerateRotation when the optical axis is (nearly) vertical and
  /// InvalidInput when `rotation` is not a proper rotation to 1e-6.
  explicit CameraOffset(const Mat3& rotation);

  static CameraOffset FromAngles(double alpha, double beta, double gamma);

  const Mat3& rotation() const { return rotation_; }
  double alpha() const { return angles_.alpha; }
  double beta() const { return angles_.beta; }
  double gamma() const { return angles_.gamma; }
  const ZyzAngles& angles() const { return angles_; }

 private:
  Mat3 rotation_;
  ZyzAngles angles_;
};

/// Projection of one world point; `depth` > 0 means in front of the camera.
struct Projection {
  NormalizedImagePoint q;
  double depth{0.0};
};

Mat3 RotZ(double angle);
Mat3 RotY(double angle);
Mat3 ComposeZyz(const ZyzAngles& angles);

/// Wraps an angle to (-pi, pi].
double WrapAngle(double angle);

/// ZYZ Euler angles of a proper rotation; beta lands in (0, pi).
/// Throws DegenerateRotation when |sin(beta)| < kBetaGuard.
ZyzAngles ZyzDecompose(const Mat3& rotation);

/// First two components of Rz(gamma) * (qx, qy, 1).
NormalizedImagePoint Rectify(const NormalizedImagePoint& q, double gamma);

RectifiedRay SphericalRay(const NormalizedImagePoint& q_prime, double beta);

/// Closed-form projection in the alpha-absorbed, gamma-rectified frame.
/// Throws ProjectionSingular when |depth| < kDepthGuard.
Projection Project(const Pose2D& pose, double beta, const WorldPoint& p);

NormalizedImagePoint Normalize(const Intrinsics& intr, const PixelPoint& pix);
PixelPoint Denormalize(const Intrinsics& intr, const NormalizedImagePoint& q);

}  // namespace planar_pnp
