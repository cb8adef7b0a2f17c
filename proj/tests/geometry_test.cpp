#include "planar_pnp/geometry.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "planar_pnp/errors.hpp"

namespace planar_pnp {
namespace {

constexpr double kPi = std::numbers::pi;

Mat3 RandomRotationWithPitch(std::mt19937_64& rng, double beta_lo, double beta_hi) {
  std::normal_distribution<double> n01;
  for (;;) {
    Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
    q.normalize();
    const Mat3 r = q.toRotationMatrix();
    const double beta = std::acos(std::clamp(r(2, 2), -1.0, 1.0));
    if (beta >= beta_lo && beta <= beta_hi) return r;
  }
}

TEST(ZyzDecompose, IdentityIsDegenerate) {
  EXPECT_THROW(ZyzDecompose(Mat3::Identity()), DegenerateRotation);
  EXPECT_THROW(CameraOffset(Mat3::Identity()), DegenerateRotation);
}

TEST(ZyzDecompose, PureRotY) {
  const ZyzAngles a = ZyzDecompose(RotY(kPi / 2));
  EXPECT_NEAR(a.alpha, 0.0, 1e-15);
  EXPECT_NEAR(a.beta, kPi / 2, 1e-15);
  EXPECT_NEAR(a.gamma, 0.0, 1e-15);
}

TEST(ZyzDecompose, RoundTripsRandomRotations) {
  std::mt19937_64 rng(1234);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Mat3 r = RandomRotationWithPitch(rng, 10 * kPi / 180, 170 * kPi / 180);
    const ZyzAngles a = ZyzDecompose(r);
    EXPECT_GT(a.beta, 0.0);
    EXPECT_LT(a.beta, kPi);
    worst = std::max(worst, (ComposeZyz(a) - r).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(CameraOffset, AnglesRecomposeRotation) {
  const CameraOffset c = CameraOffset::FromAngles(0.3, 1.1, -2.0);
  EXPECT_NEAR(c.alpha(), 0.3, 1e-12);
  EXPECT_NEAR(c.beta(), 1.1, 1e-12);
  EXPECT_NEAR(c.gamma(), -2.0, 1e-12);
  EXPECT_LT((ComposeZyz(c.angles()) - c.rotation()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CameraOffset, RejectsNonRotations) {
  Mat3 scaled = 1.01 * RotY(1.0);
  EXPECT_THROW(CameraOffset{scaled}, InvalidInput);
  Mat3 reflected = RotY(1.0);
  reflected.col(0) *= -1.0;
  EXPECT_THROW(CameraOffset{reflected}, InvalidInput);
}

TEST(CameraOffset, DefaultLooksHorizontal) {
  const CameraOffset c;
  EXPECT_DOUBLE_EQ(c.beta(), kPi / 2);
  EXPECT_DOUBLE_EQ(c.alpha(), 0.0);
  EXPECT_DOUBLE_EQ(c.gamma(), 0.0);
}

TEST(WrapAngle, HalfOpenInterval) {
  EXPECT_DOUBLE_EQ(WrapAngle(kPi), kPi);
  EXPECT_DOUBLE_EQ(WrapAngle(-kPi), kPi);
  EXPECT_NEAR(WrapAngle(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_NEAR(WrapAngle(-7.0), -7.0 + 2 * kPi, 1e-15);
  EXPECT_DOUBLE_EQ(WrapAngle(0.25), 0.25);
}

TEST(Rectify, Examples) {
  const NormalizedImagePoint a = Rectify({0.3, -0.2}, 0.0);
  EXPECT_DOUBLE_EQ(a.qx, 0.3);
  EXPECT_DOUBLE_EQ(a.qy, -0.2);
  const NormalizedImagePoint b = Rectify({0.3, -0.2}, kPi / 2);
  EXPECT_NEAR(b.qx, 0.2, 1e-15);
  EXPECT_NEAR(b.qy, 0.3, 1e-15);
}

TEST(Rectify, MatchesMatrixProduct) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const NormalizedImagePoint q{u(rng), u(rng)};
    const double gamma = kPi * u(rng);
    const Vec3 v = RotZ(gamma) * Vec3(q.qx, q.qy, 1.0);
    const NormalizedImagePoint r = Rectify(q, gamma);
    EXPECT_DOUBLE_EQ(v.z(), 1.0);
    EXPECT_NEAR(r.qx, v.x(), 1e-15);
    EXPECT_NEAR(r.qy, v.y(), 1e-15);
    EXPECT_NEAR(std::hypot(r.qx, r.qy), std::hypot(q.qx, q.qy), 1e-15);
  }
}

TEST(SphericalRay, AxisRay) {
  const RectifiedRay r = SphericalRay({0.0, 0.0}, kPi / 2);
  EXPECT_NEAR(r.theta, 0.0, 1e-15);
  EXPECT_NEAR(r.phi, 0.0, 1e-15);
  EXPECT_NEAR(r.r, 1.0, 1e-15);
}

TEST(SphericalRay, TiltedAxis) {
  const double beta = kPi / 3;
  const RectifiedRay r = SphericalRay({0.0, 0.0}, beta);
  // R_y(beta) * e_z = (sin beta, 0, cos beta).
  EXPECT_NEAR(r.theta, 0.0, 1e-15);
  EXPECT_NEAR(r.phi, kPi / 2 - beta, 1e-15);
  EXPECT_NEAR(r.r, 1.0, 1e-15);
}

TEST(SphericalRay, Reconstructs) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto check = [](const NormalizedImagePoint& q, double beta) {
    const RectifiedRay r = SphericalRay(q, beta);
    const Vec3 v = RotY(beta) * Vec3(q.qx, q.qy, 1.0);
    const Vec3 rebuilt = r.r * Vec3(std::cos(r.theta) * std::cos(r.phi),
                                    std::sin(r.theta) * std::cos(r.phi),
                                    std::sin(r.phi));
    EXPECT_LT((rebuilt - v).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(r.r, 0.0);
    EXPECT_LT(std::abs(r.phi), kPi / 2);
  };
  check({0.1, -0.2}, kPi / 2);
  for (int i = 0; i < 500; ++i) check({u(rng), u(rng)}, kPi * (0.5 + 0.45 * u(rng)));
}

TEST(Project, Examples) {
  const Projection a = Project({0, 0, 0}, kPi / 2, {-5, 0, 0});
  EXPECT_NEAR(a.q.qx, 0.0, 1e-15);
  EXPECT_NEAR(a.q.qy, 0.0, 1e-15);
  EXPECT_NEAR(a.depth, 5.0, 1e-15);

  const Projection b = Project({0, 0, 0}, kPi / 2, {-5, 1, 0.5});
  EXPECT_NEAR(b.q.qx, 0.1, 1e-15);
  EXPECT_NEAR(b.q.qy, -0.2, 1e-15);
  EXPECT_NEAR(b.depth, 5.0, 1e-15);

  EXPECT_THROW(Project({0, 0, 0}, kPi / 2, {0, 3, 0}), ProjectionSingular);
}

TEST(Project, MatchesHomogeneousChain) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int compared = 0;
  for (int i = 0; i < 2000; ++i) {
    const Pose2D pose{3 * u(rng), 3 * u(rng), kPi * u(rng)};
    const double beta = kPi * (0.5 + 0.45 * u(rng));
    const WorldPoint p{10 * u(rng), 10 * u(rng), 3 * u(rng)};
    const testing::ChainProjection want = testing::HomogeneousProject(pose, beta, p);
    if (std::abs(want.depth) < 1e-3) continue;
    const Projection got = Project(pose, beta, p);
    const double scale = 1.0 + std::hypot(want.q.qx, want.q.qy);
    EXPECT_NEAR(got.q.qx, want.q.qx, 1e-10 * scale);
    EXPECT_NEAR(got.q.qy, want.q.qy, 1e-10 * scale);
    EXPECT_NEAR(got.depth, want.depth, 1e-10 * (1.0 + std::abs(want.depth)));
    ++compared;
  }
  EXPECT_GT(compared, 1900);
}

TEST(Normalize, Examples) {
  const Intrinsics intr{800, 800, 0, 0};
  const NormalizedImagePoint q = Normalize(intr, {80, -160});
  EXPECT_DOUBLE_EQ(q.qx, 0.1);
  EXPECT_DOUBLE_EQ(q.qy, -0.2);

  const Intrinsics shifted{500, 600, 320, 240};
  const NormalizedImagePoint c = Normalize(shifted, {320, 240});
  EXPECT_EQ(c.qx, 0.0);
  EXPECT_EQ(c.qy, 0.0);

  const PixelPoint back = Denormalize(shifted, Normalize(shifted, {12.5, -7.25}));
  EXPECT_NEAR(back.u, 12.5, 1e-12);
  EXPECT_NEAR(back.v, -7.25, 1e-12);
}

}  // namespace
}  // namespace planar_pnp
