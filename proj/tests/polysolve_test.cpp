#include "planar_pnp/polysolve.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "planar_pnp/errors.hpp"
#include "planar_pnp/initializer.hpp"

namespace planar_pnp {
namespace {

std::vector<ElevationTermInput> TermsFor(const testing::AbsorbedScene& s) {
  return ElevationTerms(s.corrs, ComputeRays(s.corrs, s.beta));
}

double SceneScale(const testing::AbsorbedScene& s) {
  double scale = 1.0;
  for (const Correspondence& c : s.corrs) {
    scale = std::max({scale, std::abs(c.world.x), std::abs(c.world.y)});
  }
  return scale;
}

TEST(BuildSystem, StationaryAtTruthWithoutNoise) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = testing::MakeAbsorbedScene(seed, 10, 0.0);
    const auto terms = TermsFor(s);
    const CubicSystem sys = BuildSystem(terms);
    // Every summand k s - m vanishes, so each gradient term is tiny relative
    // to the magnitude of its parts.
    double mag = 0.0;
    for (std::size_t i = 0; i < sys.k.size(); ++i) mag += std::abs(sys.m[i]);
    const double tol = 1e-9 * SceneScale(s) * (1.0 + mag);
    EXPECT_NEAR(sys.a(0.0, 0.0), 0.0, tol) << "seed " << seed;
    EXPECT_NEAR(sys.b(0.0, 0.0), 0.0, tol) << "seed " << seed;
  }
}

TEST(BuildSystem, GradientMatchesFiniteDifferences) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = testing::MakeAbsorbedScene(seed, 20, 2.0);
    const auto terms = TermsFor(s);
    const CubicSystem sys = BuildSystem(terms);
    const double scale = SceneScale(s);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double x = scale * (i - 2) / 4.0;
        const double y = scale * (j - 2) / 4.0;
        const double h = 1e-6 * std::max(1.0, scale);
        const double gx = (testing::LinearizedElevationError(terms, x + h, y) -
                           testing::LinearizedElevationError(terms, x - h, y)) /
                          (2 * h);
        const double gy = (testing::LinearizedElevationError(terms, x, y + h) -
                           testing::LinearizedElevationError(terms, x, y - h)) /
                          (2 * h);
        const double ref = std::max({std::abs(gx), std::abs(gy), 1e-3});
        worst = std::max(worst, std::abs(sys.a(x, y) - gx) / ref);
        worst = std::max(worst, std::abs(sys.b(x, y) - gy) / ref);
      }
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(BuildSystem, CoefficientSharingAndSymmetry) {
  const auto s = testing::MakeAbsorbedScene(3, 25, 1.0);
  const auto terms = TermsFor(s);
  const CubicSystem sys = BuildSystem(terms);
  EXPECT_EQ(sys.a.coeff[3][0], sys.a.coeff[1][2]);
  EXPECT_EQ(sys.a.coeff[3][0], sys.b.coeff[0][3]);
  EXPECT_EQ(sys.b.coeff[0][3], sys.b.coeff[2][1]);

  std::vector<ElevationTermInput> swapped = terms;
  for (ElevationTermInput& t : swapped) std::swap(t.px, t.py);
  const CubicSystem mirrored = BuildSystem(swapped);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; a + b < 4; ++b) {
      EXPECT_EQ(mirrored.a.coeff[a][b], sys.b.coeff[b][a]) << a << "," << b;
      EXPECT_EQ(mirrored.b.coeff[a][b], sys.a.coeff[b][a]) << a << "," << b;
    }
  }
}

TEST(BuildSystem, FilterRejectsOppositeSigns) {
  std::vector<ElevationTermInput> terms{
      {1, 0, 1.0, -0.2}, {0, 1, -1.0, 0.3}, {2, 2, 0.5, -0.1}};
  EXPECT_THROW(BuildSystem(terms), TooFewValidTerms);
  terms.push_back({1, 1, 1.0, 0.2});
  EXPECT_THROW(BuildSystem(terms), TooFewValidTerms);
  terms.push_back({-1, 1, -1.0, -0.2});
  const CubicSystem sys = BuildSystem(terms);
  EXPECT_EQ(sys.retained, (std::vector<std::size_t>{3, 4}));
}

TEST(Resultant, LinearToy) {
  BivariateCubic a;  // x + y - 2
  a.coeff[1][0] = 1;
  a.coeff[0][1] = 1;
  a.coeff[0][0] = -2;
  BivariateCubic b;  // x - y
  b.coeff[1][0] = 1;
  b.coeff[0][1] = -1;
  const ResultantFit fit = SylvesterResultantFit(a, b, Axis::kY, 0.0, 1.0);
  ASSERT_GE(fit.full.coeffs.size(), 2u);
  EXPECT_NEAR(fit.full.coeffs[0], -2.0, 1e-12);
  EXPECT_NEAR(fit.full.coeffs[1], 2.0, 1e-12);
  const std::vector<double> roots = RealRoots(fit.full);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_NEAR(roots[0], 1.0, 1e-12);

  const testing::Coeffs exact = testing::ExactResultant(a, b, Axis::kY);
  EXPECT_NEAR(testing::EvalCoeffs(exact, 0.0), -2.0, 1e-15);
  EXPECT_NEAR(testing::EvalCoeffs(exact, 1.0), 0.0, 1e-15);
}

TEST(Resultant, NumericFitMatchesExactExpansion) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = testing::MakeAbsorbedScene(seed, 15, 2.0);
    const CubicSystem sys = BuildSystem(TermsFor(s));
    for (Axis ax : {Axis::kY, Axis::kX}) {
      const testing::Coeffs exact = testing::ExactResultant(sys.a, sys.b, ax);
      const ResultantFit fit = SylvesterResultantFit(sys, ax);
      double max_exact = 0.0;
      for (double c : exact) max_exact = std::max(max_exact, std::abs(c));
      // Compare on values over the data range rather than raw coefficients.
      const double half = SceneScale(s);
      for (int k = -10; k <= 10; ++k) {
        const double v = half * k / 10.0;
        double mono = 1.0;
        double bound = 0.0;
        for (double c : exact) {
          bound += std::abs(c) * mono;
          mono *= std::abs(v);
        }
        EXPECT_NEAR(fit.full(v), testing::EvalCoeffs(exact, v), 1e-9 * bound)
            << "seed " << seed << " v " << v;
        EXPECT_NEAR(SylvesterDeterminantAt(sys.a, sys.b, ax, v),
                    testing::EvalCoeffs(exact, v), 1e-9 * bound);
      }
      // The exact expansion collapses to degree 5 as well.
      for (std::size_t j = 6; j < exact.size(); ++j) {
        EXPECT_LT(std::abs(exact[j]), 1e-10 * max_exact) << "degree " << j;
      }
    }
  }
}

TEST(Resultant, DegreeCollapse) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = testing::MakeAbsorbedScene(seed, 50, 2.0);
    const CubicSystem sys = BuildSystem(TermsFor(s));
    for (Axis ax : {Axis::kY, Axis::kX}) {
      worst = std::max(worst, SylvesterResultantFit(sys, ax).high_degree_ratio);
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Resultant, TruncatedHasTrueRootWithoutNoise) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = testing::MakeAbsorbedScene(seed, 10, 0.0);
    const CubicSystem sys = BuildSystem(TermsFor(s));
    const double scale = SceneScale(s);
    for (Axis ax : {Axis::kY, Axis::kX}) {
      const Poly1D res = SylvesterResultant(sys, ax);
      EXPECT_LE(res.coeffs.size(), 6u);
      const std::vector<double> roots = RealRoots(res);
      double nearest = INFINITY;
      for (double r : roots) nearest = std::min(nearest, std::abs(r));
      EXPECT_LT(nearest, 1e-6 * scale) << "seed " << seed;
    }
  }
}

TEST(Resultant, ZeroPolynomialIsDegenerate) {
  BivariateCubic zero;
  BivariateCubic one;
  one.coeff[1][0] = 1;
  EXPECT_THROW(SylvesterResultantFit(zero, one, Axis::kY, 0.0, 1.0),
               DegenerateResultant);
  // Shared factor (x + y): the resultant vanishes everywhere.
  BivariateCubic p;  // (x + y)
  p.coeff[1][0] = 1;
  p.coeff[0][1] = 1;
  BivariateCubic q;  // (x + y)(x - y + 1) = x^2 - y^2 + x + y
  q.coeff[2][0] = 1;
  q.coeff[0][2] = -1;
  q.coeff[1][0] = 1;
  q.coeff[0][1] = 1;
  EXPECT_THROW(SylvesterResultantFit(p, q, Axis::kY, 0.0, 1.0),
               DegenerateResultant);
}

TEST(Resultant, CollapseIsNotMistakenForSharedFactor) {
  // Near-horizontal camera: the resultant values sit far below the Hadamard
  // bound of the Sylvester matrices without the matrices being singular.
  const auto s = testing::MakeAbsorbedScene(TrialSeed(3, 0, 759), 50, 2.0);
  const CubicSystem sys = BuildSystem(TermsFor(s));
  EXPECT_NO_THROW(SylvesterResultantFit(sys, Axis::kY));
  EXPECT_NO_THROW(SylvesterResultantFit(sys, Axis::kX));

  // Every term at the same plan position: A and B share a circle factor.
  std::vector<ElevationTermInput> same;
  for (int i = 0; i < 10; ++i) same.push_back({-3.0, 1.5, 1.0, 0.2 + 0.01 * i});
  const CubicSystem degenerate = BuildSystem(same);
  EXPECT_THROW(SylvesterResultantFit(degenerate, Axis::kY), DegenerateResultant);
  EXPECT_THROW(SylvesterResultantFit(degenerate, Axis::kX), DegenerateResultant);
}

TEST(RealRoots, Examples) {
  EXPECT_EQ(RealRoots(Poly1D{{-1, 0, 1}}).size(), 2u);
  const auto quad = RealRoots(Poly1D{{-1, 0, 1}});
  EXPECT_NEAR(quad[0], -1.0, 1e-14);
  EXPECT_NEAR(quad[1], 1.0, 1e-14);

  const auto cubic = RealRoots(Poly1D{{-6, 11, -6, 1}});
  ASSERT_EQ(cubic.size(), 3u);
  EXPECT_NEAR(cubic[0], 1.0, 1e-12);
  EXPECT_NEAR(cubic[1], 2.0, 1e-12);
  EXPECT_NEAR(cubic[2], 3.0, 1e-12);

  const testing::Coeffs quintic{-1, -1, 0, 0, 0, 1};
  const auto scan = testing::SignScanRoots(quintic, -2.0, 2.0, 10000);
  ASSERT_EQ(scan.size(), 1u);
  EXPECT_NEAR(scan[0], 1.1673039783, 1e-10);
  const auto roots = RealRoots(Poly1D{quintic});
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_NEAR(roots[0], scan[0], 1e-12);

  EXPECT_TRUE(RealRoots(Poly1D{{1, 0, 1}}).empty());
  EXPECT_TRUE(RealRoots(Poly1D{{3}}).empty());
  // Negligible leading coefficients are stripped.
  const auto stripped = RealRoots(Poly1D{{-2, 1, 1e-300}});
  ASSERT_EQ(stripped.size(), 1u);
  EXPECT_DOUBLE_EQ(stripped[0], 2.0);
}

TEST(RealRoots, DoubleRootIsReportedOnce) {
  const auto roots = RealRoots(Poly1D{{1, -2, 1}});
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_NEAR(roots[0], 1.0, 1e-7);
}

TEST(RealRoots, ZeroPolynomialThrows) {
  EXPECT_THROW(RealRoots(Poly1D{{0, 0, 0}}), ZeroPolynomial);
  EXPECT_THROW(RealRoots(Poly1D{}), ZeroPolynomial);
}

TEST(RealRoots, MatchesSignScanOnRandomPolynomials) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> root(-2.0, 2.0);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> degree(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    // Build from chosen real roots and a random quadratic factor, so every
    // real root is inside the scan interval.
    testing::Coeffs c{1.0};
    const int d = degree(rng);
    for (int i = 0; i < d; ++i) c = testing::PolyMul(c, {-root(rng), 1.0});
    if (trial % 2 == 0) c = testing::PolyMul(c, {1.0 + std::abs(coeff(rng)), coeff(rng), 1.0});
    const double lead = coeff(rng);
    for (double& v : c) v *= lead == 0.0 ? 1.0 : lead;
    if (c.size() > 6) c.resize(6);

    const auto got = RealRoots(Poly1D{c});
    const auto want = testing::SignScanRoots(c, -3.0, 3.0, 10000);
    for (double w : want) {
      double nearest = INFINITY;
      for (double g : got) nearest = std::min(nearest, std::abs(g - w));
      EXPECT_LT(nearest, 1e-8) << "trial " << trial << " root " << w;
    }
  }
}

TEST(CandidatePositions, ProductInXMajorOrder) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = testing::MakeAbsorbedScene(seed, 50, 2.0);
    const CubicSystem sys = BuildSystem(TermsFor(s));
    const auto xs = RealRoots(SylvesterResultant(sys, Axis::kY));
    const auto ys = RealRoots(SylvesterResultant(sys, Axis::kX));
    const auto pairs = CandidatePositions(sys);
    ASSERT_EQ(pairs.size(), xs.size() * ys.size());
    EXPECT_LE(pairs.size(), 25u);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        EXPECT_EQ(pairs[i * ys.size() + j].x, xs[i]);
        EXPECT_EQ(pairs[i * ys.size() + j].y, ys[j]);
      }
    }
  }
}

TEST(CandidatePositions, ContainsTruthWithoutNoise) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = testing::MakeAbsorbedScene(seed, 10, 0.0);
    const auto pairs = CandidatePositions(BuildSystem(TermsFor(s)));
    double nearest = INFINITY;
    for (const PlanarPosition& p : pairs) nearest = std::min(nearest, std::hypot(p.x, p.y));
    EXPECT_LT(nearest, 1e-6 * SceneScale(s)) << "seed " << seed;
  }
}

}  // namespace
}  // namespace planar_pnp
