#pragma once

// Stationary points of the linearized elevation error
//
//   E(x, y) = sum_i (k_i * s_i - m_i)^2,   s_i = (x - px_i)^2 + (y - py_i)^2
//   k_i = sin^3(phi_i) / (pz_i^2 cos(phi_i)),   m_i = sin(phi_i) cos(phi_i)
//
// where phi_i is the elevation of the line of sight from the camera to point
// i. The gradient (A, B) = (dE/dx, dE/dy) is a pair of bivariate cubics with
// shared coefficients:
//
//   A = c1 x^3 + c1 x y^2 + 3 c2 x^2 + 2 c3 x y + c2 y^2 + a1 x + c4 y + a2
//   B = c1 y^3 + c1 x^2 y + 3 c3 y^2 + 2 c2 x y + c3 x^2 + b1 y + c4 x + b2
//
// Both cubic parts carry the factor x^2 + y^2, so each Sylvester resultant
// collapses from degree 9 to degree 5.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace planar_pnp {

/// Dense univariate polynomial, coefficients in ascending degree.
struct Poly1D {
  std::vector<double> coeffs;

  /// Index of the highest nonzero coefficient; -1 for the zero polynomial.
  int Degree() const;
  double operator()(double x) const;
  Poly1D Derivative() const;
  double MaxAbsCoeff() const;
};

/// Polynomial in (x, y) of total degree <= 3; coeff[a][b] multiplies x^a y^b.
struct BivariateCubic {
  std::array<std::array<double, 4>, 4> coeff{};

  double operator()(double x, double y) const;
  int TotalDegree() const;
};

struct ElevationTermInput {
  double px{0.0};
  double py{0.0};
  double pz{0.0};
  double phi{0.0};  // elevation of the sight line toward the point
};

/// Named coefficients of the cubic pair (see header comment).
struct CubicCoefficients {
  double c1{0.0}, c2{0.0}, c3{0.0}, c4{0.0};
  double a1{0.0}, a2{0.0};
  double b1{0.0}, b2{0.0};
};

struct CubicSystem {
  std::vector<std::size_t> retained;  // indices into the input terms
  std::vector<double> k;              // per retained term
  std::vector<double> m;
  CubicCoefficients named;
  BivariateCubic a;  // dE/dx
  BivariateCubic b;  // dE/dy
  // Conditioning hints for resultant evaluation.
  double centroid_x{0.0};
  double centroid_y{0.0};
  double extent{1.0};
};

enum class Axis { kX, kY };

/// Resultant with every fitted coefficient kept.
struct ResultantFit {
  Poly1D full;
  /// max |coeff| over degrees 6..9 divided by max |coeff| (0 if degree <= 5).
  double high_degree_ratio{0.0};
};

/// Terms survive when pz and phi share a sign and |cos(phi)| > 1e-9.
/// Throws TooFewValidTerms when fewer than two survive.
CubicSystem BuildSystem(std::span<const ElevationTermInput> terms);

/// Resultant of two bivariate polynomials with `eliminate` removed, as a
/// polynomial in the other variable. Coefficients come from evaluating the
/// Sylvester determinant at Chebyshev abscissae on
/// [center - half_width, center + half_width] and a least-squares
/// Vandermonde fit. Throws DegenerateResultant when the resultant vanishes
/// identically.
ResultantFit SylvesterResultantFit(const BivariateCubic& p,
                                   const BivariateCubic& q, Axis eliminate,
                                   double center, double half_width);

/// Full-degree resultant of the cubic system, nodes placed to cover the data.
ResultantFit SylvesterResultantFit(const CubicSystem& sys, Axis eliminate);

/// Resultant of the cubic system truncated to degree 5.
Poly1D SylvesterResultant(const CubicSystem& sys, Axis eliminate);

/// Sylvester determinant of p and q (as polynomials in the eliminated
/// variable) evaluated at a fixed value of the surviving variable.
double SylvesterDeterminantAt(const BivariateCubic& p, const BivariateCubic& q,
                              Axis eliminate, double value);

/// All real roots, ascending and deduplicated. Throws ZeroPolynomial.
std::vector<double> RealRoots(const Poly1D& p);

struct PlanarPosition {
  double x{0.0};
  double y{0.0};
};

/// Cartesian product (x-major) of the real roots of both resultants.
/// Throws NoCandidates when either root set is empty.
std::vector<PlanarPosition> CandidatePositions(const CubicSystem& sys);

}  // namespace planar_pnp
