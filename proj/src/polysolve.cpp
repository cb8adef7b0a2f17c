#include "planar_pnp/polysolve.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "planar_pnp/errors.hpp"

namespace planar_pnp {

namespace {

constexpr double kCosGuard = 1e-9;
constexpr double kLeadingZeroTolerance = 1e-12;
constexpr double kImaginaryTolerance = 1e-6;
constexpr double kDedupTolerance = 1e-9;
constexpr int kCollapsedDegree = 5;
constexpr int kNewtonSteps = 4;
constexpr double kSingularTolerance = 1e-12;

// Coefficients of p viewed as a polynomial in the eliminated variable,
// evaluated at `value` of the surviving one. Ascending order; the length is
// the structural degree + 1.
std::vector<double> CoefficientsAlong(const BivariateCubic& p, Axis eliminate,
                                      double value) {
  int degree = -1;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; a + b < 4; ++b) {
      if (p.coeff[a][b] == 0.0) continue;
      degree = std::max(degree, eliminate == Axis::kY ? b : a);
    }
  }
  std::vector<double> out(static_cast<std::size_t>(degree + 1), 0.0);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; a + b < 4; ++b) {
      const double c = p.coeff[a][b];
      if (c == 0.0) continue;
      if (eliminate == Axis::kY) {
        out[b] += c * std::pow(value, a);
      } else {
        out[a] += c * std::pow(value, b);
      }
    }
  }
  return out;
}

Eigen::MatrixXd SylvesterMatrix(const std::vector<double>& p,
                                const std::vector<double>& q) {
  const int m = static_cast<int>(p.size()) - 1;
  const int n = static_cast<int>(q.size()) - 1;
  const int size = m + n;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
  for (int row = 0; row < n; ++row) {
    for (int j = 0; j <= m; ++j) s(row, row + j) = p[m - j];
  }
  for (int row = 0; row < m; ++row) {
    for (int j = 0; j <= n; ++j) s(n + row, row + j) = q[n - j];
  }
  return s;
}

// p(x) = sum_j coeffs_t[j] * ((x - center) / scale)^j, rewritten in powers
// of x by Horner's scheme on the affine substitution.
Poly1D ComposeAffine(const std::vector<double>& coeffs_t, double center,
                     double scale) {
  std::vector<double> acc{0.0};
  const double a1 = 1.0 / scale;
  const double a0 = -center / scale;
  for (auto it = coeffs_t.rbegin(); it != coeffs_t.rend(); ++it) {
    std::vector<double> next(acc.size() + 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i] * a0;
      next[i + 1] += acc[i] * a1;
    }
    next[0] += *it;
    acc = std::move(next);
  }
  acc.resize(coeffs_t.size());
  return Poly1D{std::move(acc)};
}

// Parlett-Reinsch balancing with powers of two.
void Balance(Eigen::MatrixXd* matrix) {
  Eigen::MatrixXd& m = *matrix;
  const Eigen::Index n = m.rows();
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row += std::abs(m(i, j));
        col += std::abs(m(j, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col, exponent);
      const double scaled_row = std::ldexp(row, -exponent);
      if (scaled_col + scaled_row < 0.95 * (col + row)) {
        changed = true;
        m.row(i) *= std::ldexp(1.0, -exponent);
        m.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

double NewtonPolish(const Poly1D& p, const Poly1D& dp, double root) {
  double best = root;
  double best_val = std::abs(p(root));
  double x = root;
  for (int i = 0; i < kNewtonSteps && best_val > 0.0; ++i) {
    const double d = dp(x);
    if (d == 0.0) break;
    x -= p(x) / d;
    const double val = std::abs(p(x));
    if (!(val < best_val)) break;
    best = x;
    best_val = val;
  }
  return best;
}

// Rank test for a shared factor. The determinant is compared with the
// Hadamard bound first; the collapse from degree 9 to 5 can leave a regular
// matrix far below that bound, so a small ratio is confirmed by the
// singular values before the matrix is declared singular.
bool NumericallySingular(const Eigen::MatrixXd& s, double det) {
  if (s.size() == 0) return false;
  double hadamard = 1.0;
  for (Eigen::Index r = 0; r < s.rows(); ++r) hadamard *= s.row(r).norm();
  if (std::abs(det) > kSingularTolerance * hadamard) return false;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(s).singularValues();
  return sv(sv.size() - 1) <= kSingularTolerance * sv(0);
}

std::vector<double> ChebyshevNodes(int count) {
  std::vector<double> nodes(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    nodes[k] = std::cos(std::numbers::pi * (k + 0.5) / count);
  }
  return nodes;
}

}  // namespace

int Poly1D::Degree() const {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    if (coeffs[i] != 0.0) return i;
  }
  return -1;
}

double Poly1D::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly1D Poly1D::Derivative() const {
  Poly1D d;
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    d.coeffs.push_back(static_cast<double>(i) * coeffs[i]);
  }
  return d;
}

double Poly1D::MaxAbsCoeff() const {
  double m = 0.0;
  for (double c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

double BivariateCubic::operator()(double x, double y) const {
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; a + b < 4; ++b) {
      acc += coeff[a][b] * std::pow(x, a) * std::pow(y, b);
    }
  }
  return acc;
}

int BivariateCubic::TotalDegree() const {
  int degree = -1;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; a + b < 4; ++b) {
      if (coeff[a][b] != 0.0) degree = std::max(degree, a + b);
    }
  }
  return degree;
}

CubicSystem BuildSystem(std::span<const ElevationTermInput> terms) {
  CubicSystem sys;
  // Moments of (px, py) weighted by k^2 and k*m.
  double s0 = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  double sxxx = 0, syyy = 0, sxyy = 0, sxxy = 0;
  double m0 = 0, mx = 0, my = 0;
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;

  for (std::size_t i = 0; i < terms.size(); ++i) {
    const ElevationTermInput& t = terms[i];
    const double cos_phi = std::cos(t.phi);
    const double sin_phi = std::sin(t.phi);
    if (!(t.pz * t.phi > 0.0) || std::abs(cos_phi) <= kCosGuard) continue;

    const double k = sin_phi * sin_phi * sin_phi / (t.pz * t.pz * cos_phi);
    const double m = sin_phi * cos_phi;
    if (sys.retained.empty()) {
      min_x = max_x = t.px;
      min_y = max_y = t.py;
    }
    sys.retained.push_back(i);
    sys.k.push_back(k);
    sys.m.push_back(m);
    sys.centroid_x += t.px;
    sys.centroid_y += t.py;
    min_x = std::min(min_x, t.px);
    max_x = std::max(max_x, t.px);
    min_y = std::min(min_y, t.py);
    max_y = std::max(max_y, t.py);

    const double k2 = k * k;
    const double km = k * m;
    const double x = t.px;
    const double y = t.py;
    // Evaluation order is mirrored between x and y so that swapping the axes
    // swaps the moments bit for bit.
    const double xx = k2 * (x * x);
    const double yy = k2 * (y * y);
    s0 += k2;
    sx += k2 * x;
    sy += k2 * y;
    sxx += xx;
    syy += yy;
    sxy += k2 * (x * y);
    sxxx += xx * x;
    syyy += yy * y;
    sxyy += yy * x;
    sxxy += xx * y;
    m0 += km;
    mx += km * x;
    my += km * y;
  }

  if (sys.retained.size() < 2) {
    throw TooFewValidTerms(
        "only " + std::to_string(sys.retained.size()) +
        " correspondence(s) have elevation consistent with their height; "
        "need at least 2");
  }

  const auto count = static_cast<double>(sys.retained.size());
  sys.centroid_x /= count;
  sys.centroid_y /= count;
  sys.extent = 0.5 * std::max(max_x - min_x, max_y - min_y);

  CubicCoefficients& n = sys.named;
  n.c1 = 4.0 * s0;
  n.c2 = -4.0 * sx;
  n.c3 = -4.0 * sy;
  n.c4 = 8.0 * sxy;
  n.a1 = 4.0 * (3.0 * sxx + syy - m0);
  n.a2 = 4.0 * (-(sxxx + sxyy) + mx);
  n.b1 = 4.0 * (3.0 * syy + sxx - m0);
  n.b2 = 4.0 * (-(syyy + sxxy) + my);

  auto& a = sys.a.coeff;
  a[3][0] = n.c1;
  a[1][2] = n.c1;
  a[2][0] = 3.0 * n.c2;
  a[1][1] = 2.0 * n.c3;
  a[0][2] = n.c2;
  a[1][0] = n.a1;
  a[0][1] = n.c4;
  a[0][0] = n.a2;

  auto& b = sys.b.coeff;
  b[0][3] = n.c1;
  b[2][1] = n.c1;
  b[0][2] = 3.0 * n.c3;
  b[1][1] = 2.0 * n.c2;
  b[2][0] = n.c3;
  b[0][1] = n.b1;
  b[1][0] = n.c4;
  b[0][0] = n.b2;
  return sys;
}

double SylvesterDeterminantAt(const BivariateCubic& p, const BivariateCubic& q,
                              Axis eliminate, double value) {
  const auto pc = CoefficientsAlong(p, eliminate, value);
  const auto qc = CoefficientsAlong(q, eliminate, value);
  if (pc.empty() || qc.empty()) return 0.0;
  if (pc.size() == 1 && qc.size() == 1) return 1.0;
  return SylvesterMatrix(pc, qc).determinant();
}

ResultantFit SylvesterResultantFit(const BivariateCubic& p,
                                   const BivariateCubic& q, Axis eliminate,
                                   double center, double half_width) {
  const int dp = p.TotalDegree();
  const int dq = q.TotalDegree();
  if (dp < 0 || dq < 0) {
    throw DegenerateResultant("resultant of a zero polynomial");
  }
  const int fit_degree = std::max(1, dp * dq);
  const int samples = std::max(12, 2 * (fit_degree + 1) - 4);
  const double scale = half_width > 0.0 ? half_width : 1.0;
  const auto nodes = ChebyshevNodes(samples);

  Eigen::MatrixXd vander(samples, fit_degree + 1);
  Eigen::VectorXd values(samples);
  bool all_vanish = true;
  for (int k = 0; k < samples; ++k) {
    const double value = center + scale * nodes[k];
    const auto pc = CoefficientsAlong(p, eliminate, value);
    const auto qc = CoefficientsAlong(q, eliminate, value);
    const Eigen::MatrixXd s = SylvesterMatrix(pc, qc);
    const double det = s.size() == 0 ? 1.0 : s.determinant();
    if (all_vanish && !NumericallySingular(s, det)) all_vanish = false;
    values(k) = det;
    double power = 1.0;
    for (int j = 0; j <= fit_degree; ++j) {
      vander(k, j) = power;
      power *= nodes[k];
    }
  }
  if (all_vanish) {
    throw DegenerateResultant(
        "resultant vanishes identically; the polynomials share a common "
        "factor (degenerate point configuration)");
  }

  const Eigen::VectorXd coeffs_t = vander.colPivHouseholderQr().solve(values);
  ResultantFit fit;
  fit.full = ComposeAffine(
      std::vector<double>(coeffs_t.data(), coeffs_t.data() + coeffs_t.size()),
      center, scale);
  const double max_coeff = fit.full.MaxAbsCoeff();
  double high = 0.0;
  for (std::size_t j = kCollapsedDegree + 1; j < fit.full.coeffs.size(); ++j) {
    high = std::max(high, std::abs(fit.full.coeffs[j]));
  }
  fit.high_degree_ratio = max_coeff > 0.0 ? high / max_coeff : 0.0;
  return fit;
}

ResultantFit SylvesterResultantFit(const CubicSystem& sys, Axis eliminate) {
  // Nodes symmetric about the origin and wide enough to cover the data keep
  // the change of basis back to powers of x a pure rescaling.
  const double center =
      eliminate == Axis::kY ? sys.centroid_x : sys.centroid_y;
  const double half_width = std::max(std::abs(center) + sys.extent, 1e-6);
  return SylvesterResultantFit(sys.a, sys.b, eliminate, 0.0, half_width);
}

Poly1D SylvesterResultant(const CubicSystem& sys, Axis eliminate) {
  ResultantFit fit = SylvesterResultantFit(sys, eliminate);
  // Degrees 6..9 cancel analytically; what remains there is fit noise.
  Poly1D out = std::move(fit.full);
  if (out.coeffs.size() > kCollapsedDegree + 1) {
    out.coeffs.resize(kCollapsedDegree + 1);
  }
  return out;
}

std::vector<double> RealRoots(const Poly1D& p) {
  const double max_coeff = p.MaxAbsCoeff();
  if (max_coeff == 0.0 || !std::isfinite(max_coeff)) {
    throw ZeroPolynomial("polynomial has no nonzero coefficients");
  }
  Poly1D stripped = p;
  while (!stripped.coeffs.empty() &&
         std::abs(stripped.coeffs.back()) <= kLeadingZeroTolerance * max_coeff) {
    stripped.coeffs.pop_back();
  }
  const int degree = static_cast<int>(stripped.coeffs.size()) - 1;
  if (degree < 1) return {};

  std::vector<double> candidates;
  if (degree == 1) {
    candidates.push_back(-stripped.coeffs[0] / stripped.coeffs[1]);
  } else {
    // Companion matrix of the monic polynomial: ones on the subdiagonal,
    // -a_i / a_d in the last column.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    const double lead = stripped.coeffs[degree];
    for (int i = 0; i < degree; ++i) {
      if (i > 0) companion(i, i - 1) = 1.0;
      companion(i, degree - 1) = -stripped.coeffs[i] / lead;
    }
    Balance(&companion);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw NumericalFailure("companion matrix eigenvalue iteration failed");
    }
    for (const std::complex<double>& z : solver.eigenvalues()) {
      if (std::abs(z.imag()) <= kImaginaryTolerance * (1.0 + std::abs(z.real()))) {
        candidates.push_back(z.real());
      }
    }
  }

  const Poly1D derivative = stripped.Derivative();
  for (double& r : candidates) r = NewtonPolish(stripped, derivative, r);
  std::sort(candidates.begin(), candidates.end());

  std::vector<double> roots;
  for (double r : candidates) {
    if (!roots.empty() &&
        r - roots.back() <= kDedupTolerance * (1.0 + std::abs(r))) {
      continue;
    }
    roots.push_back(r);
  }
  return roots;
}

std::vector<PlanarPosition> CandidatePositions(const CubicSystem& sys) {
  const std::vector<double> xs = RealRoots(SylvesterResultant(sys, Axis::kY));
  const std::vector<double> ys = RealRoots(SylvesterResultant(sys, Axis::kX));
  if (xs.empty() || ys.empty()) {
    throw NoCandidates("resultant has no real roots (" +
                       std::to_string(xs.size()) + " x-roots, " +
                       std::to_string(ys.size()) + " y-roots)");
  }
  std::vector<PlanarPosition> out;
  out.reserve(xs.size() * ys.size());
  for (double x : xs) {
    for (double y : ys) out.push_back({x, y});
  }
  return out;
}

}  // namespace planar_pnp
