#include "balanced/integration.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace balanced {

namespace {

constexpr double kRankTol = 1e-10;

// Largest row norm of a coefficient matrix; the overall scale of the curve.
double coeff_scale(const Mat& coeffs) {
  double scale = 0.0;
  for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
    scale = std::max(scale, coeffs.row(i).norm());
  }
  return scale;
}

// Roots of sum_k a_k u^k via the companion matrix, after trimming the
// numerically vanishing leading coefficients.
std::vector<Cplx> poly_roots(const Vec& coeffs, double scale) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs(deg)) < 1e-13 * scale) --deg;
  if (deg < 1) return {};
  Mat companion = Mat::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs(i) / coeffs(deg);
  Eigen::ComplexEigenSolver<Mat> solver(companion);
  std::vector<Cplx> roots;
  roots.reserve(deg);
  for (int i = 0; i < deg; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

}  // namespace

// ---- PointScheme -----------------------------------------------------------

PointScheme::PointScheme(std::vector<ProjPoint> points,
                         std::vector<int> multiplicities)
    : points_(std::move(points)), multiplicities_(std::move(multiplicities)) {
  if (points_.empty()) {
    throw configuration_error("point scheme must contain at least one point");
  }
  if (multiplicities_.size() != points_.size()) {
    throw configuration_error(
        "point scheme needs one multiplicity per point");
  }
  for (int m : multiplicities_) {
    if (m < 1) throw configuration_error("multiplicities must be positive");
  }
  for (const auto& p : points_) {
    if (p.dim() != points_.front().dim()) {
      throw configuration_error("point scheme mixes ambient dimensions");
    }
  }
}

double PointScheme::mass() const {
  double m = 0.0;
  for (int mult : multiplicities_) m += mult;
  return m;
}

PointScheme PointScheme::transformed(const GroupElement& g) const {
  std::vector<ProjPoint> moved;
  moved.reserve(points_.size());
  for (const auto& p : points_) moved.push_back(act(g, p));
  return PointScheme(std::move(moved), multiplicities_);
}

// ---- CurveScheme -----------------------------------------------------------

CurveScheme::CurveScheme(int degree, Mat coefficients)
    : CurveScheme(degree, std::move(coefficients), true) {}

CurveScheme CurveScheme::unchecked(int degree, Mat coefficients) {
  return CurveScheme(degree, std::move(coefficients), false);
}

CurveScheme::CurveScheme(int degree, Mat coefficients, bool validate)
    : degree_(degree), coeffs_(std::move(coefficients)) {
  if (degree_ < 1) {
    throw configuration_error("curve degree must be at least 1");
  }
  if (coeffs_.rows() < 2 || coeffs_.cols() != degree_ + 1) {
    throw configuration_error(
        "curve needs >= 2 components with degree+1 coefficients each");
  }
  if (!coeffs_.allFinite()) {
    throw configuration_error("curve coefficients must be finite");
  }
  const double scale = coeff_scale(coeffs_);
  if (scale == 0.0) {
    throw degenerate_parametrization_error("curve components are all zero");
  }
  if (!validate) return;

  // The image must not collapse to a point: at least two components have to
  // be linearly independent as forms.
  Eigen::JacobiSVD<Mat> svd(coeffs_);
  if (svd.singularValues()(1) < kRankTol * svd.singularValues()(0)) {
    throw degenerate_parametrization_error(
        "curve components are proportional; the image is a single point");
  }

  // Base-point freeness: the components may not share a zero.  Candidate
  // zeros are the roots of the largest component (plus the chart-1 origin);
  // evaluation uses whichever chart keeps the parameter inside the unit
  // disk, so magnitudes stay comparable to the coefficient scale.
  Eigen::Index pivot = 0;
  coeffs_.rowwise().norm().maxCoeff(&pivot);
  const double tol = 1e-8 * scale;
  auto value_at = [&](Cplx u_chart0) {
    const bool inner = std::abs(u_chart0) <= 1.0;
    const Cplx u = inner ? u_chart0 : Cplx(1.0, 0.0) / u_chart0;
    return eval_chart(inner ? 0 : 1, u).cwiseAbs().maxCoeff();
  };
  for (const Cplx& root : poly_roots(coeffs_.row(pivot).transpose(), scale)) {
    if (value_at(root) < tol) {
      throw degenerate_parametrization_error(
          "curve components share a common zero");
    }
  }
  if (eval_chart(1, Cplx(0.0, 0.0)).cwiseAbs().maxCoeff() < tol) {
    throw degenerate_parametrization_error(
        "curve components share a common zero at infinity");
  }
}

Vec CurveScheme::eval_chart(int chart, Cplx u) const {
  if (chart != 0 && chart != 1) {
    throw configuration_error("chart index must be 0 or 1");
  }
  const int d = degree_;
  Vec out(coeffs_.rows());
  for (Eigen::Index i = 0; i < coeffs_.rows(); ++i) {
    Cplx acc = chart == 0 ? coeffs_(i, d) : coeffs_(i, 0);
    for (int k = 1; k <= d; ++k) {
      acc = acc * u + (chart == 0 ? coeffs_(i, d - k) : coeffs_(i, k));
    }
    out(i) = acc;
  }
  return out;
}

Vec CurveScheme::deriv_chart(int chart, Cplx u) const {
  if (chart != 0 && chart != 1) {
    throw configuration_error("chart index must be 0 or 1");
  }
  const int d = degree_;
  Vec out(coeffs_.rows());
  for (Eigen::Index i = 0; i < coeffs_.rows(); ++i) {
    // Derivative of sum_k c_k u^k (chart 0) or sum_k c_k u^(d-k) (chart 1).
    Cplx acc = 0.0;
    for (int k = d; k >= 1; --k) {
      const Cplx c = chart == 0 ? coeffs_(i, k) : coeffs_(i, d - k);
      acc = acc * u + static_cast<double>(k) * c;
    }
    out(i) = acc;
  }
  return out;
}

CurveScheme CurveScheme::transformed(const GroupElement& g) const {
  if (g.size() != coeffs_.rows()) {
    throw configuration_error("curve transform: size mismatch");
  }
  // g is invertible, so base-point freeness is preserved; skip revalidation.
  return CurveScheme(degree_, g.matrix() * coeffs_, false);
}

// ---- scheme helpers --------------------------------------------------------

int scheme_dim(const Scheme& s) {
  return std::visit([](const auto& x) { return x.dim(); }, s);
}

Scheme scheme_transformed(const GroupElement& g, const Scheme& s) {
  return std::visit(
      [&](const auto& x) -> Scheme { return x.transformed(g); }, s);
}

// ---- quadrature ------------------------------------------------------------

void gauss_legendre_01(int order, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  if (order < 1) throw configuration_error("quadrature order must be positive");
  nodes.resize(order);
  weights.resize(order);
  if (order == 1) {
    nodes[0] = 0.5;
    weights[0] = 1.0;
    return;
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  for (int i = 0; i < order; ++i) {
    nodes[i] = 0.5 * (solver.eigenvalues()(i) + 1.0);
    const double v0 = solver.eigenvectors()(0, i);
    weights[i] = v0 * v0;  // 2 v0^2 on [-1,1], halved by the map to [0,1]
  }
}

QuadratureGrid make_grid(int radial_order, int angular_order) {
  if (radial_order < 1 || angular_order < 4) {
    throw configuration_error(
        "grid needs radial order >= 1 and angular order >= 4");
  }
  QuadratureGrid grid;
  grid.radial_order = radial_order;
  grid.angular_order = angular_order;
  std::vector<double> r, wr;
  gauss_legendre_01(radial_order, r, wr);
  grid.nodes.reserve(static_cast<std::size_t>(radial_order) * angular_order);
  grid.weights.reserve(grid.nodes.capacity());
  const double dtheta = 2.0 * std::numbers::pi / angular_order;
  for (int i = 0; i < radial_order; ++i) {
    for (int j = 0; j < angular_order; ++j) {
      const double theta = dtheta * j;
      grid.nodes.push_back(r[i] * Cplx(std::cos(theta), std::sin(theta)));
      grid.weights.push_back(wr[i] * r[i] * dtheta);  // polar Jacobian r dr dtheta
    }
  }
  return grid;
}

namespace detail {

double density_from_frame(const Vec& z, const Vec& zp) {
  const double zz = z.squaredNorm();
  if (!(zz > 1e-280)) {
    throw degenerate_parametrization_error(
        "curve parametrization vanishes at a quadrature node");
  }
  const double overlap = std::norm((z.adjoint() * zp)(0));
  return 2.0 * std::max(0.0, zz * zp.squaredNorm() - overlap) / (zz * zz);
}

}  // namespace detail

double fs_density(const CurveScheme& curve, int chart, Cplx u) {
  return detail::density_from_frame(curve.eval_chart(chart, u),
                                    curve.deriv_chart(chart, u));
}

double volume(const Scheme& s, const QuadratureGrid& grid) {
  if (const auto* pts = std::get_if<PointScheme>(&s)) return pts->mass();
  const auto& curve = std::get<CurveScheme>(s);
  return integrate_curve_frames(
      curve, grid, [](const Vec&, const Vec&) { return 1.0; }, 0.0);
}

std::vector<ProjPoint> sample_curve_points(const CurveScheme& curve, int count,
                                           std::uint64_t seed) {
  if (count < 1) throw configuration_error("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ProjPoint> samples;
  samples.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int chart = static_cast<int>(rng() & 1u);
    const double r = std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    const Cplx u = r * Cplx(std::cos(theta), std::sin(theta));
    samples.emplace_back(curve.eval_chart(chart, u));
  }
  return samples;
}

double curve_membership_distance(const CurveScheme& curve, const ProjPoint& p) {
  if (p.dim() != curve.dim()) {
    throw configuration_error("membership test: ambient dimension mismatch");
  }
  const Vec& pc = p.coords();
  Eigen::Index pivot = 0;
  pc.cwiseAbs().maxCoeff(&pivot);
  const Mat& c = curve.coefficients();
  const int d = curve.degree();
  double best = 1.0;
  for (int chart = 0; chart < 2; ++chart) {
    auto component_poly = [&](Eigen::Index i) {
      Vec poly(d + 1);
      for (int k = 0; k <= d; ++k) poly(k) = chart == 0 ? c(i, k) : c(i, d - k);
      return poly;
    };
    // The curve passes through p exactly at the common zeros of the minors
    // q_j(u) = p_pivot Z_j(u) - p_j Z_pivot(u); the roots of the largest
    // single minor are a superset, and each candidate is verified below.
    const Vec pivot_poly = component_poly(pivot);
    Vec minor;
    double minor_scale = 0.0;
    for (Eigen::Index j = 0; j < pc.size(); ++j) {
      if (j == pivot) continue;
      Vec q = pc(pivot) * component_poly(j) - pc(j) * pivot_poly;
      const double scale = q.cwiseAbs().maxCoeff();
      if (scale > minor_scale) {
        minor_scale = scale;
        minor = std::move(q);
      }
    }
    auto try_param = [&](Cplx u) {
      const Vec z = curve.eval_chart(chart, u);
      if (z.squaredNorm() < 1e-280) return;
      best = std::min(best, chordal_distance(ProjPoint(z), p));
    };
    if (minor_scale > 0.0) {
      for (const Cplx& root : poly_roots(minor, minor_scale)) try_param(root);
    }
    try_param(Cplx(0.0, 0.0));
  }
  return best;
}

}  // namespace balanced
