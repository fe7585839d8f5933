#pragma once

#include "balanced/parallel.hpp"
#include "balanced/projective.hpp"

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

// Embedded schemes (weighted point sets and rational curves) and the
// quadrature that integrates Fubini-Study densities over them.

namespace balanced {

// ---- schemes ---------------------------------------------------------------

// Finite set of points with positive integer multiplicities.
class PointScheme {
 public:
  PointScheme(std::vector<ProjPoint> points, std::vector<int> multiplicities);

  const std::vector<ProjPoint>& points() const { return points_; }
  const std::vector<int>& multiplicities() const { return multiplicities_; }
  int dim() const { return points_.front().dim(); }
  double mass() const;

  PointScheme transformed(const GroupElement& g) const;

 private:
  std::vector<ProjPoint> points_;
  std::vector<int> multiplicities_;
};

// Rational curve given by n+1 binary forms of common degree d, stored as a
// coefficient matrix with one row per component and columns ordered by the
// t-exponent: component_i(s, t) = sum_k coeffs(i, k) s^(d-k) t^k.
//
// Construction validates that the parametrization is base-point free (no
// common zero of the components) and that the image is not a single point.
class CurveScheme {
 public:
  CurveScheme(int degree, Mat coefficients);

  // Skips the base-point check; for coefficient matrices obtained from a
  // validated curve by an invertible or row-scaling operation.
  static CurveScheme unchecked(int degree, Mat coefficients);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(coeffs_.rows()) - 1; }
  const Mat& coefficients() const { return coeffs_; }

  // Dehomogenized parametrizations: chart 0 is (s, t) = (1, u), chart 1 is
  // (s, t) = (u, 1).  Together the two unit disks cover the parameter line,
  // overlapping only on the unit circle.
  Vec eval_chart(int chart, Cplx u) const;
  Vec deriv_chart(int chart, Cplx u) const;

  CurveScheme transformed(const GroupElement& g) const;

 private:
  CurveScheme(int degree, Mat coefficients, bool validate);

  int degree_;
  Mat coeffs_;
};

using Scheme = std::variant<PointScheme, CurveScheme>;

int scheme_dim(const Scheme& s);
Scheme scheme_transformed(const GroupElement& g, const Scheme& s);

// ---- quadrature ------------------------------------------------------------

// Nodes and weights for one unit parameter disk; the same rule is applied on
// both charts.  Radial direction uses Gauss-Legendre (polar Jacobian folded
// into the weight), angular direction an equispaced rule.
struct QuadratureGrid {
  int radial_order = 0;
  int angular_order = 0;
  std::vector<Cplx> nodes;
  std::vector<double> weights;
};

QuadratureGrid make_grid(int radial_order, int angular_order);

// Gauss-Legendre rule on [0, 1], by diagonalizing the Jacobi matrix.
void gauss_legendre_01(int order, std::vector<double>& nodes,
                       std::vector<double>& weights);

// Pullback density of the Fubini-Study form in the chart coordinate
// u = x + iy:  rho = 2(|Z|^2 |Z'|^2 - |<Z',Z>|^2)/|Z|^4,  with the area
// element rho dx dy.  Degenerate evaluation (|Z| ~ 0) is an error.
double fs_density(const CurveScheme& curve, int chart, Cplx u);

namespace detail {

double density_from_frame(const Vec& z, const Vec& zp);

}  // namespace detail

// Integral over the curve of f(Z, Z') against the Fubini-Study area form.
// The accumulator type needs operator+= and scalar multiplication; `init`
// supplies a correctly shaped zero.  Summation is blockwise in a fixed
// order, so results are bit-identical across runs and worker counts.
template <class T, class F>
T integrate_curve_frames(const CurveScheme& curve, const QuadratureGrid& grid,
                         F&& f, T init) {
  if (grid.nodes.empty()) {
    throw configuration_error("quadrature grid is empty");
  }
  const int per_chart = static_cast<int>(grid.nodes.size());
  const int total = 2 * per_chart;
  constexpr int kBlock = 256;
  const int num_blocks = (total + kBlock - 1) / kBlock;

  std::vector<T> partial(num_blocks, init);
  parallel_blocks(num_blocks, [&](int b) {
    T acc = init;
    const int begin = b * kBlock;
    const int end = std::min(total, begin + kBlock);
    for (int i = begin; i < end; ++i) {
      const int chart = i < per_chart ? 0 : 1;
      const int k = i < per_chart ? i : i - per_chart;
      const Vec z = curve.eval_chart(chart, grid.nodes[k]);
      const Vec zp = curve.deriv_chart(chart, grid.nodes[k]);
      const double rho = detail::density_from_frame(z, zp);
      acc += (grid.weights[k] * rho) * f(z, zp);
    }
    partial[b] = std::move(acc);
  });

  T result = std::move(init);
  for (auto& p : partial) result += p;
  return result;
}

// Same, for integrands depending only on the point.
template <class T, class F>
T integrate_curve(const CurveScheme& curve, const QuadratureGrid& grid, F&& f,
                  T init) {
  return integrate_curve_frames(
      curve, grid,
      [&](const Vec& z, const Vec&) { return f(ProjPoint(z)); },
      std::move(init));
}

// Multiplicity-weighted sum over a point scheme.
template <class T, class F>
T integrate_points(const PointScheme& scheme, F&& f, T init) {
  T result = std::move(init);
  for (std::size_t i = 0; i < scheme.points().size(); ++i) {
    result += static_cast<double>(scheme.multiplicities()[i]) *
              f(scheme.points()[i]);
  }
  return result;
}

// Total Fubini-Study mass: point count with multiplicity, or the curve area
// (2*pi*degree up to quadrature error).
double volume(const Scheme& s, const QuadratureGrid& grid);

// Deterministic parameter samples on the curve, uniform on the two charts.
std::vector<ProjPoint> sample_curve_points(const CurveScheme& curve, int count,
                                           std::uint64_t seed);

// Smallest chordal distance from p to the image of the curve.  Candidate
// parameters are the roots of a 2x2 minor of (p, Z(u)), so a point on the
// curve comes back at roundoff scale rather than grid scale.
double curve_membership_distance(const CurveScheme& curve, const ProjPoint& p);

}  // namespace balanced
