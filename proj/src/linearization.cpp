#include "balanced/linearization.hpp"

#include <Eigen/Eigenvalues>

#include <atomic>
#include <cmath>
#include <random>

namespace balanced {

Eigen::VectorXd LinearOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double LinearOperator::min_eigenvalue() const {
  return eigenvalues().minCoeff();
}

HermitianMatrix directional_derivative(const GroupElement& g, const Scheme& X,
                                       const std::optional<PointScheme>& D,
                                       double t, const HermitianMatrix& A,
                                       double step, const QuadratureGrid& grid,
                                       LambdaConvention convention) {
  if (!(step > 0.0)) {
    throw configuration_error("finite-difference step must be positive");
  }
  const GroupElement fwd(expm_hermitian(A, step) * g.matrix());
  const GroupElement bwd(expm_hermitian(A, -step) * g.matrix());
  const Residual rp = residual_t(fwd, X, D, t, grid, convention);
  const Residual rm = residual_t(bwd, X, D, t, grid, convention);
  return HermitianMatrix((rp.matrix.entries() - rm.matrix.entries()) /
                         (2.0 * step));
}

LinearOperator assemble_operator(const GroupElement& g, const Scheme& X,
                                 const std::optional<PointScheme>& D, double t,
                                 double step, const QuadratureGrid& grid,
                                 LambdaConvention convention) {
  const int n = scheme_dim(X);
  const auto basis = traceless_hermitian_basis(n);
  const int dim = static_cast<int>(basis.size());

  LinearOperator op;
  op.t = t;
  op.matrix.resize(dim, dim);
  // Columns are independent residual sweeps; farm them out as blocks.
  parallel_blocks(dim, [&](int k) {
    const HermitianMatrix deriv =
        directional_derivative(g, X, D, t, basis[k], step, grid, convention);
    op.matrix.col(k) = hermitian_coords(deriv, basis);
  });
  op.asymmetry = (op.matrix - op.matrix.transpose()).norm();
  return op;
}

namespace {

// Energy of the component of grad h_A orthogonal to the complex tangent
// line spanned by zp, at the curve point z.  Both grad h_A and the tangent
// are taken orthogonal to z itself.
double perp_energy(const Mat& A, const Vec& z, const Vec& zp,
                   std::atomic<int>* degenerate) {
  const double zz = z.squaredNorm();
  const double h = (z.adjoint() * A * z)(0).real() / zz;
  const Vec a = A * z - h * z;
  const double aa = a.squaredNorm();

  Vec w = zp - ((z.adjoint() * zp)(0) / zz) * z;
  const double ww = w.squaredNorm();
  if (!(ww > 1e-28 * zp.squaredNorm())) {
    // Frame collapses (critical parameter value): count the full gradient.
    if (degenerate) degenerate->fetch_add(1);
    return 2.0 * aa / zz;
  }
  const double along = std::norm((w.adjoint() * a)(0)) / ww;
  return 2.0 * std::max(0.0, aa - along) / zz;
}

}  // namespace

double quadratic_form_perp(const GroupElement& g, const Scheme& X,
                           const std::optional<PointScheme>& D, double t,
                           const HermitianMatrix& A, const QuadratureGrid& grid,
                           int* degenerate_nodes) {
  if (std::abs(A.trace()) > 1e-8 * std::max(A.frobenius(), 1e-300)) {
    throw configuration_error("quadratic form needs a traceless direction");
  }
  if (t != 0.0 && !D) {
    throw configuration_error("quadratic form: t != 0 requires a divisor");
  }

  std::atomic<int> degenerate{0};
  double total = 0.0;
  if (const auto* pts = std::get_if<PointScheme>(&X)) {
    const PointScheme moved = pts->transformed(g);
    total = integrate_points(
        moved,
        [&](const ProjPoint& p) {
          return fs_norm_sq(fundamental_vector_field(A, p));
        },
        0.0);
  } else {
    const CurveScheme moved = std::get<CurveScheme>(X).transformed(g);
    total = integrate_curve_frames(
        moved, grid,
        [&](const Vec& z, const Vec& zp) {
          return perp_energy(A.entries(), z, zp, &degenerate);
        },
        0.0);
  }

  if (D && t != 0.0) {
    const PointScheme moved = D->transformed(g);
    total += t * integrate_points(
                     moved,
                     [&](const ProjPoint& p) {
                       return fs_norm_sq(fundamental_vector_field(A, p));
                     },
                     0.0);
  }
  if (degenerate_nodes) *degenerate_nodes = degenerate.load();
  return total;
}

ConsistencyReport consistency_check(const GroupElement& g, const Scheme& X,
                                    const std::optional<PointScheme>& D,
                                    double t, const QuadratureGrid& grid,
                                    int directions, std::uint64_t seed,
                                    double step) {
  if (directions < 1) {
    throw configuration_error("consistency check needs at least one direction");
  }
  const int n = scheme_dim(X);
  const auto basis = traceless_hermitian_basis(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double scale = volume(X, grid) + (D ? t * D->mass() : 0.0);
  ConsistencyReport report;
  report.samples.reserve(directions);
  for (int trial = 0; trial < directions; ++trial) {
    Eigen::VectorXd coords(basis.size());
    for (Eigen::Index i = 0; i < coords.size(); ++i) coords(i) = gauss(rng);
    coords.normalize();
    const HermitianMatrix A = hermitian_from_coords(coords, basis);

    const HermitianMatrix deriv =
        directional_derivative(g, X, D, t, A, step, grid);
    ConsistencySample sample;
    sample.pairing = trace_pairing(deriv, A);
    sample.quadratic_form = quadratic_form_perp(g, X, D, t, A, grid);
    const double denom = std::max(
        {std::abs(sample.pairing), std::abs(sample.quadratic_form),
         1e-12 * (1.0 + scale)});
    sample.rel_discrepancy =
        std::abs(sample.pairing - sample.quadratic_form) / denom;
    report.max_rel_discrepancy =
        std::max(report.max_rel_discrepancy, sample.rel_discrepancy);
    report.samples.push_back(sample);
  }
  return report;
}

}  // namespace balanced
