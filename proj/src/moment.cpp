#include "balanced/moment.hpp"

namespace balanced {

namespace {

Mat projector_sum(const Scheme& scheme, const QuadratureGrid& grid) {
  const int size = scheme_dim(scheme) + 1;
  if (const auto* pts = std::get_if<PointScheme>(&scheme)) {
    Mat m = Mat::Zero(size, size);
    for (std::size_t i = 0; i < pts->points().size(); ++i) {
      const Vec& v = pts->points()[i].coords();
      m += (static_cast<double>(pts->multiplicities()[i]) / v.squaredNorm()) *
           (v * v.adjoint());
    }
    return m;
  }
  const auto& curve = std::get<CurveScheme>(scheme);
  return integrate_curve_frames(
      curve, grid,
      [](const Vec& z, const Vec&) -> Mat {
        return (z * z.adjoint()) / z.squaredNorm();
      },
      Mat(Mat::Zero(size, size)));
}

}  // namespace

MomentMatrix moment_matrix(const Scheme& scheme, const QuadratureGrid& grid) {
  HermitianMatrix m(projector_sum(scheme, grid));
  return MomentMatrix{m, m.trace()};
}

double lambda_t(const Scheme& X, const std::optional<PointScheme>& D, double t,
                const QuadratureGrid& grid, LambdaConvention convention) {
  const int size = scheme_dim(X) + 1;
  const double vol_x = volume(X, grid);
  if (convention == LambdaConvention::scaled_volume) {
    return (1.0 + t) * vol_x / size;
  }
  const double mass_d = D ? D->mass() : 0.0;
  return (vol_x + t * mass_d) / size;
}

Residual residual_t(const GroupElement& g, const Scheme& X,
                    const std::optional<PointScheme>& D, double t,
                    const QuadratureGrid& grid, LambdaConvention convention) {
  const int size = scheme_dim(X) + 1;
  if (g.size() != size) {
    throw configuration_error("residual: group element size mismatch");
  }
  if (D && D->dim() + 1 != size) {
    throw configuration_error("residual: divisor dimension mismatch");
  }
  if (t != 0.0 && !D) {
    throw configuration_error("residual: t != 0 requires a point divisor");
  }

  Mat total = projector_sum(scheme_transformed(g, X), grid);
  const double vol_x = total.trace().real();
  if (D && t != 0.0) {
    total += t * projector_sum(Scheme(D->transformed(g)), grid);
  }

  // Centering from the same quadrature values keeps the trace_free residual
  // traceless to rounding even when the volume integral carries error.
  const double lambda = convention == LambdaConvention::trace_free
                            ? total.trace().real() / size
                            : (1.0 + t) * vol_x / size;

  HermitianMatrix r(total - lambda * Mat::Identity(size, size));
  return Residual{r, r.frobenius()};
}

BalanceReport balanced_check(const GroupElement& g, const Scheme& X,
                             const QuadratureGrid& grid, double tol) {
  if (!(tol > 0.0)) {
    throw configuration_error("balanced_check tolerance must be positive");
  }
  BalanceReport report{false, residual_t(g, X, std::nullopt, 0.0, grid),
                       0.0, 0.0, 0.0, 0.0};
  report.volume = volume(scheme_transformed(g, X), grid);
  report.tolerance_abs = tol * report.volume;
  report.balanced = report.residual.frobenius < report.tolerance_abs;
  const Eigen::VectorXd eigs = report.residual.matrix.eigenvalues();
  report.eig_min = eigs.minCoeff();
  report.eig_max = eigs.maxCoeff();
  return report;
}

}  // namespace balanced
