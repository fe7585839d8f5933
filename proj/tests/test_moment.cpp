#include "balanced/moment.hpp"

#include "balanced/stability.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <optional>

using namespace balanced;
namespace bt = balanced::testing;

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureGrid coarse() { return make_grid(32, 64); }

}  // namespace

TEST_CASE("roots-of-unity configurations have a scalar moment matrix") {
  const QuadratureGrid grid = coarse();
  for (int n = 1; n <= 5; ++n) {
    const PointScheme config = roots_of_unity_config(n);
    const MomentMatrix m = moment_matrix(Scheme(config), grid);
    const double expected = static_cast<double>(n + 2) / (n + 1);
    const Mat target = expected * Mat::Identity(n + 1, n + 1);
    REQUIRE((m.matrix.entries() - target).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(m.mass == Catch::Approx(n + 2).epsilon(1e-13));
  }
}

TEST_CASE("rational normal curves are balanced with scalar moment") {
  const QuadratureGrid grid = make_grid(48, 96);
  for (int d = 1; d <= 3; ++d) {
    const CurveScheme c = bt::rational_normal_curve(d);
    const MomentMatrix m = moment_matrix(Scheme(c), grid);
    const double diag = 2.0 * kPi * d / (d + 1);
    const Mat target = diag * Mat::Identity(d + 1, d + 1);
    REQUIRE((m.matrix.entries() - target).cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE(m.mass == Catch::Approx(2.0 * kPi * d).epsilon(1e-10));
  }
}

TEST_CASE("moment matrices are positive semidefinite with trace = mass") {
  std::mt19937_64 gen(41);
  const QuadratureGrid grid = coarse();

  Mat coeffs = bt::random_matrix(3, 3, gen);
  const CurveScheme curve(2, coeffs);
  const MomentMatrix mc = moment_matrix(Scheme(curve), grid);
  REQUIRE(mc.matrix.eigenvalues().minCoeff() > 0.0);
  REQUIRE(mc.matrix.trace() == Catch::Approx(mc.mass).epsilon(1e-12));

  std::vector<ProjPoint> pts;
  for (int i = 0; i < 4; ++i) pts.push_back(bt::random_point(2, gen));
  const PointScheme d(pts, {1, 2, 1, 3});
  const MomentMatrix md = moment_matrix(Scheme(d), grid);
  REQUIRE(md.matrix.eigenvalues().minCoeff() > -1e-14);
  REQUIRE(md.mass == Catch::Approx(7.0));

  // The point moment is the multiplicity-weighted projector sum.
  Mat manual = Mat::Zero(3, 3);
  const std::vector<int> mult = {1, 2, 1, 3};
  for (int i = 0; i < 4; ++i) {
    manual += static_cast<double>(mult[i]) *
              rank_one_projector(pts[i]).entries();
  }
  REQUIRE((md.matrix.entries() - manual).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("trace-free residuals are exactly traceless") {
  std::mt19937_64 gen(42);
  const QuadratureGrid grid = coarse();
  const CurveScheme conic = bt::rational_normal_curve(2);
  const GroupElement g = bt::random_group_element(3, gen);

  std::vector<ProjPoint> pts;
  for (int i = 0; i < 4; ++i) pts.push_back(bt::random_point(2, gen));
  const PointScheme d(pts, {1, 1, 1, 1});

  const Residual r = residual_t(g, Scheme(conic), d, 0.37, grid,
                                LambdaConvention::trace_free);
  REQUIRE(std::abs(r.matrix.trace()) < 1e-12 * r.matrix.frobenius());
  REQUIRE(r.frobenius == Catch::Approx(r.matrix.frobenius()));

  const Residual rv = residual_t(g, Scheme(conic), d, 0.37, grid,
                                 LambdaConvention::scaled_volume);
  // The two conventions differ by a multiple of the identity only.
  const Mat diff = r.matrix.entries() - rv.matrix.entries();
  const Cplx mean = diff.trace() / 3.0;
  REQUIRE((diff - mean * Mat::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("centering constants for both conventions") {
  const QuadratureGrid grid = coarse();
  const CurveScheme line = bt::rational_normal_curve(1);
  std::mt19937_64 gen(43);
  std::vector<ProjPoint> pts;
  for (int i = 0; i < 3; ++i) pts.push_back(bt::random_point(1, gen));
  const PointScheme d(pts, {1, 1, 1});

  const double t = 0.25;
  const double lam_tf = lambda_t(Scheme(line), d, t, grid,
                                 LambdaConvention::trace_free);
  REQUIRE(lam_tf == Catch::Approx((2.0 * kPi + t * 3.0) / 2.0).epsilon(1e-10));

  const double lam_sv = lambda_t(Scheme(line), d, t, grid,
                                 LambdaConvention::scaled_volume);
  REQUIRE(lam_sv == Catch::Approx((1.0 + t) * 2.0 * kPi / 2.0).epsilon(1e-10));
}

TEST_CASE("nonzero t requires an auxiliary scheme") {
  const QuadratureGrid grid = coarse();
  const CurveScheme line = bt::rational_normal_curve(1);
  const GroupElement id = GroupElement::identity(2);
  REQUIRE_THROWS_AS(
      residual_t(id, Scheme(line), std::nullopt, 0.5, grid),
      configuration_error);
  REQUIRE_NOTHROW(residual_t(id, Scheme(line), std::nullopt, 0.0, grid));
}

TEST_CASE("residuals transform equivariantly under unitaries") {
  std::mt19937_64 gen(44);
  const QuadratureGrid grid = coarse();
  const CurveScheme conic = bt::rational_normal_curve(2);
  const GroupElement g = bt::random_group_element(3, gen);
  const Mat u = bt::random_unitary(3, gen);
  const GroupElement ug(u * g.matrix());

  const Residual r = residual_t(g, Scheme(conic), std::nullopt, 0.0, grid);
  const Residual ru = residual_t(ug, Scheme(conic), std::nullopt, 0.0, grid);
  const Mat conjugated = u * r.matrix.entries() * u.adjoint();
  REQUIRE((ru.matrix.entries() - conjugated).cwiseAbs().maxCoeff() <
          1e-10 * (1.0 + r.frobenius));
  REQUIRE(ru.frobenius == Catch::Approx(r.frobenius).epsilon(1e-10));
}

TEST_CASE("residuals ignore overall scale of the group element") {
  std::mt19937_64 gen(45);
  const QuadratureGrid grid = coarse();
  const CurveScheme conic = bt::rational_normal_curve(2);
  const GroupElement g = bt::random_group_element(3, gen);
  const GroupElement cg(Cplx(0.0, -2.5) * g.matrix());

  const Residual r = residual_t(g, Scheme(conic), std::nullopt, 0.0, grid);
  const Residual rc = residual_t(cg, Scheme(conic), std::nullopt, 0.0, grid);
  REQUIRE((r.matrix.entries() - rc.matrix.entries()).cwiseAbs().maxCoeff() <
          1e-11);
}

TEST_CASE("balance check separates balanced from skewed embeddings") {
  const QuadratureGrid grid = coarse();
  const CurveScheme conic = bt::rational_normal_curve(2);

  const BalanceReport good =
      balanced_check(GroupElement::identity(3), Scheme(conic), grid, 1e-8);
  REQUIRE(good.balanced);
  REQUIRE(good.volume == Catch::Approx(4.0 * kPi).epsilon(1e-10));
  REQUIRE(good.tolerance_abs == Catch::Approx(1e-8 * good.volume));
  REQUIRE(good.eig_min <= good.eig_max);

  // diag(1, 0, -1) skews along the conic's own symmetry algebra and keeps
  // it balanced; diag(1, -2, 1) is orthogonal to that algebra and does not.
  Eigen::VectorXd skew(3);
  skew << 0.4, -0.8, 0.4;
  const GroupElement g(expm_hermitian(HermitianMatrix::diagonal(skew), 1.0));
  const BalanceReport bad = balanced_check(g, Scheme(conic), grid, 1e-8);
  REQUIRE_FALSE(bad.balanced);
  REQUIRE(bad.residual.frobenius > bad.tolerance_abs);
}
