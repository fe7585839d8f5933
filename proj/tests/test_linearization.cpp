#include "balanced/linearization.hpp"

#include "balanced/stability.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <optional>

using namespace balanced;
namespace bt = balanced::testing;

TEST_CASE("directional derivative is linear in the direction") {
  std::mt19937_64 gen(51);
  const QuadratureGrid grid = make_grid(24, 48);
  const CurveScheme conic = bt::rational_normal_curve(2);
  const GroupElement g = bt::random_group_element(3, gen);

  const HermitianMatrix a = bt::random_direction(2, gen);
  const HermitianMatrix b = bt::random_direction(2, gen);
  const HermitianMatrix sum(a.entries() + b.entries());

  const double step = 1e-5;
  const Mat da = directional_derivative(g, Scheme(conic), std::nullopt, 0.0,
                                        a, step, grid)
                     .entries();
  const Mat db = directional_derivative(g, Scheme(conic), std::nullopt, 0.0,
                                        b, step, grid)
                     .entries();
  const Mat dsum = directional_derivative(g, Scheme(conic), std::nullopt, 0.0,
                                          sum, step, grid)
                       .entries();
  REQUIRE((dsum - da - db).cwiseAbs().maxCoeff() <
          1e-6 * (1.0 + dsum.norm()));
}

TEST_CASE("assembled operator is nearly symmetric and positive") {
  std::mt19937_64 gen(52);
  const QuadratureGrid grid = make_grid(24, 48);
  const CurveScheme conic = bt::rational_normal_curve(2);

  std::vector<ProjPoint> pts;
  for (int i = 0; i < 4; ++i) pts.push_back(bt::random_point(2, gen));
  const PointScheme d(pts, {1, 1, 1, 1});

  const GroupElement g = bt::random_group_element(3, gen);
  const LinearOperator op =
      assemble_operator(g, Scheme(conic), d, 0.8, 1e-5, grid);

  REQUIRE(op.matrix.rows() == 8);
  REQUIRE(op.asymmetry < 1e-5 * (1.0 + op.matrix.norm()));

  // The quadratic form behind the operator is a sum of squared gradient
  // lengths, so its spectrum sits above the finite-difference noise floor.
  REQUIRE(op.min_eigenvalue() > -1e-6 * (1.0 + op.matrix.norm()));
}

TEST_CASE("quadratic form rejects directions with nonzero trace") {
  const QuadratureGrid grid = make_grid(16, 32);
  const CurveScheme line = bt::rational_normal_curve(1);
  const GroupElement id = GroupElement::identity(2);
  REQUIRE_THROWS_AS(
      quadratic_form_perp(id, Scheme(line), std::nullopt, 0.0,
                          HermitianMatrix::identity(2), grid),
      configuration_error);
}

TEST_CASE("quadratic form vanishes along a symmetry of the image") {
  // diag(1, 0, -1) generates reparametrizations of the standard conic, so
  // the energy of its tangential-complement gradient is zero.
  const QuadratureGrid grid = make_grid(24, 48);
  const CurveScheme conic = bt::rational_normal_curve(2);
  Eigen::VectorXd h(3);
  h << 1.0, 0.0, -1.0;
  const HermitianMatrix sym = HermitianMatrix::diagonal(h);
  const double energy = quadratic_form_perp(
      GroupElement::identity(3), Scheme(conic), std::nullopt, 0.0, sym, grid);
  REQUIRE(energy < 1e-10);

  Eigen::VectorXd h2(3);
  h2 << 1.0, -2.0, 1.0;
  const double energy2 = quadratic_form_perp(
      GroupElement::identity(3), Scheme(conic), std::nullopt, 0.0,
      HermitianMatrix::diagonal(h2), grid);
  REQUIRE(energy2 > 1.0);
}

TEST_CASE("derivative pairing matches the gradient-energy integral") {
  const QuadratureGrid grid = make_grid(32, 64);
  const PointScheme e2 = roots_of_unity_config(2);

  const ConsistencyReport at_config = consistency_check(
      GroupElement::identity(3), Scheme(e2), e2, 1.0, grid, 6, 7001);
  REQUIRE(at_config.max_rel_discrepancy < 1e-4);
  REQUIRE(at_config.samples.size() == 6);
  for (const auto& s : at_config.samples) {
    REQUIRE(s.quadratic_form >= 0.0);
  }

  const CurveScheme conic = bt::rational_normal_curve(2);
  const auto aux_pts = sample_curve_points(conic, 16, 7);
  std::size_t next = 0;
  const PointScheme aux = find_general_position_subset(
      [&] { return aux_pts[next++ % aux_pts.size()]; }, 2, 16);
  const ConsistencyReport at_curve = consistency_check(
      GroupElement::identity(3), Scheme(conic), aux, 1.0, grid, 6, 7002);
  REQUIRE(at_curve.max_rel_discrepancy < 1e-4);
}

TEST_CASE("operator spectrum at the balanced conic has the symmetry kernel") {
  const QuadratureGrid grid = make_grid(32, 64);
  const CurveScheme conic = bt::rational_normal_curve(2);
  const LinearOperator op = assemble_operator(
      GroupElement::identity(3), Scheme(conic), std::nullopt, 0.0, 1e-5, grid);
  const Eigen::VectorXd eigs = op.eigenvalues();

  // Three flat directions from the reparametrization algebra, the other
  // five strictly positive.
  REQUIRE(std::abs(eigs(0)) < 1e-7);
  REQUIRE(std::abs(eigs(2)) < 1e-7);
  REQUIRE(eigs(3) > 0.5);
}
