#pragma once

#include "balanced/moment.hpp"

#include <cstdint>
#include <optional>
#include <vector>

// Derivative of the residual along one-parameter subgroups exp(s A) with A
// traceless Hermitian, assembled as a real operator in the orthonormal
// traceless-Hermitian basis.  The independent check pairs the derivative
// with its own direction and compares against an integral formula for the
// gradient energy.

namespace balanced {

struct LinearOperator {
  Eigen::MatrixXd matrix;   // raw finite-difference columns
  double t = 0.0;
  double asymmetry = 0.0;   // ||L - L^T||_F, reported before symmetrizing

  Eigen::MatrixXd symmetrized() const {
    return 0.5 * (matrix + matrix.transpose());
  }
  Eigen::VectorXd eigenvalues() const;  // of the symmetrized operator
  double min_eigenvalue() const;
};

// d/ds residual_t(exp(s A) g) at s = 0 by central differences with the
// given step.  A should have unit Frobenius norm for the step to be
// meaningful uniformly across directions.
HermitianMatrix directional_derivative(
    const GroupElement& g, const Scheme& X, const std::optional<PointScheme>& D,
    double t, const HermitianMatrix& A, double step, const QuadratureGrid& grid,
    LambdaConvention convention = LambdaConvention::trace_free);

// One column per basis element, expressed in the same basis.
LinearOperator assemble_operator(
    const GroupElement& g, const Scheme& X, const std::optional<PointScheme>& D,
    double t, double step, const QuadratureGrid& grid,
    LambdaConvention convention = LambdaConvention::trace_free);

// integral over gX of |tangential complement of grad h_A|^2 plus
// t * sum over gD of |grad h_A|^2.  Equals the pairing
// trace(directional_derivative(A) * A) in the continuum; rejects A with a
// nonzero trace.  When the curve frame degenerates at a node the full
// gradient is counted there and the node is tallied in *degenerate_nodes.
double quadratic_form_perp(const GroupElement& g, const Scheme& X,
                           const std::optional<PointScheme>& D, double t,
                           const HermitianMatrix& A, const QuadratureGrid& grid,
                           int* degenerate_nodes = nullptr);

struct ConsistencySample {
  double pairing = 0.0;
  double quadratic_form = 0.0;
  double rel_discrepancy = 0.0;
};

struct ConsistencyReport {
  double max_rel_discrepancy = 0.0;
  std::vector<ConsistencySample> samples;
};

// Compares the two sides over seeded random unit directions.
ConsistencyReport consistency_check(
    const GroupElement& g, const Scheme& X, const std::optional<PointScheme>& D,
    double t, const QuadratureGrid& grid, int directions, std::uint64_t seed,
    double step = 1e-5);

}  // namespace balanced
