#pragma once

#include "balanced/integration.hpp"
#include "balanced/projective.hpp"

#include <optional>

// The moment matrix of an embedded scheme and the centered residual whose
// zeros are the balanced embeddings.

namespace balanced {

// Which centering constant to subtract in the residual.  trace_free uses
// (volume(X) + t * mass(D))/(n+1), which makes the residual exactly
// traceless; scaled_volume uses (1+t) * volume(X)/(n+1) instead.
enum class LambdaConvention { trace_free, scaled_volume };

struct MomentMatrix {
  HermitianMatrix matrix;
  double mass = 0.0;  // trace of the matrix, the total scheme volume
};

struct Residual {
  HermitianMatrix matrix;
  double frobenius = 0.0;
};

// integral over S of z z^*/|z|^2 against the Fubini-Study volume (points
// are weighted by multiplicity).  Positive semidefinite, trace = volume.
MomentMatrix moment_matrix(const Scheme& scheme, const QuadratureGrid& grid);

double lambda_t(const Scheme& X, const std::optional<PointScheme>& D, double t,
                const QuadratureGrid& grid,
                LambdaConvention convention = LambdaConvention::trace_free);

// M(gX) + t M(gD) - lambda_t * Id.
Residual residual_t(const GroupElement& g, const Scheme& X,
                    const std::optional<PointScheme>& D, double t,
                    const QuadratureGrid& grid,
                    LambdaConvention convention = LambdaConvention::trace_free);

struct BalanceReport {
  bool balanced = false;
  Residual residual;
  double volume = 0.0;
  double tolerance_abs = 0.0;  // tol * volume, the threshold actually applied
  double eig_min = 0.0;
  double eig_max = 0.0;
};

// Is gX balanced: ||residual_0(g, X)||_F < tol * volume(X)?
BalanceReport balanced_check(const GroupElement& g, const Scheme& X,
                             const QuadratureGrid& grid, double tol);

}  // namespace balanced
