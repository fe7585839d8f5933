#pragma once

#include "balanced/linearization.hpp"
#include "balanced/moment.hpp"
#include "balanced/stability.hpp"

#include <optional>
#include <vector>

// Damped Newton iteration on the residual, the continuity path in t that
// connects a balanced divisor configuration to a balanced embedding of the
// scheme, and the gauge normal form of a solution.

namespace balanced {

struct SolverConfig {
  double residual_tol = 1e-9;   // relative to volume(X) + t * mass(D)
  int max_newton_iters = 60;
  double step_fd = 1e-5;        // finite-difference step for the operator
  double backtrack_shrink = 0.5;
  int max_backtracks = 30;
  double eig_floor = 1e-8;      // below this a spectral direction counts as flat
  double trunc_rel = 1e-7;      // relative spectral cutoff for the Newton step
  LambdaConvention convention = LambdaConvention::trace_free;
};

enum class SolveStatus { converged, stalled, degenerate };

const char* to_string(SolveStatus status);

struct NewtonResult {
  GroupElement g;
  Residual residual;
  SolveStatus status = SolveStatus::stalled;
  int iterations = 0;
  double min_eig = 0.0;  // smallest eigenvalue of the symmetrized operator
};

// Newton steps g <- exp(eta U) g, U solving L u = -r on the part of the
// spectrum above the truncation cutoff, with backtracking on the residual
// norm.  Flat directions (automorphisms of the image) are never stepped
// along; a solve with no usable spectrum reports degenerate.
NewtonResult newton_solve_at_t(const GroupElement& g0, const Scheme& X,
                               const std::optional<PointScheme>& D, double t,
                               const SolverConfig& config,
                               const QuadratureGrid& grid);

// The unique projective-linear map carrying n+2 source points to n+2
// reference points, both in general position.
GroupElement map_points_to_reference(const std::vector<ProjPoint>& from,
                                     const std::vector<ProjPoint>& to);

// Balanced embedding of the divisor alone: for n+2 simple points in general
// position this maps them onto the root-of-unity configuration and
// polishes; otherwise Newton runs from the identity.  Throws
// no_balanced_model_error if the iteration does not converge.
GroupElement balanced_start_for_D(const PointScheme& D,
                                  const SolverConfig& config,
                                  const QuadratureGrid& grid);

struct ContinuitySchedule {
  double t_start = 0.0;  // <= 0 means use 10 * volume(X) / mass(D)
  double t_end = 0.0;
  double gamma = 0.7;    // geometric shrink factor per step
  int max_halvings = 8;  // bisections of a rejected t-step
  double t_floor = 1e-2; // snap to t_end once the step lands this close
};

struct TraceRecord {
  double t = 0.0;
  Mat g;
  double residual = 0.0;
  int newton_iters = 0;
  double min_eig = 0.0;
  double cond_g = 0.0;
  SolveStatus status = SolveStatus::stalled;
};

struct ContinuityTrace {
  std::vector<TraceRecord> records;
  bool reached_end = false;
};

// Walks t from t_start down to t_end with warm starts, bisecting rejected
// steps.  Records are appended for accepted solves and for the final failed
// attempt on breakdown, so t is strictly decreasing across the trace.
ContinuityTrace continuity_run(const Scheme& X, const PointScheme& D,
                               const SolverConfig& config,
                               const ContinuitySchedule& schedule,
                               const QuadratureGrid& grid);

// Unit-determinant positive-Hermitian polar representative of g; drops the
// unitary factor and the overall scale.  Idempotent.
GroupElement gauge_normalize(const GroupElement& g);

}  // namespace balanced
