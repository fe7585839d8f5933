#pragma once

#include "balanced/integration.hpp"
#include "balanced/projective.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

// Stability tests for point configurations: the subspace counting
// criterion, one-parameter-subgroup weights through flat limits, and a
// quadrature estimate of the corresponding weight for curves.

namespace balanced {

// Real weight vector of a diagonal one-parameter subgroup; entries must sum
// to zero and not all vanish.
class WeightVector {
 public:
  explicit WeightVector(Eigen::VectorXd weights);

  const Eigen::VectorXd& weights() const { return weights_; }
  int size() const { return static_cast<int>(weights_.size()); }

 private:
  Eigen::VectorXd weights_;
};

enum class StabilityStatus { stable, unstable, boundary };

const char* to_string(StabilityStatus status);

struct StabilityWitness {
  // For counting verdicts: indices into the merged support whose span
  // violates (or saturates) the bound.  For weight verdicts: the frame and
  // weights of the worst one-parameter subgroup found.
  std::string kind;  // "subspace-count" or "weight-frame"
  std::vector<int> support_subset;
  Eigen::VectorXd weights;
  Mat frame;
  double value = 0.0;  // the violating slack or weight
  bool limit_equals_config = false;
};

struct StabilityVerdict {
  StabilityStatus status = StabilityStatus::stable;
  double margin = 0.0;  // worst slack (counting) or worst weight (chow)
  std::optional<StabilityWitness> witness;
};

// Every subset of at most n+1 of the points is linearly independent
// (numerical rank with relative threshold 1e-10).
bool general_position(const std::vector<ProjPoint>& points);

// Draws from the sampler until n+2 points in general position are
// collected; throws degenerate_source_error when the budget runs out.
PointScheme find_general_position_subset(
    const std::function<ProjPoint()>& sampler, int n, int budget);

// The n+2 points [1 : zeta^b : ... : zeta^(n b)], zeta = exp(2 pi i/(n+2)).
PointScheme roots_of_unity_config(int n);

// Counting criterion: stable iff every proper subspace P spanned by support
// points satisfies  #(P cap D) < mass(D) (dim P + 1)/(n+1), counted with
// multiplicity.  Boundary when the worst slack sits within 1e-9 of zero.
StabilityVerdict point_set_stable(const PointScheme& D);

// Limit of diag(s^lambda) p as s -> 0: coordinates achieving the minimal
// weight over the support survive, the rest are zeroed.
ProjPoint flat_limit_point(const ProjPoint& p, const WeightVector& lambda);

// w(D, lambda) = -sum_p mult(p) h_diag(lambda)(flat limit of p).  Positive
// for stable configurations; homogeneous of degree 1 in lambda.
double chow_weight_points(const PointScheme& D, const WeightVector& lambda);

struct FramedWeight {
  double w = 0.0;
  bool limit_equals_config = false;  // every point fixed by its own limit
};

// Same weight with the subgroup diagonal in the columns of `frame`
// (expected unitary).  This is what witnesses store, so a verdict can be
// replayed from its witness alone.
FramedWeight chow_weight_in_frame(const PointScheme& D, const Mat& frame,
                                  const WeightVector& lambda);

// Sweeps the weight over every two-block subgroup adapted to a subspace
// spanned by support points, over flag refinements of nested pairs of such
// subspaces, and over `samples` seeded random frames.  Unstable when some
// weight falls below -1e-9; boundary when the minimum sits within 1e-9 of
// zero (this is where limits reproducing the configuration show up, flagged
// on the witness).
StabilityVerdict chow_stability_sampled(const PointScheme& D, int samples,
                                        std::uint64_t seed);

struct CurveWeightEstimate {
  double estimate = 0.0;
  bool converged = false;
  bool invariant_branch = false;  // weight constant in s: subgroup fixes the curve
  double convergence_ratio = 0.0;
  std::vector<double> s_values;
  std::vector<double> values;
};

// W(s) = -integral over diag(s^lambda) C of h_diag(lambda), extrapolated
// s -> 0 by Richardson steps on a decreasing schedule (all s >= 1e-4).
CurveWeightEstimate chow_weight_curve_estimate(const CurveScheme& C,
                                               const WeightVector& lambda,
                                               const std::vector<double>& s_values,
                                               const QuadratureGrid& grid);

}  // namespace balanced
