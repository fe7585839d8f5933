#include "balanced/stability.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace balanced {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kMemberTol = 1e-9;
constexpr double kBoundaryTol = 1e-9;
constexpr double kSupportTol = 1e-13;
constexpr double kMergeTol = 1e-8;

struct SupportPoint {
  Vec coords;  // unit norm
  int multiplicity = 0;
};

std::vector<SupportPoint> merge_support(const PointScheme& D) {
  std::vector<SupportPoint> support;
  for (std::size_t i = 0; i < D.points().size(); ++i) {
    const Vec v = D.points()[i].coords().normalized();
    bool merged = false;
    for (auto& s : support) {
      const double cos_sq = std::norm((s.coords.adjoint() * v)(0));
      if (1.0 - cos_sq < kMergeTol * kMergeTol) {
        s.multiplicity += D.multiplicities()[i];
        merged = true;
        break;
      }
    }
    if (!merged) support.push_back({v, D.multiplicities()[i]});
  }
  return support;
}

struct Subspace {
  Mat basis;  // orthonormal columns
  int rank = 0;
  std::vector<int> subset;  // support indices that span it
};

bool member(const Vec& unit_point, const Mat& basis) {
  const Vec residual = unit_point - basis * (basis.adjoint() * unit_point);
  return residual.norm() < kMemberTol;
}

// All proper subspaces spanned by subsets of the support, deduplicated by
// their orthogonal projectors.
std::vector<Subspace> enumerate_subspaces(
    const std::vector<SupportPoint>& support, int n) {
  const int size = n + 1;
  const int s = static_cast<int>(support.size());
  std::vector<Subspace> out;
  std::vector<Mat> projectors;

  std::vector<int> subset;
  auto emit = [&]() {
    Mat cols(size, subset.size());
    for (std::size_t j = 0; j < subset.size(); ++j) {
      cols.col(static_cast<Eigen::Index>(j)) = support[subset[j]].coords;
    }
    Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > kRankTol * sv(0)) ++rank;
    }
    if (rank == 0 || rank > n) return;
    Subspace sub;
    sub.basis = svd.matrixU().leftCols(rank);
    sub.rank = rank;
    sub.subset = subset;
    const Mat projector = sub.basis * sub.basis.adjoint();
    for (const auto& seen : projectors) {
      if ((projector - seen).norm() < 1e-8) return;
    }
    projectors.push_back(projector);
    out.push_back(std::move(sub));
  };

  // Subsets of size up to n, in lexicographic order.
  std::function<void(int, int)> recurse = [&](int start, int remaining) {
    if (!subset.empty()) emit();
    if (remaining == 0) return;
    for (int i = start; i < s; ++i) {
      subset.push_back(i);
      recurse(i + 1, remaining - 1);
      subset.pop_back();
    }
  };
  recurse(0, std::min(n, s));
  return out;
}

// Full unitary whose leading columns span, in order, the column groups fed
// in; later groups are reduced modulo the earlier ones.
Mat adapted_frame(const std::vector<Mat>& groups, int size) {
  Mat frame(size, size);
  int filled = 0;
  auto push = [&](Vec v) {
    for (int k = 0; k < filled; ++k) {
      v -= (frame.col(k).adjoint() * v)(0) * frame.col(k);
    }
    const double norm = v.norm();
    if (norm < 1e-10) return;
    frame.col(filled++) = v / norm;
  };
  for (const auto& g : groups) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) push(g.col(j));
  }
  for (int i = 0; i < size && filled < size; ++i) {
    push(Vec::Unit(size, i));
  }
  if (filled != size) {
    throw configuration_error("failed to complete an adapted frame");
  }
  return frame;
}

Eigen::VectorXd two_block_weights(int size, int rank) {
  Eigen::VectorXd w(size);
  for (int i = 0; i < size; ++i) {
    w(i) = i < rank ? static_cast<double>(size - rank)
                    : -static_cast<double>(rank);
  }
  return w;
}

double min_support_weight(const Vec& q, const Eigen::VectorXd& lambda) {
  const double scale = q.cwiseAbs().maxCoeff();
  double min_w = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (std::abs(q(i)) > kSupportTol * scale) min_w = std::min(min_w, lambda(i));
  }
  return min_w;
}

}  // namespace

// ---- weight vectors --------------------------------------------------------

WeightVector::WeightVector(Eigen::VectorXd weights)
    : weights_(std::move(weights)) {
  if (weights_.size() < 2 || !weights_.allFinite()) {
    throw configuration_error("weight vector must be finite with >= 2 entries");
  }
  const double norm = weights_.norm();
  if (norm == 0.0) {
    throw configuration_error("weight vector must not vanish");
  }
  if (std::abs(weights_.sum()) > 1e-9 * norm) {
    throw configuration_error("weight vector entries must sum to zero");
  }
}

const char* to_string(StabilityStatus status) {
  switch (status) {
    case StabilityStatus::stable:
      return "stable";
    case StabilityStatus::unstable:
      return "unstable";
    case StabilityStatus::boundary:
      return "not-stable-boundary";
  }
  return "unknown";
}

// ---- general position ------------------------------------------------------

bool general_position(const std::vector<ProjPoint>& points) {
  if (points.empty()) return false;
  const int n = points.front().dim();
  const int size = n + 1;
  const int count = static_cast<int>(points.size());
  for (const auto& p : points) {
    if (p.dim() != n) {
      throw configuration_error("general position: mixed dimensions");
    }
  }
  const int k = std::min(count, size);

  std::vector<int> subset(k);
  std::function<bool(int, int)> check = [&](int start, int depth) -> bool {
    if (depth == k) {
      Mat cols(size, k);
      for (int j = 0; j < k; ++j) {
        cols.col(j) = points[subset[j]].coords().normalized();
      }
      Eigen::JacobiSVD<Mat> svd(cols);
      const auto& sv = svd.singularValues();
      return sv(sv.size() - 1) > kRankTol * sv(0);
    }
    for (int i = start; i <= count - (k - depth); ++i) {
      subset[depth] = i;
      if (!check(i + 1, depth + 1)) return false;
    }
    return true;
  };
  return check(0, 0);
}

PointScheme find_general_position_subset(
    const std::function<ProjPoint()>& sampler, int n, int budget) {
  if (n < 1) throw configuration_error("projective dimension must be >= 1");
  std::vector<ProjPoint> accepted;
  for (int draws = 0; draws < budget; ++draws) {
    ProjPoint candidate = sampler();
    if (candidate.dim() != n) {
      throw configuration_error("sampler produced a point of wrong dimension");
    }
    std::vector<ProjPoint> trial = accepted;
    trial.push_back(candidate);
    if (general_position(trial)) accepted = std::move(trial);
    if (static_cast<int>(accepted.size()) == n + 2) {
      return PointScheme(std::move(accepted),
                         std::vector<int>(n + 2, 1));
    }
  }
  throw degenerate_source_error(
      "sampler did not supply n+2 points in general position within budget");
}

PointScheme roots_of_unity_config(int n) {
  if (n < 1) throw configuration_error("projective dimension must be >= 1");
  const double step = 2.0 * std::numbers::pi / (n + 2);
  std::vector<ProjPoint> points;
  points.reserve(n + 2);
  for (int b = 0; b < n + 2; ++b) {
    Vec v(n + 1);
    for (int a = 0; a <= n; ++a) {
      const double angle = step * a * b;
      v(a) = Cplx(std::cos(angle), std::sin(angle));
    }
    points.emplace_back(std::move(v));
  }
  return PointScheme(std::move(points), std::vector<int>(n + 2, 1));
}

// ---- counting criterion ----------------------------------------------------

StabilityVerdict point_set_stable(const PointScheme& D) {
  const int n = D.dim();
  const double mass = D.mass();
  const auto support = merge_support(D);
  const auto subspaces = enumerate_subspaces(support, n);

  double min_slack = std::numeric_limits<double>::infinity();
  const Subspace* worst = nullptr;
  for (const auto& sub : subspaces) {
    double count = 0.0;
    for (const auto& s : support) {
      if (member(s.coords, sub.basis)) count += s.multiplicity;
    }
    const double bound = mass * sub.rank / (n + 1);
    const double slack = bound - count;
    if (slack < min_slack) {
      min_slack = slack;
      worst = &sub;
    }
  }

  StabilityVerdict verdict;
  verdict.margin = min_slack;
  if (min_slack < -kBoundaryTol) {
    verdict.status = StabilityStatus::unstable;
  } else if (min_slack <= kBoundaryTol) {
    verdict.status = StabilityStatus::boundary;
  } else {
    verdict.status = StabilityStatus::stable;
    return verdict;
  }
  if (worst != nullptr) {
    StabilityWitness witness;
    witness.kind = "subspace-count";
    witness.support_subset = worst->subset;
    witness.value = min_slack;
    verdict.witness = std::move(witness);
  }
  return verdict;
}

// ---- weights through flat limits -------------------------------------------

ProjPoint flat_limit_point(const ProjPoint& p, const WeightVector& lambda) {
  if (lambda.size() != p.dim() + 1) {
    throw configuration_error("flat limit: weight size mismatch");
  }
  const Vec& v = p.coords();
  const double min_w = min_support_weight(v, lambda.weights());
  const double tie_tol = 1e-9 * (1.0 + lambda.weights().cwiseAbs().maxCoeff());
  const double scale = v.cwiseAbs().maxCoeff();
  Vec limit = Vec::Zero(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > kSupportTol * scale &&
        lambda.weights()(i) < min_w + tie_tol) {
      limit(i) = v(i);
    }
  }
  return ProjPoint(std::move(limit));
}

double chow_weight_points(const PointScheme& D, const WeightVector& lambda) {
  if (lambda.size() != D.dim() + 1) {
    throw configuration_error("chow weight: weight size mismatch");
  }
  const HermitianMatrix H = HermitianMatrix::diagonal(lambda.weights());
  double total = 0.0;
  for (std::size_t i = 0; i < D.points().size(); ++i) {
    const ProjPoint limit = flat_limit_point(D.points()[i], lambda);
    total += D.multiplicities()[i] * hamiltonian(H, limit);
  }
  return -total;
}

FramedWeight chow_weight_in_frame(const PointScheme& D, const Mat& frame,
                                  const WeightVector& lambda) {
  if (frame.rows() != D.dim() + 1 || frame.cols() != frame.rows()) {
    throw configuration_error("chow weight: frame size mismatch");
  }
  std::vector<ProjPoint> rotated;
  rotated.reserve(D.points().size());
  for (const auto& p : D.points()) {
    rotated.emplace_back(frame.adjoint() * p.coords());
  }
  const PointScheme framed(rotated, D.multiplicities());

  FramedWeight result;
  result.w = chow_weight_points(framed, lambda);
  result.limit_equals_config = true;
  for (const auto& q : rotated) {
    const ProjPoint limit = flat_limit_point(q, lambda);
    if (chordal_distance(limit, q) > kMemberTol) {
      result.limit_equals_config = false;
      break;
    }
  }
  return result;
}

StabilityVerdict chow_stability_sampled(const PointScheme& D, int samples,
                                        std::uint64_t seed) {
  const int n = D.dim();
  const int size = n + 1;
  const auto support = merge_support(D);
  const auto subspaces = enumerate_subspaces(support, n);

  struct Test {
    Mat frame;
    Eigen::VectorXd weights;
    std::vector<int> subset;
  };
  std::vector<Test> tests;

  // Two-block subgroups adapted to each subspace, both orientations.
  for (const auto& sub : subspaces) {
    const Mat frame = adapted_frame({sub.basis}, size);
    const Eigen::VectorXd w = two_block_weights(size, sub.rank);
    tests.push_back({frame, w, sub.subset});
    tests.push_back({frame, -w, sub.subset});
  }

  // Flag refinements of nested pairs.
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    for (std::size_t j = 0; j < subspaces.size(); ++j) {
      const auto& inner = subspaces[i];
      const auto& outer = subspaces[j];
      if (inner.rank >= outer.rank) continue;
      bool nested = true;
      for (Eigen::Index c = 0; c < inner.basis.cols(); ++c) {
        if (!member(inner.basis.col(c), outer.basis)) {
          nested = false;
          break;
        }
      }
      if (!nested) continue;
      const Mat frame = adapted_frame({inner.basis, outer.basis}, size);
      const Eigen::VectorXd w = two_block_weights(size, inner.rank) +
                                two_block_weights(size, outer.rank);
      std::vector<int> subset = inner.subset;
      subset.insert(subset.end(), outer.subset.begin(), outer.subset.end());
      tests.push_back({frame, w, subset});
    }
  }

  // Seeded fuzz: integer weights in random unitary frames.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> coarse(-4, 4);
  for (int trial = 0; trial < samples; ++trial) {
    Mat ginibre(size, size);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        ginibre(r, c) = Cplx(gauss(rng), gauss(rng));
      }
    }
    const Mat frame = Eigen::HouseholderQR<Mat>(ginibre).householderQ();
    Eigen::VectorXd w(size);
    do {
      for (int i = 0; i < size; ++i) w(i) = coarse(rng);
      w.array() -= w.mean();
    } while (w.norm() == 0.0);
    tests.push_back({frame, w, {}});
  }

  double min_w = std::numeric_limits<double>::infinity();
  const Test* worst = nullptr;
  bool worst_limit_fixed = false;
  for (const auto& test : tests) {
    const FramedWeight fw =
        chow_weight_in_frame(D, test.frame, WeightVector(test.weights));
    if (fw.w < min_w) {
      min_w = fw.w;
      worst = &test;
      worst_limit_fixed = fw.limit_equals_config;
    }
  }

  StabilityVerdict verdict;
  verdict.margin = min_w;
  if (min_w < -kBoundaryTol) {
    verdict.status = StabilityStatus::unstable;
  } else if (min_w <= kBoundaryTol) {
    verdict.status = StabilityStatus::boundary;
  } else {
    verdict.status = StabilityStatus::stable;
    return verdict;
  }
  if (worst != nullptr) {
    StabilityWitness witness;
    witness.kind = "weight-frame";
    witness.support_subset = worst->subset;
    witness.weights = worst->weights;
    witness.frame = worst->frame;
    witness.value = min_w;
    witness.limit_equals_config = worst_limit_fixed;
    verdict.witness = std::move(witness);
  }
  return verdict;
}

// ---- curve weights ---------------------------------------------------------

CurveWeightEstimate chow_weight_curve_estimate(
    const CurveScheme& C, const WeightVector& lambda,
    const std::vector<double>& s_values, const QuadratureGrid& grid) {
  if (lambda.size() != C.dim() + 1) {
    throw configuration_error("curve weight: weight size mismatch");
  }
  if (s_values.size() < 2) {
    throw configuration_error("curve weight needs at least two s values");
  }
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    if (!(s_values[i] >= 1e-4)) {
      throw configuration_error("curve weight: s values must be >= 1e-4");
    }
    if (i > 0 && !(s_values[i] < s_values[i - 1])) {
      throw configuration_error("curve weight: s values must decrease");
    }
  }

  CurveWeightEstimate est;
  est.s_values = s_values;
  const Eigen::VectorXd& lam = lambda.weights();
  for (double s : s_values) {
    Mat scaled = C.coefficients();
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) {
      scaled.row(i) *= std::pow(s, lam(i));
    }
    // Projective rescale to keep coefficient magnitudes representable.
    double max_row = 0.0;
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) {
      max_row = std::max(max_row, scaled.row(i).norm());
    }
    scaled /= max_row;
    const CurveScheme moved = CurveScheme::unchecked(C.degree(), scaled);
    const double value = integrate_curve_frames(
        moved, grid,
        [&](const Vec& z, const Vec&) {
          double h = 0.0;
          const double zz = z.squaredNorm();
          for (Eigen::Index i = 0; i < z.size(); ++i) {
            h += lam(i) * std::norm(z(i));
          }
          return h / zz;
        },
        0.0);
    est.values.push_back(-value);
  }

  double spread = 0.0;
  for (double v : est.values) {
    spread = std::max(spread, std::abs(v - est.values.front()));
  }
  const double scale = 1.0 + std::abs(est.values.back());
  if (spread < 1e-8 * scale) {
    // The subgroup moves the curve inside its own orbit closure trivially;
    // the weight is already the limit.
    est.invariant_branch = true;
    est.converged = true;
    est.estimate = est.values.back();
    return est;
  }

  const std::size_t m = est.values.size();
  const double last_diff = est.values[m - 1] - est.values[m - 2];
  if (m >= 3) {
    const double prev_diff = est.values[m - 2] - est.values[m - 3];
    if (std::abs(prev_diff) > 1e-14 * scale) {
      const double q = last_diff / prev_diff;
      est.convergence_ratio = q;
      if (std::abs(q) < 0.97) {
        est.estimate = est.values[m - 1] + last_diff * q / (1.0 - q);
        est.converged = true;
        return est;
      }
    }
  }
  est.estimate = est.values.back();
  est.converged = false;
  return est;
}

}  // namespace balanced
