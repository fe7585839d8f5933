#include "balanced/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace balanced {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::stalled:
      return "stalled";
    case SolveStatus::degenerate:
      return "degenerate";
  }
  return "unknown";
}

namespace {

// Keeps iterates at a tame Frobenius scale; the residual only sees g up to
// scalars, so this does not move the iteration.
GroupElement rescaled(const Mat& m) {
  const double norm = m.norm();
  return GroupElement(m * (std::sqrt(static_cast<double>(m.rows())) / norm));
}

// Past this condition number the image is squashed beyond what the
// quadrature can resolve, and residual values stop being trustworthy.
constexpr double kCondCap = 1e12;

}  // namespace

NewtonResult newton_solve_at_t(const GroupElement& g0, const Scheme& X,
                               const std::optional<PointScheme>& D, double t,
                               const SolverConfig& config,
                               const QuadratureGrid& grid) {
  if (t < 0.0) throw configuration_error("newton solve: t must be >= 0");
  const int n = scheme_dim(X);
  const auto basis = traceless_hermitian_basis(n);

  const double mass_t = volume(X, grid) + (D ? t * D->mass() : 0.0);
  const double tol = config.residual_tol * mass_t;

  GroupElement g = rescaled(g0.matrix());
  Residual residual = residual_t(g, X, D, t, grid, config.convention);
  double last_min_eig = 0.0;
  bool have_eig = false;

  for (int iter = 0; iter <= config.max_newton_iters; ++iter) {
    if (residual.frobenius < tol) {
      // Report the spectrum at the solution; the path driver records it.
      const LinearOperator op = assemble_operator(g, X, D, t, config.step_fd,
                                                  grid, config.convention);
      return NewtonResult{g, residual, SolveStatus::converged, iter,
                          op.min_eigenvalue()};
    }
    if (iter == config.max_newton_iters) break;

    const LinearOperator op = assemble_operator(g, X, D, t, config.step_fd,
                                                grid, config.convention);
    const Eigen::MatrixXd sym = op.symmetrized();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    last_min_eig = eig.eigenvalues().minCoeff();
    have_eig = true;

    // Solve L u = -r on the part of the spectrum above the cutoff.  A
    // direction with near-zero eigenvalue is flat to first order (an
    // automorphism of the image, or a genuine degeneracy), and a shifted
    // solve would inflate its component to r/shift; truncation leaves it
    // alone instead.
    const double cutoff = std::max(
        config.eig_floor,
        config.trunc_rel * eig.eigenvalues().cwiseAbs().maxCoeff());
    const Eigen::VectorXd rhs = -hermitian_coords(residual.matrix, basis);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(rhs.size());
    int usable = 0;
    for (Eigen::Index k = 0; k < rhs.size(); ++k) {
      const double lam = eig.eigenvalues()(k);
      if (lam <= cutoff) continue;
      u += (eig.eigenvectors().col(k).dot(rhs) / lam) *
           eig.eigenvectors().col(k);
      ++usable;
    }
    if (usable == 0) {
      return NewtonResult{g, residual, SolveStatus::degenerate, iter,
                          last_min_eig};
    }
    const HermitianMatrix direction = hermitian_from_coords(u, basis);

    // Backtracking on the residual norm.
    bool accepted = false;
    double eta = 1.0;
    for (int bt = 0; bt <= config.max_backtracks; ++bt) {
      GroupElement trial = g;
      bool valid = true;
      try {
        trial = rescaled(expm_hermitian(direction, eta) * g.matrix());
      } catch (const configuration_error&) {
        valid = false;  // step left the invertible regime; shrink
      }
      if (valid) {
        const Residual trial_res =
            residual_t(trial, X, D, t, grid, config.convention);
        if (trial_res.frobenius <= (1.0 - 1e-4 * eta) * residual.frobenius) {
          g = trial;
          residual = trial_res;
          accepted = true;
          break;
        }
      }
      eta *= config.backtrack_shrink;
    }
    if (!accepted) {
      const SolveStatus status = last_min_eig < config.eig_floor
                                     ? SolveStatus::degenerate
                                     : SolveStatus::stalled;
      return NewtonResult{g, residual, status, iter, last_min_eig};
    }
    if (g.condition_number() > kCondCap) {
      return NewtonResult{g, residual, SolveStatus::degenerate, iter + 1,
                          last_min_eig};
    }
  }

  const SolveStatus status = have_eig && last_min_eig < config.eig_floor
                                 ? SolveStatus::degenerate
                                 : SolveStatus::stalled;
  return NewtonResult{g, residual, status, config.max_newton_iters,
                      last_min_eig};
}

GroupElement map_points_to_reference(const std::vector<ProjPoint>& from,
                                     const std::vector<ProjPoint>& to) {
  if (from.empty() || from.size() != to.size()) {
    throw configuration_error("point map: source and reference sizes differ");
  }
  const int n = from.front().dim();
  if (static_cast<int>(from.size()) != n + 2 || to.front().dim() != n) {
    throw configuration_error("point map needs exactly n+2 points");
  }

  // A basis of n+1 points rescaled so the remaining point has coordinates
  // (1, ..., 1) determines the map; general position makes every rescaling
  // coefficient nonzero.
  auto normalize_frame = [n](const std::vector<ProjPoint>& pts) {
    Mat basis(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
      basis.col(j) = pts[j].coords().normalized();
    }
    const Vec last = pts[n + 1].coords().normalized();
    Eigen::FullPivLU<Mat> lu(basis);
    if (!lu.isInvertible()) {
      throw degenerate_source_error("point map: basis points are dependent");
    }
    const Vec c = lu.solve(last);
    if (c.cwiseAbs().minCoeff() < 1e-12 * c.cwiseAbs().maxCoeff()) {
      throw degenerate_source_error(
          "point map: configuration is not in general position");
    }
    return Mat(basis * c.asDiagonal());
  };

  const Mat src = normalize_frame(from);
  const Mat dst = normalize_frame(to);
  Mat g = dst * src.inverse();
  return GroupElement(g * (std::sqrt(n + 1.0) / g.norm()));
}

GroupElement balanced_start_for_D(const PointScheme& D,
                                  const SolverConfig& config,
                                  const QuadratureGrid& grid) {
  const int n = D.dim();
  GroupElement g0 = GroupElement::identity(n + 1);
  const bool simple = std::all_of(D.multiplicities().begin(),
                                  D.multiplicities().end(),
                                  [](int m) { return m == 1; });
  if (static_cast<int>(D.points().size()) == n + 2 && simple &&
      general_position(D.points())) {
    g0 = map_points_to_reference(D.points(),
                                 roots_of_unity_config(n).points());
  }
  const NewtonResult result =
      newton_solve_at_t(g0, Scheme(D), std::nullopt, 0.0, config, grid);
  if (result.status != SolveStatus::converged) {
    throw no_balanced_model_error(
        "divisor did not reach a balanced configuration within budget");
  }
  return result.g;
}

ContinuityTrace continuity_run(const Scheme& X, const PointScheme& D,
                               const SolverConfig& config,
                               const ContinuitySchedule& schedule,
                               const QuadratureGrid& grid) {
  if (!(schedule.gamma > 0.0 && schedule.gamma < 1.0)) {
    throw configuration_error("continuity schedule needs gamma in (0,1)");
  }
  if (schedule.t_end < 0.0) {
    throw configuration_error("continuity schedule needs t_end >= 0");
  }
  double t_start = schedule.t_start;
  if (t_start <= 0.0) {
    t_start = 10.0 * volume(X, grid) / D.mass();
  }
  if (!(t_start > schedule.t_end)) {
    throw configuration_error("continuity schedule needs t_start > t_end");
  }

  ContinuityTrace trace;
  auto push = [&trace](double t, const NewtonResult& res) {
    trace.records.push_back(TraceRecord{t, res.g.matrix(),
                                        res.residual.frobenius, res.iterations,
                                        res.min_eig, res.g.condition_number(),
                                        res.status});
  };

  GroupElement g = balanced_start_for_D(D, config, grid);

  NewtonResult entry = newton_solve_at_t(g, X, D, t_start, config, grid);
  push(t_start, entry);
  if (entry.status != SolveStatus::converged) return trace;
  g = entry.g;

  double t = t_start;
  while (t > schedule.t_end) {
    double t_target = std::max(schedule.gamma * t, schedule.t_end);
    if (t_target - schedule.t_end < schedule.t_floor) {
      t_target = schedule.t_end;
    }
    double t_try = t_target;
    int halvings = 0;
    while (true) {
      NewtonResult res = newton_solve_at_t(g, X, D, t_try, config, grid);
      if (res.status == SolveStatus::converged) {
        push(t_try, res);
        g = res.g;
        t = t_try;
        break;
      }
      ++halvings;
      const double next_try = 0.5 * (t + t_try);
      if (halvings > schedule.max_halvings ||
          t - next_try < 1e-12 * std::max(1.0, t_start)) {
        push(t_try, res);
        return trace;  // breakdown: trace ends with the failed attempt
      }
      t_try = next_try;
    }
  }
  trace.reached_end = true;
  return trace;
}

GroupElement gauge_normalize(const GroupElement& g) {
  Eigen::JacobiSVD<Mat> svd(g.matrix(),
                            Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  // Positive polar factor V Sigma V^*, scaled to unit determinant; the
  // determinant of the polar factor is the product of singular values.
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) log_det += std::log(sigma(i));
  const double scale = std::exp(-log_det / sigma.size());
  const Mat h = svd.matrixV() * (scale * sigma).asDiagonal() *
                svd.matrixV().adjoint();
  return GroupElement(h);
}

}  // namespace balanced
