#pragma once

#include "balanced/integration.hpp"
#include "balanced/projective.hpp"
#include "balanced/stability.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Seeded generators shared by the test binaries.  Everything is driven by an
// explicit mt19937_64 so failures reproduce from the seed alone.

namespace balanced::testing {

inline Cplx random_cplx(std::mt19937_64& gen) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double re = gauss(gen);
  const double im = gauss(gen);
  return Cplx(re, im);
}

inline Vec random_vec(int size, std::mt19937_64& gen) {
  Vec v(size);
  for (int i = 0; i < size; ++i) v(i) = random_cplx(gen);
  return v;
}

inline Mat random_matrix(int rows, int cols, std::mt19937_64& gen) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = random_cplx(gen);
  }
  return m;
}

inline ProjPoint random_point(int n, std::mt19937_64& gen) {
  return ProjPoint(random_vec(n + 1, gen));
}

inline Mat random_unitary(int size, std::mt19937_64& gen) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(size, size, gen));
  return Mat(qr.householderQ());
}

inline HermitianMatrix random_hermitian(int size, std::mt19937_64& gen) {
  return HermitianMatrix(random_matrix(size, size, gen));
}

// Unit-norm traceless Hermitian direction.
inline HermitianMatrix random_direction(int n, std::mt19937_64& gen) {
  const auto basis = traceless_hermitian_basis(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd coords(basis.size());
  for (Eigen::Index i = 0; i < coords.size(); ++i) coords(i) = gauss(gen);
  coords.normalize();
  return hermitian_from_coords(coords, basis);
}

// exp of a spread-scaled Hermitian matrix; invertible with moderate
// condition number for spread up to about 1.
inline GroupElement random_group_element(int size, std::mt19937_64& gen,
                                         double spread = 0.5) {
  return GroupElement(expm_hermitian(random_hermitian(size, gen), spread));
}

inline CurveScheme rational_normal_curve(int d) {
  Mat coeffs = Mat::Zero(d + 1, d + 1);
  double binom = 1.0;
  for (int i = 0; i <= d; ++i) {
    coeffs(i, i) = std::sqrt(binom);
    binom = binom * (d - i) / (i + 1.0);
  }
  return CurveScheme(d, coeffs);
}

// Gaussian point scheme retried until the counting criterion reports a
// comfortably stable configuration.
inline PointScheme random_stable_points(int n, int count,
                                        std::mt19937_64& gen) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<ProjPoint> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) pts.push_back(random_point(n, gen));
    PointScheme scheme(std::move(pts), std::vector<int>(count, 1));
    const StabilityVerdict v = point_set_stable(scheme);
    if (v.status == StabilityStatus::stable && v.margin > 1e-3) return scheme;
  }
  throw degenerate_source_error("no stable random configuration found");
}

// Destabilized families, pushed through a random unitary so the violating
// subspace is not axis-aligned.  In P^1 a strict majority of the mass sits
// on one point; in higher dimension either that, or too many points on a
// random hyperplane section.
inline PointScheme engineered_unstable(int n, std::mt19937_64& gen) {
  const Mat u = random_unitary(n + 1, gen);
  const GroupElement frame{u};
  std::vector<ProjPoint> pts;
  std::vector<int> mults;
  if (n == 1 || (gen() & 1u)) {
    const int others = 3;
    pts.push_back(random_point(n, gen));
    mults.push_back(others + 1 + static_cast<int>(gen() % 3));
    for (int i = 0; i < others; ++i) {
      pts.push_back(random_point(n, gen));
      mults.push_back(1);
    }
  } else {
    // 2k+1 points in the hyperplane spanned by the first n coordinates,
    // k - 1 off it: the hyperplane count exceeds mass * n / (n+1).
    const int k = n;
    for (int i = 0; i < 2 * k + 1; ++i) {
      Vec v = random_vec(n + 1, gen);
      v(n) = 0.0;
      pts.emplace_back(std::move(v));
      mults.push_back(1);
    }
    for (int i = 0; i + 1 < k; ++i) {
      pts.push_back(random_point(n, gen));
      mults.push_back(1);
    }
  }
  return PointScheme(std::move(pts), std::move(mults)).transformed(frame);
}

}  // namespace balanced::testing
