#include "balanced/projective.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace balanced {

namespace {

constexpr double kTangentOrthTol = 1e-12;

}  // namespace

// ---- ProjPoint -------------------------------------------------------------

ProjPoint::ProjPoint(Vec coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw invalid_point_error("projective point needs at least two coordinates");
  }
  if (!coords_.allFinite() || coords_.norm() == 0.0) {
    throw invalid_point_error("projective point must be a finite nonzero vector");
  }
}

double chordal_distance(const ProjPoint& a, const ProjPoint& b) {
  if (a.dim() != b.dim()) {
    throw invalid_point_error("chordal distance needs points of equal dimension");
  }
  const Cplx inner = (b.coords().adjoint() * a.coords())(0);
  const double cos_sq =
      std::norm(inner) / (a.squared_norm() * b.squared_norm());
  return std::sqrt(std::max(0.0, 1.0 - cos_sq));
}

// ---- HermitianMatrix -------------------------------------------------------

HermitianMatrix::HermitianMatrix(const Mat& entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw configuration_error("Hermitian matrix must be square and nonempty");
  }
  if (!entries.allFinite()) {
    throw configuration_error("Hermitian matrix entries must be finite");
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianMatrix HermitianMatrix::zero(int size) {
  return HermitianMatrix(Mat::Zero(size, size));
}

HermitianMatrix HermitianMatrix::identity(int size) {
  return HermitianMatrix(Mat::Identity(size, size));
}

HermitianMatrix HermitianMatrix::diagonal(const Eigen::VectorXd& diag) {
  Mat m = Mat::Zero(diag.size(), diag.size());
  for (Eigen::Index i = 0; i < diag.size(); ++i) m(i, i) = diag(i);
  return HermitianMatrix(m);
}

Eigen::VectorXd HermitianMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Mat> solver(entries_,
                                            Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.entries() + b.entries());
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.entries() - b.entries());
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(s * a.entries());
}

double trace_pairing(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.entries() * b.entries()).trace().real();
}

// ---- TangentVector ---------------------------------------------------------

TangentVector::TangentVector(ProjPoint base, Vec ambient)
    : base_(std::move(base)), ambient_(std::move(ambient)) {
  if (ambient_.size() != base_.coords().size()) {
    throw inconsistent_tangent_error("tangent representative has wrong size");
  }
  if (!ambient_.allFinite()) {
    throw inconsistent_tangent_error("tangent representative must be finite");
  }
  const double overlap =
      std::abs((base_.coords().adjoint() * ambient_)(0));
  const double scale = base_.coords().norm() * ambient_.norm();
  if (overlap > kTangentOrthTol * std::max(scale, 1e-300)) {
    throw inconsistent_tangent_error(
        "tangent representative is not orthogonal to the base point");
  }
}

// ---- GroupElement ----------------------------------------------------------

GroupElement::GroupElement(Mat m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw configuration_error("group element must be a square matrix");
  }
  if (!matrix_.allFinite()) {
    throw configuration_error("group element entries must be finite");
  }
  Eigen::JacobiSVD<Mat> svd(matrix_);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || !(smin > 1e-14 * smax)) {
    throw configuration_error("group element is numerically singular");
  }
}

GroupElement GroupElement::identity(int size) {
  return GroupElement(Mat::Identity(size, size));
}

GroupElement GroupElement::inverse() const {
  return GroupElement(matrix_.inverse());
}

double GroupElement::condition_number() const {
  Eigen::JacobiSVD<Mat> svd(matrix_);
  return svd.singularValues().maxCoeff() / svd.singularValues().minCoeff();
}

// ---- operations ------------------------------------------------------------

HermitianMatrix rank_one_projector(const ProjPoint& z) {
  const Vec& v = z.coords();
  return HermitianMatrix((v * v.adjoint()) / z.squared_norm());
}

double hamiltonian(const HermitianMatrix& A, const ProjPoint& z) {
  if (A.size() != z.dim() + 1) {
    throw configuration_error("hamiltonian: size mismatch");
  }
  const Vec& v = z.coords();
  return (v.adjoint() * A.entries() * v)(0).real() / z.squared_norm();
}

TangentVector fundamental_vector_field(const HermitianMatrix& A,
                                       const ProjPoint& z) {
  const double h = hamiltonian(A, z);
  Vec ambient = A.entries() * z.coords() - h * z.coords();
  // Rounding can leave a sliver along z; remove it so the tangent invariant
  // holds exactly.
  const Cplx overlap = (z.coords().adjoint() * ambient)(0);
  ambient -= (overlap / z.squared_norm()) * z.coords();
  return TangentVector(z, std::move(ambient));
}

double fs_norm_sq(const TangentVector& v) {
  const double zz = v.base().squared_norm();
  const double aa = v.ambient().squaredNorm();
  const double az = std::norm((v.base().coords().adjoint() * v.ambient())(0));
  return 2.0 * std::max(0.0, aa * zz - az) / (zz * zz);
}

namespace {

// Component of the representative orthogonal to the base coordinates.
Vec orth_part(const TangentVector& v) {
  const Cplx overlap = (v.base().coords().adjoint() * v.ambient())(0);
  return v.ambient() - (overlap / v.base().squared_norm()) * v.base().coords();
}

void check_same_base(const TangentVector& u, const TangentVector& v) {
  if (u.base().coords().size() != v.base().coords().size() ||
      chordal_distance(u.base(), v.base()) > 1e-9) {
    throw inconsistent_tangent_error("tangent vectors live at different points");
  }
}

}  // namespace

double fs_inner(const TangentVector& u, const TangentVector& v) {
  check_same_base(u, v);
  const Vec a = orth_part(u);
  const Vec b = orth_part(v);
  return 2.0 * (b.adjoint() * a)(0).real() / u.base().squared_norm();
}

double fs_symplectic(const TangentVector& u, const TangentVector& v) {
  check_same_base(u, v);
  const Vec a = orth_part(u);
  const Vec b = orth_part(v);
  return 2.0 * (b.adjoint() * a)(0).imag() / u.base().squared_norm();
}

ProjPoint act(const GroupElement& g, const ProjPoint& z) {
  if (g.size() != z.dim() + 1) {
    throw configuration_error("act: size mismatch");
  }
  return ProjPoint(g.matrix() * z.coords());
}

std::vector<HermitianMatrix> traceless_hermitian_basis(int n) {
  if (n < 1) {
    throw configuration_error("traceless basis needs projective dimension >= 1");
  }
  const int size = n + 1;
  std::vector<HermitianMatrix> basis;
  basis.reserve(size * size - 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < size; ++j) {
    for (int k = j + 1; k < size; ++k) {
      Mat m = Mat::Zero(size, size);
      m(j, k) = inv_sqrt2;
      m(k, j) = inv_sqrt2;
      basis.emplace_back(m);
    }
  }
  for (int j = 0; j < size; ++j) {
    for (int k = j + 1; k < size; ++k) {
      Mat m = Mat::Zero(size, size);
      m(j, k) = Cplx(0.0, inv_sqrt2);
      m(k, j) = Cplx(0.0, -inv_sqrt2);
      basis.emplace_back(m);
    }
  }
  for (int l = 1; l <= n; ++l) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(size);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int i = 0; i < l; ++i) d(i) = scale;
    d(l) = -static_cast<double>(l) * scale;
    basis.push_back(HermitianMatrix::diagonal(d));
  }
  return basis;
}

Eigen::VectorXd hermitian_coords(const HermitianMatrix& M,
                                 const std::vector<HermitianMatrix>& basis) {
  Eigen::VectorXd coords(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    coords(static_cast<Eigen::Index>(k)) = trace_pairing(M, basis[k]);
  }
  return coords;
}

HermitianMatrix hermitian_from_coords(const Eigen::VectorXd& coords,
                                      const std::vector<HermitianMatrix>& basis) {
  if (static_cast<std::size_t>(coords.size()) != basis.size() || basis.empty()) {
    throw configuration_error("hermitian_from_coords: size mismatch");
  }
  Mat m = Mat::Zero(basis[0].size(), basis[0].size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    m += coords(static_cast<Eigen::Index>(k)) * basis[k].entries();
  }
  return HermitianMatrix(m);
}

Mat expm_hermitian(const HermitianMatrix& A, double scale) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(A.entries());
  if (solver.info() != Eigen::Success) {
    throw configuration_error("eigendecomposition failed in matrix exponential");
  }
  const Eigen::VectorXd expvals =
      (scale * solver.eigenvalues().array()).exp();
  return solver.eigenvectors() * expvals.asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace balanced
