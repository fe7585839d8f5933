#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Points of complex projective space, Hermitian matrices acting on the
// ambient coordinates, and the Fubini-Study pairings between them.  All
// metric quantities are normalized so a projective line has area 2*pi.

namespace balanced {

using Cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// ---- errors ----------------------------------------------------------------

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_point_error : public error {
 public:
  using error::error;
};

class inconsistent_tangent_error : public error {
 public:
  using error::error;
};

class configuration_error : public error {
 public:
  using error::error;
};

class degenerate_parametrization_error : public error {
 public:
  using error::error;
};

class degenerate_source_error : public error {
 public:
  using error::error;
};

class no_balanced_model_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

// ---- basic types -----------------------------------------------------------

// Homogeneous coordinate vector, never zero.  Two ProjPoints represent the
// same point when the vectors are proportional; nothing here normalizes.
class ProjPoint {
 public:
  explicit ProjPoint(Vec coords);

  const Vec& coords() const { return coords_; }
  // Projective dimension n; the vector has n+1 entries.
  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  double squared_norm() const { return coords_.squaredNorm(); }

 private:
  Vec coords_;
};

// Chordal distance in [0,1]: 0 iff equal as projective points.
double chordal_distance(const ProjPoint& a, const ProjPoint& b);

// Hermitian matrix, enforced structurally: the constructor symmetrizes, so
// every instance satisfies A = A^* exactly.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Mat& entries);

  static HermitianMatrix zero(int size);
  static HermitianMatrix identity(int size);
  static HermitianMatrix diagonal(const Eigen::VectorXd& diag);

  const Mat& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.rows()); }
  double trace() const { return entries_.trace().real(); }
  double frobenius() const { return entries_.norm(); }
  Eigen::VectorXd eigenvalues() const;

 private:
  Mat entries_;
};

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, const HermitianMatrix& a);

// Real trace pairing <A,B> = Re tr(AB); an inner product on Hermitian
// matrices (tr(AB) is automatically real for Hermitian A, B).
double trace_pairing(const HermitianMatrix& a, const HermitianMatrix& b);

// Tangent vector at a point, stored through an ambient representative that
// is Hermitian-orthogonal to the base coordinates.
class TangentVector {
 public:
  TangentVector(ProjPoint base, Vec ambient);

  const ProjPoint& base() const { return base_; }
  const Vec& ambient() const { return ambient_; }

 private:
  ProjPoint base_;
  Vec ambient_;
};

// Invertible ambient linear map, acting on projective points by
// multiplication of homogeneous coordinates.
class GroupElement {
 public:
  explicit GroupElement(Mat m);

  static GroupElement identity(int size);

  const Mat& matrix() const { return matrix_; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  GroupElement inverse() const;
  double condition_number() const;

 private:
  Mat matrix_;
};

// ---- operations ------------------------------------------------------------

// z z^* / |z|^2; Hermitian, idempotent, trace 1, invariant under rescaling.
HermitianMatrix rank_one_projector(const ProjPoint& z);

// h_A(z) = z^* A z / |z|^2.  Lies between the extreme eigenvalues of A.
double hamiltonian(const HermitianMatrix& A, const ProjPoint& z);

// Ambient representative A z - h_A(z) z of the gradient field of h_A; it is
// orthogonal to z by construction, so it drops to a tangent vector.
TangentVector fundamental_vector_field(const HermitianMatrix& A,
                                       const ProjPoint& z);

// Squared Fubini-Study length.  For an ambient representative a at z this is
// 2(|a|^2 |z|^2 - |<a,z>|^2)/|z|^4, the normalization that makes
// fs_norm_sq(fundamental_vector_field(A, z)) = |grad h_A|^2(z).
double fs_norm_sq(const TangentVector& v);

// Riemannian inner product of two tangent vectors at the same point.
double fs_inner(const TangentVector& u, const TangentVector& v);

// Symplectic pairing at the same point.  The orientation is pinned by the
// Hamiltonian identity: the derivative of h_A along v equals
// fs_symplectic(fundamental_vector_field(A, .), v); the test suite checks
// this against central finite differences of the Hamiltonian.
double fs_symplectic(const TangentVector& u, const TangentVector& v);

ProjPoint act(const GroupElement& g, const ProjPoint& z);

// Orthonormal basis of traceless Hermitian matrices under the real trace
// pairing, of size (n+1)^2 - 1 for projective dimension n.  Ordering is
// deterministic: off-diagonal real pairs, off-diagonal imaginary pairs, then
// diagonal (Cartan) elements.
std::vector<HermitianMatrix> traceless_hermitian_basis(int n);

// Coordinates of M in an orthonormal Hermitian basis, and back.
Eigen::VectorXd hermitian_coords(const HermitianMatrix& M,
                                 const std::vector<HermitianMatrix>& basis);
HermitianMatrix hermitian_from_coords(const Eigen::VectorXd& coords,
                                      const std::vector<HermitianMatrix>& basis);

// exp(scale * A) for Hermitian A, through the spectral decomposition.
Mat expm_hermitian(const HermitianMatrix& A, double scale);

}  // namespace balanced
