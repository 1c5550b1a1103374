#pragma once

// Dense complex linear algebra helpers shared by the matrix modules:
// operator norms, SVD, spectral projections of Hermitian matrices, and the
// fiber-slot bookkeeping of truncated block shifts.
//
// SVDs are two-sided Jacobi, which stays accurate on the large clusters of
// exactly repeated singular values that shift models carry.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <functional>
#include <vector>

#include "scalex/error.hpp"

namespace scalex {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

/// Largest singular value; 0 for an empty matrix.
inline double op_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

inline bool is_square(const ComplexMatrix& m) noexcept { return m.rows() == m.cols(); }

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
  return is_square(m) && (m.size() == 0 || (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol);
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (!is_square(m))
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be square");
}

/// Full SVD m = U diag(sigma) V*, singular values descending.
struct Svd {
  ComplexMatrix u;
  RealVector sigma;
  ComplexMatrix v;
};

inline Svd svd(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

inline RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<ComplexMatrix> s(m);
  return s.singularValues();
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending. Only
/// the lower triangle is read, so callers symmetrize or check beforehand.
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;
};

inline HermitianEigen hermitian_eigen(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// Orthonormal columns spanning the eigenvectors of h whose eigenvalue
/// satisfies `keep`.
inline ComplexMatrix spectral_basis(const ComplexMatrix& h, const std::function<bool(double)>& keep) {
  auto eig = hermitian_eigen(hermitian_part(h));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (keep(eig.values(i))) cols.push_back(i);
  ComplexMatrix basis(h.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(cols[j]);
  return basis;
}

inline ComplexMatrix projection_onto(const ComplexMatrix& basis) { return basis * basis.adjoint(); }

inline ComplexMatrix spectral_projection(const ComplexMatrix& h, const std::function<bool(double)>& keep) {
  return projection_onto(spectral_basis(h, keep));
}

/// Rank of a (numerical) projection: eigenvalues above 1/2.
inline Eigen::Index projection_rank(const ComplexMatrix& p) {
  if (p.size() == 0) return 0;
  auto eig = hermitian_eigen(hermitian_part(p));
  return (eig.values.array() > 0.5).count();
}

/// Orthonormal basis of the range of a numerical projection.
inline ComplexMatrix range_basis(const ComplexMatrix& p) {
  return spectral_basis(p, [](double x) { return x > 0.5; });
}

/// Projection onto range(p) ∩ range(q): the eigenvalue-2 eigenspace of p + q.
inline ComplexMatrix intersect_projections(const ComplexMatrix& p, const ComplexMatrix& q) {
  return spectral_projection(p + q, [](double x) { return x > 1.5; });
}

/// Max over ‖p² − p‖ and ‖p* − p‖.
inline double projection_defect(const ComplexMatrix& p) {
  return std::max(op_norm(p * p - p), op_norm(p.adjoint() - p));
}

/// Projection onto fiber slot `slot` of a block matrix with fibers of size d.
inline ComplexMatrix slot_projection(Eigen::Index d, Eigen::Index slots, Eigen::Index slot) {
  ComplexMatrix p = ComplexMatrix::Zero(d * slots, d * slots);
  p.block(slot * d, slot * d, d, d).setIdentity();
  return p;
}

/// J m J for a projection J.
inline ComplexMatrix compress(const ComplexMatrix& m, const ComplexMatrix& j) { return j * m * j; }

}  // namespace scalex
