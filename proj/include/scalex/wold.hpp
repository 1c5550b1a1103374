#pragma once

// Wold decomposition of operators with (X*X)X = X:
//
//   X  ≅  S_A ⊕ U ⊕ 0
//
// P0 = r(X), P0' = l(X), Q0 = P0 − P0', X0 = X Q0 = U0 |X0|, Q1 = l(X0),
// Q_{n+1} = X Q_n X*. The Q_n are mutually orthogonal, P1 = ΣQ_n carries the
// shift part with A = |X0| on range(Q0), P3 = 1 − P0 is the kernel and
// P2 = 1 − P1 − P3 carries a unitary.
//
// On truncated models two things are made robust: Q0 is the >1/2 spectral
// cut of P0 − P0' (the literal difference is not a projection once the
// identity fails on the last slot), and P3 is shrunk to the complement of P1
// when they overlap. Both effects are reported, never hidden.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scalex/error.hpp"
#include "scalex/linalg.hpp"
#include "scalex/operator_lab.hpp"

namespace scalex {

/// Left and right supports l(X), r(X) with singular values cut at tol.
struct SupportPair {
  ComplexMatrix right;
  ComplexMatrix left;
};

inline SupportPair supports(const ComplexMatrix& x, double tol) {
  auto s = svd(x);
  Eigen::Index r = (s.sigma.array() > tol).count();
  return {projection_onto(s.v.leftCols(r)), projection_onto(s.u.leftCols(r))};
}

struct PolarDecomposition {
  ComplexMatrix u;  ///< partial isometry, u*u = r(x), uu* = l(x)
  ComplexMatrix p;  ///< |x|
};

inline PolarDecomposition polar(const ComplexMatrix& x, double tol) {
  auto s = svd(x);
  Eigen::Index r = (s.sigma.array() > tol).count();
  ComplexMatrix u = s.u.leftCols(r) * s.v.leftCols(r).adjoint();
  ComplexMatrix p = hermitian_part(s.v * s.sigma.cast<Complex>().asDiagonal() * s.v.adjoint());
  return {std::move(u), std::move(p)};
}

struct WoldOptions {
  double tol = 1e-9;
  /// Defaults to the dimension of X.
  std::optional<int> max_steps;
  /// Subspace where (X*X)X = X is allowed to fail, e.g. the last fiber slot
  /// of a truncated shift.
  std::optional<ComplexMatrix> boundary;
};

struct WoldReport {
  std::vector<ComplexMatrix> q;        ///< Q_0 .. Q_m
  ComplexMatrix initial_isometry;      ///< U_0 from X_0 = U_0 |X_0|
  std::vector<ComplexMatrix> u_parts;  ///< U_n = X Q_n for n = 1 .. m
  ComplexMatrix a_restricted;          ///< |X_0| on range(Q_0), in the basis shift_basis[0]
  std::vector<ComplexMatrix> shift_basis;  ///< orthonormal columns for each range(Q_n)

  ComplexMatrix shift_projection;      ///< P1
  ComplexMatrix unitary_projection;    ///< P2
  ComplexMatrix kernel_projection;     ///< P3
  ComplexMatrix unitary_basis;
  ComplexMatrix unitary_part;          ///< X compressed to range(P2)
  ComplexMatrix kernel_basis;

  /// Indices n ≥ 1 where X fails to be isometric on range(Q_n).
  std::vector<std::size_t> boundary_flags;
  /// rank of range(1 − P0) ∩ range(P1), removed from the kernel part
  Eigen::Index overlap_rank = 0;

  std::map<std::string, double> residuals;

  bool scaling() const noexcept { return !q.empty(); }
  std::vector<Eigen::Index> q_ranks() const {
    std::vector<Eigen::Index> r;
    for (const auto& b : shift_basis) r.push_back(b.cols());
    return r;
  }
  Eigen::Index unitary_rank() const noexcept { return unitary_basis.cols(); }
  Eigen::Index kernel_rank() const noexcept { return kernel_basis.cols(); }
  bool flagged(std::size_t n) const {
    return std::find(boundary_flags.begin(), boundary_flags.end(), n) != boundary_flags.end();
  }
};

inline ComplexMatrix reconstruct(const WoldReport& r);

inline WoldReport wold_decompose(const ComplexMatrix& x, const WoldOptions& opts = {}) {
  require_square(x, "X");
  const double tol = opts.tol;
  const Eigen::Index n = x.rows();
  const int max_steps = opts.max_steps.value_or(static_cast<int>(n));
  const ComplexMatrix id = identity(n);

  WoldReport rep;
  ComplexMatrix residual = scaling_residual(x);
  double defect = op_norm(residual);
  rep.residuals["scaling_defect"] = defect;
  ComplexMatrix interior = id;
  if (opts.boundary) {
    if (opts.boundary->rows() != n || !is_square(*opts.boundary))
      throw Error(ErrorKind::DimensionMismatch, "boundary projection does not match X");
    interior = id - *opts.boundary;
    double off = op_norm(interior * residual);
    rep.residuals["off_boundary_defect"] = off;
    if (off > tol) throw Error(ErrorKind::NotScalinglike, "(X*X)X - X leaves the boundary: " + std::to_string(off));
  } else if (defect > tol) {
    throw Error(ErrorKind::NotScalinglike, "‖(X*X)X - X‖ = " + std::to_string(defect));
  }

  auto [p0, p0_left] = supports(x, tol);
  ComplexMatrix q0 = spectral_projection(p0 - p0_left, [](double v) { return v > 0.5; });
  rep.initial_isometry = ComplexMatrix::Zero(n, n);
  rep.a_restricted = ComplexMatrix(0, 0);

  if (projection_rank(q0) > 0) {
    ComplexMatrix x0 = x * q0;
    auto [u0, abs_x0] = polar(x0, tol);
    rep.initial_isometry = u0;
    rep.q.push_back(q0);
    ComplexMatrix b0 = range_basis(q0);
    rep.shift_basis.push_back(b0);
    rep.a_restricted = hermitian_part(b0.adjoint() * abs_x0 * b0);

    ComplexMatrix qn = u0 * u0.adjoint();
    ComplexMatrix bn = u0 * b0;
    int steps = 0;
    while (op_norm(qn) >= 0.5) {
      if (steps++ >= max_steps)
        throw Error(ErrorKind::NoConvergence, "Q_n still has norm ≥ 1/2 after " + std::to_string(max_steps) + " steps");
      const std::size_t index = rep.q.size();
      if (op_norm(x.adjoint() * x * qn - qn) > tol) rep.boundary_flags.push_back(index);
      rep.q.push_back(qn);
      rep.shift_basis.push_back(bn);
      rep.u_parts.push_back(x * qn);
      bn = x * bn;
      qn = x * qn * x.adjoint();
    }
  }

  ComplexMatrix p1 = ComplexMatrix::Zero(n, n);
  for (const auto& q : rep.q) p1 += q;
  rep.shift_projection = p1;

  ComplexMatrix p3_raw = id - p0;
  ComplexMatrix p3 = intersect_projections(p3_raw, id - p1);
  rep.overlap_rank = projection_rank(p3_raw) - projection_rank(p3);
  rep.kernel_projection = p3;
  rep.kernel_basis = range_basis(p3);

  rep.unitary_basis = spectral_basis(id - p1 - p3, [](double v) { return v > 0.5; });
  rep.unitary_projection = projection_onto(rep.unitary_basis);
  rep.unitary_part = rep.unitary_basis.adjoint() * x * rep.unitary_basis;

  double orth = 0.0, proj = 0.0;
  for (std::size_t i = 0; i < rep.q.size(); ++i) {
    proj = std::max(proj, projection_defect(rep.q[i]));
    for (std::size_t j = i + 1; j < rep.q.size(); ++j) orth = std::max(orth, op_norm(rep.q[i] * rep.q[j]));
  }
  rep.residuals["orthogonality"] = orth;
  rep.residuals["projection"] = proj;
  rep.residuals["completeness"] = op_norm(p1 + rep.unitary_projection + p3 - id);
  rep.residuals["commutation"] = op_norm(compress(p1 * x - x * p1, interior));
  double unitarity = 0.0;
  if (rep.unitary_rank() > 0) {
    const ComplexMatrix& w = rep.unitary_part;
    ComplexMatrix i2 = identity(w.rows());
    unitarity = std::max(op_norm(w.adjoint() * w - i2), op_norm(w * w.adjoint() - i2));
  }
  rep.residuals["unitarity"] = unitarity;
  rep.residuals["overlap_rank"] = static_cast<double>(rep.overlap_rank);
  rep.residuals["reconstruction"] = op_norm(reconstruct(rep) - x);
  return rep;
}

/// S_A ⊕ U ⊕ 0 written back in the original coordinates through the
/// recovered bases.
inline ComplexMatrix reconstruct(const WoldReport& r) {
  const Eigen::Index n = r.kernel_projection.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  if (!r.shift_basis.empty()) {
    const Eigen::Index d = r.shift_basis.front().cols();
    const auto slots = static_cast<Eigen::Index>(r.shift_basis.size());
    ComplexMatrix w(n, d * slots);
    for (Eigen::Index k = 0; k < slots; ++k) w.middleCols(k * d, d) = r.shift_basis[static_cast<std::size_t>(k)];
    ComplexMatrix s = block_shift(r.a_restricted, slots);
    out += w * s * w.adjoint();
  }
  if (r.unitary_rank() > 0) out += r.unitary_basis * r.unitary_part * r.unitary_basis.adjoint();
  return out;
}

}  // namespace scalex
