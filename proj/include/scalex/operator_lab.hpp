#pragma once

// Truncated scaling-element models and the numerical checks run on them.
//
// S_A on N fiber slots of dimension d is the (N d)x(N d) block matrix with A
// on the first subdiagonal block and identities below it. Any such finite
// truncation violates (X*X)X = X on the last slot, so every check here is
// stated on the interior compression: the complement of a "boundary"
// projection B. B is either supplied by the caller or recovered as the left
// support of the residual (X*X)X - X, which is accepted only if X kills it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scalex/error.hpp"
#include "scalex/linalg.hpp"
#include "scalex/spectral_set.hpp"

namespace scalex {

/// Fiber dimension d, depth N and a positive definite d x d block A.
class TruncatedShiftModel {
 public:
  TruncatedShiftModel(ComplexMatrix a, Eigen::Index depth) : a_(std::move(a)), depth_(depth) {
    if (a_.rows() < 1 || !is_square(a_))
      throw Error(ErrorKind::InvalidArgument, "A must be a nonempty square matrix");
    if (depth_ < 2) throw Error(ErrorKind::InvalidArgument, "depth must be at least 2");
    if (!a_.allFinite()) throw Error(ErrorKind::InvalidArgument, "A has non-finite entries");
    if (!is_hermitian(a_, 1e-12)) throw Error(ErrorKind::InvalidArgument, "A is not Hermitian");
    double smallest = hermitian_eigen(a_).values(0);
    if (!(smallest > 0.0))
      throw Error(ErrorKind::InvalidArgument,
                  "A must be positive definite, smallest eigenvalue " + std::to_string(smallest));
  }

  const ComplexMatrix& a() const noexcept { return a_; }
  Eigen::Index fiber_dim() const noexcept { return a_.rows(); }
  Eigen::Index depth() const noexcept { return depth_; }
  Eigen::Index dimension() const noexcept { return fiber_dim() * depth_; }

  /// Projection onto the last fiber slot, where truncation breaks the identity.
  ComplexMatrix boundary() const { return slot_projection(fiber_dim(), depth_, depth_ - 1); }

 private:
  ComplexMatrix a_;
  Eigen::Index depth_;
};

/// Block matrix on `slots` fibers with `a` on the first subdiagonal block
/// and identities further down; the last slot is mapped to zero.
inline ComplexMatrix block_shift(const ComplexMatrix& a, Eigen::Index slots) {
  const Eigen::Index d = a.rows();
  ComplexMatrix x = ComplexMatrix::Zero(d * slots, d * slots);
  if (slots < 2) return x;
  x.block(d, 0, d, d) = a;
  for (Eigen::Index k = 1; k + 1 < slots; ++k) x.block((k + 1) * d, k * d, d, d).setIdentity();
  return x;
}

inline ComplexMatrix realize(const TruncatedShiftModel& m) { return block_shift(m.a(), m.depth()); }

/// (X*X)X - X.
inline ComplexMatrix scaling_residual(const ComplexMatrix& x) { return (x.adjoint() * x) * x - x; }

struct ScalingDefect {
  double residual_norm = 0.0;
  /// ‖(I − B) R‖ when a boundary B was given.
  std::optional<double> off_boundary_norm;
  /// off_boundary_norm ≤ 1e-10.
  std::optional<bool> boundary_localized;
};

inline ScalingDefect scaling_defect(const ComplexMatrix& x) {
  require_square(x, "X");
  return {op_norm(scaling_residual(x)), std::nullopt, std::nullopt};
}

inline ScalingDefect scaling_defect(const ComplexMatrix& x, const ComplexMatrix& boundary) {
  require_square(x, "X");
  if (boundary.rows() != x.rows() || !is_square(boundary))
    throw Error(ErrorKind::DimensionMismatch, "boundary projection does not match X");
  ComplexMatrix r = scaling_residual(x);
  double off = op_norm(r - boundary * r);
  return {op_norm(r), off, off <= 1e-10};
}

inline ScalingDefect scaling_defect(const TruncatedShiftModel& m) { return scaling_defect(realize(m), m.boundary()); }

/// Boundary projection B = l((X*X)X − X) when the identity fails only on a
/// subspace that X annihilates; zero when the identity holds within tol;
/// nullopt when the defect is not a truncation artifact.
inline std::optional<ComplexMatrix> detect_boundary(const ComplexMatrix& x, double tol) {
  require_square(x, "X");
  ComplexMatrix r = scaling_residual(x);
  auto s = svd(r);
  Eigen::Index rank = (s.sigma.array() > tol).count();
  if (rank == 0) return ComplexMatrix::Zero(x.rows(), x.cols());
  ComplexMatrix b = projection_onto(s.u.leftCols(rank));
  double scale = std::max(1.0, op_norm(x));
  if (op_norm(x * b) > tol * scale) return std::nullopt;
  return b;
}

inline ComplexMatrix resolve_boundary(const ComplexMatrix& x, const std::optional<ComplexMatrix>& given, double tol) {
  if (given) {
    if (given->rows() != x.rows() || !is_square(*given))
      throw Error(ErrorKind::DimensionMismatch, "boundary projection does not match X");
    return *given;
  }
  auto b = detect_boundary(x, tol);
  if (!b) throw Error(ErrorKind::NotScalinglike, "(X*X)X - X is not supported on a subspace killed by X");
  return *b;
}

/// Clusters the singular values of x: neighbours closer than cluster_tol
/// join one interval. Clusters narrower than cluster_tol collapse to their
/// midpoint, and endpoints within cluster_tol of 0 or 1 snap onto them.
inline SpectralSet estimate_spectrum(const ComplexMatrix& x, double cluster_tol) {
  require_square(x, "X");
  if (!(cluster_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "cluster_tol must be positive");
  RealVector sv = singular_values(x);
  std::vector<double> v(sv.data(), sv.data() + sv.size());
  std::sort(v.begin(), v.end());
  auto snap = [cluster_tol](double e) {
    if (std::abs(e) <= cluster_tol) return 0.0;
    if (std::abs(e - 1.0) <= cluster_tol) return 1.0;
    return e;
  };
  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] - v[j] <= cluster_tol) ++j;
    double lo = std::max(0.0, v[i]);
    double hi = std::max(0.0, v[j]);
    if (hi - lo <= cluster_tol) lo = hi = 0.5 * (lo + hi);
    out.push_back({snap(lo), snap(hi)});
    i = j + 1;
  }
  return SpectralSet::normalize(std::move(out));
}

namespace detail {

/// k grid points on [lo, hi] with both endpoints; interior points jittered by
/// at most a quarter of the spacing.
inline std::vector<double> sample_interval(const Interval& iv, int k, std::mt19937_64& rng) {
  if (iv.degenerate()) return {iv.lo};
  const int n = std::max(k, 2);
  const double h = (iv.hi - iv.lo) / (n - 1);
  std::uniform_real_distribution<double> jitter(-0.25 * h, 0.25 * h);
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (j == 0) pts.push_back(iv.lo);
    else if (j == n - 1) pts.push_back(iv.hi);
    else pts.push_back(iv.lo + h * j + jitter(rng));
  }
  return pts;
}

}  // namespace detail

/// Builds S_A with A diagonal whose eigenvalues sample the spectrum:
/// spec \ {0} plus the eigenvalue 1 for a proper model, spec \ {0,1} for a
/// non-proper one. Interval endpoints are always sampled.
inline TruncatedShiftModel synthesize(const ScalingSpectrum& spec, Properness properness, Eigen::Index depth,
                                      int samples_per_interval, std::uint64_t seed) {
  if (depth < 3) throw Error(ErrorKind::InvalidArgument, "depth must be at least 3");
  if (samples_per_interval < 1) throw Error(ErrorKind::InvalidArgument, "samples per interval must be positive");
  if (properness == Properness::NonProper && !nonproper_admissible(spec))
    throw Error(ErrorKind::NotAdmissible, "no non-proper generator has spectrum " + spec.set().to_string());

  std::mt19937_64 rng(seed);
  std::vector<double> pts;
  for (const auto& iv : spec.set().intervals()) {
    if (properness == Properness::NonProper && iv.degenerate() && (iv.lo == 0.0 || iv.lo == 1.0)) continue;
    for (double p : detail::sample_interval(iv, samples_per_interval, rng))
      if (p > 0.0) pts.push_back(p);
  }
  if (properness == Properness::Proper && std::find(pts.begin(), pts.end(), 1.0) == pts.end()) pts.push_back(1.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const auto d = static_cast<Eigen::Index>(pts.size());
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) a(i, i) = pts[static_cast<std::size_t>(i)];
  return TruncatedShiftModel(std::move(a), depth);
}

struct ClassifyOptions {
  double tol = 1e-8;      ///< singular-value cut and projection distance bound
  double gap_tol = 0.1;   ///< width of the spectral gaps required at 0 and 1
  std::optional<ComplexMatrix> boundary;
};

struct PropernessVerdict {
  Properness verdict = Properness::Proper;
  bool gap_at_0 = false;
  bool gap_at_1 = false;
  double projection_distance = 0.0;
};

/// Compares the spectral projection of |X| at 1 with the left support of X
/// (the projection of |X*| off 0) on the interior, after checking that the
/// spectrum has gaps around 0 and 1.
inline PropernessVerdict classify_properness(const ComplexMatrix& x, const ClassifyOptions& opts = {}) {
  require_square(x, "X");
  const double tol = opts.tol;
  auto s = svd(x);
  for (Eigen::Index i = 0; i < s.sigma.size(); ++i) {
    double sv = s.sigma(i);
    double to_one = std::abs(sv - 1.0);
    if ((sv > tol && sv < 2 * tol) || (to_one > tol && to_one < 2 * tol))
      throw Error(ErrorKind::IllConditioned,
                  "singular value " + std::to_string(sv) + " sits in the ambiguity band");
  }
  PropernessVerdict out;
  out.gap_at_0 = true;
  out.gap_at_1 = true;
  for (Eigen::Index i = 0; i < s.sigma.size(); ++i) {
    double sv = s.sigma(i);
    if (sv > tol && sv <= opts.gap_tol) out.gap_at_0 = false;
    if ((sv >= 1.0 - opts.gap_tol && sv < 1.0 - tol) || (sv > 1.0 + tol && sv <= 1.0 + opts.gap_tol))
      out.gap_at_1 = false;
  }

  std::vector<Eigen::Index> at_one;
  for (Eigen::Index i = 0; i < s.sigma.size(); ++i)
    if (std::abs(s.sigma(i) - 1.0) <= tol) at_one.push_back(i);
  ComplexMatrix v1(x.rows(), static_cast<Eigen::Index>(at_one.size()));
  for (std::size_t j = 0; j < at_one.size(); ++j) v1.col(static_cast<Eigen::Index>(j)) = s.v.col(at_one[j]);
  const Eigen::Index rank = (s.sigma.array() > tol).count();
  ComplexMatrix p1 = projection_onto(v1);
  ComplexMatrix left = projection_onto(s.u.leftCols(rank));

  ComplexMatrix interior = identity(x.rows()) - resolve_boundary(x, opts.boundary, tol);
  out.projection_distance = op_norm(compress(p1 - left, interior));
  out.verdict = (out.gap_at_0 && out.gap_at_1 && out.projection_distance <= tol) ? Properness::NonProper
                                                                                 : Properness::Proper;
  return out;
}

/// Piece of a real function on an interval of the real line (endpoints may
/// be infinite).
struct Piece {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;
  std::function<double(double)> f;

  bool covers(double x) const { return (lo_closed ? lo <= x : lo < x) && (hi_closed ? x <= hi : x < hi); }
};

/// Piecewise function; the first piece covering a point defines its value.
using PiecewiseFunction = std::vector<Piece>;

inline PiecewiseFunction everywhere(std::function<double(double)> f) { return {Piece{.f = std::move(f)}}; }

/// 1 on (c, inf), 0 on (-inf, c].
inline PiecewiseFunction indicator_above(double c) {
  return {Piece{.lo = c, .f = [](double) { return 1.0; }},
          Piece{.hi = c, .hi_closed = true, .f = [](double) { return 0.0; }}};
}

inline ComplexMatrix functional_calculus(const ComplexMatrix& h, const PiecewiseFunction& f) {
  require_square(h, "h");
  if (!is_hermitian(h, 1e-12)) throw Error(ErrorKind::InvalidArgument, "matrix is not Hermitian");
  auto eig = hermitian_eigen(h);
  RealVector fv(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    double lambda = eig.values(i);
    auto it = std::find_if(f.begin(), f.end(), [lambda](const Piece& p) { return p.covers(lambda); });
    if (it == f.end()) throw Error(ErrorKind::UndefinedAt, "no piece covers eigenvalue " + std::to_string(lambda));
    fv(i) = it->f(lambda);
  }
  return eig.vectors * fv.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

/// |X| = (X*X)^{1/2}, assembled from the SVD so it is Hermitian to rounding.
inline ComplexMatrix absolute_value(const ComplexMatrix& x) {
  auto s = svd(x);
  ComplexMatrix a = s.v * s.sigma.cast<Complex>().asDiagonal() * s.v.adjoint();
  return hermitian_part(a);
}

struct WitnessOptions {
  double tol = 1e-9;
  /// Resolution at which the spectrum is estimated before checking that c is
  /// a gap point; samples closer than this are read as one interval.
  double resolution = 0.1;
  std::optional<ComplexMatrix> boundary;
};

struct WitnessReport {
  ComplexMatrix u;
  double gap_point = 0.0;
  double projection_defect = 0.0;  ///< ‖U*U − (U*U)²‖ on the interior
  double delta = 0.0;              ///< ‖U*U − UU*‖ on the interior
  bool dominated = false;          ///< UU* ≤ U*U + tol on the interior
  Eigen::Index boundary_rank = 0;
};

/// U = X g(|X|) with g(t) = 1_{(c,inf)}(t) / t: a partial isometry whose
/// range projection sits strictly under its source projection.
inline WitnessReport infinite_projection_witness(const ComplexMatrix& x, double c, const WitnessOptions& opts = {}) {
  require_square(x, "X");
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorKind::InvalidArgument, "gap point must lie in (0, 1)");
  SpectralSet est = estimate_spectrum(x, opts.resolution);
  if (contains(est, c))
    throw Error(ErrorKind::NoGap, std::to_string(c) + " lies in the estimated spectrum " + est.to_string());

  ComplexMatrix boundary = resolve_boundary(x, opts.boundary, opts.tol);
  ComplexMatrix interior = identity(x.rows()) - boundary;

  PiecewiseFunction g{Piece{.lo = c, .f = [](double t) { return 1.0 / t; }},
                      Piece{.hi = c, .hi_closed = true, .f = [](double) { return 0.0; }}};
  WitnessReport r;
  r.gap_point = c;
  r.u = x * functional_calculus(absolute_value(x), g);
  ComplexMatrix source = r.u.adjoint() * r.u;
  ComplexMatrix range = r.u * r.u.adjoint();
  r.projection_defect = op_norm(compress(source - source * source, interior));
  ComplexMatrix diff = hermitian_part(compress(source - range, interior));
  r.delta = op_norm(diff);
  r.dominated = diff.size() == 0 || hermitian_eigen(diff).values(0) >= -opts.tol;
  r.boundary_rank = projection_rank(boundary);
  return r;
}

/// Haar-distributed unitary from the QR factorization of a seeded complex
/// Gaussian matrix, with the phases of R's diagonal pushed into Q.
inline ComplexMatrix random_unitary(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline ComplexMatrix conjugate_random(const ComplexMatrix& x, std::uint64_t seed) {
  require_square(x, "X");
  ComplexMatrix w = random_unitary(x.rows(), seed);
  return w * x * w.adjoint();
}

}  // namespace scalex
