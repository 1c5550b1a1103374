#pragma once

// Truncated model of the faithful (Omega, v)-pair on H^inf: Omega is
// sampled at finitely many points, H = C^k carries the diagonal
// representation of the samples, and the shift is cut at depth N.
//
//   pi(f)(xi_0, xi_1, ...) = (phi(f) xi_0, f(v) xi_1, f(v) xi_2, ...)
//   t(f)                   = S_H pi(f)
//
// Relations are checked on the interior (slots 0..N-2), where the truncated
// S_H is still an isometry.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scalex/error.hpp"
#include "scalex/linalg.hpp"
#include "scalex/spectral_set.hpp"

namespace scalex {

class OmegaPairRep {
 public:
  /// `omega`, when given, is the set the samples come from; it decides
  /// whether v is isolated. Without it the sample set itself plays Omega.
  OmegaPairRep(std::vector<double> samples, double v, Eigen::Index depth, std::optional<SpectralSet> omega = {})
      : samples_(std::move(samples)), depth_(depth), omega_(std::move(omega)) {
    if (depth_ < 3) throw Error(ErrorKind::InvalidArgument, "depth must be at least 3");
    if (samples_.empty()) throw Error(ErrorKind::InvalidArgument, "at least one sample point is required");
    auto sorted = samples_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorKind::InvalidArgument, "sample points must be distinct");
    auto it = std::find(samples_.begin(), samples_.end(), v);
    if (it == samples_.end()) throw Error(ErrorKind::NotMember, "v = " + std::to_string(v) + " is not a sample point");
    v_index_ = static_cast<std::size_t>(it - samples_.begin());
    if (omega_) {
      for (double s : samples_)
        if (!contains(*omega_, s))
          throw Error(ErrorKind::NotMember, "sample " + std::to_string(s) + " is not in " + omega_->to_string());
    }
  }

  const std::vector<double>& samples() const noexcept { return samples_; }
  std::size_t v_index() const noexcept { return v_index_; }
  double v() const noexcept { return samples_[v_index_]; }
  Eigen::Index depth() const noexcept { return depth_; }
  Eigen::Index fiber_dim() const noexcept { return static_cast<Eigen::Index>(samples_.size()); }
  Eigen::Index dimension() const noexcept { return fiber_dim() * depth_; }
  const std::optional<SpectralSet>& omega() const noexcept { return omega_; }

  bool v_isolated() const { return !omega_ || isolated_in(*omega_, v()); }

  /// Slots 0..N-2.
  ComplexMatrix interior() const {
    ComplexMatrix j = identity(dimension());
    j.bottomRightCorner(fiber_dim(), fiber_dim()).setZero();
    return j;
  }

 private:
  std::vector<double> samples_;
  std::size_t v_index_ = 0;
  Eigen::Index depth_;
  std::optional<SpectralSet> omega_;
};

/// A function on Omega known through its values at the sample points.
struct SampledFunction {
  std::vector<Complex> values;
  Complex value_at_v;

  static SampledFunction sample(const OmegaPairRep& r, const std::function<Complex(double)>& f) {
    SampledFunction out;
    for (double s : r.samples()) out.values.push_back(f(s));
    out.value_at_v = out.values[r.v_index()];
    return out;
  }
  static SampledFunction constant(const OmegaPairRep& r, Complex c) {
    return sample(r, [c](double) { return c; });
  }
  /// 1_{x}: one at the sample point x, zero elsewhere.
  static SampledFunction indicator(const OmegaPairRep& r, double x) {
    return sample(r, [x](double s) { return s == x ? Complex(1.0) : Complex(0.0); });
  }
  static SampledFunction identity_function(const OmegaPairRep& r) {
    return sample(r, [](double s) { return Complex(s); });
  }

  SampledFunction conj() const {
    SampledFunction out{values, std::conj(value_at_v)};
    for (auto& x : out.values) x = std::conj(x);
    return out;
  }
  friend SampledFunction operator*(const SampledFunction& a, const SampledFunction& b) {
    SampledFunction out{a.values, a.value_at_v * b.value_at_v};
    for (std::size_t i = 0; i < out.values.size() && i < b.values.size(); ++i) out.values[i] *= b.values[i];
    return out;
  }
};

namespace detail {

inline void check_function(const OmegaPairRep& r, const SampledFunction& f) {
  if (f.values.size() != r.samples().size())
    throw Error(ErrorKind::DimensionMismatch, "function has " + std::to_string(f.values.size()) +
                                                  " values, representation has " +
                                                  std::to_string(r.samples().size()) + " samples");
  if (std::abs(f.values[r.v_index()] - f.value_at_v) > 0.0)
    throw Error(ErrorKind::DimensionMismatch, "value_at_v disagrees with the value at the v sample");
}

}  // namespace detail

inline ComplexMatrix rep_pi(const OmegaPairRep& r, const SampledFunction& f) {
  detail::check_function(r, f);
  const Eigen::Index k = r.fiber_dim();
  ComplexMatrix m = ComplexMatrix::Zero(r.dimension(), r.dimension());
  for (Eigen::Index i = 0; i < k; ++i) m(i, i) = f.values[static_cast<std::size_t>(i)];
  for (Eigen::Index i = k; i < r.dimension(); ++i) m(i, i) = f.value_at_v;
  return m;
}

/// Truncated S_H: identity blocks on the first subdiagonal.
inline ComplexMatrix shift_operator(const OmegaPairRep& r) {
  const Eigen::Index k = r.fiber_dim();
  ComplexMatrix s = ComplexMatrix::Zero(r.dimension(), r.dimension());
  for (Eigen::Index slot = 0; slot + 1 < r.depth(); ++slot) s.block((slot + 1) * k, slot * k, k, k).setIdentity();
  return s;
}

inline ComplexMatrix rep_t(const OmegaPairRep& r, const SampledFunction& f) { return shift_operator(r) * rep_pi(r, f); }

/// P = pi(1_{v}) − V V* with V = t(1).
inline ComplexMatrix defect_projection(const OmegaPairRep& r) {
  if (!r.v_isolated()) throw Error(ErrorKind::NotIsolated, "v is not isolated in Omega");
  ComplexMatrix v = rep_t(r, SampledFunction::constant(r, 1.0));
  return rep_pi(r, SampledFunction::indicator(r, r.v())) - v * v.adjoint();
}

/// E_{n,m} = V^n P (V*)^m.
inline ComplexMatrix matrix_units(const OmegaPairRep& r, Eigen::Index n, Eigen::Index m) {
  if (n < 0 || m < 0 || n > r.depth() - 2 || m > r.depth() - 2)
    throw Error(ErrorKind::IndexOutOfDepth, "indices (" + std::to_string(n) + ", " + std::to_string(m) +
                                                ") exceed depth - 2 = " + std::to_string(r.depth() - 2));
  ComplexMatrix v = rep_t(r, SampledFunction::constant(r, 1.0));
  ComplexMatrix left = identity(r.dimension());
  ComplexMatrix right = identity(r.dimension());
  for (Eigen::Index i = 0; i < n; ++i) left = v * left;
  for (Eigen::Index i = 0; i < m; ++i) right = right * v.adjoint();
  return left * defect_projection(r) * right;
}

struct PairResiduals {
  double adjoint_product = 0.0;  ///< ‖t(f)* t(g) − pi(conj(f) g)‖
  double right_module = 0.0;     ///< ‖t(f) pi(g) − t(f g)‖
  double left_action = 0.0;      ///< ‖pi(f) t(g) − f(v) t(g)‖

  double max() const noexcept { return std::max({adjoint_product, right_module, left_action}); }
};

inline PairResiduals pair_relation_check(const OmegaPairRep& r, const SampledFunction& f, const SampledFunction& g) {
  const ComplexMatrix j = r.interior();
  ComplexMatrix tf = rep_t(r, f);
  ComplexMatrix tg = rep_t(r, g);
  PairResiduals out;
  out.adjoint_product = op_norm(compress(tf.adjoint() * tg - rep_pi(r, f.conj() * g), j));
  out.right_module = op_norm(compress(tf * rep_pi(r, g) - rep_t(r, f * g), j));
  out.left_action = op_norm(compress(rep_pi(r, f) * tg - f.value_at_v * tg, j));
  return out;
}

}  // namespace scalex
