#pragma once

// K-groups of C_0(Omega), T(Omega,v), O(Omega,v) and C*(X) for spectra that
// are finite unions of intervals, computed by classifying the connected
// components of Omega.
//
// Every K-group here is free abelian, so results are ranks only. Component
// contributions: a closed interval or point gives Z in K0, an open interval
// gives Z in K1 (suspension), a half-open interval is contractible.

#include <algorithm>
#include <string>
#include <vector>

#include "scalex/error.hpp"
#include "scalex/spectral_set.hpp"

namespace scalex {

struct KGroupResult {
  unsigned k0_rank = 0;
  unsigned k1_rank = 0;

  friend bool operator==(const KGroupResult&, const KGroupResult&) = default;
};

/// A spectral set with finitely many points deleted, e.g. spec(|X*|) \ {0}.
class PuncturedSet {
 public:
  explicit PuncturedSet(SpectralSet base, std::vector<double> removed = {})
      : base_(std::move(base)), removed_(std::move(removed)) {
    std::sort(removed_.begin(), removed_.end());
    for (std::size_t i = 0; i < removed_.size(); ++i) {
      if (!scalex::contains(base_, removed_[i]))
        throw Error(ErrorKind::NotMember,
                    "removed point " + std::to_string(removed_[i]) + " is not in " + base_.to_string());
      if (i > 0 && removed_[i] == removed_[i - 1])
        throw Error(ErrorKind::InvalidArgument, "removed points must be distinct");
    }
  }

  const SpectralSet& base() const noexcept { return base_; }
  const std::vector<double>& removed() const noexcept { return removed_; }

  bool is_removed(double x) const noexcept { return std::binary_search(removed_.begin(), removed_.end(), x); }
  bool contains(double x) const noexcept { return scalex::contains(base_, x) && !is_removed(x); }

  /// Same base with one more point deleted.
  PuncturedSet without(double x) const {
    auto r = removed_;
    r.push_back(x);
    return PuncturedSet(base_, std::move(r));
  }

 private:
  SpectralSet base_;
  std::vector<double> removed_;
};

enum class ComponentKind { Point, Closed, HalfOpen, Open };

constexpr std::string_view to_string(ComponentKind k) noexcept {
  switch (k) {
    case ComponentKind::Point: return "point";
    case ComponentKind::Closed: return "closed";
    case ComponentKind::HalfOpen: return "half-open";
    case ComponentKind::Open: return "open";
  }
  return "?";
}

struct Component {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  ComponentKind kind() const noexcept {
    if (lo_closed && hi_closed) return lo == hi ? ComponentKind::Point : ComponentKind::Closed;
    if (lo_closed || hi_closed) return ComponentKind::HalfOpen;
    return ComponentKind::Open;
  }
  bool contains(double x) const noexcept {
    return (lo_closed ? lo <= x : lo < x) && (hi_closed ? x <= hi : x < hi);
  }

  friend bool operator==(const Component&, const Component&) = default;
};

/// Maximal connected pieces of p, in increasing order.
inline std::vector<Component> components(const PuncturedSet& p) {
  std::vector<Component> out;
  const auto& removed = p.removed();
  for (const auto& iv : p.base().intervals()) {
    if (iv.degenerate()) {
      if (!p.is_removed(iv.lo)) out.push_back({iv.lo, iv.lo, true, true});
      continue;
    }
    double lo = iv.lo;
    bool lo_closed = true;
    auto first = std::lower_bound(removed.begin(), removed.end(), iv.lo);
    auto last = std::upper_bound(removed.begin(), removed.end(), iv.hi);
    for (auto it = first; it != last; ++it) {
      double r = *it;
      if (r > lo) out.push_back({lo, r, lo_closed, false});
      lo = r;
      lo_closed = false;
    }
    if (lo < iv.hi) out.push_back({lo, iv.hi, lo_closed, true});
  }
  return out;
}

inline KGroupResult k_of_functions(const PuncturedSet& p) {
  KGroupResult k;
  for (const auto& c : components(p)) {
    switch (c.kind()) {
      case ComponentKind::Point:
      case ComponentKind::Closed: ++k.k0_rank; break;
      case ComponentKind::Open: ++k.k1_rank; break;
      case ComponentKind::HalfOpen: break;
    }
  }
  return k;
}

/// K(T(Omega, v)) is K(C_0(Omega)) through the canonical inclusion.
inline KGroupResult k_of_toeplitz_algebra(const PuncturedSet& omega, double v) {
  if (!omega.contains(v)) throw Error(ErrorKind::NotMember, std::to_string(v) + " is not in Omega");
  return k_of_functions(omega);
}

/// K(O(Omega, v)) is K(C(Omega \ {v})) when Omega \ {v} is compact and
/// nonempty.
inline KGroupResult k_of_quotient_algebra(const PuncturedSet& omega, double v) {
  if (!omega.contains(v)) throw Error(ErrorKind::NotMember, std::to_string(v) + " is not in Omega");
  auto comps = components(omega);
  bool v_isolated = false;
  bool rest_compact = true;
  std::size_t rest = 0;
  for (const auto& c : comps) {
    if (c.contains(v)) {
      v_isolated = c.kind() == ComponentKind::Point;
      continue;
    }
    ++rest;
    auto kind = c.kind();
    if (kind != ComponentKind::Point && kind != ComponentKind::Closed) rest_compact = false;
  }
  if (!v_isolated) throw Error(ErrorKind::NotAdmissible, "v is not isolated in Omega");
  if (rest == 0) throw Error(ErrorKind::NotAdmissible, "Omega \\ {v} is empty");
  if (!rest_compact) throw Error(ErrorKind::NotAdmissible, "Omega \\ {v} is not compact");
  return k_of_functions(omega.without(v));
}

inline KGroupResult k_of_generator(const GeneratorDescriptor& d) {
  PuncturedSet omega(d.spectrum().set(), {0.0});
  return d.proper() ? k_of_toeplitz_algebra(omega, 1.0) : k_of_quotient_algebra(omega, 1.0);
}

/// Index of the component of omega containing v. Two evaluation maps agree
/// on K-theory exactly when they land on the same index.
inline std::size_t ev_component_class(const SpectralSet& omega, double v) {
  auto idx = omega.locate(v);
  if (!idx) throw Error(ErrorKind::NotMember, std::to_string(v) + " is not in " + omega.to_string());
  return *idx;
}

}  // namespace scalex
