#pragma once

// Exact interval-set algebra over [0, inf) and the decision procedures on
// spectra of |X*| for scaling elements X.
//
// Endpoints are compared exactly. All numerical tolerance lives in the
// matrix modules; nothing here takes an epsilon.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scalex/error.hpp"

namespace scalex {

/// Closed interval [lo, hi]. A point is the degenerate interval [a, a].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool degenerate() const noexcept { return lo == hi; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint closed intervals in [0, inf), stored sorted with
/// hi_i < lo_{i+1}. Only constructible through `normalize`.
class SpectralSet {
 public:
  SpectralSet() = default;

  static SpectralSet normalize(std::vector<Interval> raw);
  static SpectralSet normalize(const std::vector<std::pair<double, double>>& raw) {
    std::vector<Interval> v;
    v.reserve(raw.size());
    for (const auto& [lo, hi] : raw) v.push_back({lo, hi});
    return normalize(std::move(v));
  }
  static SpectralSet points(const std::vector<double>& xs) {
    std::vector<Interval> v;
    for (double x : xs) v.push_back({x, x});
    return normalize(std::move(v));
  }

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool empty() const noexcept { return intervals_.empty(); }
  std::size_t size() const noexcept { return intervals_.size(); }

  /// Index of the interval containing x, if any.
  std::optional<std::size_t> locate(double x) const noexcept {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return std::nullopt;
    --it;
    if (x <= it->hi) return static_cast<std::size_t>(it - intervals_.begin());
    return std::nullopt;
  }

  std::string to_string() const;

  friend bool operator==(const SpectralSet&, const SpectralSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

inline SpectralSet SpectralSet::normalize(std::vector<Interval> raw) {
  for (const auto& iv : raw) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw Error(ErrorKind::InvalidInterval, "non-finite endpoint");
    if (iv.lo < 0.0 || iv.hi < 0.0)
      throw Error(ErrorKind::NegativeEndpoint,
                  "interval [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]");
    if (iv.lo > iv.hi)
      throw Error(ErrorKind::InvalidInterval,
                  "lo > hi in [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]");
  }
  std::sort(raw.begin(), raw.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  SpectralSet out;
  for (const auto& iv : raw) {
    // touching intervals denote one connected set
    if (!out.intervals_.empty() && iv.lo <= out.intervals_.back().hi) {
      out.intervals_.back().hi = std::max(out.intervals_.back().hi, iv.hi);
    } else {
      out.intervals_.push_back(iv);
    }
  }
  // -0.0 and 0.0 compare equal; store the positive zero so output is stable
  for (auto& iv : out.intervals_) {
    if (iv.lo == 0.0) iv.lo = 0.0;
    if (iv.hi == 0.0) iv.hi = 0.0;
  }
  return out;
}

namespace detail {

/// Shortest decimal form that reads back to the same double.
inline std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline std::string SpectralSet::to_string() const {
  if (intervals_.empty()) return "{}";
  std::string out;
  for (const auto& iv : intervals_) {
    if (!out.empty()) out += " u ";
    if (iv.degenerate())
      out += '{' + detail::shortest(iv.lo) + '}';
    else
      out += '[' + detail::shortest(iv.lo) + ',' + detail::shortest(iv.hi) + ']';
  }
  return out;
}

inline bool contains(const SpectralSet& s, double x) noexcept { return s.locate(x).has_value(); }

/// Every point of `a` lies in `b`. Each interval of `a` is connected, so it
/// must sit inside a single interval of `b`.
inline bool is_subset(const SpectralSet& a, const SpectralSet& b) noexcept {
  for (const auto& iv : a.intervals()) {
    auto idx = b.locate(iv.lo);
    if (!idx || iv.hi > b.intervals()[*idx].hi) return false;
  }
  return true;
}

inline bool isolated_in(const SpectralSet& s, double x) {
  auto idx = s.locate(x);
  if (!idx) throw Error(ErrorKind::NotMember, std::to_string(x) + " is not in " + s.to_string());
  return s.intervals()[*idx].degenerate();
}

/// A spectral set that contains both 0 and 1, as spec(|X*|) does for every
/// scaling element X.
class ScalingSpectrum {
 public:
  explicit ScalingSpectrum(SpectralSet set) : set_(std::move(set)) {
    if (!contains(set_, 0.0) || !contains(set_, 1.0))
      throw Error(ErrorKind::InvalidSpectrum, "must contain 0 and 1, got " + set_.to_string());
  }

  const SpectralSet& set() const noexcept { return set_; }
  operator const SpectralSet&() const noexcept { return set_; }

  friend bool operator==(const ScalingSpectrum&, const ScalingSpectrum&) = default;

 private:
  SpectralSet set_;
};

/// s \ {0,1} is nonempty and compact: 0 and 1 are isolated points and there
/// is at least one further component.
inline bool nonproper_admissible(const ScalingSpectrum& s) {
  return isolated_in(s, 0.0) && isolated_in(s, 1.0) && s.set().size() > 2;
}

enum class Properness { Proper, NonProper };

constexpr std::string_view to_string(Properness p) noexcept {
  return p == Properness::Proper ? "Proper" : "NonProper";
}

/// Complete isomorphism invariant of C*(X): the spectrum of |X*| together
/// with the properness flag.
class GeneratorDescriptor {
 public:
  GeneratorDescriptor(ScalingSpectrum spectrum, Properness properness)
      : spectrum_(std::move(spectrum)), properness_(properness) {
    if (properness_ == Properness::NonProper && !nonproper_admissible(spectrum_))
      throw Error(ErrorKind::NotAdmissible,
                  "no non-proper generator has spectrum " + spectrum_.set().to_string());
  }

  const ScalingSpectrum& spectrum() const noexcept { return spectrum_; }
  Properness properness() const noexcept { return properness_; }
  bool proper() const noexcept { return properness_ == Properness::Proper; }

  friend bool operator==(const GeneratorDescriptor&, const GeneratorDescriptor&) = default;

 private:
  ScalingSpectrum spectrum_;
  Properness properness_;
};

/// Why a homomorphism C*(X) -> C*(Y) with X -> Y fails to exist.
enum class HomObstruction { None, Subset, Properness };

inline HomObstruction hom_obstruction(const GeneratorDescriptor& x, const GeneratorDescriptor& y) noexcept {
  if (!is_subset(y.spectrum(), x.spectrum())) return HomObstruction::Subset;
  if (!x.proper() && y.proper()) return HomObstruction::Properness;
  return HomObstruction::None;
}

inline bool hom_exists(const GeneratorDescriptor& x, const GeneratorDescriptor& y) noexcept {
  return hom_obstruction(x, y) == HomObstruction::None;
}

inline bool iso_exists(const GeneratorDescriptor& x, const GeneratorDescriptor& y) noexcept {
  return x.spectrum() == y.spectrum() && x.properness() == y.properness();
}

/// C*(X) contains an infinite projection iff [0,1] is not covered by s.
inline bool has_infinite_projection(const ScalingSpectrum& s) {
  static const SpectralSet unit = SpectralSet::normalize(std::vector<Interval>{{0.0, 1.0}});
  return !is_subset(unit, s);
}

/// Some c in [0,1) lies outside s, so s ∩ (c, inf) is a compact open subset
/// of s \ {0} containing 1. Returns the midpoint of the first such gap.
inline std::optional<double> gap_point_below_one(const SpectralSet& s) {
  const auto& iv = s.intervals();
  if (iv.empty()) return 0.5;
  if (iv.front().lo > 0.0) return 0.5 * std::min(iv.front().lo, 1.0);
  // the component of 0 either reaches 1 or is followed by a gap below 1
  if (iv.front().hi >= 1.0) return std::nullopt;
  double next = iv.size() > 1 ? std::min(iv[1].lo, 1.0) : 1.0;
  return 0.5 * (iv.front().hi + next);
}

inline bool has_compact_open_at_one(const ScalingSpectrum& s) {
  return gap_point_below_one(s.set()).has_value();
}

inline GeneratorDescriptor proper_default(const ScalingSpectrum& s) {
  return GeneratorDescriptor(s, Properness::Proper);
}

}  // namespace scalex
