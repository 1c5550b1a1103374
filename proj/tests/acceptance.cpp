// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "scalex/scalex.hpp"

using namespace scalex;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(std::string why) {
    if (ok) detail = std::move(why);
    ok = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SpectralSet set_of(const oracle::Raw& raw) { return SpectralSet::normalize(raw); }

// 1. decision table against the cover oracle, plus agreement of the two
// criteria on random spectra
Outcome decision_table() {
  Outcome o;
  auto t0 = Clock::now();
  for (const auto& raw : oracle::curated_spectra()) {
    ScalingSpectrum s(set_of(raw));
    if (has_infinite_projection(s) != oracle::interval_cover_fails(raw)) o.fail("oracle mismatch on " + s.set().to_string());
  }
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 1000; ++i) {
    ScalingSpectrum s(set_of(oracle::random_scaling_raw(rng)));
    if (has_infinite_projection(s) != has_compact_open_at_one(s)) o.fail("criteria disagree on " + s.set().to_string());
  }
  double t = seconds_since(t0);
  if (t >= 1.0) o.fail("runtime " + std::to_string(t) + " s");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("10 curated + 1000 random, ") + std::to_string(t) + " s";
  return o;
}

// 2. singular values of truncated S_A
Outcome spectrum_formula() {
  Outcome o;
  auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (Eigen::Index d = 1; d <= 3; ++d) {
    for (Eigen::Index n = 3; n <= 8; ++n) {
      for (int rep = 0; rep < 5; ++rep) {
        ComplexMatrix a = oracle::random_positive(d, rng);
        RealVector sv = singular_values(realize(TruncatedShiftModel(a, n)));
        std::vector<double> got(sv.data(), sv.data() + sv.size());
        std::vector<double> want(static_cast<std::size_t>(d), 0.0);
        RealVector ev = hermitian_eigen(a).values;
        want.insert(want.end(), ev.data(), ev.data() + ev.size());
        want.insert(want.end(), static_cast<std::size_t>((n - 2) * d), 1.0);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
      }
    }
  }
  double t = seconds_since(t0);
  if (worst > 1e-10) o.fail("max deviation " + std::to_string(worst));
  if (t >= 5.0) o.fail("runtime " + std::to_string(t) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "max deviation %.2e, %.3f s", worst, t);
  o.detail += (o.detail.empty() ? "" : "; ") + std::string(buf);
  return o;
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// 3. unitary branch
Outcome wold_unitary() {
  Outcome o;
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> size(1, 5), kernel(0, 4);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index m = size(rng), k = kernel(rng);
    ComplexMatrix u = random_unitary(m, rng());
    ComplexMatrix w = random_unitary(m + k, rng());
    auto r = wold_decompose(w * direct_sum(u, ComplexMatrix::Zero(k, k)) * w.adjoint());
    if (!r.q.empty()) o.fail("nonempty Q list in run " + std::to_string(i));
    if (r.kernel_rank() != k) o.fail("kernel rank " + std::to_string(r.kernel_rank()) + " != " + std::to_string(k));
    double dist = oracle::multiset_distance(oracle::eigenvalues(r.unitary_part), oracle::eigenvalues(u));
    worst = std::max(worst, dist);
  }
  if (worst > 1e-9) o.fail("unitary eigenvalue error " + std::to_string(worst));
  char buf[64];
  std::snprintf(buf, sizeof buf, "50 runs, eigenvalue error %.2e", worst);
  o.detail += (o.detail.empty() ? "" : "; ") + std::string(buf);
  return o;
}

// 4. shift branch
Outcome wold_shift() {
  Outcome o;
  std::mt19937_64 rng(1004);
  std::uniform_int_distribution<int> dim(1, 3), depth(3, 8);
  double worst_a = 0.0, worst_orth = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index d = dim(rng), n = depth(rng);
    TruncatedShiftModel m(oracle::random_positive(d, rng), n);
    ComplexMatrix w = random_unitary(m.dimension(), rng());
    WoldOptions opts;
    opts.boundary = w * m.boundary() * w.adjoint();
    auto r = wold_decompose(w * realize(m) * w.adjoint(), opts);
    worst_a = std::max(worst_a, oracle::multiset_distance(oracle::eigenvalues(r.a_restricted), oracle::eigenvalues(m.a())));
    for (std::size_t p = 0; p < r.q.size(); ++p)
      for (std::size_t q = p + 1; q < r.q.size(); ++q) worst_orth = std::max(worst_orth, op_norm(r.q[p] * r.q[q]));
    if (!r.flagged(static_cast<std::size_t>(n - 1))) o.fail("slot N-1 not flagged in run " + std::to_string(i));
  }
  if (worst_a > 1e-8) o.fail("A eigenvalue error " + std::to_string(worst_a));
  if (worst_orth > 1e-9) o.fail("Q orthogonality " + std::to_string(worst_orth));
  char buf[96];
  std::snprintf(buf, sizeof buf, "50 runs, A error %.2e, orthogonality %.2e", worst_a, worst_orth);
  o.detail += (o.detail.empty() ? "" : "; ") + std::string(buf);
  return o;
}

// 5. classifier inverts synthesize
Outcome properness_classifier() {
  Outcome o;
  auto named = [](std::initializer_list<double> xs) {
    ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) {
      a(i, i) = x;
      ++i;
    }
    return classify_properness(block_shift(a, 6)).verdict;
  };
  if (named({1.0}) != Properness::Proper) o.fail("S_[1] not Proper");
  if (named({0.5}) != Properness::NonProper) o.fail("S_[1/2] not NonProper");
  if (named({0.5, 1.0}) != Properness::Proper) o.fail("S_diag(1/2,1) not Proper");

  std::mt19937_64 rng(1005);
  std::uniform_int_distribution<int> coin(0, 1), depth(3, 7), samples(1, 4);
  int wrong = 0;
  for (int i = 0; i < 100; ++i) {
    bool nonproper = coin(rng) == 1;
    auto raw = nonproper ? oracle::random_nonproper_raw(rng) : oracle::random_scaling_raw(rng);
    ScalingSpectrum s(set_of(raw));
    Properness p = nonproper ? Properness::NonProper : Properness::Proper;
    auto m = synthesize(s, p, depth(rng), samples(rng), rng());
    if (classify_properness(conjugate_random(realize(m), rng())).verdict != p) ++wrong;
  }
  if (wrong) o.fail(std::to_string(wrong) + " misclassified");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("100 random triples + 3 named shifts");
  return o;
}

// 6. witness on every curated spectrum
Outcome witness() {
  Outcome o;
  auto t0 = Clock::now();
  int witnessed = 0, refused = 0;
  for (const auto& raw : oracle::curated_spectra()) {
    ScalingSpectrum s(set_of(raw));
    auto gap = gap_point_below_one(s.set());
    if (gap) {
      auto m = synthesize(s, Properness::Proper, 6, 4, 77);
      auto w = infinite_projection_witness(conjugate_random(realize(m), 78), *gap);
      if (w.projection_defect > 1e-8) o.fail("projection defect on " + s.set().to_string());
      if (w.delta < 0.5) o.fail("delta < 1/2 on " + s.set().to_string());
      ++witnessed;
    } else {
      auto m = synthesize(s, Properness::Proper, 5, 24, 79);
      ComplexMatrix x = realize(m);
      for (double c = 0.1; c < 0.95; c += 0.1) {
        try {
          infinite_projection_witness(x, c);
          o.fail("no refusal at c = " + std::to_string(c) + " on " + s.set().to_string());
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NoGap) o.fail(std::string("wrong error ") + std::string(to_string(e.kind())));
        }
      }
      ++refused;
    }
  }
  double t = seconds_since(t0);
  if (t >= 2.0) o.fail("runtime " + std::to_string(t) + " s");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(witnessed) + " witnessed, " + std::to_string(refused) +
              " refused, " + std::to_string(t) + " s";
  return o;
}

// 7. matrix units, exhaustively
Outcome matrix_units_check() {
  Outcome o;
  const std::vector<double> pool{0.0, 0.5, 1.0, 2.0};
  double worst = 0.0;
  long quadruples = 0;
  for (std::size_t k = 1; k <= pool.size(); ++k) {
    std::vector<double> samples(pool.begin(), pool.begin() + static_cast<long>(k));
    for (double v : samples) {
      for (Eigen::Index depth = 3; depth <= 6; ++depth) {
        OmegaPairRep r(samples, v, depth);
        const Eigen::Index top = depth - 2;
        std::vector<ComplexMatrix> e;
        for (Eigen::Index n = 0; n <= top; ++n)
          for (Eigen::Index m = 0; m <= top; ++m) e.push_back(matrix_units(r, n, m));
        auto at = [&](Eigen::Index n, Eigen::Index m) -> const ComplexMatrix& { return e[static_cast<std::size_t>(n * (top + 1) + m)]; };
        for (Eigen::Index n = 0; n <= top; ++n)
          for (Eigen::Index m = 0; m <= top; ++m)
            for (Eigen::Index a = 0; a <= top; ++a)
              for (Eigen::Index b = 0; b <= top; ++b) {
                ComplexMatrix lhs = at(n, m) * at(a, b);
                if (m == a) lhs -= at(n, b);
                worst = std::max(worst, lhs.cwiseAbs().maxCoeff());
                ++quadruples;
              }
      }
    }
  }
  if (worst > 1e-10) o.fail("max deviation " + std::to_string(worst));
  char buf[96];
  std::snprintf(buf, sizeof buf, "%ld quadruples, max deviation %.2e", quadruples, worst);
  o.detail += (o.detail.empty() ? "" : "; ") + std::string(buf);
  return o;
}

// 8. K-groups against the component census
Outcome kgroups_check() {
  Outcome o;
  std::mt19937_64 rng(1008);
  std::uniform_int_distribution<int> grid(0, 20), count(0, 3);
  for (int i = 0; i < 500; ++i) {
    auto raw = oracle::random_scaling_raw(rng);
    auto s = set_of(raw);
    std::vector<double> removed;
    for (int j = count(rng); j > 0; --j) {
      double x = grid(rng) / 8.0;
      if (contains(s, x) && std::find(removed.begin(), removed.end(), x) == removed.end()) removed.push_back(x);
    }
    auto [k0, k1] = oracle::k_ranks(raw, removed);
    auto got = k_of_functions(PuncturedSet(s, removed));
    if (got.k0_rank != static_cast<unsigned>(k0) || got.k1_rank != static_cast<unsigned>(k1))
      o.fail("mismatch on " + s.to_string());
  }
  auto point = k_of_toeplitz_algebra(PuncturedSet(set_of({{1, 1}})), 1.0);
  if (point.k0_rank != 1 || point.k1_rank != 0) o.fail("Toeplitz of {1} is not (1,0)");
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("500 random punctured sets");
  return o;
}

// 9. iso is hom both ways over the curated descriptor family
Outcome descriptor_algebra() {
  Outcome o;
  std::vector<GeneratorDescriptor> family;
  for (const auto& raw : oracle::curated_spectra()) {
    ScalingSpectrum s(set_of(raw));
    family.emplace_back(s, Properness::Proper);
    if (nonproper_admissible(s)) family.emplace_back(s, Properness::NonProper);
  }
  long pairs = 0;
  for (const auto& x : family)
    for (const auto& y : family) {
      if (iso_exists(x, y) != (hom_exists(x, y) && hom_exists(y, x)))
        o.fail("disagreement at " + x.spectrum().set().to_string() + " / " + y.spectrum().set().to_string());
      ++pairs;
    }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(family.size()) + " descriptors, " + std::to_string(pairs) + " pairs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"decision table vs interval-cover oracle", decision_table},
      {"singular values of truncated S_A", spectrum_formula},
      {"Wold roundtrip, unitary branch", wold_unitary},
      {"Wold roundtrip, shift branch", wold_shift},
      {"properness classifier inverts synthesize", properness_classifier},
      {"infinite-projection witness", witness},
      {"matrix-unit relations", matrix_units_check},
      {"K-groups vs component census", kgroups_check},
      {"iso iff hom both ways", descriptor_algebra},
  };
  int failures = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("threw: ") + e.what());
    }
    std::printf("[%s] %d. %s: %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
    failures += o.ok ? 0 : 1;
  }
  return failures;
}
