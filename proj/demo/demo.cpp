// Walks one spectrum through the library: decisions, K-groups, a synthesized
// model, its Wold decomposition and an infinite-projection witness.

#include <cstdio>

#include "scalex/scalex.hpp"

using namespace scalex;

int main(int argc, char** argv) {
  const char* text = argc > 1 ? argv[1] : "{0} u [1/4,1/2] u {1}";
  try {
    ScalingSpectrum spec(parse_spectral_set(text));
    std::printf("spectrum            %s\n", spec.set().to_string().c_str());
    std::printf("infinite projection %s\n", has_infinite_projection(spec) ? "yes" : "no");
    auto k = k_of_generator(proper_default(spec));
    std::printf("K of proper C*(X)   (%u, %u)\n", k.k0_rank, k.k1_rank);
    if (nonproper_admissible(spec)) {
      auto kn = k_of_generator({spec, Properness::NonProper});
      std::printf("K of non-proper     (%u, %u)\n", kn.k0_rank, kn.k1_rank);
    }

    auto model = synthesize(spec, Properness::Proper, 6, 4, 1);
    ComplexMatrix x = conjugate_random(realize(model), 2);
    std::printf("model               d = %ld, N = %ld\n", static_cast<long>(model.fiber_dim()),
                static_cast<long>(model.depth()));
    std::printf("estimated spectrum  %s\n", estimate_spectrum(x, 0.1).to_string().c_str());
    std::printf("classified as       %s\n", std::string(to_string(classify_properness(x).verdict)).c_str());

    WoldOptions opts;
    opts.boundary = detect_boundary(x, 1e-9);
    auto w = wold_decompose(x, opts);
    std::printf("Wold: %zu slots, unitary rank %ld, reconstruction error %.1e\n", w.q.size(),
                static_cast<long>(w.unitary_rank()), w.residuals.at("reconstruction"));

    if (auto c = gap_point_below_one(spec.set())) {
      auto wit = infinite_projection_witness(x, *c);
      std::printf("witness at c = %g: |U*U - UU*| = %.3f\n", *c, wit.delta);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
