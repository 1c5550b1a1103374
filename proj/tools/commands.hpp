#pragma once

// Subcommands of the `scalex` command-line tool. Every command prints one
// JSON report; exit codes are 0 on success, 2 on malformed input and 3 when
// the input is well formed but mathematically inadmissible.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "scalex/scalex.hpp"

namespace scalex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitMath = 3;

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoGap:
    case ErrorKind::NotAdmissible:
    case ErrorKind::NotScalinglike:
    case ErrorKind::NoConvergence:
    case ErrorKind::IllConditioned:
    case ErrorKind::NotIsolated:
    case ErrorKind::UndefinedAt:
    case ErrorKind::IndexOutOfDepth: return kExitMath;
    default: return kExitInput;
  }
}

struct RunConfig {
  double tol = 1e-9;
  double cluster_tol = 1e-8;
  double gap_tol = 0.1;
  std::uint64_t seed = 0;
  std::string output_path;
};

/// An argument that names an existing file stands for the file's contents.
inline std::string inline_or_file(const std::string& arg) {
  std::error_code ec;
  if (!arg.empty() && arg.size() < 4096 && std::filesystem::is_regular_file(arg, ec)) return read_file(arg);
  return arg;
}

/// An operator read from disk: a matrix file, or a model JSON whose fiber
/// structure also fixes the boundary slot.
struct LoadedOperator {
  ComplexMatrix x;
  std::optional<ComplexMatrix> boundary;
};

inline LoadedOperator load_operator(const std::string& path) {
  std::filesystem::path p(path);
  if (p.extension() == ".json") {
    auto model = model_from_json(detail::parse_json(read_file(p)), p.parent_path());
    return {realize(model), model.boundary()};
  }
  return {read_matrix(p), std::nullopt};
}

inline json ranks(const KGroupResult& k) { return json::array({k.k0_rank, k.k1_rank}); }

inline json classify_report(const SpectralSet& set, std::optional<Properness> properness) {
  ScalingSpectrum spec(set);
  json out;
  out["spectrum"] = to_json(set);
  out["valid"] = true;
  const bool admissible = nonproper_admissible(spec);
  const bool cover = has_infinite_projection(spec);
  const bool clopen = has_compact_open_at_one(spec);
  out["nonproper_admissible"] = admissible;
  out["infinite_projection"] = cover;
  out["infinite_projection_criteria"] = {{"interval_cover", cover}, {"compact_open_at_one", clopen}, {"agree", cover == clopen}};
  auto gap = gap_point_below_one(set);
  out["gap_point"] = gap ? json(*gap) : json(nullptr);
  out["k_proper"] = ranks(k_of_generator(proper_default(spec)));
  out["k_nonproper"] = admissible ? ranks(k_of_generator(GeneratorDescriptor(spec, Properness::NonProper))) : json(nullptr);
  if (properness) {
    GeneratorDescriptor d(spec, *properness);
    out["descriptor"] = to_json(d);
    out["k"] = ranks(k_of_generator(d));
  }
  return out;
}

inline json homcheck_report(const GeneratorDescriptor& from, const GeneratorDescriptor& to) {
  auto why = hom_obstruction(from, to);
  json reason = nullptr;
  if (why == HomObstruction::Subset) reason = "subset";
  if (why == HomObstruction::Properness) reason = "properness";
  return {{"from", to_json(from)}, {"to", to_json(to)}, {"hom_exists", why == HomObstruction::None}, {"reason", reason}};
}

inline json isocheck_report(const GeneratorDescriptor& a, const GeneratorDescriptor& b) {
  json reason = nullptr;
  if (a.spectrum() != b.spectrum()) reason = "spectrum";
  else if (a.properness() != b.properness()) reason = "properness";
  return {{"from", to_json(a)},
          {"to", to_json(b)},
          {"iso_exists", iso_exists(a, b)},
          {"hom_forward", hom_exists(a, b)},
          {"hom_backward", hom_exists(b, a)},
          {"reason", reason}};
}

inline json kgroups_of_punctured(const PuncturedSet& p) {
  json comps = json::array();
  for (const auto& c : components(p)) comps.push_back(to_json(c));
  json out = to_json(k_of_functions(p));
  out["components"] = comps;
  return out;
}

inline json wold_report_json(const WoldReport& r) {
  json q_ranks = json::array(), boundary_ranks = json::array(), all_ranks = json::array();
  auto ranks = r.q_ranks();
  for (std::size_t n = 0; n < ranks.size(); ++n) {
    all_ranks.push_back(ranks[n]);
    (r.flagged(n) ? boundary_ranks : q_ranks).push_back(ranks[n]);
  }
  json eig = json::array();
  if (r.a_restricted.size() > 0)
    for (double v : hermitian_eigen(r.a_restricted).values) eig.push_back(v);
  json residuals = json::object();
  for (const auto& [k, v] : r.residuals) residuals[k] = v;
  return {{"q_ranks", q_ranks},
          {"boundary_q_ranks", boundary_ranks},
          {"all_q_ranks", all_ranks},
          {"boundary_flags", r.boundary_flags},
          {"a_eigenvalues", eig},
          {"unitary_rank", r.unitary_rank()},
          {"kernel_rank", r.kernel_rank()},
          {"scaling", r.scaling()},
          {"residuals", residuals}};
}

inline json defect_json(const ScalingDefect& d) {
  json out{{"residual_norm", d.residual_norm}};
  if (d.off_boundary_norm) out["off_boundary_norm"] = *d.off_boundary_norm;
  if (d.boundary_localized) out["boundary_localized"] = *d.boundary_localized;
  return out;
}

inline json verify_report(const LoadedOperator& op, const RunConfig& cfg) {
  const ComplexMatrix& x = op.x;
  json out;
  out["dimension"] = x.rows();
  std::optional<ComplexMatrix> boundary = op.boundary;
  if (!boundary) boundary = detect_boundary(x, cfg.tol);
  out["scaling_defect"] = boundary ? defect_json(scaling_defect(x, *boundary)) : defect_json(scaling_defect(x));
  out["boundary_rank"] = boundary ? json(projection_rank(*boundary)) : json(nullptr);

  SpectralSet fine = estimate_spectrum(x, cfg.cluster_tol);
  SpectralSet coarse = estimate_spectrum(x, cfg.gap_tol);
  out["estimated_spectrum"] = to_json(fine);
  out["spectrum_at_resolution"] = to_json(coarse);
  const bool scaling_spectrum = contains(coarse, 0.0) && contains(coarse, 1.0);
  out["scaling_spectrum"] = scaling_spectrum;
  if (scaling_spectrum) {
    ScalingSpectrum s(coarse);
    out["infinite_projection"] = has_infinite_projection(s);
    auto gap = gap_point_below_one(coarse);
    out["gap_point"] = gap ? json(*gap) : json(nullptr);
  }
  if (!boundary) throw Error(ErrorKind::NotScalinglike, "(X*X)X - X is not a truncation artifact");
  ClassifyOptions opts;
  opts.tol = cfg.cluster_tol;
  opts.gap_tol = cfg.gap_tol;
  opts.boundary = boundary;
  auto v = classify_properness(x, opts);
  out["properness"] = {{"verdict", std::string(to_string(v.verdict))},
                       {"gap_at_0", v.gap_at_0},
                       {"gap_at_1", v.gap_at_1},
                       {"projection_distance", v.projection_distance}};
  return out;
}

inline json witness_report(const LoadedOperator& op, std::optional<double> gap, const RunConfig& cfg) {
  if (!gap) {
    SpectralSet coarse = estimate_spectrum(op.x, cfg.gap_tol);
    gap = gap_point_below_one(coarse);
    if (!gap || !(*gap > 0.0))
      throw Error(ErrorKind::NoGap, "no gap below 1 in the estimated spectrum " + coarse.to_string());
  }
  WitnessOptions opts;
  opts.tol = cfg.tol;
  opts.resolution = cfg.gap_tol;
  opts.boundary = op.boundary;
  auto w = infinite_projection_witness(op.x, *gap, opts);
  return {{"gap_point", w.gap_point},
          {"projection_defect", w.projection_defect},
          {"delta", w.delta},
          {"dominated", w.dominated},
          {"boundary_rank", w.boundary_rank},
          {"infinite_projection", w.dominated && w.delta >= 0.5 && w.projection_defect <= 1e-8}};
}

/// Runs one command line (without the program name) and returns its exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scaling-element workbench: decisions on spectra, K-groups and truncated operator models"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::optional<std::uint64_t> seed;
  std::string spec, from, to, in, properness, boundary_mode = "auto";
  int depth = 6, samples = 4;
  std::optional<int> max_steps, fiber_dim;
  std::optional<double> gap;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.output_path, "Write the report (or matrix, for synth) here");
    sub->add_option("--tol", cfg.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--cluster-tol", cfg.cluster_tol, "Singular-value clustering tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--gap-tol", cfg.gap_tol, "Required width of spectral gaps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Random seed (falls back to SCALEX_SEED)");
  };

  auto* classify = app.add_subcommand("classify", "Decide properness, infinite projections and K-groups for a spectrum");
  classify->add_option("--spec", spec, "Spectral set (JSON, compact notation or file)")->required();
  classify->add_option("--properness", properness, "proper | nonproper");
  add_common(classify);

  auto* homcheck = app.add_subcommand("homcheck", "Does a *-homomorphism C*(X) -> C*(Y), X -> Y exist?");
  homcheck->add_option("--from", from, "Descriptor of X")->required();
  homcheck->add_option("--to", to, "Descriptor of Y")->required();
  add_common(homcheck);

  auto* isocheck = app.add_subcommand("isocheck", "Does a *-isomorphism C*(X) -> C*(Y), X -> Y exist?");
  isocheck->add_option("--from", from, "Descriptor of X")->required();
  isocheck->add_option("--to", to, "Descriptor of Y")->required();
  add_common(isocheck);

  auto* kgroups = app.add_subcommand("kgroups", "K-group ranks of C*(X) or of C_0 of a punctured set");
  kgroups->add_option("--spec", spec, "Spectral set of |X*|");
  kgroups->add_option("--properness", properness, "proper | nonproper")->default_str("proper");
  kgroups->add_option("--in", in, "Punctured set JSON (inline or file)");
  add_common(kgroups);

  auto* synth = app.add_subcommand("synth", "Synthesize a truncated S_A model with a given spectrum");
  synth->add_option("--spec", spec, "Spectral set")->required();
  synth->add_option("--properness", properness, "proper | nonproper")->default_str("proper");
  synth->add_option("--depth", depth, "Number of fiber slots N")->check(CLI::Range(3, 1000));
  synth->add_option("--samples", samples, "Samples per interval")->check(CLI::Range(1, 1000));
  add_common(synth);

  auto* wold = app.add_subcommand("wold", "Wold decomposition of a matrix");
  wold->add_option("--in", in, "Matrix file or model JSON")->required();
  wold->add_option("--max-steps", max_steps, "Recursion limit (default: dimension)");
  wold->add_option("--fiber-dim", fiber_dim, "Treat the last d coordinates as the boundary slot");
  wold->add_option("--boundary", boundary_mode, "auto | none")->check(CLI::IsMember({"auto", "none"}));
  add_common(wold);

  auto* verify = app.add_subcommand("verify", "Check the scaling identity, estimate the spectrum and classify properness");
  verify->add_option("--in", in, "Matrix file or model JSON")->required();
  add_common(verify);

  auto* witness = app.add_subcommand("witness", "Build a partial isometry witnessing an infinite projection");
  witness->add_option("--in", in, "Matrix file or model JSON")->required();
  witness->add_option("--gap", gap, "Gap point c in (0,1) outside the spectrum");
  add_common(witness);

  auto* specestimate = app.add_subcommand("specestimate", "Estimate spec(|X*|) from singular values");
  specestimate->add_option("--in", in, "Matrix file or model JSON")->required();
  add_common(specestimate);

  std::vector<const char*> argv{"scalex"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  if (seed) {
    cfg.seed = *seed;
  } else if (const char* env = std::getenv("SCALEX_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: SCALEX_SEED is not an integer\n";
      return kExitInput;
    }
  }

  auto emit = [&](const json& report) {
    std::string text = report.dump(2) + "\n";
    if (!cfg.output_path.empty())
      write_file(cfg.output_path, text);
    else
      out << text;
  };
  auto opt_properness = [&]() -> std::optional<Properness> {
    if (properness.empty()) return std::nullopt;
    return parse_properness(properness);
  };

  try {
    if (*classify) {
      emit(classify_report(parse_spectral_set(inline_or_file(spec)), opt_properness()));
    } else if (*homcheck) {
      emit(homcheck_report(parse_descriptor(inline_or_file(from)), parse_descriptor(inline_or_file(to))));
    } else if (*isocheck) {
      emit(isocheck_report(parse_descriptor(inline_or_file(from)), parse_descriptor(inline_or_file(to))));
    } else if (*kgroups) {
      if (!in.empty()) {
        emit(kgroups_of_punctured(punctured_set_from_json(detail::parse_json(inline_or_file(in)))));
      } else if (!spec.empty()) {
        GeneratorDescriptor d(ScalingSpectrum(parse_spectral_set(inline_or_file(spec))),
                              opt_properness().value_or(Properness::Proper));
        json report = to_json(k_of_generator(d));
        report["descriptor"] = to_json(d);
        emit(report);
      } else {
        throw Error(ErrorKind::ParseError, "kgroups needs --spec or --in");
      }
    } else if (*synth) {
      ScalingSpectrum s(parse_spectral_set(inline_or_file(spec)));
      Properness p = opt_properness().value_or(Properness::Proper);
      auto model = synthesize(s, p, depth, samples, cfg.seed);
      json report{{"spectrum", to_json(s.set())},
                  {"properness", std::string(to_string(p))},
                  {"seed", cfg.seed},
                  {"d", model.fiber_dim()},
                  {"N", model.depth()}};
      json eig = json::array();
      for (Eigen::Index i = 0; i < model.fiber_dim(); ++i) eig.push_back(model.a()(i, i).real());
      report["a_eigenvalues"] = eig;
      if (cfg.output_path.empty()) {
        report["model"] = to_json(model);
      } else if (std::filesystem::path(cfg.output_path).extension() == ".json") {
        write_file(cfg.output_path, to_json(model).dump(2) + "\n");
        report["out"] = cfg.output_path;
      } else {
        write_matrix(cfg.output_path, realize(model));
        report["out"] = cfg.output_path;
      }
      out << report.dump(2) << '\n';
    } else if (*wold) {
      LoadedOperator op = load_operator(in);
      WoldOptions opts;
      opts.tol = cfg.tol;
      opts.max_steps = max_steps;
      if (fiber_dim) {
        if (*fiber_dim < 1 || *fiber_dim > op.x.rows())
          throw Error(ErrorKind::InvalidArgument, "--fiber-dim out of range");
        ComplexMatrix b = ComplexMatrix::Zero(op.x.rows(), op.x.cols());
        b.bottomRightCorner(*fiber_dim, *fiber_dim).setIdentity();
        opts.boundary = b;
      } else if (op.boundary) {
        opts.boundary = op.boundary;
      } else if (boundary_mode == "auto") {
        opts.boundary = detect_boundary(op.x, cfg.tol);
      }
      emit(wold_report_json(wold_decompose(op.x, opts)));
    } else if (*verify) {
      emit(verify_report(load_operator(in), cfg));
    } else if (*witness) {
      emit(witness_report(load_operator(in), gap, cfg));
    } else if (*specestimate) {
      emit(to_json(estimate_spectrum(load_operator(in).x, cfg.cluster_tol)));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return kExitOk;
}

}  // namespace scalex::cli
