#pragma once

// File formats and JSON schemas.
//
//   spectral set   {"intervals": [[lo, hi], ...]}          normalized on load
//   descriptor     {"spectrum": <spectral set>, "proper": true|false}
//   punctured set  {"base": <spectral set>, "removed": [x, ...]}
//   K-groups       {"k0": n, "k1": m}
//   rep            {"samples": [x, ...], "v": x, "depth": N[, "omega": <spectral set>]}
//   model          {"d": d, "N": N, "A": "<matrix file>" | [[entry, ...], ...]}
//
// Spectral sets also have a compact notation: "{0,1/2,1}", "[0,1]",
// "{0} u [1/2,1]" (terms joined by u, U, + or ∪; numbers may be p/q).
//
// Matrix files: first line "rows cols", then `rows` lines of `cols`
// whitespace-separated "re,im" fields.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scalex/error.hpp"
#include "scalex/kgroups.hpp"
#include "scalex/linalg.hpp"
#include "scalex/operator_lab.hpp"
#include "scalex/spectral_set.hpp"
#include "scalex/universal_rep.hpp"

namespace scalex {

using nlohmann::json;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view s) {
  s = trim(s);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::ParseError, "not a number: '" + std::string(s) + "'");
  if (!std::isfinite(out)) throw Error(ErrorKind::ParseError, "non-finite number: '" + std::string(s) + "'");
  return out;
}

/// "3", "0.25", "1/2"
inline double parse_rational(std::string_view s) {
  s = trim(s);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_double(s);
  double num = parse_double(s.substr(0, slash));
  double den = parse_double(s.substr(slash + 1));
  if (den == 0.0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(s) + "'");
  return num / den;
}

inline double json_number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorKind::ParseError, std::string(what) + " must be a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, std::string(what) + " must be finite");
  return v;
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline bool looks_like_json_object(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{') return false;
  auto rest = trim(text.substr(1));
  return !rest.empty() && (rest.front() == '"' || rest.front() == '}') && text != "{}";
}

}  // namespace detail

// ---- spectral sets -------------------------------------------------------

inline json to_json(const SpectralSet& s) {
  json iv = json::array();
  for (const auto& i : s.intervals()) iv.push_back({i.lo, i.hi});
  return {{"intervals", iv}};
}

inline SpectralSet spectral_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("intervals") || !j["intervals"].is_array())
    throw Error(ErrorKind::ParseError, "spectral set needs an \"intervals\" array");
  std::vector<Interval> raw;
  for (const auto& p : j["intervals"]) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::ParseError, "each interval is a [lo, hi] pair");
    raw.push_back({detail::json_number(p[0], "lo"), detail::json_number(p[1], "hi")});
  }
  return SpectralSet::normalize(std::move(raw));
}

/// Compact notation: terms "{a,b,...}" or "[lo,hi]" joined by u / U / + / ∪.
inline SpectralSet parse_compact_set(std::string_view text) {
  std::string s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    // ∪ is E2 88 AA in UTF-8
    if (text.compare(i, 3, "\xE2\x88\xAA") == 0) {
      s += '+';
      i += 2;
    } else if (text[i] == 'u' || text[i] == 'U') {
      s += '+';
    } else if (!std::isspace(static_cast<unsigned char>(text[i]))) {
      s += text[i];
    }
  }
  std::vector<Interval> raw;
  std::size_t pos = 0;
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty spectral set expression");
  while (pos < s.size()) {
    char open = s[pos];
    char close = open == '{' ? '}' : open == '[' ? ']' : '\0';
    if (!close) throw Error(ErrorKind::ParseError, "expected '{' or '[' in '" + std::string(text) + "'");
    auto end = s.find(close, pos);
    if (end == std::string::npos) throw Error(ErrorKind::ParseError, "unterminated term in '" + std::string(text) + "'");
    std::string_view body(s.data() + pos + 1, end - pos - 1);
    std::vector<double> nums;
    if (!body.empty()) {
      std::size_t b = 0;
      while (true) {
        auto comma = body.find(',', b);
        nums.push_back(detail::parse_rational(body.substr(b, comma == std::string_view::npos ? body.npos : comma - b)));
        if (comma == std::string_view::npos) break;
        b = comma + 1;
      }
    }
    if (open == '{') {
      for (double x : nums) raw.push_back({x, x});
    } else {
      if (nums.size() != 2) throw Error(ErrorKind::ParseError, "interval term needs exactly two endpoints");
      raw.push_back({nums[0], nums[1]});
    }
    pos = end + 1;
    if (pos < s.size()) {
      if (s[pos] != '+') throw Error(ErrorKind::ParseError, "expected a union between terms in '" + std::string(text) + "'");
      ++pos;
      if (pos == s.size()) throw Error(ErrorKind::ParseError, "dangling union in '" + std::string(text) + "'");
    }
  }
  return SpectralSet::normalize(std::move(raw));
}

/// JSON object or compact notation.
inline SpectralSet parse_spectral_set(std::string_view text) {
  if (detail::looks_like_json_object(text)) return spectral_set_from_json(detail::parse_json(text));
  return parse_compact_set(text);
}

// ---- descriptors ---------------------------------------------------------

inline json to_json(const GeneratorDescriptor& d) {
  return {{"spectrum", to_json(d.spectrum().set())}, {"proper", d.proper()}};
}

inline GeneratorDescriptor descriptor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("spectrum") || !j.contains("proper") || !j["proper"].is_boolean())
    throw Error(ErrorKind::ParseError, "descriptor needs \"spectrum\" and boolean \"proper\"");
  return GeneratorDescriptor(ScalingSpectrum(spectral_set_from_json(j["spectrum"])),
                             j["proper"].get<bool>() ? Properness::Proper : Properness::NonProper);
}

inline Properness parse_properness(std::string_view s) {
  s = detail::trim(s);
  if (s == "proper" || s == "Proper") return Properness::Proper;
  if (s == "nonproper" || s == "non-proper" || s == "NonProper") return Properness::NonProper;
  throw Error(ErrorKind::ParseError, "properness must be 'proper' or 'nonproper', got '" + std::string(s) + "'");
}

/// JSON object, or "proper:<set>" / "nonproper:<set>" with the set in any
/// accepted notation.
inline GeneratorDescriptor parse_descriptor(std::string_view text) {
  if (detail::looks_like_json_object(text)) return descriptor_from_json(detail::parse_json(text));
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorKind::ParseError, "descriptor must be JSON or '<proper|nonproper>:<set>'");
  return GeneratorDescriptor(ScalingSpectrum(parse_spectral_set(text.substr(colon + 1))),
                             parse_properness(text.substr(0, colon)));
}

// ---- K-theory ------------------------------------------------------------

inline json to_json(const KGroupResult& k) { return {{"k0", k.k0_rank}, {"k1", k.k1_rank}}; }

inline json to_json(const PuncturedSet& p) { return {{"base", to_json(p.base())}, {"removed", p.removed()}}; }

inline PuncturedSet punctured_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("base")) throw Error(ErrorKind::ParseError, "punctured set needs \"base\"");
  std::vector<double> removed;
  if (j.contains("removed")) {
    if (!j["removed"].is_array()) throw Error(ErrorKind::ParseError, "\"removed\" must be an array");
    for (const auto& x : j["removed"]) removed.push_back(detail::json_number(x, "removed point"));
  }
  return PuncturedSet(spectral_set_from_json(j["base"]), std::move(removed));
}

inline json to_json(const Component& c) {
  return {{"lo", c.lo}, {"hi", c.hi}, {"lo_closed", c.lo_closed}, {"hi_closed", c.hi_closed},
          {"kind", std::string(to_string(c.kind()))}};
}

// ---- (Omega, v) representations -----------------------------------------

inline OmegaPairRep rep_from_json(const json& j) {
  if (!j.is_object() || !j.contains("samples") || !j.contains("v") || !j.contains("depth"))
    throw Error(ErrorKind::ParseError, "rep needs \"samples\", \"v\" and \"depth\"");
  std::vector<double> samples;
  for (const auto& x : j["samples"]) samples.push_back(detail::json_number(x, "sample"));
  if (!j["depth"].is_number_integer()) throw Error(ErrorKind::ParseError, "\"depth\" must be an integer");
  std::optional<SpectralSet> omega;
  if (j.contains("omega")) omega = spectral_set_from_json(j["omega"]);
  return OmegaPairRep(std::move(samples), detail::json_number(j["v"], "v"), j["depth"].get<Eigen::Index>(),
                      std::move(omega));
}

inline json to_json(const OmegaPairRep& r) {
  json j{{"samples", r.samples()}, {"v", r.v()}, {"depth", r.depth()}};
  if (r.omega()) j["omega"] = to_json(*r.omega());
  return j;
}

namespace detail {

inline Complex json_complex(const json& e) {
  if (e.is_number()) return {json_number(e, "entry"), 0.0};
  if (e.is_array() && e.size() == 2) return {json_number(e[0], "re"), json_number(e[1], "im")};
  throw Error(ErrorKind::ParseError, "complex entries are numbers or [re, im] pairs");
}

inline json complex_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

}  // namespace detail

/// Values at the rep's sample points, as numbers or [re, im] pairs.
inline SampledFunction sampled_function_from_json(const OmegaPairRep& r, const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "function values must be an array");
  SampledFunction f;
  for (const auto& e : j) f.values.push_back(detail::json_complex(e));
  if (f.values.size() != r.samples().size())
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(r.samples().size()) + " function values");
  f.value_at_v = f.values[r.v_index()];
  return f;
}

// ---- matrices ------------------------------------------------------------

inline std::string format_matrix(const ComplexMatrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline ComplexMatrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "empty matrix file");
  std::istringstream header(line);
  long long rows = 0, cols = 0;
  std::string extra;
  if (!(header >> rows >> cols) || (header >> extra) || rows <= 0 || cols <= 0)
    throw Error(ErrorKind::ParseError, "first line must be 'rows cols' with positive integers");
  ComplexMatrix m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw Error(ErrorKind::ParseError, "expected " + std::to_string(rows) + " rows, got " + std::to_string(i));
    std::istringstream fields(line);
    std::string field;
    long long j = 0;
    while (fields >> field) {
      if (j >= cols) throw Error(ErrorKind::ParseError, "row " + std::to_string(i) + " has too many fields");
      auto comma = field.find(',');
      if (comma == std::string::npos)
        throw Error(ErrorKind::ParseError, "field '" + field + "' is not a re,im pair");
      m(i, j) = Complex(detail::parse_double(std::string_view(field).substr(0, comma)),
                        detail::parse_double(std::string_view(field).substr(comma + 1)));
      ++j;
    }
    if (j != cols)
      throw Error(ErrorKind::ParseError, "row " + std::to_string(i) + " has " + std::to_string(j) + " fields, expected " +
                                             std::to_string(cols));
  }
  while (std::getline(in, line))
    if (!detail::trim(line).empty()) throw Error(ErrorKind::ParseError, "trailing content after the last row");
  return m;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  f << content;
}

inline ComplexMatrix read_matrix(const std::filesystem::path& path) { return parse_matrix(read_file(path)); }

inline void write_matrix(const std::filesystem::path& path, const ComplexMatrix& m) {
  write_file(path, format_matrix(m));
}

// ---- models --------------------------------------------------------------

inline json to_json(const TruncatedShiftModel& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.fiber_dim(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.fiber_dim(); ++j) row.push_back(detail::complex_json(m.a()(i, j)));
    a.push_back(row);
  }
  return {{"d", m.fiber_dim()}, {"N", m.depth()}, {"A", a}};
}

/// A given as a path is resolved against `base_dir`.
inline TruncatedShiftModel model_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object() || !j.contains("d") || !j.contains("N") || !j.contains("A"))
    throw Error(ErrorKind::ParseError, "model needs \"d\", \"N\" and \"A\"");
  if (!j["d"].is_number_integer() || !j["N"].is_number_integer())
    throw Error(ErrorKind::ParseError, "\"d\" and \"N\" must be integers");
  const auto d = j["d"].get<Eigen::Index>();
  const auto n = j["N"].get<Eigen::Index>();
  ComplexMatrix a;
  if (j["A"].is_string()) {
    std::filesystem::path p = j["A"].get<std::string>();
    a = read_matrix(p.is_absolute() ? p : base_dir / p);
  } else if (j["A"].is_array()) {
    const auto& rows = j["A"];
    a.resize(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != a.cols())
        throw Error(ErrorKind::ParseError, "\"A\" rows must have equal length");
      for (std::size_t k = 0; k < rows[i].size(); ++k)
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = detail::json_complex(rows[i][k]);
    }
  } else {
    throw Error(ErrorKind::ParseError, "\"A\" must be a matrix file path or nested arrays");
  }
  if (a.rows() != d || a.cols() != d)
    throw Error(ErrorKind::DimensionMismatch, "\"A\" is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                                  ", expected d = " + std::to_string(d));
  return TruncatedShiftModel(std::move(a), n);
}

}  // namespace scalex
