#ifndef FMLAB_IO_HPP
#define FMLAB_IO_HPP

// JSON, CSV and binary serialization of the library types.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilation_set.hpp"
#include "dimension.hpp"
#include "fractional.hpp"
#include "grid_function.hpp"
#include "lp_frames.hpp"
#include "maximal.hpp"
#include "multiplier.hpp"

namespace fmlab {

using json = nlohmann::ordered_json;

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw std::invalid_argument(what + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw std::invalid_argument(what + ": unknown key '" + it.key() + "'");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("bad value for '") + key + "'");
  }
}

inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Dilation sets

inline std::string to_string(SequenceRule::Kind k) {
  switch (k) {
    case SequenceRule::Kind::power: return "power";
    case SequenceRule::Kind::geometric: return "geometric";
    case SequenceRule::Kind::inverse_log: return "inverse_log";
    case SequenceRule::Kind::custom: return "custom";
  }
  return "?";
}

/// {"type": "power_sequence" | "sequence" | "points" | "cantor" | "lacunary" | "union", ...}
/// with an optional "with_lacunary": true.
inline DilationSet dilation_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw std::invalid_argument("dilation set: missing 'type'");
  const auto type = j.at("type").get<std::string>();
  DilationSet e;
  if (type == "power_sequence") {
    detail::check_keys(j, {"type", "a", "offset", "with_lacunary"}, "power_sequence");
    e = DilationSet::sequence(SequenceRule::power(detail::get_or(j, "a", 1.0)), detail::get_or(j, "offset", 1.0));
  } else if (type == "sequence") {
    detail::check_keys(j, {"type", "rule", "param", "offset", "with_lacunary"}, "sequence");
    const auto rule = detail::get_or<std::string>(j, "rule", "power");
    const double param = detail::get_or(j, "param", 1.0);
    SequenceRule r;
    if (rule == "power") r = SequenceRule::power(param);
    else if (rule == "geometric") r = SequenceRule::geometric(param);
    else if (rule == "inverse_log") r = SequenceRule::inverse_log();
    else throw std::invalid_argument("sequence: unknown rule '" + rule + "'");
    r.validate();
    e = DilationSet::sequence(r, detail::get_or(j, "offset", 1.0));
  } else if (type == "points") {
    detail::check_keys(j, {"type", "points", "with_lacunary"}, "points");
    const auto pts = detail::get_or<std::vector<double>>(j, "points", {});
    if (pts.empty()) throw std::invalid_argument("dilation set is empty");
    for (double p : pts)
      if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("points must be positive and finite");
    e = DilationSet::points(pts);
  } else if (type == "cantor") {
    detail::check_keys(j, {"type", "base", "kept", "levels", "origin", "with_lacunary"}, "cantor");
    e = DilationSet::cantor(detail::get_or(j, "base", 3), detail::get_or<std::vector<int>>(j, "kept", {0, 2}),
                            detail::get_or(j, "levels", 12), detail::get_or(j, "origin", 1.0));
    const auto& c = std::get<CantorLike>(e.generator);
    if (c.base < 2 || c.levels < 0 || c.kept.empty()) throw std::invalid_argument("cantor: bad parameters");
    for (int d : c.kept)
      if (d < 0 || d >= c.base) throw std::invalid_argument("cantor: digit out of range");
  } else if (type == "lacunary") {
    detail::check_keys(j, {"type", "with_lacunary"}, "lacunary");
    e = DilationSet::lacunary();
  } else if (type == "union") {
    detail::check_keys(j, {"type", "parts", "with_lacunary"}, "union");
    if (!j.contains("parts") || !j.at("parts").is_array() || j.at("parts").empty())
      throw std::invalid_argument("union: 'parts' must be a nonempty array");
    std::vector<DilationSet> parts;
    for (const auto& p : j.at("parts")) parts.push_back(dilation_set_from_json(p));
    e = DilationSet::set_union(std::move(parts));
  } else {
    throw std::invalid_argument("dilation set: unknown type '" + type + "'");
  }
  if (detail::get_or(j, "with_lacunary", false)) e = e.with_lacunary();
  return e;
}

inline json to_json(const DilationSet& e) {
  return std::visit(
      [](const auto& g) -> json {
        using G = std::decay_t<decltype(g)>;
        json j;
        if constexpr (std::is_same_v<G, SequenceSet>) {
          j["type"] = "sequence";
          j["rule"] = to_string(g.rule.kind);
          if (g.rule.kind == SequenceRule::Kind::custom) j["name"] = g.rule.custom_name;
          else j["param"] = g.rule.param;
          j["offset"] = g.offset;
        } else if constexpr (std::is_same_v<G, ExplicitPoints>) {
          j["type"] = "points";
          j["points"] = g.points;
        } else if constexpr (std::is_same_v<G, CantorLike>) {
          j["type"] = "cantor";
          j["base"] = g.base;
          j["kept"] = g.kept;
          j["levels"] = g.levels;
          j["origin"] = g.origin;
        } else if constexpr (std::is_same_v<G, LacunaryGrid>) {
          j["type"] = "lacunary";
        } else {
          j["type"] = "union";
          j["parts"] = json::array();
          for (const auto& p : g.parts) j["parts"].push_back(to_json(p));
        }
        return j;
      },
      e.generator);
}

inline json to_json(const BlockSet& b) {
  json j;
  j["j"] = b.j;
  j["points"] = b.points;
  j["truncated"] = b.truncated;
  return j;
}

/// One point per row.
inline std::string block_csv(const BlockSet& b) {
  std::ostringstream os;
  os.precision(17);
  os << "point\n";
  for (double p : b.points) os << p << "\n";
  return os.str();
}

inline json to_json(const DimensionEstimate& e) {
  json j;
  j["value"] = detail::number(e.value);
  j["method"] = to_string(e.method);
  j["delta_range"] = {detail::number(e.delta_range.first), detail::number(e.delta_range.second)};
  j["residual"] = detail::number(e.residual);
  return j;
}

// ---------------------------------------------------------------------------
// Paths and band breakdowns

/// Rows t, Re, Im.
inline std::string path_csv(const SampledPath& p) {
  std::ostringstream os;
  os.precision(17);
  os << "t,re,im\n";
  for (std::size_t i = 0; i < p.size(); ++i) os << p.grid[i] << "," << p.values[i].real() << "," << p.values[i].imag() << "\n";
  return os.str();
}

inline json to_json(const SampledPath& p) {
  json j;
  j["t"] = p.grid;
  std::vector<double> re, im;
  for (auto v : p.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["re"] = re;
  j["im"] = im;
  j["hoelder_exponent"] = p.hoelder_exponent ? json(*p.hoelder_exponent) : json(nullptr);
  return j;
}

inline SampledPath path_from_json(const json& j) {
  detail::check_keys(j, {"t", "re", "im", "hoelder_exponent"}, "path");
  SampledPath p;
  p.grid = j.at("t").get<std::vector<double>>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = detail::get_or<std::vector<double>>(j, "im", std::vector<double>(re.size(), 0.0));
  if (re.size() != im.size()) throw std::invalid_argument("path: re and im differ in length");
  for (std::size_t i = 0; i < re.size(); ++i) p.values.emplace_back(re[i], im[i]);
  if (j.contains("hoelder_exponent") && !j.at("hoelder_exponent").is_null())
    p.hoelder_exponent = j.at("hoelder_exponent").get<double>();
  p.validate();
  return p;
}

/// Rows j, band_norm.
inline std::string band_csv(const Sigma2Result& r) {
  std::ostringstream os;
  os.precision(17);
  os << "j,band_norm\n";
  for (const auto& b : r.bands) os << b.j << "," << b.norm << "\n";
  return os.str();
}

inline json to_json(const Sigma2Result& r) {
  json j;
  j["value"] = detail::number(r.value);
  j["stale"] = r.stale;
  j["resolved"] = r.resolved;
  j["bands"] = json::array();
  for (const auto& b : r.bands)
    j["bands"].push_back({{"j", b.j}, {"band_norm", detail::number(b.norm)}, {"grid_n", b.grid_n}});
  return j;
}

// ---------------------------------------------------------------------------
// Grid functions: int32 dim, uint64 N, float64 L, int32 side (0 space, 1 frequency),
// then N^dim interleaved (Re, Im) float64 values, all little-endian.

namespace detail {

template <class T>
void put_le(std::ostream& os, T v) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U u = std::bit_cast<U>(v);
  for (std::size_t b = 0; b < sizeof(U); ++b) os.put(static_cast<char>((u >> (8 * b)) & 0xff));
}

template <class T>
T get_le(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U u = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw std::invalid_argument("grid file: truncated");
    u |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return std::bit_cast<T>(u);
}

}  // namespace detail

inline void write_grid(std::ostream& os, const GridFunction& g) {
  detail::put_le<std::int32_t>(os, g.dim);
  detail::put_le<std::uint64_t>(os, g.n);
  detail::put_le<double>(os, g.half_period);
  detail::put_le<std::int32_t>(os, g.side == Side::space ? 0 : 1);
  for (auto v : g.samples) {
    detail::put_le<double>(os, v.real());
    detail::put_le<double>(os, v.imag());
  }
}

inline GridFunction read_grid(std::istream& is) {
  const auto dim = detail::get_le<std::int32_t>(is);
  const auto n = detail::get_le<std::uint64_t>(is);
  const auto L = detail::get_le<double>(is);
  const auto side = detail::get_le<std::int32_t>(is);
  if (side != 0 && side != 1) throw std::invalid_argument("grid file: bad side flag");
  if (n > (std::uint64_t{1} << 24)) throw std::invalid_argument("grid file: N too large");
  GridFunction g(dim, static_cast<std::size_t>(n), L, side == 0 ? Side::space : Side::frequency);
  for (auto& v : g.samples) {
    const double re = detail::get_le<double>(is);
    v = cplx(re, detail::get_le<double>(is));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Multipliers and test functions

namespace detail {
inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("complex value must be a number or [re, im]");
}
}  // namespace detail

/// {"family": "limited_decay" | "slow_decay" | "oscillatory" | "band_bump" | "constant" | "zero" | "sum", ...}
inline MultiplierSpec multiplier_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) throw std::invalid_argument("multiplier: missing 'family'");
  const auto fam = j.at("family").get<std::string>();
  const SmoothCutoff cut(parse_transition(detail::get_or<std::string>(j, "transition", "smooth_exp")));
  MultiplierSpec m;
  if (fam == "limited_decay") {
    detail::check_keys(j, {"family", "a", "transition", "scale"}, fam);
    m = MultiplierSpec(LimitedDecay{detail::get_or(j, "a", 1.0)}, cut);
  } else if (fam == "slow_decay") {
    detail::check_keys(j, {"family", "beta", "delta", "transition", "scale"}, fam);
    m = MultiplierSpec(SlowDecay{detail::get_or(j, "beta", 1.0), detail::get_or(j, "delta", 0.25)}, cut);
  } else if (fam == "oscillatory") {
    detail::check_keys(j, {"family", "alpha", "beta", "transition", "scale"}, fam);
    m = MultiplierSpec(Oscillatory{detail::get_or(j, "alpha", 0.5), detail::get_or(j, "beta", 1.0)}, cut);
  } else if (fam == "band_bump") {
    detail::check_keys(j, {"family", "transition", "scale"}, fam);
    m = MultiplierSpec(BandBump{}, cut);
  } else if (fam == "constant") {
    detail::check_keys(j, {"family", "value", "transition", "scale"}, fam);
    m = MultiplierSpec::constant(j.contains("value") ? detail::complex_from_json(j.at("value")) : cplx(1.0));
  } else if (fam == "zero") {
    detail::check_keys(j, {"family", "transition", "scale"}, fam);
    m = MultiplierSpec::zero();
  } else if (fam == "sum") {
    detail::check_keys(j, {"family", "terms", "transition", "scale"}, fam);
    std::vector<std::pair<cplx, MultiplierSpec>> terms;
    for (const auto& t : j.at("terms")) {
      detail::check_keys(t, {"coef", "m"}, "sum term");
      terms.emplace_back(t.contains("coef") ? detail::complex_from_json(t.at("coef")) : cplx(1.0),
                         multiplier_from_json(t.at("m")));
    }
    m = MultiplierSpec::sum(std::move(terms));
  } else {
    throw std::invalid_argument("multiplier: unknown family '" + fam + "'");
  }
  m.validate();
  const double scale = detail::get_or(j, "scale", 1.0);
  return scale == 1.0 ? m : m.dilated(scale);
}

inline json to_json(const MultiplierSpec& m) {
  json j;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        j["family"] = m.family_name();
        if constexpr (std::is_same_v<F, LimitedDecay>) {
          j["a"] = f.a;
        } else if constexpr (std::is_same_v<F, SlowDecay>) {
          j["beta"] = f.beta;
          j["delta"] = f.delta;
        } else if constexpr (std::is_same_v<F, Oscillatory>) {
          j["alpha"] = f.alpha;
          j["beta"] = f.beta;
        } else if constexpr (std::is_same_v<F, ConstantMultiplier>) {
          j["value"] = {f.value.real(), f.value.imag()};
        } else if constexpr (std::is_same_v<F, SumMultiplier>) {
          j["terms"] = json::array();
          for (const auto& [c, t] : f.terms) j["terms"].push_back({{"coef", {c.real(), c.imag()}}, {"m", to_json(t)}});
        }
      },
      m.family);
  j["transition"] = to_string(m.cutoff.kind());
  if (m.scale != 1.0) j["scale"] = m.scale;
  return j;
}

inline FunctionSpec function_from_json(const json& j) {
  detail::check_keys(j, {"kind", "width", "freq", "seed"}, "function");
  FunctionSpec f;
  f.kind = parse_function_kind(detail::get_or<std::string>(j, "kind", "gaussian_bump"));
  f.width = detail::get_or(j, "width", 1.0);
  f.freq = detail::get_or(j, "freq", 1.0);
  f.seed = detail::get_or<std::uint64_t>(j, "seed", 0);
  return f;
}

inline json to_json(const FunctionSpec& f) {
  json j;
  j["kind"] = f.name();
  j["width"] = f.width;
  j["freq"] = f.freq;
  j["seed"] = f.seed;
  return j;
}

// ---------------------------------------------------------------------------
// Experiment configs

inline ExperimentConfig experiment_from_json(const json& j) {
  detail::check_keys(j,
                     {"kind", "set_name", "E", "m", "f", "alpha", "beta", "p", "grid", "j_range", "seed", "depth",
                      "t_nodes", "trials", "schedule"},
                     "experiment");
  ExperimentConfig c;
  c.kind = detail::get_or<std::string>(j, "kind", c.kind);
  if (j.contains("E")) c.E = dilation_set_from_json(j.at("E"));
  c.set_name = detail::get_or<std::string>(j, "set_name", j.contains("E") ? "custom" : c.set_name);
  if (j.contains("m")) c.m = multiplier_from_json(j.at("m"));
  if (j.contains("f")) c.f = function_from_json(j.at("f"));
  c.alpha = detail::get_or(j, "alpha", c.alpha);
  c.beta = detail::get_or(j, "beta", c.beta);
  c.p = detail::get_or(j, "p", c.p);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::check_keys(g, {"dim", "n", "L"}, "grid");
    c.grid.dim = detail::get_or(g, "dim", c.grid.dim);
    c.grid.n = detail::get_or(g, "n", c.grid.n);
    c.grid.half_period = detail::get_or(g, "L", c.grid.half_period);
  }
  if (j.contains("j_range")) {
    const auto r = j.at("j_range").get<std::vector<int>>();
    if (r.size() != 2) throw std::invalid_argument("j_range must be [j_min, j_max]");
    c.j_min = r[0];
    c.j_max = r[1];
  }
  c.seed = detail::get_or<std::uint64_t>(j, "seed", c.seed);
  c.depth = detail::get_or(j, "depth", c.depth);
  c.t_nodes = detail::get_or(j, "t_nodes", c.t_nodes);
  c.trials = detail::get_or(j, "trials", c.trials);
  c.schedule = detail::get_or(j, "schedule", c.schedule);
  c.validate();
  return c;
}

/// Resolved config with every default expanded.
inline json to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = c.kind;
  j["set_name"] = c.set_name;
  j["E"] = to_json(c.E);
  j["m"] = to_json(c.m);
  j["f"] = to_json(c.f);
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["p"] = c.p;
  j["grid"] = {{"dim", c.grid.dim}, {"n", c.grid.n}, {"L", c.grid.half_period}};
  j["j_range"] = {c.j_min, c.j_max};
  j["seed"] = c.seed;
  j["depth"] = c.depth;
  j["t_nodes"] = c.t_nodes;
  j["trials"] = c.trials;
  j["schedule"] = c.schedule;
  return j;
}

// ---------------------------------------------------------------------------
// Experiment reports

inline json to_json(const Lemma31Level& l) {
  json j;
  j["depth"] = l.depth;
  j["nodes_per_block"] = l.nodes_per_block;
  j["path_nodes"] = l.path_nodes;
  j["dilations"] = l.dilations;
  j["max_ratio"] = detail::number(l.max_ratio);
  j["excluded_pixels"] = l.excluded;
  j["flagged_pixels"] = l.flagged;
  j["maximal_increment"] = detail::number(l.maximal_increment);
  j["sup_weight"] = detail::number(l.sup_weight);
  j["finite"] = l.finite;
  return j;
}

inline json to_json(const Lemma31Report& r) {
  json j;
  j["base"] = to_json(r.base);
  j["refined"] = to_json(r.refined);
  j["relative_change"] = detail::number(r.relative_change);
  j["pass"] = r.pass;
  return j;
}

/// Histogram of log10 of the per-pixel ratio over included pixels.
inline std::string ratio_histogram_csv(const GridFunction& ratio, int bins = 40, double lo = -8.0, double hi = 2.0) {
  std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
  for (auto v : ratio.samples) {
    const double r = v.real();
    if (!(r > 0)) continue;
    const double x = std::clamp((std::log10(r) - lo) / (hi - lo), 0.0, 1.0 - 1e-12);
    ++count[static_cast<std::size_t>(x * bins)];
  }
  std::ostringstream os;
  os.precision(17);
  os << "log10_ratio_lo,log10_ratio_hi,pixels\n";
  for (int b = 0; b < bins; ++b)
    os << lo + (hi - lo) * b / bins << "," << lo + (hi - lo) * (b + 1) / bins << "," << count[static_cast<std::size_t>(b)]
       << "\n";
  return os.str();
}

inline json to_json(const HNormReport& r) {
  json j;
  j["sup"] = detail::number(r.sup);
  j["sigma2_inf"] = detail::number(r.sigma2_inf);
  j["ratio"] = detail::number(r.ratio);
  j["constant"] = r.constant;
  j["pass"] = r.pass;
  return j;
}

inline json to_json(const HalfwaveReport& r) {
  json j;
  j["times"] = r.times;
  j["sup_difference"] = r.sup_difference;
  j["slope"] = detail::number(r.slope);
  j["beta"] = r.beta;
  j["pass"] = r.pass;
  return j;
}

/// Rows tau, sup |u(tau) - f|.
inline std::string rate_csv(const HalfwaveReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "tau,sup_difference\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) os << r.times[i] << "," << r.sup_difference[i] << "\n";
  return os.str();
}

inline json to_json(const ProbeReport& r) {
  json j;
  j["trial_norms"] = r.trial_norms;
  j["lower_bound"] = detail::number(r.lower_bound);
  return j;
}

}  // namespace fmlab

#endif  // FMLAB_IO_HPP
