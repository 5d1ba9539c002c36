#ifndef FMLAB_MAXIMAL_HPP
#define FMLAB_MAXIMAL_HPP

// Dilated multiplier operators, the maximal operator over a dilation set,
// the weighted square function bounding it, and the H-space norms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cutoff.hpp"
#include "detail/numeric.hpp"
#include "detail/parallel.hpp"
#include "dilation_set.hpp"
#include "dimension.hpp"
#include "fractional.hpp"
#include "grid_function.hpp"
#include "multiplier.hpp"

namespace fmlab {

// ---------------------------------------------------------------------------
// Test functions

struct FunctionSpec {
  enum class Kind { gaussian_bump, modulated_bump, random_band, single_mode };
  Kind kind = Kind::gaussian_bump;
  double width = 1.0;       // gaussian_bump
  double freq = 1.0;        // modulated_bump, single_mode
  std::uint64_t seed = 0;   // random_band

  static FunctionSpec gaussian_bump(double w) { return {Kind::gaussian_bump, w, 1.0, 0}; }
  static FunctionSpec modulated_bump(double f) { return {Kind::modulated_bump, 1.0, f, 0}; }
  static FunctionSpec random_band(std::uint64_t s) { return {Kind::random_band, 1.0, 1.0, s}; }
  static FunctionSpec single_mode(double f) { return {Kind::single_mode, 1.0, f, 0}; }

  std::string name() const {
    switch (kind) {
      case Kind::gaussian_bump: return "gaussian_bump";
      case Kind::modulated_bump: return "modulated_bump";
      case Kind::random_band: return "random_band";
      case Kind::single_mode: return "single_mode";
    }
    return "unknown";
  }
};

inline FunctionSpec::Kind parse_function_kind(const std::string& s) {
  if (s == "gaussian_bump") return FunctionSpec::Kind::gaussian_bump;
  if (s == "modulated_bump") return FunctionSpec::Kind::modulated_bump;
  if (s == "random_band") return FunctionSpec::Kind::random_band;
  if (s == "single_mode") return FunctionSpec::Kind::single_mode;
  throw std::invalid_argument("unknown test function: " + s);
}

namespace detail {
inline double unit_uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
}  // namespace detail

inline GridFunction build_function(const FunctionSpec& f, int dim, std::size_t n, double half_period) {
  using K = FunctionSpec::Kind;
  switch (f.kind) {
    case K::gaussian_bump: {
      if (!(f.width > 0)) throw std::invalid_argument("gaussian_bump: width must be positive");
      const double w2 = f.width * f.width;
      return GridFunction::sample(dim, n, half_period,
                                  [&](double x, double y) { return cplx(std::exp(-detail::pi * (x * x + y * y) / w2)); });
    }
    case K::modulated_bump:
      return GridFunction::sample(dim, n, half_period, [&](double x, double y) {
        return std::exp(-detail::pi * (x * x + y * y)) * std::polar(1.0, 2.0 * detail::pi * f.freq * x);
      });
    case K::single_mode: {
      // Snapped to the frequency grid so the mode is periodic.
      const double dxi = 1.0 / (2.0 * half_period);
      const double xi = std::round(f.freq / dxi) * dxi;
      return GridFunction::sample(dim, n, half_period,
                                  [&](double x, double) { return std::polar(1.0, 2.0 * detail::pi * xi * x); });
    }
    case K::random_band: {
      const auto cut = build_cutoffs();
      std::mt19937_64 gen(f.seed);
      GridFunction g(dim, n, half_period, Side::frequency);
      for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double a = 2.0 * detail::unit_uniform(gen) - 1.0, b = 2.0 * detail::unit_uniform(gen) - 1.0;
        g.samples[idx] = cut.psi(g.frequency_radius(idx)) * cplx(a, b);
      }
      return g.to_space();
    }
  }
  throw std::invalid_argument("unknown test function");
}

/// T_{m(t.)} f.
inline GridFunction apply_dilated_multiplier(const GridFunction& f, const MultiplierSpec& m, double t) {
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("dilation must be positive");
  return f.apply_multiplier([&](double r) { return m.radial(t * r); });
}

// ---------------------------------------------------------------------------
// Materialization at a sampling depth

/// Caps every generator at 2^depth points per block. Cantor generators keep
/// the deepest level whose endpoint count fits the budget.
inline DilationSet at_depth(const DilationSet& e, int depth) {
  if (depth < 1 || depth > 40) throw std::invalid_argument("sampling depth must lie in [1, 40]");
  const std::size_t budget = std::size_t{1} << depth;
  DilationSet c = e;
  std::function<void(DilationSet&)> apply = [&](DilationSet& s) {
    s.materialization_cap = budget;
    if (auto* k = std::get_if<CantorLike>(&s.generator)) {
      int level = 0;
      const double kept = static_cast<double>(k->kept.size());
      while (level < k->levels && 2.0 * std::pow(kept, level + 1) <= static_cast<double>(budget)) ++level;
      k->levels = level;
    }
    if (auto* u = std::get_if<UnionSet>(&s.generator))
      for (auto& p : u->parts) apply(p);
  };
  apply(c);
  return c;
}

inline BlockSet block_at_depth(const DilationSet& e, int j, int depth) {
  return materialized_points(at_depth(e, depth), j, std::size_t{1} << depth);
}

// ---------------------------------------------------------------------------
// H weights

struct HBlock {
  int j = 0;
  std::vector<double> points;   // materialized points of the block
  std::vector<double> nodes;    // quadrature nodes in [1, 2]
  std::vector<double> weights;  // int d(s, points)^{-1+2 beta} hat_k(s) ds
  double total = 0.0;
};

struct HGridOptions {
  std::size_t base_nodes = 96;  // graded nodes per block
  int point_levels = 2;         // extra nodes at g/4, g/16, ... on each side of an interior point
  std::size_t max_nodes = 8192;
  /// Optional per-block override of the base node count.
  std::function<std::size_t(int)> nodes_for_block;
};

struct HWeights {
  double beta = 0.3;
  int depth = 0;
  std::vector<HBlock> blocks;  // consecutive j, ascending

  int j_min() const { return blocks.front().j; }
  int j_max() const { return blocks.back().j; }
  const HBlock& block(int j) const {
    if (blocks.empty() || j < j_min() || j > j_max()) throw std::invalid_argument("H weights: block outside window");
    return blocks[static_cast<std::size_t>(j - j_min())];
  }
  double sup_total() const {
    double s = 0.0;
    for (const auto& b : blocks) s = std::max(s, b.total);
    return s;
  }
};

namespace detail {

/// int_{u1}^{u2} u^g (p + q u) du for 0 <= u1 <= u2.
inline double power_moment(double u1, double u2, double g, double p, double q) {
  auto pw = [](double u, double e) { return u > 0 ? std::pow(u, e) : 0.0; };
  return p * (pw(u2, g + 1) - pw(u1, g + 1)) / (g + 1) + q * (pw(u2, g + 2) - pw(u1, g + 2)) / (g + 2);
}

/// Product weights of d(s, pts)^gamma against the hat basis on `nodes`.
inline std::vector<double> block_weights(const std::vector<double>& nodes, const std::vector<double>& pts,
                                         double gamma) {
  std::vector<double> cuts = nodes;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cuts.push_back(pts[i]);
    if (i + 1 < pts.size()) cuts.push_back(0.5 * (pts[i] + pts[i + 1]));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> w(nodes.size(), 0.0);
  std::size_t cell = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1], mid = 0.5 * (a + b);
    while (cell + 2 < nodes.size() && nodes[cell + 1] <= a) ++cell;
    auto it = std::lower_bound(pts.begin(), pts.end(), mid);
    double e = it == pts.end() ? pts.back() : *it;
    if (it != pts.begin() && (it == pts.end() || mid - *(it - 1) < *it - mid)) e = *(it - 1);
    const double sigma = mid >= e ? 1.0 : -1.0;
    const double u1 = std::min(std::abs(a - e), std::abs(b - e)), u2 = std::max(std::abs(a - e), std::abs(b - e));
    const double x0 = nodes[cell], x1 = nodes[cell + 1], h = x1 - x0;
    w[cell] += std::max(0.0, power_moment(u1, u2, gamma, (x1 - e) / h, -sigma / h));
    w[cell + 1] += std::max(0.0, power_moment(u1, u2, gamma, (e - x0) / h, sigma / h));
  }
  return w;
}

/// Chebyshev-graded nodes on [1, 2] plus nodes accumulating toward interior points.
inline std::vector<double> block_nodes(const std::vector<double>& pts, std::size_t base, int levels,
                                       std::size_t max_nodes) {
  base = std::clamp<std::size_t>(base, 2, max_nodes);
  std::vector<double> x;
  for (std::size_t k = 0; k <= base; ++k)
    x.push_back(1.5 - 0.5 * std::cos(pi * static_cast<double>(k) / static_cast<double>(base)));
  x.front() = 1.0;
  x.back() = 2.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double p = pts[i];
    if (p <= 1.0 || p >= 2.0) continue;
    x.push_back(p);
    const double left = i > 0 ? p - pts[i - 1] : p - 1.0, right = i + 1 < pts.size() ? pts[i + 1] - p : 2.0 - p;
    double f = 0.25;
    for (int l = 0; l < levels; ++l, f *= 0.25) {
      x.push_back(p - f * left);
      x.push_back(p + f * right);
    }
  }
  std::sort(x.begin(), x.end());
  std::vector<double> out;
  for (double v : x)
    if (out.empty() || v - out.back() > 1e-12) out.push_back(v);
  out.back() = 2.0;
  return out;
}

}  // namespace detail

/// Weights for the blocks j_min..j_max of E at the given sampling depth.
inline HWeights build_hweights(const DilationSet& e, double beta, int j_min, int j_max, int depth,
                               const HGridOptions& o = {}) {
  if (!(beta > 0 && beta < 0.5)) throw std::invalid_argument("H weights: beta must lie in (0, 1/2)");
  if (j_min > j_max) throw std::invalid_argument("H weights: empty j window");
  HWeights w;
  w.beta = beta;
  w.depth = depth;
  const DilationSet capped = at_depth(e, depth);
  const std::size_t cap = std::size_t{1} << depth;
  for (int j = j_min; j <= j_max; ++j) {
    HBlock b;
    b.j = j;
    b.points = materialized_points(capped, j, cap).points;
    if (b.points.empty()) throw std::invalid_argument("H weights: empty block " + std::to_string(j));
    const std::size_t base = o.nodes_for_block ? o.nodes_for_block(j) : o.base_nodes;
    b.nodes = detail::block_nodes(b.points, base, o.point_levels, o.max_nodes);
    b.weights = detail::block_weights(b.nodes, b.points, -1.0 + 2.0 * beta);
    for (double v : b.weights) b.total += v;
    w.blocks.push_back(std::move(b));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Maximal function

struct MaximalFunction {
  GridFunction value;        // real, nonnegative, space side
  double increment = 0.0;    // relative L^2 change from depth - 1
  std::size_t dilations = 0; // materialized points of E in the window
};

namespace detail {

inline std::vector<double> window_dilations(const DilationSet& e, int j_min, int j_max, int depth) {
  std::vector<double> ts;
  for (int j = j_min; j <= j_max; ++j)
    for (double s : block_at_depth(e, j, depth).points) ts.push_back(std::ldexp(s, j));
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts)
    if (out.empty() || t - out.back() > 1e-13 * t) out.push_back(t);
  return out;
}

inline std::vector<double> sup_over(const GridFunction& fhat, const MultiplierSpec& m, const std::vector<double>& ts) {
  const std::size_t chunks = std::min<std::size_t>(16, ts.size());
  std::vector<std::vector<double>> part(chunks, std::vector<double>(fhat.size(), 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    for (std::size_t i = c; i < ts.size(); i += chunks) {
      GridFunction g = fhat;
      for (std::size_t idx = 0; idx < g.size(); ++idx) g.samples[idx] *= m.radial(ts[i] * g.frequency_radius(idx));
      g = g.to_space();
      for (std::size_t idx = 0; idx < g.size(); ++idx) part[c][idx] = std::max(part[c][idx], std::abs(g.samples[idx]));
    }
  });
  std::vector<double> out(fhat.size(), 0.0);
  for (const auto& p : part)
    for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = std::max(out[idx], p[idx]);
  return out;
}

inline GridFunction real_grid(const GridFunction& like, const std::vector<double>& v) {
  GridFunction g(like.dim, like.n, like.half_period);
  for (std::size_t i = 0; i < v.size(); ++i) g.samples[i] = v[i];
  return g;
}

}  // namespace detail

/// sup over the points of E with 2^j_min <= t <= 2^{j_max + 1} materialized at `depth`.
inline MaximalFunction maximal_function(const GridFunction& f, const MultiplierSpec& m, const DilationSet& e,
                                        int depth, int j_min, int j_max) {
  const auto ts = detail::window_dilations(e, j_min, j_max, depth);
  if (ts.empty()) throw std::invalid_argument("maximal function: empty materialization of E");
  const GridFunction fhat = f.to_frequency();
  MaximalFunction out;
  out.dilations = ts.size();
  const auto sup = detail::sup_over(fhat, m, ts);
  out.value = detail::real_grid(f, sup);
  if (depth > 1) {
    const auto coarse = detail::window_dilations(e, j_min, j_max, depth - 1);
    if (!coarse.empty()) {
      const auto prev = detail::sup_over(fhat, m, coarse);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < sup.size(); ++i) {
        num += (sup[i] - prev[i]) * (sup[i] - prev[i]);
        den += sup[i] * sup[i];
      }
      out.increment = den > 0 ? std::sqrt(num / den) : 0.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Square function

struct SquareFunctional {
  GridFunction value;  // real, nonnegative, space side
  std::size_t path_nodes = 0;
  std::size_t flagged = 0;  // pixels with a non-finite result
};

/// sum_j int_1^2 d(s, E_j)^{-1+2 beta} |D^alpha F_j(s)|^2 ds per pixel, with
/// F(t) = T_{m(t.)} f(x), F_j(s) = F(2^j s), over the blocks of W.
/// The path F is sampled once on the union of the dilated block nodes and the
/// Marchaud rules are applied to all pixels at once; D^alpha F_j(s) is read
/// off as 2^{j alpha} (D^alpha F)(2^j s).
inline SquareFunctional square_functional(const GridFunction& f, const MultiplierSpec& m, double alpha,
                                          const HWeights& w) {
  const FractionalOrder order(alpha);
  if (w.blocks.empty()) throw std::invalid_argument("square function: no H blocks");
  const GridFunction fhat = f.to_frequency();
  double xi_max = 0.0;
  for (std::size_t idx = 0; idx < fhat.size(); ++idx) xi_max = std::max(xi_max, fhat.frequency_radius(idx));

  // Path grid: a ramp up to 2^{j0}, graded blocks below the window, then the window blocks.
  const int j0 = std::min(w.j_min(), static_cast<int>(std::floor(std::log2(0.25 / xi_max))) - 1);
  std::vector<double> t{0.0};
  const std::size_t ramp = 8;
  for (std::size_t k = 1; k < ramp; ++k) t.push_back(std::ldexp(static_cast<double>(k) / ramp, j0));
  const std::size_t below = std::max<std::size_t>(16, w.blocks.front().nodes.size() / 4);
  for (int j = j0; j < w.j_min(); ++j)
    for (double s : detail::block_nodes({}, below, 0, below)) t.push_back(std::ldexp(s, j));
  for (const auto& b : w.blocks)
    for (double s : b.nodes) t.push_back(std::ldexp(s, b.j));
  std::sort(t.begin(), t.end());
  std::vector<double> grid;
  for (double v : t)
    if (grid.empty() || v - grid.back() > 1e-12 * v) grid.push_back(v);
  auto locate = [&](double v) {
    auto it = std::lower_bound(grid.begin(), grid.end(), v * (1 - 1e-12));
    return static_cast<std::size_t>(it - grid.begin());
  };

  // Rows of the Marchaud rules that the blocks read.
  std::vector<std::vector<std::size_t>> rows_of(w.blocks.size());
  std::vector<std::size_t> rows;
  for (std::size_t b = 0; b < w.blocks.size(); ++b)
    for (double s : w.blocks[b].nodes) {
      rows_of[b].push_back(locate(std::ldexp(s, w.blocks[b].j)));
      rows.push_back(rows_of[b].back());
    }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  const std::size_t nt = grid.size(), npix = f.size();
  Eigen::MatrixXd fre = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(npix));
  Eigen::MatrixXd fim = fre;
  detail::parallel_for(nt - 1, [&](std::size_t i0) {
    const std::size_t i = i0 + 1;
    GridFunction g = fhat;
    for (std::size_t idx = 0; idx < g.size(); ++idx) g.samples[idx] *= m.radial(grid[i] * g.frequency_radius(idx));
    g = g.to_space();
    for (std::size_t p = 0; p < npix; ++p) {
      fre(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = g.samples[p].real();
      fim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = g.samples[p].imag();
    }
  });

  // F is smooth in t: the singular cell uses the Lipschitz rule.
  const detail::FractionalRules rules(grid, order.alpha, 1.0);
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(nt));
  detail::parallel_for(rows.size(), [&](std::size_t r) {
    std::vector<double> row;
    rules.marchaud_row(rows[r], row);
    for (std::size_t k = 0; k < row.size(); ++k)
      weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = row[k];
  });
  const Eigen::MatrixXd dre = weights * fre, dim = weights * fim;

  std::vector<double> acc(npix, 0.0);
  for (std::size_t b = 0; b < w.blocks.size(); ++b) {
    const auto& blk = w.blocks[b];
    const double scale = std::pow(2.0, 2.0 * blk.j * order.alpha);
    for (std::size_t k = 0; k < blk.nodes.size(); ++k) {
      if (blk.weights[k] == 0.0) continue;
      const auto r = static_cast<Eigen::Index>(std::lower_bound(rows.begin(), rows.end(), rows_of[b][k]) - rows.begin());
      const double c = scale * blk.weights[k];
      for (std::size_t p = 0; p < npix; ++p) {
        const double a = dre(r, static_cast<Eigen::Index>(p)), bb = dim(r, static_cast<Eigen::Index>(p));
        acc[p] += c * (a * a + bb * bb);
      }
    }
  }
  SquareFunctional out;
  out.path_nodes = nt;
  for (double v : acc) out.flagged += !std::isfinite(v);
  out.value = detail::real_grid(f, acc);
  return out;
}

// ---------------------------------------------------------------------------
// Experiment configuration

struct GridSpec {
  int dim = 1;
  std::size_t n = 1024;
  double half_period = 32.0;
};

struct ExperimentConfig {
  std::string kind = "lemma31";  // lemma31 | halfwave | mm_linf | probe
  std::string set_name = "lacunary";
  DilationSet E = DilationSet::lacunary();
  MultiplierSpec m = MultiplierSpec::band_bump();
  FunctionSpec f;
  double alpha = 0.45;
  double beta = 0.3;
  double p = 2.0;
  GridSpec grid;
  int j_min = -4;
  int j_max = 6;
  std::uint64_t seed = 0;
  int depth = 6;                 // 2^depth materialized points per generator and block
  std::size_t t_nodes = 96;      // graded path nodes per block
  std::size_t trials = 4;        // probe
  std::vector<std::int64_t> schedule;  // halfwave sequence indices

  void validate() const {
    if (kind != "lemma31" && kind != "halfwave" && kind != "mm_linf" && kind != "probe")
      throw std::invalid_argument("unknown experiment kind: " + kind);
    if (kind == "halfwave") {
      if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("halfwave: alpha must lie in (0, 1)");
      if (!(beta > 0 && beta < 1)) throw std::invalid_argument("halfwave: beta must lie in (0, 1)");
    } else if (!(beta > 0 && beta < alpha && alpha <= 0.5)) {
      throw std::invalid_argument("need 0 < beta < alpha <= 1/2");
    }
    if (!(p > 1)) throw std::invalid_argument("p must exceed 1");
    GridFunction(grid.dim, grid.n, grid.half_period);
    if (j_min > j_max) throw std::invalid_argument("empty j range");
    if (depth < 1 || depth > 24) throw std::invalid_argument("depth must lie in [1, 24]");
    if (t_nodes < 4) throw std::invalid_argument("t_nodes must be at least 4");
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    m.validate();
  }

  GridFunction function() const {
    FunctionSpec s = f;
    if (s.kind == FunctionSpec::Kind::random_band && s.seed == 0) s.seed = seed;
    return build_function(s, grid.dim, grid.n, grid.half_period);
  }
};

// ---------------------------------------------------------------------------
// Ratio of the squared maximal function to the square functional

struct Lemma31Level {
  int depth = 0;
  std::size_t nodes_per_block = 0;
  std::size_t path_nodes = 0;
  std::size_t dilations = 0;
  double max_ratio = 0.0;
  std::size_t excluded = 0;
  std::size_t flagged = 0;
  double maximal_increment = 0.0;
  double sup_weight = 0.0;
  bool finite = true;
};

struct Lemma31Report {
  Lemma31Level base, refined;
  double relative_change = 0.0;
  GridFunction ratio;  // per pixel at the base level, 0 where excluded
  bool pass = false;
};

namespace detail {

inline void require_lacunary(const DilationSet& e, int j_min, int j_max, int depth) {
  for (int j = j_min; j <= j_max; ++j) {
    const auto b = block_at_depth(e, j, depth);
    if (!b.includes_endpoints.first || !b.includes_endpoints.second)
      throw std::invalid_argument("the square function bound needs 2^j in E for every j in the window");
  }
}

inline Lemma31Level lemma31_level(const GridFunction& f, const ExperimentConfig& c, int depth, std::size_t nodes,
                                  GridFunction* ratio) {
  Lemma31Level lv;
  lv.depth = depth;
  lv.nodes_per_block = nodes;
  HGridOptions o;
  o.base_nodes = nodes;
  const auto w = build_hweights(c.E, c.beta, c.j_min, c.j_max, depth, o);
  lv.sup_weight = w.sup_total();
  const auto mf = maximal_function(f, c.m, c.E, depth, c.j_min, c.j_max);
  const auto sf = square_functional(f, c.m, c.alpha, w);
  lv.path_nodes = sf.path_nodes;
  lv.dilations = mf.dilations;
  lv.flagged = sf.flagged;
  lv.maximal_increment = mf.increment;
  double max_m = 0.0, max_s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    max_m = std::max(max_m, std::norm(mf.value.samples[i]));
    max_s = std::max(max_s, sf.value.samples[i].real());
  }
  if (ratio) *ratio = GridFunction(f.dim, f.n, f.half_period);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double num = std::norm(mf.value.samples[i]), den = sf.value.samples[i].real();
    if (num <= 1e-12 * max_m && den <= 1e-12 * max_s) {
      ++lv.excluded;
      continue;
    }
    const double r = den > 0 ? num / den : inf;
    if (!std::isfinite(r)) lv.finite = false;
    lv.max_ratio = std::max(lv.max_ratio, r);
    if (ratio) ratio->samples[i] = r;
  }
  if (max_m == 0.0 && max_s == 0.0) lv.excluded = f.size();
  return lv;
}

}  // namespace detail

/// max over pixels of M^2 / S at (depth, t_nodes) and at (depth + 1, 2 t_nodes).
inline Lemma31Report lemma31_ratio(const ExperimentConfig& c) {
  c.validate();
  detail::require_lacunary(c.E, c.j_min, c.j_max, c.depth);
  const GridFunction f = c.function();
  Lemma31Report r;
  r.base = detail::lemma31_level(f, c, c.depth, c.t_nodes, &r.ratio);
  r.refined = detail::lemma31_level(f, c, c.depth + 1, 2 * c.t_nodes, nullptr);
  if (r.base.max_ratio > 0)
    r.relative_change = std::abs(r.refined.max_ratio - r.base.max_ratio) / r.base.max_ratio;
  r.pass = r.base.finite && r.refined.finite && r.base.flagged == 0 && r.refined.flagged == 0 &&
           r.relative_change < 0.1;
  return r;
}

// ---------------------------------------------------------------------------
// L^infty(H) norm of the multiplier

struct HNormReport {
  std::vector<double> xi;
  std::vector<double> h_norm;
  double sup = 0.0;
  double sigma2_inf = 0.0;
  double ratio = 0.0;
  double constant = 16.0;
  bool pass = false;
};

/// (sum_j sup_r |m(2^j r) psi(r)|^2)^{1/2}.
inline double sigma2_linf(const MultiplierSpec& m, const SmoothCutoff& cut, int j_min = -12, int j_max = 80,
                          std::size_t samples = 1024) {
  double total = 0.0;
  for (int j = j_min; j <= j_max; ++j) {
    double sup = 0.0;
    for (std::size_t i = 0; i <= samples; ++i) {
      const double r = 0.5 * std::pow(4.0, static_cast<double>(i) / static_cast<double>(samples));
      sup = std::max(sup, std::abs(m.radial(std::ldexp(r, j)) * cut.psi(r)));
    }
    total += sup * sup;
  }
  return std::sqrt(total);
}

inline std::vector<double> log_spaced_xi(int k_min, int k_max, int per_octave) {
  std::vector<double> xi;
  for (int k = k_min; k <= k_max; ++k)
    for (int i = 0; i < per_octave; ++i)
      xi.push_back(std::ldexp(std::pow(2.0, (i + 0.5) / per_octave), k));
  return xi;
}

/// sup over xi of (sum_j int_1^2 d(s, E_j)^{-1+2 beta} |m(2^j s xi)|^2 ds)^{1/2} against sigma2_linf.
inline HNormReport mm_linf_h_norm(const MultiplierSpec& m, const std::vector<double>& xi_samples, const HWeights& w,
                                  const SmoothCutoff& cut, double constant = 16.0) {
  HNormReport out;
  out.xi = xi_samples;
  out.constant = constant;
  out.h_norm.resize(xi_samples.size());
  detail::parallel_for(xi_samples.size(), [&](std::size_t i) {
    double s = 0.0;
    for (const auto& b : w.blocks)
      for (std::size_t k = 0; k < b.nodes.size(); ++k)
        s += b.weights[k] * std::norm(m.radial(std::ldexp(b.nodes[k], b.j) * xi_samples[i]));
    out.h_norm[i] = std::sqrt(s);
  });
  for (double v : out.h_norm) out.sup = std::max(out.sup, v);
  out.sigma2_inf = sigma2_linf(m, cut);
  if (out.sup == 0.0 && out.sigma2_inf == 0.0) {
    out.ratio = 0.0;
  } else {
    out.ratio = out.sigma2_inf > 0 ? out.sup / out.sigma2_inf : detail::inf;
  }
  out.pass = out.ratio <= constant;
  return out;
}

// ---------------------------------------------------------------------------
// Operator norm probe

struct ProbeReport {
  std::vector<double> trial_norms;  // ||M f||_p / ||f||_p per trial
  double lower_bound = 0.0;
};

/// Trial 0 uses the configured function; trial i >= 1 uses random_band(seed + i).
inline ProbeReport operator_norm_probe(const ExperimentConfig& c, std::size_t trials) {
  if (trials < 1) throw std::invalid_argument("probe: need at least one trial");
  ProbeReport out;
  for (std::size_t i = 0; i < trials; ++i) {
    const GridFunction f =
        i == 0 ? c.function()
               : build_function(FunctionSpec::random_band(c.seed + i), c.grid.dim, c.grid.n, c.grid.half_period);
    const double nf = f.lp_norm(c.p);
    double v = 0.0;
    if (nf > 0) v = maximal_function(f, c.m, c.E, c.depth, c.j_min, c.j_max).value.lp_norm(c.p) / nf;
    out.trial_norms.push_back(v);
    out.lower_bound = std::max(out.lower_bound, v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Half-wave convergence

struct HalfwaveReport {
  std::vector<double> times;
  std::vector<double> sup_difference;
  double slope = 0.0;
  double beta = 0.0;
  bool pass = false;
};

namespace detail {
inline const SequenceSet* find_sequence(const DilationSet& e) {
  if (const auto* s = std::get_if<SequenceSet>(&e.generator)) return s;
  if (const auto* u = std::get_if<UnionSet>(&e.generator))
    for (const auto& p : u->parts)
      if (const auto* s = find_sequence(p)) return s;
  return nullptr;
}
}  // namespace detail

/// sup_x |e^{-i tau (2 pi |xi|)^alpha} f - f| at tau = t_n - lim t_n for the
/// sequence part of E, n in the schedule; fitted log-log slope.
inline HalfwaveReport halfwave_convergence(const GridFunction& f, double alpha, double beta, const DilationSet& e,
                                           const std::vector<std::int64_t>& schedule) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("halfwave: alpha must lie in (0, 1)");
  const auto* seq = detail::find_sequence(e);
  if (!seq) throw std::invalid_argument("halfwave: E needs a sequence part accumulating at a point");
  if (schedule.size() < 2) throw std::invalid_argument("halfwave: need at least two schedule points");
  HalfwaveReport out;
  out.beta = beta;
  const GridFunction fhat = f.to_frequency();
  std::vector<double> lx, ly;
  for (auto n : schedule) {
    if (n < 1) throw std::invalid_argument("halfwave: schedule indices start at 1");
    const double tau = seq->rule.term(n);
    GridFunction g = fhat;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      const double w = std::pow(2.0 * detail::pi * g.frequency_radius(idx), alpha);
      g.samples[idx] *= std::polar(1.0, -tau * w) - 1.0;
    }
    const double d = g.to_space().lp_norm(detail::inf);
    out.times.push_back(tau);
    out.sup_difference.push_back(d);
    if (d > 0 && tau > 0) {
      lx.push_back(std::log(tau));
      ly.push_back(std::log(d));
    }
  }
  if (lx.size() >= 2) out.slope = detail::fit_line(lx, ly).slope;
  out.pass = out.slope >= beta - 0.1;
  return out;
}

}  // namespace fmlab

#endif  // FMLAB_MAXIMAL_HPP
