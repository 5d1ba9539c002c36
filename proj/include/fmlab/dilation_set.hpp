#ifndef FMLAB_DILATION_SET_HPP
#define FMLAB_DILATION_SET_HPP

// Dilation sets E in (0, inf) and their dyadic blocks (2^-j E) ∩ [1, 2].

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "detail/numeric.hpp"

namespace fmlab {

/// A decreasing null sequence t_1 > t_2 > ... -> 0.
struct SequenceRule {
  enum class Kind { power, geometric, inverse_log, custom };

  Kind kind = Kind::power;
  /// power: t_n = n^-param; geometric: t_n = param^-n (param > 1).
  double param = 1.0;
  /// Only for Kind::custom.
  std::function<double(std::int64_t)> custom_term;
  std::string custom_name;

  static SequenceRule power(double p) { return {Kind::power, p, {}, {}}; }
  static SequenceRule geometric(double q) { return {Kind::geometric, q, {}, {}}; }
  static SequenceRule inverse_log() { return {Kind::inverse_log, 0.0, {}, {}}; }
  static SequenceRule custom(std::function<double(std::int64_t)> f, std::string name) {
    return {Kind::custom, 0.0, std::move(f), std::move(name)};
  }

  void validate() const {
    if (kind == Kind::power && !(param > 0)) throw std::invalid_argument("power sequence needs exponent > 0");
    if (kind == Kind::geometric && !(param > 1)) throw std::invalid_argument("geometric sequence needs ratio > 1");
    if (kind == Kind::custom && !custom_term) throw std::invalid_argument("custom sequence needs a term function");
  }

  double term(std::int64_t n) const {
    const auto x = static_cast<double>(n);
    switch (kind) {
      case Kind::power: return std::pow(x, -param);
      case Kind::geometric: return std::pow(param, -x);
      case Kind::inverse_log: return 1.0 / std::log(x + 1.0);
      case Kind::custom: return custom_term(n);
    }
    return 0.0;
  }

  /// t_n - t_{n+1}, computed without cancellation for the closed-form kinds.
  double gap(std::int64_t n) const {
    const auto x = static_cast<double>(n);
    switch (kind) {
      case Kind::power: return std::pow(x, -param) * -std::expm1(-param * std::log1p(1.0 / x));
      case Kind::geometric: return std::pow(param, -x) * (1.0 - 1.0 / param);
      case Kind::inverse_log: {
        const double l1 = std::log(x + 1.0), l2 = std::log(x + 2.0);
        return std::log1p(1.0 / (x + 1.0)) / (l1 * l2);
      }
      case Kind::custom: return custom_term(n) - custom_term(n + 1);
    }
    return 0.0;
  }

  /// #{n >= 1 : t_n >= delta}; +inf when the count overflows a double.
  double count_at_least(double delta) const {
    if (delta <= 0) return detail::inf;
    double guess = 0;
    switch (kind) {
      case Kind::power: guess = std::floor(std::pow(delta, -1.0 / param)); break;
      case Kind::geometric: guess = std::floor(std::log(1.0 / delta) / std::log(param)); break;
      case Kind::inverse_log: {
        const double e = std::exp(1.0 / delta);
        if (!std::isfinite(e)) return detail::inf;
        guess = std::floor(e - 1.0);
        break;
      }
      case Kind::custom: {
        // Binary search on the decreasing term function.
        if (custom_term(1) < delta) return 0;
        std::int64_t lo = 1, hi = 2;
        while (custom_term(hi) >= delta) {
          lo = hi;
          if (hi > (INT64_MAX >> 2)) return detail::inf;
          hi *= 2;
        }
        while (hi - lo > 1) {
          const auto mid = lo + (hi - lo) / 2;
          (custom_term(mid) >= delta ? lo : hi) = mid;
        }
        return static_cast<double>(lo);
      }
    }
    if (guess < 0) guess = 0;
    if (guess > 9.0e15) return guess;  // beyond exact integer range; good enough as a count
    auto n = static_cast<std::int64_t>(guess);
    while (n >= 1 && term(n) < delta) --n;
    while (term(n + 1) >= delta) ++n;
    return static_cast<double>(n);
  }

  /// Upper bound of sum_{n >= n0} 2 (scale g_n / 2)^a / a, or +inf when the
  /// sum diverges (or no bound is available).
  double gap_power_tail(std::int64_t n0, double scale, double a) const {
    const double m = static_cast<double>(std::max<std::int64_t>(n0, 1));
    switch (kind) {
      case Kind::power: {
        // g_n <= p n^{-p-1}
        const double q = (param + 1.0) * a;
        if (q <= 1.0) return detail::inf;
        const double c = std::pow(scale * param / 2.0, a);
        return 2.0 / a * c * (std::pow(m, -q) + std::pow(m, 1.0 - q) / (q - 1.0));
      }
      case Kind::geometric: {
        const double r = std::pow(param, -a);
        return 2.0 / a * std::pow(scale * gap(n0) / 2.0, a) / (1.0 - r);
      }
      case Kind::inverse_log:
      case Kind::custom: return detail::inf;
    }
    return detail::inf;
  }

  std::string name() const {
    switch (kind) {
      case Kind::power: return "power";
      case Kind::geometric: return "geometric";
      case Kind::inverse_log: return "inverse_log";
      case Kind::custom: return custom_name.empty() ? "custom" : custom_name;
    }
    return "?";
  }
};

class DilationSet;

/// {offset + t_n : n >= 1}
struct SequenceSet {
  SequenceRule rule;
  double offset = 1.0;
};
struct ExplicitPoints {
  std::vector<double> points;
};
/// Endpoints of the level-`levels` intervals of the Cantor-type set in
/// [origin, origin + 1] keeping base-`base` digits in `kept`.
struct CantorLike {
  int base = 3;
  std::vector<int> kept{0, 2};
  int levels = 1;
  double origin = 1.0;
};
/// {2^j : j in Z}
struct LacunaryGrid {};
struct UnionSet {
  std::vector<DilationSet> parts;
};

/// Points of a sequence block that were not materialized: all lie in
/// [lo, hi], consecutive gaps decrease and are at most max_gap.
struct DenseTail {
  double lo = 1.0;
  double hi = 1.0;
  double max_gap = 0.0;
  SequenceRule rule;
  std::int64_t first_index = 0;  // first index whose point is not materialized
  std::int64_t last_index = INT64_MAX;  // INT64_MAX when the tail accumulates
  double scale = 1.0;
  double offset = 0.0;
  bool accumulates() const { return last_index == INT64_MAX; }
};

struct BlockSet {
  int j = 0;
  std::vector<double> points;  // sorted ascending, inside [1, 2]
  std::pair<bool, bool> includes_endpoints{false, false};
  bool truncated = false;
  std::vector<DenseTail> tails;

  bool empty() const { return points.empty() && tails.empty(); }
};

class DilationSet {
 public:
  using Generator = std::variant<SequenceSet, ExplicitPoints, CantorLike, LacunaryGrid, UnionSet>;

  Generator generator;
  std::size_t materialization_cap = 10'000'000;
  /// Sequence blocks stop materializing once consecutive gaps drop below this.
  double gap_floor = 1e-9;

  DilationSet() : generator(LacunaryGrid{}) {}
  explicit DilationSet(Generator g) : generator(std::move(g)) {}

  /// {1 + n^-a}
  static DilationSet power_sequence(double a) {
    return DilationSet(SequenceSet{SequenceRule::power(a), 1.0});
  }
  static DilationSet sequence(SequenceRule rule, double offset) {
    return DilationSet(SequenceSet{std::move(rule), offset});
  }
  static DilationSet points(std::vector<double> p) { return DilationSet(ExplicitPoints{std::move(p)}); }
  static DilationSet cantor(int base, std::vector<int> kept, int levels, double origin = 1.0) {
    return DilationSet(CantorLike{base, std::move(kept), levels, origin});
  }
  static DilationSet lacunary() { return DilationSet(LacunaryGrid{}); }
  static DilationSet set_union(std::vector<DilationSet> parts) {
    return DilationSet(UnionSet{std::move(parts)});
  }
  /// E ∪ {2^j}
  DilationSet with_lacunary() const { return set_union({*this, lacunary()}); }

  bool is_sequence() const { return std::holds_alternative<SequenceSet>(generator); }
  const SequenceSet& as_sequence() const {
    if (!is_sequence()) throw std::invalid_argument("dilation set is not given by a sequence");
    return std::get<SequenceSet>(generator);
  }
};

namespace detail {

inline constexpr double point_tolerance = 1e-15;

inline void finalize_block(BlockSet& b) {
  for (double& p : b.points) {
    if (p < 1.0 && p > 1.0 - 1e-13) p = 1.0;
    if (p > 2.0 && p < 2.0 + 1e-13) p = 2.0;
  }
  std::erase_if(b.points, [](double p) { return p < 1.0 || p > 2.0; });
  std::sort(b.points.begin(), b.points.end());
  auto last = std::unique(b.points.begin(), b.points.end(),
                          [](double x, double y) { return std::abs(x - y) <= point_tolerance; });
  b.points.erase(last, b.points.end());
  b.includes_endpoints = {!b.points.empty() && b.points.front() == 1.0,
                          !b.points.empty() && b.points.back() == 2.0};
}

inline void materialize_sequence(const SequenceSet& s, int j, const DilationSet& owner, BlockSet& out) {
  s.rule.validate();
  const double scale = std::ldexp(1.0, -j);
  auto point = [&](std::int64_t n) { return scale * (s.offset + s.rule.term(n)); };
  // x_n decreases in n; find the first n with x_n <= 2.
  const double threshold = 2.0 / scale - s.offset;
  if (threshold <= 0) return;  // every point exceeds 2
  std::int64_t n = 1;
  if (point(1) > 2.0 + 1e-13) {
    const double above = s.rule.count_at_least(std::nextafter(threshold, detail::inf));
    if (!std::isfinite(above)) return;
    n = static_cast<std::int64_t>(above) + 1;
    while (n > 1 && point(n - 1) <= 2.0) --n;
    while (point(n) > 2.0 + 1e-13) ++n;
  }
  std::size_t count = 0;
  for (;; ++n) {
    const double x = point(n);
    if (x < 1.0 - 1e-13) return;
    const double g = scale * s.rule.gap(n);
    if (count >= owner.materialization_cap || g < owner.gap_floor) {
      DenseTail t;
      t.rule = s.rule;
      t.first_index = n;
      t.scale = scale;
      t.offset = s.offset;
      t.hi = x;
      t.max_gap = g;
      const double limit = scale * s.offset;
      if (limit >= 1.0) {
        t.lo = limit;
      } else {
        // The tail leaves [1, 2]: last index with x_n >= 1.
        const double c = s.rule.count_at_least(1.0 / scale - s.offset);
        t.last_index = std::isfinite(c) ? static_cast<std::int64_t>(c) : INT64_MAX - 1;
        t.lo = std::max(1.0, point(t.last_index));
      }
      out.truncated = true;
      out.tails.push_back(std::move(t));
      return;
    }
    out.points.push_back(x);
    ++count;
  }
}

inline void materialize_cantor(const CantorLike& c, int j, const DilationSet& owner, BlockSet& out) {
  if (c.base < 2 || c.levels < 0 || c.kept.empty())
    throw std::invalid_argument("cantor set needs base >= 2, levels >= 0 and kept digits");
  for (int d : c.kept)
    if (d < 0 || d >= c.base) throw std::invalid_argument("cantor digit out of range");
  const double full = std::pow(static_cast<double>(c.base), c.levels);
  if (full > 9.0e15) throw std::invalid_argument("cantor level too deep for exact endpoints");
  const auto k = c.kept.size();
  const double total = 2.0 * std::pow(static_cast<double>(k), c.levels);
  std::vector<std::int64_t> left{0};
  for (int level = 0; level < c.levels; ++level) {
    std::vector<std::int64_t> next;
    next.reserve(left.size() * k);
    for (auto code : left)
      for (int d : c.kept) next.push_back(code * c.base + d);
    left = std::move(next);
  }
  const double scale = std::ldexp(1.0, -j);
  std::size_t count = 0;
  for (auto code : left) {
    for (std::int64_t end : {code, code + 1}) {
      if (count >= owner.materialization_cap) {
        out.truncated = true;
        return;
      }
      const double x = scale * (c.origin + static_cast<double>(end) / full);
      if (x >= 1.0 - 1e-13 && x <= 2.0 + 1e-13) {
        out.points.push_back(x);
        ++count;
      }
    }
  }
  (void)total;
}

inline void materialize_into(const DilationSet& e, int j, BlockSet& out);

inline void materialize_into(const DilationSet& e, int j, BlockSet& out) {
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, SequenceSet>) {
          materialize_sequence(g, j, e, out);
        } else if constexpr (std::is_same_v<G, ExplicitPoints>) {
          const double scale = std::ldexp(1.0, -j);
          for (double p : g.points) {
            if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("explicit points must be positive");
            const double x = scale * p;
            if (x >= 1.0 - 1e-13 && x <= 2.0 + 1e-13) out.points.push_back(x);
          }
          if (out.points.size() > e.materialization_cap) {
            out.points.resize(e.materialization_cap);
            out.truncated = true;
          }
        } else if constexpr (std::is_same_v<G, CantorLike>) {
          materialize_cantor(g, j, e, out);
        } else if constexpr (std::is_same_v<G, LacunaryGrid>) {
          out.points.push_back(1.0);
          out.points.push_back(2.0);
        } else {
          for (const auto& part : g.parts) materialize_into(part, j, out);
        }
      },
      e.generator);
}

}  // namespace detail

/// The block (2^-j E) ∩ [1, 2]. Sequence generators stop at the gap floor or
/// at the cap; the remainder is recorded as a DenseTail and `truncated` is set.
inline BlockSet rescaled_block(const DilationSet& e, int j) {
  BlockSet b;
  b.j = j;
  detail::materialize_into(e, j, b);
  detail::finalize_block(b);
  return b;
}

/// Same block with the tails dropped: the finite set of materialized points.
inline BlockSet materialized_points(const DilationSet& e, int j, std::size_t cap) {
  DilationSet capped = e;
  capped.materialization_cap = cap;
  std::function<void(DilationSet&)> apply = [&](DilationSet& s) {
    s.materialization_cap = cap;
    if (auto* u = std::get_if<UnionSet>(&s.generator))
      for (auto& p : u->parts) apply(p);
  };
  apply(capped);
  BlockSet b = rescaled_block(capped, j);
  b.tails.clear();
  return b;
}

/// B with 1 and 2 adjoined.
inline BlockSet with_endpoints(BlockSet b) {
  b.points.push_back(1.0);
  b.points.push_back(2.0);
  detail::finalize_block(b);
  return b;
}

}  // namespace fmlab

#endif  // FMLAB_DILATION_SET_HPP
