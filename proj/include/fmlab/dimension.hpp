#ifndef FMLAB_DIMENSION_HPP
#define FMLAB_DIMENSION_HPP

// Covering numbers, dimension estimates and distance integrals of dyadic blocks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "detail/numeric.hpp"
#include "dilation_set.hpp"

namespace fmlab {

enum class DimensionMethod { entropy_slope, gap_sum, distance_integral };

inline std::string to_string(DimensionMethod m) {
  switch (m) {
    case DimensionMethod::entropy_slope: return "entropy_slope";
    case DimensionMethod::gap_sum: return "gap_sum";
    case DimensionMethod::distance_integral: return "distance_integral";
  }
  return "?";
}

struct DimensionEstimate {
  double value = 0.0;
  DimensionMethod method = DimensionMethod::entropy_slope;
  std::pair<double, double> delta_range{0.0, 0.0};  // (delta_min, delta_max) of the fit
  double residual = 0.0;
  double raw_slope = 0.0;  // before clamping to [0, 1]
};

/// Log-spaced schedule from 1 down to delta_min with `per_decade` points per decade.
inline std::vector<double> default_delta_schedule(double delta_min = 1e-6, int per_decade = 3) {
  const double decades = -std::log10(delta_min);
  const auto count = static_cast<std::size_t>(std::ceil(decades * per_decade)) + 1;
  return detail::log_schedule(1.0, delta_min, std::max<std::size_t>(count, 4));
}

/// delta_k = base^-k for k = 1..levels.
inline std::vector<double> geometric_delta_schedule(double base, int levels) {
  std::vector<double> s;
  for (int k = 1; k <= levels; ++k) s.push_back(std::pow(base, -k));
  return s;
}

inline double distance_to_set(double s, const BlockSet& b) {
  if (b.empty()) throw std::invalid_argument("empty block");
  double best = detail::inf;
  if (!b.points.empty()) {
    auto it = std::lower_bound(b.points.begin(), b.points.end(), s);
    if (it != b.points.end()) best = *it - s;
    if (it != b.points.begin()) best = std::min(best, s - *std::prev(it));
  }
  for (const auto& t : b.tails) {
    const double d = s < t.lo ? t.lo - s : (s > t.hi ? s - t.hi : 0.0);
    best = std::min(best, d);
  }
  return best;
}

namespace detail {

/// Cells k with x in [k delta, (k+1) delta]; two cells when x sits on a boundary.
inline std::pair<std::int64_t, std::int64_t> cell_range(double x, double delta) {
  const double q = x / delta;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-12 * std::max(1.0, std::abs(q))) {
    const auto k = static_cast<std::int64_t>(r);
    return {k - 1, k};
  }
  const auto k = static_cast<std::int64_t>(std::floor(q));
  return {k, k};
}

}  // namespace detail

/// N(B, delta): number of closed cells [k delta, (k+1) delta] meeting B.
/// Dense tails count every cell meeting their hull, exact once delta exceeds
/// the largest un-materialized gap.
inline std::int64_t entropy_number(const BlockSet& b, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("entropy_number: delta must be positive");
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  ranges.reserve(b.points.size() + b.tails.size());
  for (double x : b.points) ranges.push_back(detail::cell_range(x, delta));
  if (!b.tails.empty()) {
    for (const auto& t : b.tails)
      ranges.emplace_back(detail::cell_range(t.lo, delta).first, detail::cell_range(t.hi, delta).second);
    std::sort(ranges.begin(), ranges.end());
  }
  std::int64_t count = 0;
  std::int64_t covered_to = INT64_MIN;
  for (auto [lo, hi] : ranges) {
    if (hi <= covered_to) continue;
    count += hi - std::max(lo, covered_to + 1) + 1;
    covered_to = hi;
  }
  return count;
}

namespace detail {

inline DimensionEstimate slope_estimate(std::span<const double> schedule, std::span<const double> log_n) {
  if (schedule.size() < 4) throw std::invalid_argument("dimension estimate: need at least 4 schedule values");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0 && schedule[i] <= 1)) throw std::invalid_argument("dimension estimate: schedule must lie in (0, 1]");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw std::invalid_argument("dimension estimate: schedule must be decreasing");
  }
  const std::size_t n = schedule.size();
  std::vector<double> x, y;
  for (std::size_t i = n - 4; i < n; ++i) {
    x.push_back(-std::log(schedule[i]));
    y.push_back(log_n[i]);
  }
  const LineFit f = fit_line(x, y);
  DimensionEstimate e;
  e.raw_slope = f.slope;
  e.value = std::clamp(f.slope, 0.0, 1.0);
  e.residual = f.residual;
  e.delta_range = {schedule[n - 1], schedule[n - 4]};
  return e;
}

}  // namespace detail

/// Box-counting slope of log N(B, delta) against -log delta over the last four
/// schedule values.
inline DimensionEstimate minkowski_dimension(const BlockSet& b, std::span<const double> schedule) {
  if (b.empty()) throw std::invalid_argument("minkowski_dimension: empty block");
  std::vector<double> y;
  for (double d : schedule) y.push_back(std::log(static_cast<double>(entropy_number(b, d))));
  return detail::slope_estimate(schedule, y);
}

/// kappa(E): slope of sup_j log N(E_j, delta) over the final schedule values.
inline DimensionEstimate kappa(const DilationSet& e, std::span<const double> schedule, int j_min, int j_max) {
  if (j_min > j_max) throw std::invalid_argument("kappa: empty j range");
  std::vector<BlockSet> blocks;
  for (int j = j_min; j <= j_max; ++j) {
    auto b = rescaled_block(e, j);
    if (!b.empty()) blocks.push_back(std::move(b));
  }
  if (blocks.empty()) throw std::invalid_argument("kappa: all blocks empty");
  std::vector<double> y;
  for (double d : schedule) {
    std::int64_t best = 0;
    for (const auto& b : blocks) best = std::max(best, entropy_number(b, d));
    y.push_back(std::log(static_cast<double>(best)));
  }
  return detail::slope_estimate(schedule, y);
}

struct DistanceIntegral {
  double partial = 0.0;     // exact contribution of the materialized geometry
  double tail_bound = 0.0;  // bound for the un-materialized tails
  bool diverges = false;
  double value() const { return diverges ? detail::inf : partial + tail_bound; }
};

/// int_1^2 d(t, B)^{-1+a} dt by gap decomposition, with tail bounds.
inline DistanceIntegral distance_integral_report(const BlockSet& b, double a) {
  if (!(a > 0 && a < 1)) throw std::invalid_argument("distance_integral: a must lie in (0, 1)");
  if (b.empty()) throw std::invalid_argument("empty block");
  struct Item {
    double lo, hi;
  };
  std::vector<Item> items;
  items.reserve(b.points.size() + b.tails.size());
  for (double p : b.points) items.push_back({p, p});
  DistanceIntegral out;
  for (const auto& t : b.tails) {
    items.push_back({t.lo, t.hi});
    const double bound = t.rule.gap_power_tail(t.first_index, t.scale, a);
    out.tail_bound += bound;
  }
  if (!b.tails.empty())
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.lo < y.lo; });
  auto half = [a](double g) { return std::pow(g, a) / a; };
  out.partial += half(items.front().lo - 1.0);
  double reach = items.front().hi;
  for (std::size_t i = 1; i < items.size(); ++i) {
    const double g = items[i].lo - reach;
    if (g > 0) out.partial += 2.0 * half(g / 2.0);
    reach = std::max(reach, items[i].hi);
  }
  out.partial += half(2.0 - reach);
  out.diverges = !std::isfinite(out.tail_bound) || out.partial > 1e12;
  return out;
}

inline double distance_integral(const BlockSet& b, double a) { return distance_integral_report(b, a).value(); }

struct GapSumResult {
  std::vector<std::pair<std::int64_t, double>> checkpoints;  // (n, sum_{m <= n} gap_m^a)
  std::vector<double> block_sums;  // sum over [2^k, 2^{k+1})
  double block_ratio = 0.0;  // geometric mean of the last four successive ratios
  bool convergent = false;
};

/// Partial sums of sum_n (t_n - t_{n+1})^a at dyadic checkpoints.
inline GapSumResult gap_sum(const DilationSet& seq, double a, std::int64_t n_max, double threshold = 0.97) {
  const auto& s = seq.as_sequence();
  s.rule.validate();
  if (!(a > 0)) throw std::invalid_argument("gap_sum: exponent must be positive");
  if (n_max < 32) throw std::invalid_argument("gap_sum: n_max must be at least 32");
  GapSumResult r;
  double total = 0.0, block = 0.0;
  std::int64_t next_checkpoint = 2;
  for (std::int64_t n = 1; n < n_max; ++n) {
    const double g = s.rule.gap(n);
    if (!(g > 0) || !std::isfinite(g)) throw std::invalid_argument("gap_sum: sequence is not strictly decreasing");
    const double v = std::pow(g, a);
    total += v;
    block += v;
    if (n + 1 == next_checkpoint) {
      r.checkpoints.emplace_back(n, total);
      r.block_sums.push_back(block);
      block = 0.0;
      next_checkpoint *= 2;
    }
  }
  const std::size_t k = r.block_sums.size();
  if (k < 6) throw std::invalid_argument("gap_sum: too few dyadic blocks");
  double log_ratio = 0.0;
  for (std::size_t i = k - 4; i < k; ++i) log_ratio += std::log(r.block_sums[i] / r.block_sums[i - 1]);
  r.block_ratio = std::exp(log_ratio / 4.0);
  r.convergent = r.block_ratio < threshold;
  return r;
}

/// Exponent at which the gap_sum verdict flips, by bisection on [lo, hi].
/// delta_range holds the smallest and largest gap used; residual the final bracket width.
inline DimensionEstimate gap_sum_exponent(const DilationSet& seq, std::int64_t n_max = std::int64_t{1} << 20,
                                          double lo = 0.02, double hi = 1.0, int iterations = 16) {
  if (!(lo > 0 && lo < hi)) throw std::invalid_argument("gap_sum_exponent: need 0 < lo < hi");
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gap_sum(seq, mid, n_max).convergent) hi = mid;
    else lo = mid;
  }
  const auto& rule = seq.as_sequence().rule;
  DimensionEstimate e;
  e.method = DimensionMethod::gap_sum;
  e.value = e.raw_slope = 0.5 * (lo + hi);
  e.delta_range = {rule.gap(n_max - 1), rule.gap(1)};
  e.residual = hi - lo;
  return e;
}

/// Exponent below which int_1^2 d(s, E_j)^{-1+a} ds diverges for some block
/// in the window. Only accumulating sequence tails can diverge.
inline DimensionEstimate distance_integral_exponent(const DilationSet& e, int j_min, int j_max, int iterations = 40) {
  std::vector<BlockSet> blocks;
  bool tails = false;
  for (int j = j_min; j <= j_max; ++j) {
    auto b = rescaled_block(e, j);
    if (b.empty()) continue;
    tails = tails || !b.tails.empty();
    blocks.push_back(std::move(b));
  }
  if (blocks.empty()) throw std::invalid_argument("distance_integral_exponent: all blocks empty");
  if (!tails) throw std::invalid_argument("distance_integral_exponent: no accumulating tail in the window");
  auto diverges = [&](double a) {
    for (const auto& b : blocks)
      if (distance_integral_report(b, a).diverges) return true;
    return false;
  };
  double lo = 1e-6, hi = 1.0 - 1e-9;
  if (!diverges(lo)) hi = lo;
  for (int i = 0; i < iterations && hi > lo; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (diverges(mid)) lo = mid;
    else hi = mid;
  }
  DimensionEstimate out;
  out.method = DimensionMethod::distance_integral;
  out.value = out.raw_slope = 0.5 * (lo + hi);
  out.delta_range = {lo, hi};
  out.residual = hi - lo;
  return out;
}

struct LorentzResult {
  double bound = 0.0;  // sup over the schedule of delta^r #{n : t_n >= delta}
  bool verdict = false;
};

inline LorentzResult lorentz_membership(const SequenceRule& rule, double r, std::span<const double> schedule) {
  rule.validate();
  if (!(r > 0)) throw std::invalid_argument("lorentz_membership: r must be positive");
  if (schedule.size() < 2) throw std::invalid_argument("lorentz_membership: schedule too short");
  const double delta_min = *std::min_element(schedule.begin(), schedule.end());
  double sup_all = 0.0, sup_early = 0.0;
  for (double d : schedule) {
    const double v = std::pow(d, r) * rule.count_at_least(d);
    sup_all = std::max(sup_all, v);
    if (d >= 10.0 * delta_min) sup_early = std::max(sup_early, v);
  }
  LorentzResult out;
  out.bound = sup_all;
  out.verdict = std::isfinite(sup_all) && sup_all <= 1.1 * sup_early;
  return out;
}

inline std::vector<double> default_lorentz_schedule() { return detail::log_schedule(1.0, 1e-12, 49); }

struct DimensionBoundReport {
  double a = 0.0;
  double lhs = 0.0;  // sup delta^a N(B, delta)
  double mid = 0.0;  // distance integral
  double rhs = 0.0;  // 1 + int_0^1 lambda^a N(B, lambda) dlambda / lambda
  double lhs_over_mid = 0.0;
  double mid_over_rhs = 0.0;
  double constant = 10.0;
  bool pass = false;
};

namespace detail {

/// Exponent governing N(B, lambda) as lambda -> 0: 0 for finite sets, else the
/// box dimension of the tail sequences.
inline double asymptotic_covering_exponent(const BlockSet& b) {
  double d = 0.0;
  for (const auto& t : b.tails) {
    switch (t.rule.kind) {
      case SequenceRule::Kind::power: d = std::max(d, 1.0 / (1.0 + t.rule.param)); break;
      case SequenceRule::Kind::geometric: break;
      default: d = 1.0;
    }
  }
  return d;
}

inline double safe_ratio(double x, double y) {
  if (x == 0) return 0.0;
  if (std::isinf(x) && std::isinf(y)) return 1.0;
  return x / y;
}

}  // namespace detail

/// Two-sided comparison delta^a N <= C int d^{-1+a} <= C^2 (1 + int lambda^a N dlambda/lambda).
inline DimensionBoundReport dimension_bound_check(const BlockSet& b, double a, std::span<const double> schedule,
                                                  double constant = 10.0) {
  if (b.empty()) throw std::invalid_argument("empty block");
  if (schedule.size() < 2) throw std::invalid_argument("dimension_bound_check: schedule too short");
  DimensionBoundReport r;
  r.a = a;
  r.constant = constant;
  std::vector<double> lam(schedule.begin(), schedule.end());
  std::sort(lam.begin(), lam.end());
  if (lam.back() < 1.0) lam.push_back(1.0);
  std::vector<double> f(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double n = static_cast<double>(entropy_number(b, lam[i]));
    f[i] = std::pow(lam[i], a) * n;
    r.lhs = std::max(r.lhs, f[i]);
  }
  r.mid = distance_integral(b, a);
  // Trapezoid in log lambda over the schedule.
  double integral = 0.0;
  for (std::size_t i = 1; i < lam.size(); ++i)
    integral += 0.5 * (f[i] + f[i - 1]) * std::log(lam[i] / lam[i - 1]);
  // Below the schedule: N(lambda) <= N(lambda_min) (lambda_min / lambda)^d.
  const double d = detail::asymptotic_covering_exponent(b);
  const double below = a > d ? f.front() / (a - d) : detail::inf;
  r.rhs = 1.0 + integral + below;
  r.lhs_over_mid = detail::safe_ratio(r.lhs, r.mid);
  r.mid_over_rhs = detail::safe_ratio(r.mid, r.rhs);
  r.pass = r.lhs <= constant * r.mid && (r.mid <= constant * r.rhs || std::isinf(r.rhs));
  return r;
}

}  // namespace fmlab

#endif  // FMLAB_DIMENSION_HPP
