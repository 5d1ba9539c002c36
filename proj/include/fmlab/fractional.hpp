#ifndef FMLAB_FRACTIONAL_HPP
#define FMLAB_FRACTIONAL_HPP

// Riemann-Liouville integral and Marchaud derivative of sampled paths by
// product integration on the piecewise-linear interpolant.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "detail/numeric.hpp"
#include "detail/parallel.hpp"

namespace fmlab {

using cplx = std::complex<double>;

struct FractionalOrder {
  double alpha;
  explicit FractionalOrder(double a) : alpha(a) {
    if (!(a > 0 && a < 1)) throw std::invalid_argument("fractional order must lie in (0, 1)");
  }
};

struct SampledPath {
  std::vector<double> grid;
  std::vector<cplx> values;
  std::optional<double> hoelder_exponent;

  std::size_t size() const { return grid.size(); }

  void validate() const {
    if (grid.size() != values.size()) throw std::invalid_argument("path: grid and values differ in length");
    if (grid.size() < 3) throw std::invalid_argument("path: need at least three nodes");
    if (grid.front() < 0) throw std::invalid_argument("path: grid must start at t >= 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("path: grid must be strictly increasing");
    for (auto v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("path: non-finite value");
    if (hoelder_exponent && !(*hoelder_exponent > 0 && *hoelder_exponent <= 1))
      throw std::invalid_argument("path: Hoelder exponent must lie in (0, 1]");
  }

  /// t_k = T k / N, k = 0..N.
  static SampledPath uniform(double T, std::size_t n, const std::function<cplx(double)>& f,
                             std::optional<double> hoelder = std::nullopt) {
    SampledPath p;
    p.hoelder_exponent = hoelder;
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = T * static_cast<double>(k) / static_cast<double>(n);
      p.grid.push_back(t);
      p.values.push_back(f(t));
    }
    return p;
  }

  /// t_k = T (k / N)^2, refined toward the origin.
  static SampledPath graded(double T, std::size_t n, const std::function<cplx(double)>& f,
                            std::optional<double> hoelder = std::nullopt) {
    SampledPath p;
    p.hoelder_exponent = hoelder;
    for (std::size_t k = 0; k <= n; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(n);
      p.grid.push_back(T * x * x);
      p.values.push_back(f(T * x * x));
    }
    return p;
  }
};

namespace detail {

/// sum_{n>=2} x^n / n! (p^{n-1} - q^{n-1}), for small x.
inline double moment_series(double x, double p, double q) {
  double sum = 0.0, xn = x, fact = 1.0, pn = 1.0, qn = 1.0;
  for (int n = 2; n < 40; ++n) {
    xn *= x;
    fact *= n;
    pn *= p;
    qn *= q;
    sum += xn / fact * (pn - qn);
    if (std::abs(xn) / fact * (std::abs(pn) + std::abs(qn)) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// Closed-form moments over u in [A, B] (A > 0) of the Riemann-Liouville cell:
/// p0 = int u^{a-1} du and q = int u^{a-1} (B - u) du.
struct RlMoments {
  double p0, q;
};
inline RlMoments rl_moments(double lo, double hi, double a) {
  RlMoments m;
  if (lo == 0.0) {
    m.p0 = std::pow(hi, a) / a;
    m.q = std::pow(hi, a + 1) * (1.0 / a - 1.0 / (a + 1));
    return m;
  }
  const double x = std::log(hi / lo);
  const double ba = std::pow(hi, a);
  m.p0 = ba * -std::expm1(-a * x) / a;
  // (1 - e^{-a x})/a - (1 - e^{-(a+1) x})/(a+1)
  const double bracket = x < 0.1 ? -moment_series(-x, a, a + 1)
                                 : -std::expm1(-a * x) / a + std::expm1(-(a + 1) * x) / (a + 1);
  m.q = ba * hi * bracket;
  return m;
}

/// Moments over u in [A, B] (A > 0) of the Marchaud cell:
/// m0 = int u^{-1-a} du and r = int u^{-1-a} (B - u) du.
struct MarchaudMoments {
  double m0, r;
};
inline MarchaudMoments marchaud_moments(double lo, double hi, double a) {
  const double x = std::log(hi / lo);
  MarchaudMoments m;
  m.m0 = std::pow(lo, -a) * -std::expm1(-a * x) / a;
  // (e^{a x} - 1)/a - (1 - e^{-(1-a) x})/(1-a)
  const double c = 1.0 - a;
  const double bracket = x < 0.1 ? moment_series(x, a, -c) : std::expm1(a * x) / a + std::expm1(-c * x) / c;
  m.r = std::pow(hi, c) * bracket;
  return m;
}

inline bool is_uniform(const std::vector<double>& g) {
  const double h = (g.back() - g.front()) / static_cast<double>(g.size() - 1);
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::abs((g[i] - g[i - 1]) - h) > 1e-9 * h) return false;
  return true;
}

/// Row weights of the product-integration rules. Tables for uniform grids
/// hold the cell moments as functions of the offset i - k.
class FractionalRules {
 public:
  FractionalRules(const std::vector<double>& grid, double alpha, double beta)
      : grid_(grid), alpha_(alpha), beta_(beta), uniform_(is_uniform(grid)) {
    if (uniform_) {
      h_ = grid[1] - grid[0];
      const std::size_t n = grid.size();
      rl_.resize(n);
      mr_.resize(n);
      for (std::size_t m = 1; m < n; ++m) {
        const double lo = static_cast<double>(m - 1), hi = static_cast<double>(m);
        const auto r = rl_moments(lo, hi, alpha);
        rl_[m] = {r.p0 * std::pow(h_, alpha), r.q * std::pow(h_, alpha + 1)};
        if (m >= 2) {
          const auto q = marchaud_moments(lo, hi, alpha);
          mr_[m] = {q.m0 * std::pow(h_, -alpha), q.r * std::pow(h_, 1 - alpha)};
        }
      }
    }
  }

  /// Weights w with (I^a F)(t_i) = sum_k w_k F_k, k = 0..i.
  void rl_row(std::size_t i, std::vector<double>& w) const {
    w.assign(i + 1, 0.0);
    const double g = 1.0 / std::tgamma(alpha_);
    for (std::size_t k = 0; k < i; ++k) {
      const double h = grid_[k + 1] - grid_[k];
      const RlMoments m = uniform_ ? rl_[i - k] : rl_moments(grid_[i] - grid_[k + 1], grid_[i] - grid_[k], alpha_);
      w[k] += g * (m.p0 - m.q / h);
      w[k + 1] += g * m.q / h;
    }
  }

  /// Weights w with (D^a F)(t_i) = sum_k w_k F_k for i >= 1.
  void marchaud_row(std::size_t i, std::vector<double>& w) const {
    w.assign(i + 1, 0.0);
    const double g = 1.0 / std::tgamma(1.0 - alpha_);
    const double c = alpha_ * g;
    w[i] += g * std::pow(grid_[i], -alpha_);
    for (std::size_t k = 0; k + 1 < i; ++k) {
      const double h = grid_[k + 1] - grid_[k];
      const MarchaudMoments m =
          uniform_ ? mr_[i - k] : marchaud_moments(grid_[i] - grid_[k + 1], grid_[i] - grid_[k], alpha_);
      // (F_i - F_k) m0 - (F_{k+1} - F_k) r / h
      w[i] += c * m.m0;
      w[k] += c * (m.r / h - m.m0);
      w[k + 1] -= c * m.r / h;
    }
    // Cell touching t_i: F_i - F(s) ~ q (t_i - s)^beta with the local quotient q.
    const double h = grid_[i] - grid_[i - 1];
    const double s = c * std::pow(h, -alpha_) / (beta_ - alpha_);
    w[i] += s;
    w[i - 1] -= s;
  }

  const std::vector<double>& grid() const { return grid_; }

 private:
  std::vector<double> grid_;
  double alpha_, beta_;
  bool uniform_;
  double h_ = 0.0;
  std::vector<RlMoments> rl_;
  std::vector<MarchaudMoments> mr_;
};

inline std::vector<cplx> apply_rows(std::size_t n, std::size_t first,
                                    const std::function<void(std::size_t, std::vector<double>&)>& row,
                                    const std::vector<cplx>& f) {
  std::vector<cplx> out(n, cplx{});
  parallel_for(n - first, [&](std::size_t idx) {
    const std::size_t i = idx + first;
    std::vector<double> w;
    row(i, w);
    cplx acc{};
    for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * f[k];
    out[i] = acc;
  });
  return out;
}

}  // namespace detail

/// Hoelder exponent used for the singular cell: declared, or estimated from
/// the growth of increments between steps h and 2h, capped at 1.
inline double effective_hoelder(const SampledPath& f) {
  if (f.hoelder_exponent) return *f.hoelder_exponent;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i + 2 < f.size(); ++i) {
    m1 = std::max(m1, std::abs(f.values[i + 1] - f.values[i]));
    m2 = std::max(m2, std::abs(f.values[i + 2] - f.values[i]));
  }
  if (m1 == 0.0) return 1.0;
  return std::clamp(std::log2(m2 / m1), 0.0, 1.0);
}

/// (I^a F)(t_i) = 1/Gamma(a) int_0^{t_i} (t_i - s)^{a-1} F(s) ds on the same grid.
inline SampledPath rl_integral(const SampledPath& f, FractionalOrder order) {
  f.validate();
  if (f.grid.front() != 0.0) throw std::invalid_argument("rl_integral: grid must start at 0");
  detail::FractionalRules rules(f.grid, order.alpha, 1.0);
  SampledPath out;
  out.grid = f.grid;
  out.values = detail::apply_rows(f.size(), 1, [&](std::size_t i, std::vector<double>& w) { rules.rl_row(i, w); },
                                  f.values);
  return out;
}

/// Marchaud derivative
///   (D^a F)(t) = F(t) / (Gamma(1-a) t^a) + a / Gamma(1-a) int_0^t (F(t) - F(s)) / (t-s)^{1+a} ds
/// at every node with t > 0 (the t = 0 node is dropped from the output).
inline SampledPath marchaud_derivative(const SampledPath& f, FractionalOrder order) {
  f.validate();
  if (f.grid.front() != 0.0) throw std::invalid_argument("marchaud_derivative: grid must start at 0");
  const double beta = effective_hoelder(f);
  if (order.alpha >= beta) throw std::invalid_argument("Hölder order insufficient");
  detail::FractionalRules rules(f.grid, order.alpha, beta);
  auto all = detail::apply_rows(f.size(), 1, [&](std::size_t i, std::vector<double>& w) { rules.marchaud_row(i, w); },
                                f.values);
  SampledPath out;
  out.grid.assign(f.grid.begin() + 1, f.grid.end());
  out.values.assign(all.begin() + 1, all.end());
  return out;
}

/// max_i |F - I^a D^a F| / (1 + max |F|) over nodes with t > 0. The affine
/// part c + b t (b the first difference quotient) is split off first, since
/// D^a of it is c t^{-a} / Gamma(1-a) + b t^{1-a} / Gamma(2-a) and I^a maps
/// that back exactly; the remainder is handled by the quadrature rules.
inline double roundtrip_residual(const SampledPath& f, FractionalOrder order) {
  f.validate();
  if (f.grid.front() != 0.0) throw std::invalid_argument("roundtrip_residual: grid must start at 0");
  const cplx c = f.values[0];
  const cplx b = (f.values[1] - f.values[0]) / f.grid[1];
  SampledPath g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] -= c + b * f.grid[i];
  auto d = marchaud_derivative(g, order);
  SampledPath dg;
  dg.grid = f.grid;
  dg.values.push_back(0.0);
  dg.values.insert(dg.values.end(), d.values.begin(), d.values.end());
  auto back = rl_integral(dg, order);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    scale = std::max(scale, std::abs(f.values[i]));
    if (i > 0) err = std::max(err, std::abs(f.values[i] - (c + b * f.grid[i] + back.values[i])));
  }
  return err / (1.0 + scale);
}

/// Compares 2^{j a} (D^a F)(2^j s) with D^a(F(2^j .))(s) at the nodes s in [1, 2],
/// for a uniform path F on [0, 2^{j+1}]. Returns the max absolute discrepancy.
inline double rescaled_derivative_check(const SampledPath& f, int j, FractionalOrder order) {
  f.validate();
  const double top = std::ldexp(2.0, j);
  if (f.grid.front() != 0.0 || std::abs(f.grid.back() - top) > 1e-12 * top)
    throw std::invalid_argument("rescaled_derivative_check: path must cover [0, 2^(j+1)]");
  auto lhs = marchaud_derivative(f, order);
  SampledPath fj = f;
  for (auto& t : fj.grid) t = std::ldexp(t, -j);
  auto rhs = marchaud_derivative(fj, order);
  const double scale = std::pow(2.0, j * order.alpha);
  double worst = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const double s = rhs.grid[i];
    if (s < 1.0 - 1e-12 || s > 2.0 + 1e-12) continue;
    worst = std::max(worst, std::abs(scale * lhs.values[i] - rhs.values[i]));
  }
  return worst;
}

}  // namespace fmlab

#endif  // FMLAB_FRACTIONAL_HPP
