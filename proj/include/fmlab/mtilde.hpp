#ifndef FMLAB_MTILDE_HPP
#define FMLAB_MTILDE_HPP

// The fractional-difference transform
//   m~(xi) = int_0^1 (m(xi) - m(r xi)) / (1 - r)^{1 + alpha} dr
// of a radial multiplier, and its Sigma^2 embedding check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "detail/numeric.hpp"
#include "detail/parallel.hpp"
#include "fractional.hpp"
#include "grid_function.hpp"
#include "lp_frames.hpp"
#include "multiplier.hpp"

namespace fmlab {

struct MtildeValue {
  cplx value = 0.0;
  cplx far = 0.0;   // r in [0, 1/2]
  cplx near = 0.0;  // r in [1/2, 1]
  double error = 0.0;
  bool flagged = false;
};

struct MtildeOptions {
  double flag_tol = 1e-6;      // relative error estimate that flags a point
  double flag_floor = 1e-6;    // magnitude below which the test is absolute
  double quad_tol = 1e-10;     // per-subinterval Gauss-Kronrod target
  unsigned max_depth = 8;
};

namespace detail {

inline cplx gk_integrate(const std::function<cplx(double)>& f, double a, double b, const MtildeOptions& o,
                         double& err) {
  double e = 0.0;
  const cplx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, o.max_depth, o.quad_tol, &e);
  err += e;
  return v;
}

/// Subintervals per unit r so that each holds at most one period of e^{2 pi i r rho}.
inline std::size_t oscillation_pieces(double rho, double length) {
  return static_cast<std::size_t>(std::ceil(rho * length)) + 1;
}

}  // namespace detail

/// m~ at radius rho.
inline MtildeValue mtilde_radial(const MultiplierSpec& m, double alpha, double rho, const MtildeOptions& o = {}) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("fractional order must lie in (0, 1)");
  MtildeValue out;
  if (m.is_zero() || rho == 0.0) return out;
  const cplx m0 = m.radial(rho);
  double err = 0.0;

  // r in [0, 1/2]: (m(rho) - m(r rho)) (1 - r)^{-1-alpha}.
  const auto far = [&](double r) { return (m0 - m.radial(r * rho)) * std::pow(1.0 - r, -1.0 - alpha); };
  const std::size_t kf = detail::oscillation_pieces(rho, 0.5);
  for (std::size_t i = 0; i < kf; ++i)
    out.far += detail::gk_integrate(far, 0.5 * i / kf, 0.5 * (i + 1) / kf, o, err);

  // u = 1 - r in (0, 1/2]. With T(u) = u rho m'(rho) the integral splits as
  //   int_0^{1/2} T u^{-1-alpha} du                        (closed form)
  // + int_0^{u0} (m(rho) - m(rho - u rho) - T) u^{-1-alpha} du (Taylor terms k = 2..4)
  // + int_{u0}^{1/2} (m(rho) - m(rho - u rho) - T) u^{-1-alpha} du (quadrature).
  const cplx d1 = m.derivative(rho, 1);
  out.near = rho * d1 * std::pow(0.5, 1.0 - alpha) / (1.0 - alpha);
  const double u0 = std::min(1e-2, 0.02 / std::max(rho, 1.0));
  double fact = 1.0;
  for (int k = 2; k <= jet_order; ++k) {
    fact *= k;
    const double sign = k % 2 ? 1.0 : -1.0;  // m(rho) - m(rho - u rho) carries -(-u rho)^k / k!
    out.near += sign * m.derivative(rho, k) * std::pow(rho, k) / fact * std::pow(u0, k - alpha) / (k - alpha);
  }
  const auto near = [&](double u) {
    return (m0 - m.radial(rho - u * rho) - u * rho * d1) * std::pow(u, -1.0 - alpha);
  };
  const std::size_t kn = detail::oscillation_pieces(rho, 0.5 - u0);
  for (std::size_t i = 0; i < kn; ++i) {
    const double a = u0 + (0.5 - u0) * i / kn, b = u0 + (0.5 - u0) * (i + 1) / kn;
    out.near += detail::gk_integrate(near, a, b, o, err);
  }

  out.value = out.far + out.near;
  out.error = err;
  const double scale = std::max({std::abs(out.value), std::abs(m0), o.flag_floor});
  out.flagged = !std::isfinite(std::abs(out.value)) || err > o.flag_tol * scale;
  return out;
}

struct MtildeGrid {
  GridFunction values;  // frequency side
  std::vector<std::uint8_t> flagged;
  std::size_t flagged_count = 0;
  double sup = 0.0;
};

/// m~ sampled on the frequency grid of a d-dimensional [-L, L)^d grid with N points per axis.
inline MtildeGrid mtilde(const MultiplierSpec& m, FractionalOrder alpha, int dim, std::size_t n, double half_period,
                         const MtildeOptions& o = {}) {
  MtildeGrid out;
  out.values = GridFunction(dim, n, half_period, Side::frequency);
  // Radially symmetric: evaluate once per distinct integer |k|^2.
  std::map<std::int64_t, std::size_t> index;
  std::vector<std::int64_t> keys(out.values.size());
  for (std::size_t idx = 0; idx < keys.size(); ++idx) {
    auto signed_k = [n](std::size_t k) {
      return k < n / 2 ? static_cast<std::int64_t>(k) : static_cast<std::int64_t>(k) - static_cast<std::int64_t>(n);
    };
    const std::int64_t a = signed_k(dim == 1 ? idx : idx / n), b = dim == 1 ? 0 : signed_k(idx % n);
    keys[idx] = a * a + b * b;
    index.emplace(keys[idx], 0);
  }
  std::vector<std::int64_t> distinct;
  for (auto& [k, slot] : index) {
    slot = distinct.size();
    distinct.push_back(k);
  }
  std::vector<MtildeValue> vals(distinct.size());
  const double dxi = out.values.dxi();
  detail::parallel_for(distinct.size(), [&](std::size_t i) {
    vals[i] = mtilde_radial(m, alpha.alpha, dxi * std::sqrt(static_cast<double>(distinct[i])), o);
  });
  out.flagged.resize(keys.size());
  for (std::size_t idx = 0; idx < keys.size(); ++idx) {
    const auto& v = vals[index[keys[idx]]];
    out.values.samples[idx] = v.value;
    out.flagged[idx] = v.flagged;
    out.flagged_count += v.flagged;
    out.sup = std::max(out.sup, std::abs(v.value));
  }
  return out;
}

struct MtildeSigma2 {
  Sigma2Result result;
  std::size_t flagged = 0;
};

/// Sigma^2 norm of m~: each band samples m~ on a radial table over [2^{j-1}, 2^{j+1}].
inline MtildeSigma2 mtilde_sigma2(const MultiplierSpec& m, double alpha, const BesovParams& params, int j_min,
                                  int j_max, const SmoothCutoff& cut, const Sigma2Options& so = {},
                                  const MtildeOptions& o = {}) {
  if (j_min > j_max) throw std::invalid_argument("sigma2_norm: empty j range");
  MtildeSigma2 out;
  double total = 0.0;
  for (int j = j_min; j <= j_max; ++j) {
    const double lo = std::ldexp(1.0, j - 1), hi = std::ldexp(1.0, j + 1);
    // Resolve both the band geometry and one period of e^{2 pi i rho}.
    const double step = std::min(lo / 512.0, 1.0 / 64.0);
    const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    std::vector<MtildeValue> vals(intervals + 3);
    const double h = (hi - lo) / static_cast<double>(intervals);
    detail::parallel_for(vals.size(), [&](std::size_t i) {
      const double rho = lo + (static_cast<double>(i) - 1.0) * h;
      if (rho > 0) vals[i] = mtilde_radial(m, alpha, rho, o);
    });
    for (const auto& v : vals) out.flagged += v.flagged;
    RadialTable table([&](double rho) { return vals[static_cast<std::size_t>(std::lround((rho - lo) / h + 1.0))].value; },
                      lo, hi, intervals);
    const double scale = std::ldexp(1.0, j);
    auto band = [&](double r) -> cplx {
      if (r <= 0.5 || r >= 2.0) return 0.0;
      return table(scale * r) * cut.psi(r);
    };
    Sigma2Band b = band_besov_norm(band, params, cut, so);
    b.j = j;
    out.result.bands.push_back(b);
    total += b.norm * b.norm;
    out.result.resolved = out.result.resolved && b.resolved;
  }
  out.result.value = std::sqrt(total);
  const auto& bs = out.result.bands;
  if (bs.size() >= 2 && total > 0) {
    const double tail = bs[bs.size() - 1].norm * bs[bs.size() - 1].norm + bs[bs.size() - 2].norm * bs[bs.size() - 2].norm;
    out.result.stale = tail > 0.01 * total;
  }
  return out;
}

struct EmbeddingReport {
  double numerator = 0.0;    // ||m~||_{Sigma^2(B_p^s)}
  double denominator = 0.0;  // ||m||_{Sigma^2(B_p^{s + alpha + eps})}
  double ratio = 0.0;
  double constant = 32.0;
  std::size_t flagged = 0;
  bool pass = false;
};

inline EmbeddingReport embedding_check(const MultiplierSpec& m, double alpha, double eps, double p, double s, int j_min,
                                       int j_max, const SmoothCutoff& cut, double constant = 32.0,
                                       const Sigma2Options& so = {}) {
  if (!(eps > 0)) throw std::invalid_argument("embedding: eps must be positive");
  EmbeddingReport out;
  out.constant = constant;
  const auto num = mtilde_sigma2(m, alpha, BesovParams{p, s, 12}, j_min, j_max, cut, so);
  out.numerator = num.result.value;
  out.flagged = num.flagged;
  out.denominator = sigma2_norm(m, BesovParams{p, s + alpha + eps, 12}, j_min, j_max, cut, so).value;
  if (out.numerator == 0.0 && out.denominator == 0.0) {
    out.ratio = 0.0;
  } else {
    out.ratio = out.denominator > 0 ? out.numerator / out.denominator : detail::inf;
  }
  out.pass = out.ratio <= constant;
  return out;
}

}  // namespace fmlab

#endif  // FMLAB_MTILDE_HPP
