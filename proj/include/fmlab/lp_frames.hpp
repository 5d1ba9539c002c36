#ifndef FMLAB_LP_FRAMES_HPP
#define FMLAB_LP_FRAMES_HPP

// Littlewood-Paley pieces, Besov and Hoelder norms of grid functions, and
// Sigma^2 norms sum_j ||m(2^j .) psi||_B^2 of multipliers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cutoff.hpp"
#include "detail/numeric.hpp"
#include "detail/parallel.hpp"
#include "grid_function.hpp"
#include "multiplier.hpp"

namespace fmlab {

struct BesovParams {
  double p = 2.0;  // in (1, inf]
  double s = 0.0;
  int j_max = 12;

  void validate() const {
    if (!(p > 1)) throw std::invalid_argument("Besov exponent p must exceed 1");
  }
};

/// psi_j * f (j >= 1), or phi * f for j = 0, as a space-side function.
inline GridFunction lp_piece(const GridFunction& f, int j, const SmoothCutoff& cut) {
  if (std::ldexp(1.0, j + 1) > f.nyquist()) throw std::invalid_argument("band out of range");
  const double scale = std::ldexp(1.0, -j);
  GridFunction g = f.to_frequency();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.frequency_radius(i) * scale;
    g.samples[i] *= j == 0 ? cut.phi(r) : cut.psi(r);
  }
  return g.to_space();
}

struct BesovNorm {
  double value = 0.0;
  std::vector<double> pieces;  // ||phi * g||_p, ||psi_1 * g||_p, ...
  bool stale = false;          // last two pieces carry > 1% of the sum
};

inline BesovNorm besov_norm_report(const GridFunction& g, const BesovParams& params, const SmoothCutoff& cut) {
  params.validate();
  if (std::ldexp(1.0, params.j_max + 1) > g.nyquist()) throw std::invalid_argument("band out of range");
  const GridFunction spec = g.to_frequency();
  BesovNorm out;
  out.pieces.resize(static_cast<std::size_t>(params.j_max) + 1);
  detail::parallel_for(out.pieces.size(), [&](std::size_t j) {
    GridFunction piece = spec;
    const double scale = std::ldexp(1.0, -static_cast<int>(j));
    for (std::size_t i = 0; i < piece.size(); ++i) {
      const double r = piece.frequency_radius(i) * scale;
      piece.samples[i] *= j == 0 ? cut.phi(r) : cut.psi(r);
    }
    out.pieces[j] = piece.to_space().lp_norm(params.p);
  });
  std::vector<double> terms;
  for (std::size_t j = 0; j < out.pieces.size(); ++j) {
    const double w = std::pow(2.0, params.s * static_cast<double>(j)) * out.pieces[j];
    terms.push_back(std::isinf(params.p) ? w : std::pow(w, params.p));
  }
  double total = 0.0;
  for (double t : terms) total = std::isinf(params.p) ? std::max(total, t) : total + t;
  out.value = std::isinf(params.p) ? total : std::pow(total, 1.0 / params.p);
  if (terms.size() >= 2 && total > 0) {
    const double tail = std::isinf(params.p) ? std::max(terms[terms.size() - 1], terms[terms.size() - 2])
                                             : terms[terms.size() - 1] + terms[terms.size() - 2];
    out.stale = tail > 0.01 * total;
  }
  return out;
}

inline double besov_norm(const GridFunction& g, const BesovParams& params, const SmoothCutoff& cut) {
  return besov_norm_report(g, params, cut).value;
}

struct HoelderNorm {
  std::vector<double> sups;  // sup |d^gamma g| for |gamma| = 0..n (summed over gamma)
  double seminorm = 0.0;
  double value = 0.0;
};

namespace detail {

/// d^{(a, b)} g by spectral multiplication with (2 pi i xi)^gamma.
inline GridFunction spectral_derivative(const GridFunction& spec, int a, int b) {
  GridFunction d = spec;
  const std::size_t n = spec.n;
  for (std::size_t idx = 0; idx < d.size(); ++idx) {
    const double x1 = spec.dim == 1 ? spec.frequency(idx) : spec.frequency(idx / n);
    const double x2 = spec.dim == 1 ? 0.0 : spec.frequency(idx % n);
    cplx f = std::pow(cplx(0.0, 2.0 * pi * x1), a);
    if (b > 0) f *= std::pow(cplx(0.0, 2.0 * pi * x2), b);
    d.samples[idx] *= f;
  }
  return d.to_space();
}

}  // namespace detail

/// C^{n, s'} norm: sum_{|gamma| <= n} sup |d^gamma g| plus the s'-Hoelder
/// seminorm of the order-n derivatives over shifts dx 2^k, k = 0..10, along the axes.
inline HoelderNorm hoelder_norm_report(const GridFunction& g, int order, double s_prime) {
  if (order < 0) throw std::invalid_argument("Hoelder order must be >= 0");
  if (!(s_prime > 0 && s_prime < 1)) throw std::invalid_argument("Hoelder exponent must lie in (0, 1)");
  const GridFunction spec = g.to_frequency();
  const std::size_t n = g.n;
  HoelderNorm out;
  for (int k = 0; k <= order; ++k) {
    double sup_sum = 0.0;
    for (int a = k; a >= (g.dim == 1 ? k : 0); --a) {
      const GridFunction d = detail::spectral_derivative(spec, a, k - a);
      sup_sum += d.lp_norm(detail::inf);
      if (k != order) continue;
      for (int shift_pow = 0; shift_pow <= 10; ++shift_pow) {
        const std::size_t shift = std::size_t{1} << shift_pow;
        if (shift >= n) break;
        const double dist = static_cast<double>(shift) * g.dx();
        for (int axis = 0; axis < g.dim; ++axis) {
          double worst = 0.0;
          for (std::size_t idx = 0; idx < d.size(); ++idx) {
            std::size_t other;
            if (g.dim == 1) other = (idx + shift) % n;
            else if (axis == 0) other = ((idx / n + shift) % n) * n + idx % n;
            else other = (idx / n) * n + (idx % n + shift) % n;
            worst = std::max(worst, std::abs(d.samples[other] - d.samples[idx]));
          }
          out.seminorm = std::max(out.seminorm, worst / std::pow(dist, s_prime));
        }
      }
    }
    out.sups.push_back(sup_sum);
  }
  out.value = out.seminorm;
  for (double s : out.sups) out.value += s;
  return out;
}

inline double hoelder_norm(const GridFunction& g, int order, double s_prime) {
  return hoelder_norm_report(g, order, s_prime).value;
}

struct Sigma2Options {
  int dim = 1;
  // Band grids cover [-L, L)^d around {1/2 <= |xi| <= 2}; L is kept off the dyadic
  // rationals so that no oscillation 2^j aliases exactly onto a coarse grid.
  double half_period = 2.5 + 0.1 / detail::pi;
  std::size_t n_start = 512;  // per dimension; doubled until the band is resolved
  std::size_t n_max = std::size_t{1} << 20;
  double resolution_tol = 1e-12;  // allowed spectral energy fraction above half Nyquist
  std::size_t table_intervals = 24576;  // radial table for d = 2

  static Sigma2Options for_dim(int d) {
    Sigma2Options o;
    o.dim = d;
    if (d == 2) {
      o.n_start = 64;
      o.n_max = 2048;
    }
    return o;
  }
};

struct Sigma2Band {
  int j = 0;
  double norm = 0.0;
  std::size_t grid_n = 0;
  bool resolved = true;
  bool besov_stale = false;
};

struct Sigma2Result {
  double value = 0.0;
  std::vector<Sigma2Band> bands;
  bool stale = false;  // last two bands carry > 1% of the sum of squares
  bool resolved = true;
};

namespace detail {

inline double high_frequency_fraction(const GridFunction& spec) {
  double total = 0.0, high = 0.0;
  const double cut = 0.5 * spec.nyquist();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double e = std::norm(spec.samples[i]);
    total += e;
    if (spec.frequency_radius(i) > cut) high += e;
  }
  return total > 0 ? high / total : 0.0;
}

inline GridFunction sample_band(const std::function<cplx(double)>& band, const Sigma2Options& o, std::size_t n) {
  if (o.dim == 1) return GridFunction::sample(1, n, o.half_period, [&](double x, double) { return band(std::abs(x)); });
  RadialTable table(band, 0.0, 2.0 * std::sqrt(2.0) * o.half_period, o.table_intervals);
  return GridFunction::sample(2, n, o.half_period, [&](double x, double y) {
    const double r = std::hypot(x, y);
    return r <= 0.5 || r >= 2.0 ? cplx(0.0) : table(r);
  });
}

}  // namespace detail

namespace detail {

/// sup |b'| / (2 pi sup |b|) on [1/2, 2], from difference quotients on a radial scan refined
/// until the estimate settles. The scan step avoids dyadic rationals.
inline double band_frequency(const std::function<cplx(double)>& band) {
  double previous = -1.0;
  for (std::size_t m = 4096; m <= (std::size_t{1} << 22); m *= 2) {
    const double h = 1.5 / (static_cast<double>(m) * (1.0 + 0.1 / pi));
    double sup = 0.0, slope = 0.0;
    cplx prev = band(0.5);
    for (std::size_t i = 1; i <= m; ++i) {
      const cplx cur = band(0.5 + static_cast<double>(i) * h);
      sup = std::max(sup, std::abs(cur));
      slope = std::max(slope, std::abs(cur - prev) / h);
      prev = cur;
    }
    if (sup == 0.0) return 0.0;
    const double freq = slope / (2.0 * pi * sup);
    if (previous > 0 && std::abs(freq - previous) <= 0.05 * freq) return freq;
    previous = freq;
  }
  return previous;
}

}  // namespace detail

/// ||b||_{B_p^s} for one radial band function b supported in {1/2 <= |xi| <= 2}. The grid starts
/// with Nyquist above four times the band's local frequency and doubles until the spectrum is resolved.
inline Sigma2Band band_besov_norm(const std::function<cplx(double)>& band, const BesovParams& params,
                                  const SmoothCutoff& cut, const Sigma2Options& o) {
  Sigma2Band out;
  const double freq = detail::band_frequency(band);
  std::size_t n = o.n_start;
  while (static_cast<double>(n) / (4.0 * o.half_period) < 4.0 * freq && n < o.n_max) n *= 2;
  for (;; n *= 2) {
    const GridFunction spec = detail::sample_band(band, o, n).to_frequency();
    const bool quiet = detail::high_frequency_fraction(spec) <= o.resolution_tol;
    if (quiet || n >= o.n_max) {
      BesovParams p = params;
      p.j_max = std::min(params.j_max, static_cast<int>(std::floor(std::log2(spec.nyquist()))) - 1);
      const auto rep = besov_norm_report(spec, p, cut);
      out.resolved = quiet;
      out.grid_n = n;
      out.norm = rep.value;
      out.besov_stale = rep.stale;
      return out;
    }
  }
}

/// (sum_{j in [j_min, j_max]} ||profile(2^j .) psi||_B^2)^{1/2} for a radial profile.
inline Sigma2Result sigma2_norm_radial(const std::function<cplx(double)>& profile, const BesovParams& params, int j_min,
                                       int j_max, const SmoothCutoff& cut, const Sigma2Options& o = {}) {
  params.validate();
  if (j_min > j_max) throw std::invalid_argument("sigma2_norm: empty j range");
  Sigma2Result out;
  out.bands.resize(static_cast<std::size_t>(j_max - j_min + 1));
  for (int j = j_min; j <= j_max; ++j) {
    const double scale = std::ldexp(1.0, j);
    auto band = [&](double r) -> cplx {
      if (r <= 0.5 || r >= 2.0) return 0.0;
      return profile(scale * r) * cut.psi(r);
    };
    Sigma2Band b = band_besov_norm(band, params, cut, o);
    b.j = j;
    out.bands[static_cast<std::size_t>(j - j_min)] = b;
  }
  double total = 0.0;
  for (const auto& b : out.bands) {
    total += b.norm * b.norm;
    out.resolved = out.resolved && b.resolved;
  }
  out.value = std::sqrt(total);
  if (out.bands.size() >= 2 && total > 0) {
    const auto k = out.bands.size();
    const double tail = out.bands[k - 1].norm * out.bands[k - 1].norm + out.bands[k - 2].norm * out.bands[k - 2].norm;
    out.stale = tail > 0.01 * total;
  }
  return out;
}

inline Sigma2Result sigma2_norm(const MultiplierSpec& m, const BesovParams& params, int j_min, int j_max,
                                const SmoothCutoff& cut, const Sigma2Options& o = {}) {
  return sigma2_norm_radial([&m](double r) { return m.radial(r); }, params, j_min, j_max, cut, o);
}

/// sum_{k <= l} (2 pi)^{-2k} int_{2^{j_min} <= |xi| <= 2^{j_max}} |d^k m|^2 |xi|^{2k-d} dxi, with the
/// radial derivative standing in for the multi-index sum (exact for d = 1 and for l <= 1 in d = 2).
inline double sigma2_weighted_sobolev(const MultiplierSpec& m, int l, int j_min, int j_max, int dim = 1) {
  if (l < 0 || l > jet_order) throw std::invalid_argument("weighted Sobolev order out of range");
  if (dim == 2 && l > 1) throw std::invalid_argument("weighted Sobolev in d = 2 supports l <= 1");
  if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (j_min >= j_max) throw std::invalid_argument("weighted Sobolev: empty annulus");
  const double sphere = dim == 1 ? 2.0 : 2.0 * detail::pi;
  double total = 0.0;
  for (int k = 0; k <= l; ++k) {
    double integral = 0.0;
    for (int j = j_min; j < j_max; ++j) {
      // Composite Simpson on [2^j, 2^{j+1}] in r; resolve e^{2 pi i r} oscillations.
      const double a = std::ldexp(1.0, j), b = 2.0 * a;
      const auto nodes = static_cast<std::size_t>(std::max(2048.0, 64.0 * b)) & ~std::size_t{1};
      const double h = (b - a) / static_cast<double>(nodes);
      double s = 0.0;
      for (std::size_t i = 0; i <= nodes; ++i) {
        const double r = a + static_cast<double>(i) * h;
        const double w = (i == 0 || i == nodes) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * std::norm(m.derivative(r, k)) * std::pow(r, 2.0 * k - 1.0);
      }
      integral += s * h / 3.0;
    }
    total += sphere * std::pow(2.0 * detail::pi, -2.0 * k) * integral;
  }
  return total;
}

struct DilationInvariance {
  double max_ratio = 0.0;
  std::vector<std::pair<double, double>> ratios;  // (r, ratio)
  double constant = 8.0;
  bool pass = false;
};

inline DilationInvariance dilation_invariance_check(const MultiplierSpec& m, const std::vector<double>& r_list,
                                                    const BesovParams& params, int j_min, int j_max,
                                                    const SmoothCutoff& cut, double constant = 8.0,
                                                    const Sigma2Options& o = {}) {
  DilationInvariance out;
  out.constant = constant;
  const double base = sigma2_norm(m, params, j_min, j_max, cut, o).value;
  for (double r : r_list) {
    const double v = sigma2_norm(m.dilated(r), params, j_min, j_max, cut, o).value;
    const double ratio = base == 0.0 ? (v == 0.0 ? 0.0 : detail::inf) : v / base;
    out.ratios.emplace_back(r, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  out.pass = out.max_ratio <= constant;
  return out;
}

}  // namespace fmlab

#endif  // FMLAB_LP_FRAMES_HPP
