#ifndef FMLAB_GRID_FUNCTION_HPP
#define FMLAB_GRID_FUNCTION_HPP

// Complex samples on the periodic grid [-L, L)^d, d in {1, 2}, with the
// transform f^(xi) = int f(x) e^{-2 pi i x.xi} dx at xi = k / (2L).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "detail/fft.hpp"
#include "detail/numeric.hpp"

namespace fmlab {

using cplx = std::complex<double>;

enum class Side { space, frequency };

class GridFunction {
 public:
  int dim = 1;
  double half_period = 1.0;  // L
  std::size_t n = 0;         // points per dimension
  Side side = Side::space;
  std::vector<cplx> samples;  // row-major, frequency side in FFT index order

  GridFunction() = default;
  GridFunction(int d, std::size_t npts, double l, Side s = Side::space)
      : dim(d), half_period(l), n(npts), side(s), samples(total(d, npts)) {
    validate();
  }

  static std::size_t total(int d, std::size_t npts) { return d == 1 ? npts : npts * npts; }

  void validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dimension must be 1 or 2");
    if (!detail::is_power_of_two(n) || n < 4) throw std::invalid_argument("grid: N must be a power of two >= 4");
    if (!(half_period > 0)) throw std::invalid_argument("grid: half period must be positive");
    if (samples.size() != total(dim, n)) throw std::invalid_argument("grid: sample count mismatch");
  }

  double dx() const { return 2.0 * half_period / static_cast<double>(n); }
  double dxi() const { return 1.0 / (2.0 * half_period); }
  /// Largest representable frequency N / (4L).
  double nyquist() const { return static_cast<double>(n) / (4.0 * half_period); }
  std::size_t size() const { return samples.size(); }

  double coordinate(std::size_t i) const { return -half_period + static_cast<double>(i) * dx(); }
  double frequency(std::size_t k) const {
    const auto ki = static_cast<double>(k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n));
    return ki * dxi();
  }
  /// |xi| at flat frequency index.
  double frequency_radius(std::size_t idx) const {
    if (dim == 1) return std::abs(frequency(idx));
    return std::hypot(frequency(idx / n), frequency(idx % n));
  }
  double coordinate_radius(std::size_t idx) const {
    if (dim == 1) return std::abs(coordinate(idx));
    return std::hypot(coordinate(idx / n), coordinate(idx % n));
  }

  static GridFunction sample(int d, std::size_t npts, double l, const std::function<cplx(double, double)>& f) {
    GridFunction g(d, npts, l);
    if (d == 1) {
      for (std::size_t i = 0; i < npts; ++i) g.samples[i] = f(g.coordinate(i), 0.0);
    } else {
      for (std::size_t i = 0; i < npts; ++i)
        for (std::size_t j = 0; j < npts; ++j) g.samples[i * npts + j] = f(g.coordinate(i), g.coordinate(j));
    }
    return g;
  }

  /// Frequency-side samples of a function given on the frequency grid.
  static GridFunction sample_frequency(int d, std::size_t npts, double l,
                                       const std::function<cplx(double, double)>& fhat) {
    GridFunction g(d, npts, l, Side::frequency);
    if (d == 1) {
      for (std::size_t k = 0; k < npts; ++k) g.samples[k] = fhat(g.frequency(k), 0.0);
    } else {
      for (std::size_t a = 0; a < npts; ++a)
        for (std::size_t b = 0; b < npts; ++b) g.samples[a * npts + b] = fhat(g.frequency(a), g.frequency(b));
    }
    return g;
  }

  GridFunction to_frequency() const {
    if (side == Side::frequency) return *this;
    GridFunction g = *this;
    detail::fft_forward(g.samples, dim, static_cast<int>(n));
    const double w = std::pow(dx(), dim);
    g.apply_phase(w);
    g.side = Side::frequency;
    return g;
  }

  GridFunction to_space() const {
    if (side == Side::space) return *this;
    GridFunction g = *this;
    const double w = std::pow(dxi(), dim);
    g.apply_phase(w);
    detail::fft_backward(g.samples, dim, static_cast<int>(n));
    g.side = Side::space;
    return g;
  }

  /// Multiplies the spectrum by m(xi); returns a space-side function.
  GridFunction apply_multiplier(const std::function<cplx(double)>& radial) const {
    GridFunction g = to_frequency();
    for (std::size_t idx = 0; idx < g.samples.size(); ++idx) g.samples[idx] *= radial(g.frequency_radius(idx));
    return g.to_space();
  }

  /// (sum |f|^p dV)^{1/p}, or the maximum for p = inf.
  double lp_norm(double p) const {
    const double vol = std::pow(side == Side::space ? dx() : dxi(), dim);
    if (std::isinf(p)) {
      double m = 0.0;
      for (auto v : samples) m = std::max(m, std::abs(v));
      return m;
    }
    double s = 0.0;
    for (auto v : samples) s += std::pow(std::abs(v), p);
    return std::pow(s * vol, 1.0 / p);
  }

  double l2_norm() const { return lp_norm(2.0); }

 private:
  // Phase (-1)^{k_1 + ... + k_d} from the x_0 = -L origin, times a weight.
  void apply_phase(double w) {
    if (dim == 1) {
      for (std::size_t k = 0; k < n; ++k) samples[k] *= (k % 2 ? -w : w);
    } else {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) samples[a * n + b] *= ((a + b) % 2 ? -w : w);
    }
  }
};

}  // namespace fmlab

#endif  // FMLAB_GRID_FUNCTION_HPP
