#ifndef FMLAB_DETAIL_NUMERIC_HPP
#define FMLAB_DETAIL_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fmlab::detail {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double inf = std::numeric_limits<double>::infinity();

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square of the fit residuals
};

/// Ordinary least squares y = slope * x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need at least two (x, y) pairs");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

/// `count` values log-spaced from `hi` down to `lo` (both included).
inline std::vector<double> log_schedule(double hi, double lo, std::size_t count) {
  if (!(hi > 0 && lo > 0) || count < 2)
    throw std::invalid_argument("log_schedule: need positive bounds and count >= 2");
  std::vector<double> out(count);
  const double a = std::log(hi), b = std::log(lo);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = hi;
  out.back() = lo;
  return out;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace fmlab::detail

#endif  // FMLAB_DETAIL_NUMERIC_HPP
