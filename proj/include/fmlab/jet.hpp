#ifndef FMLAB_JET_HPP
#define FMLAB_JET_HPP

// Truncated Taylor series f(r0 + e) = sum_k c_k e^k, k <= jet_order, used to
// differentiate radial profiles in closed form.

#include <array>
#include <cmath>
#include <complex>

namespace fmlab {

inline constexpr int jet_order = 4;

struct Jet {
  using cplx = std::complex<double>;
  std::array<cplx, jet_order + 1> c{};

  Jet() = default;
  Jet(double v) { c[0] = v; }  // NOLINT: constants promote implicitly
  Jet(cplx v) { c[0] = v; }    // NOLINT

  static Jet variable(double r0) {
    Jet j(r0);
    j.c[1] = 1.0;
    return j;
  }

  double real_value() const { return c[0].real(); }

  /// k-th derivative at r0.
  cplx derivative(int k) const {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet operator-() const {
    Jet r;
    for (int i = 0; i <= jet_order; ++i) r.c[i] = -c[i];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= jet_order; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= jet_order; ++i) c[i] -= o.c[i];
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int n = 0; n <= jet_order; ++n)
      for (int k = 0; k <= n; ++k) r.c[n] += a.c[k] * b.c[n - k];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int n = 0; n <= jet_order; ++n) {
      cplx s = a.c[n];
      for (int k = 1; k <= n; ++k) s -= b.c[k] * r.c[n - k];
      r.c[n] = s / b.c[0];
    }
    return r;
  }
};

inline Jet exp(const Jet& a) {
  Jet e;
  e.c[0] = std::exp(a.c[0]);
  for (int n = 1; n <= jet_order; ++n) {
    Jet::cplx s = 0;
    for (int k = 1; k <= n; ++k) s += static_cast<double>(k) * a.c[k] * e.c[n - k];
    e.c[n] = s / static_cast<double>(n);
  }
  return e;
}

inline Jet log(const Jet& a) {
  Jet l;
  l.c[0] = std::log(a.c[0]);
  for (int n = 1; n <= jet_order; ++n) {
    Jet::cplx s = 0;
    for (int k = 1; k < n; ++k) s += static_cast<double>(k) * l.c[k] * a.c[n - k];
    l.c[n] = (a.c[n] - s / static_cast<double>(n)) / a.c[0];
  }
  return l;
}

inline Jet pow(const Jet& a, double p) { return exp(p * log(a)); }

inline void sincos(const Jet& a, Jet& s, Jet& c) {
  s = Jet{};
  c = Jet{};
  s.c[0] = std::sin(a.c[0]);
  c.c[0] = std::cos(a.c[0]);
  for (int n = 1; n <= jet_order; ++n) {
    Jet::cplx ss = 0, cc = 0;
    for (int k = 1; k <= n; ++k) {
      ss += static_cast<double>(k) * a.c[k] * c.c[n - k];
      cc -= static_cast<double>(k) * a.c[k] * s.c[n - k];
    }
    s.c[n] = ss / static_cast<double>(n);
    c.c[n] = cc / static_cast<double>(n);
  }
}

inline Jet sin(const Jet& a) {
  Jet s, c;
  sincos(a, s, c);
  return s;
}

inline Jet cos(const Jet& a) {
  Jet s, c;
  sincos(a, s, c);
  return c;
}

inline double real_value(double x) { return x; }
inline double real_value(const Jet& x) { return x.real_value(); }

}  // namespace fmlab

#endif  // FMLAB_JET_HPP
