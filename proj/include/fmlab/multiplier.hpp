#ifndef FMLAB_MULTIPLIER_HPP
#define FMLAB_MULTIPLIER_HPP

// Radial multiplier families m(xi) = profile(|xi|) and their derivatives.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cutoff.hpp"
#include "detail/numeric.hpp"
#include "jet.hpp"

namespace fmlab {

using cplx = std::complex<double>;

/// (1 - phi) |xi|^-a e^{2 pi i |xi|}: every derivative keeps the |xi|^-a decay.
struct LimitedDecay {
  double a = 1.0;
};
/// (1 - phi) |xi|^-beta cos(|xi|^{1-delta}): derivatives of order k decay like |xi|^{-beta-delta k}.
struct SlowDecay {
  double beta = 1.0;
  double delta = 0.5;
};
/// e^{2 pi i |xi|^alpha} (1 - phi) |xi|^-beta
struct Oscillatory {
  double alpha = 0.5;
  double beta = 1.0;
};
/// psi
struct BandBump {};
struct ConstantMultiplier {
  cplx value = 1.0;
};
struct CustomMultiplier {
  std::function<cplx(double)> radial;
  std::string name = "custom";
};

enum class DerivativeMode { closed_form, finite_difference };

class MultiplierSpec;

struct SumMultiplier {
  std::vector<std::pair<cplx, MultiplierSpec>> terms;
};

class MultiplierSpec {
 public:
  using Family =
      std::variant<LimitedDecay, SlowDecay, Oscillatory, BandBump, ConstantMultiplier, CustomMultiplier, SumMultiplier>;

  Family family;
  DerivativeMode derivative_mode = DerivativeMode::closed_form;
  SmoothCutoff cutoff;
  double scale = 1.0;  // evaluates m(scale * xi)

  MultiplierSpec() : family(ConstantMultiplier{0.0}) {}
  explicit MultiplierSpec(Family f, SmoothCutoff c = SmoothCutoff()) : family(std::move(f)), cutoff(c) { validate(); }

  static MultiplierSpec limited_decay(double a) { return MultiplierSpec(LimitedDecay{a}); }
  static MultiplierSpec slow_decay(double beta, double delta) { return MultiplierSpec(SlowDecay{beta, delta}); }
  static MultiplierSpec oscillatory(double alpha, double beta) { return MultiplierSpec(Oscillatory{alpha, beta}); }
  static MultiplierSpec band_bump() { return MultiplierSpec(BandBump{}); }
  static MultiplierSpec constant(cplx c) { return MultiplierSpec(ConstantMultiplier{c}); }
  static MultiplierSpec zero() { return constant(0.0); }
  static MultiplierSpec custom(std::function<cplx(double)> f, std::string name = "custom") {
    MultiplierSpec m(CustomMultiplier{std::move(f), std::move(name)});
    m.derivative_mode = DerivativeMode::finite_difference;
    return m;
  }
  static MultiplierSpec sum(std::vector<std::pair<cplx, MultiplierSpec>> terms) {
    return MultiplierSpec(SumMultiplier{std::move(terms)});
  }

  void validate() const {
    std::visit(
        [](const auto& f) {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, LimitedDecay>) {
            if (!(f.a > 0)) throw std::invalid_argument("limited decay needs a > 0");
          } else if constexpr (std::is_same_v<F, SlowDecay>) {
            if (!(f.beta > 0) || !(f.delta > 0 && f.delta < 1))
              throw std::invalid_argument("slow decay needs beta > 0 and delta in (0, 1)");
          } else if constexpr (std::is_same_v<F, Oscillatory>) {
            if (!(f.alpha > 0 && f.alpha < 1) || !(f.beta > 0))
              throw std::invalid_argument("oscillatory needs alpha in (0, 1) and beta > 0");
          } else if constexpr (std::is_same_v<F, CustomMultiplier>) {
            if (!f.radial) throw std::invalid_argument("custom multiplier needs an evaluator");
          }
        },
        family);
  }

  /// m(t .) as a new spec.
  MultiplierSpec dilated(double t) const {
    if (!(t > 0)) throw std::invalid_argument("dilation factor must be positive");
    MultiplierSpec m = *this;
    m.scale *= t;
    return m;
  }

  std::string family_name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, LimitedDecay>) return "limited_decay";
          else if constexpr (std::is_same_v<F, SlowDecay>) return "slow_decay";
          else if constexpr (std::is_same_v<F, Oscillatory>) return "oscillatory";
          else if constexpr (std::is_same_v<F, BandBump>) return "band_bump";
          else if constexpr (std::is_same_v<F, ConstantMultiplier>) return "constant";
          else if constexpr (std::is_same_v<F, CustomMultiplier>) return f.name;
          else return "sum";
        },
        family);
  }

  bool is_zero() const {
    if (auto* c = std::get_if<ConstantMultiplier>(&family)) return c->value == cplx(0.0);
    return false;
  }

  /// True when m vanishes for |xi| < 1/2.
  bool vanishes_near_origin() const {
    return std::visit(
        [](const auto& f) -> bool {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, ConstantMultiplier>) return f.value == cplx(0.0);
          else if constexpr (std::is_same_v<F, CustomMultiplier>) return false;
          else if constexpr (std::is_same_v<F, SumMultiplier>) {
            for (const auto& [c, m] : f.terms)
              if (!m.vanishes_near_origin() && c != cplx(0.0)) return false;
            return true;
          } else
            return true;
        },
        family);
  }

  /// Profile value m(r), r = |xi| >= 0.
  cplx radial(double r) const { return profile(scale * r); }

  cplx eval(double xi) const { return radial(std::abs(xi)); }
  cplx eval(double xi1, double xi2) const { return radial(std::hypot(xi1, xi2)); }

  /// k-th radial derivative d^k/dr^k m(r), k <= jet_order.
  cplx derivative(double r, int k) const {
    if (k < 0 || k > jet_order) throw std::invalid_argument("derivative order out of range");
    if (k == 0) return radial(r);
    if (uses_finite_differences()) return finite_difference(r, k);
    return profile_jet(Jet::variable(r)).derivative(k);
  }

  bool uses_finite_differences() const {
    if (derivative_mode == DerivativeMode::finite_difference) return true;
    if (std::holds_alternative<CustomMultiplier>(family)) return true;
    if (auto* s = std::get_if<SumMultiplier>(&family))
      for (const auto& [c, m] : s->terms)
        if (m.uses_finite_differences()) return true;
    return false;
  }

 private:
  template <class T>
  using Out = std::conditional_t<std::is_same_v<T, double>, cplx, Jet>;

  template <class T>
  Out<T> family_profile(const T& r) const {
    using std::cos;
    using std::exp;
    using std::pow;
    using O = Out<T>;
    const double r0 = real_value(r);
    return std::visit(
        [&](const auto& f) -> O {
          using F = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<F, ConstantMultiplier>) {
            return O(f.value);
          } else if constexpr (std::is_same_v<F, BandBump>) {
            return O(cutoff.psi(r));
          } else if constexpr (std::is_same_v<F, CustomMultiplier>) {
            if constexpr (std::is_same_v<T, double>) return f.radial(r);
            else throw std::logic_error("custom multiplier has no closed-form derivatives");
          } else if constexpr (std::is_same_v<F, SumMultiplier>) {
            O s(0.0);
            for (const auto& [c, m] : f.terms) s += O(c) * m.template scaled_profile<T>(r);
            return s;
          } else {
            if (r0 <= 1.0) return O(0.0);
            const O damp = O(1.0) - O(cutoff.phi(r));
            if constexpr (std::is_same_v<F, LimitedDecay>) {
              return damp * O(pow(r, -f.a)) * exp(O(cplx(0.0, 2.0 * detail::pi)) * O(r));
            } else if constexpr (std::is_same_v<F, SlowDecay>) {
              return damp * O(pow(r, -f.beta)) * O(cos(pow(r, 1.0 - f.delta)));
            } else {
              return damp * O(pow(r, -f.beta)) * exp(O(cplx(0.0, 2.0 * detail::pi)) * O(pow(r, f.alpha)));
            }
          }
        },
        family);
  }

  template <class T>
  Out<T> scaled_profile(const T& r) const {
    return family_profile(T(scale) * r);
  }

  cplx profile(double r) const { return family_profile(r); }
  Jet profile_jet(const Jet& r) const { return scaled_profile(r); }

  cplx finite_difference(double r, int k) const {
    const double h = std::max(1e-3 * r, 1e-4);
    auto f = [&](double x) { return radial(x); };
    switch (k) {
      case 1: return (f(r + h) - f(r - h)) / (2 * h);
      case 2: return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
      case 3: return (f(r + 2 * h) - 2.0 * f(r + h) + 2.0 * f(r - h) - f(r - 2 * h)) / (2 * h * h * h);
      default: return (f(r + 2 * h) - 4.0 * f(r + h) + 6.0 * f(r) - 4.0 * f(r - h) + f(r - 2 * h)) / (h * h * h * h);
    }
  }

};

/// Samples of a radial profile on [r0, r1] with 4-point Lagrange interpolation.
class RadialTable {
 public:
  RadialTable() = default;
  RadialTable(const std::function<cplx(double)>& f, double r0, double r1, std::size_t intervals)
      : r0_(r0), step_((r1 - r0) / static_cast<double>(intervals)), values_(intervals + 3) {
    if (!(r1 > r0) || intervals < 4) throw std::invalid_argument("radial table: bad range");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = f(r0 + (static_cast<double>(i) - 1.0) * step_);
  }

  cplx operator()(double r) const {
    const double u = (r - r0_) / step_;
    auto i = static_cast<long>(std::floor(u));
    i = std::clamp<long>(i, 0, static_cast<long>(values_.size()) - 4);
    const double t = u - static_cast<double>(i);
    const cplx* v = values_.data() + i;  // nodes at t = -1, 0, 1, 2
    const double w0 = -t * (t - 1) * (t - 2) / 6.0;
    const double w1 = (t + 1) * (t - 1) * (t - 2) / 2.0;
    const double w2 = -(t + 1) * t * (t - 2) / 2.0;
    const double w3 = (t + 1) * t * (t - 1) / 6.0;
    return w0 * v[0] + w1 * v[1] + w2 * v[2] + w3 * v[3];
  }

 private:
  double r0_ = 0.0, step_ = 1.0;
  std::vector<cplx> values_;
};

struct DecayProfile {
  std::vector<int> js;
  std::vector<std::vector<double>> log2_sup;  // [order][band]
  std::vector<double> slopes;                 // per derivative order
};

/// For k = 0..order, fits log2 sup_{2^j <= |xi| <= 2^{j+1}} |d^k m| against j.
inline DecayProfile decay_profile(const MultiplierSpec& m, int j_min, int j_max, int order,
                                  std::size_t samples_per_band = 4096) {
  if (j_max - j_min < 1) throw std::invalid_argument("decay_profile: need at least two bands");
  if (order < 0 || order > jet_order) throw std::invalid_argument("decay_profile: order out of range");
  DecayProfile p;
  for (int j = j_min; j <= j_max; ++j) p.js.push_back(j);
  p.log2_sup.assign(static_cast<std::size_t>(order) + 1, {});
  for (int k = 0; k <= order; ++k) {
    for (int j : p.js) {
      double sup = 0.0;
      for (std::size_t i = 0; i < samples_per_band; ++i) {
        const double r = std::ldexp(std::pow(2.0, static_cast<double>(i) / static_cast<double>(samples_per_band - 1)), j);
        sup = std::max(sup, std::abs(m.derivative(r, k)));
      }
      p.log2_sup[static_cast<std::size_t>(k)].push_back(std::log2(sup));
    }
    std::vector<double> x(p.js.begin(), p.js.end());
    p.slopes.push_back(detail::fit_line(x, p.log2_sup[static_cast<std::size_t>(k)]).slope);
  }
  return p;
}

}  // namespace fmlab

#endif  // FMLAB_MULTIPLIER_HPP
