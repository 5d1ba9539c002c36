#ifndef FMLAB_CUTOFF_HPP
#define FMLAB_CUTOFF_HPP

// Radial cutoffs: phi = 1 on |xi| <= 1, 0 on |xi| >= 2, psi(xi) = phi(xi) - phi(2 xi).

#include <cmath>
#include <stdexcept>
#include <string>

#include "detail/numeric.hpp"
#include "jet.hpp"

namespace fmlab {

enum class TransitionKind { smooth_exp, raised_cosine };

inline std::string to_string(TransitionKind k) { return k == TransitionKind::smooth_exp ? "smooth_exp" : "raised_cosine"; }

inline TransitionKind parse_transition(const std::string& s) {
  if (s == "smooth_exp") return TransitionKind::smooth_exp;
  if (s == "raised_cosine") return TransitionKind::raised_cosine;
  throw std::invalid_argument("unknown transition kind: " + s);
}

class SmoothCutoff {
 public:
  explicit SmoothCutoff(TransitionKind kind = TransitionKind::smooth_exp) : kind_(kind) {}

  TransitionKind kind() const { return kind_; }

  /// phi as a function of the radius r = |xi|; T is double or Jet.
  template <class T>
  T phi(const T& r) const {
    using std::cos;
    using std::exp;
    const double r0 = real_value(r);
    if (r0 <= 1.0) return T(1.0);
    if (r0 >= 2.0) return T(0.0);
    const T x = T(2.0) - r;  // x in (0, 1)
    if (kind_ == TransitionKind::raised_cosine) return T(0.5) - T(0.5) * cos(T(detail::pi) * x);
    const T g0 = exp(T(-1.0) / x);
    const T g1 = exp(T(-1.0) / (T(1.0) - x));
    return g0 / (g0 + g1);
  }

  template <class T>
  T psi(const T& r) const {
    return phi(r) - phi(T(2.0) * r);
  }

 private:
  TransitionKind kind_;
};

/// Cutoff construction entry point.
inline SmoothCutoff build_cutoffs(TransitionKind kind = TransitionKind::smooth_exp) { return SmoothCutoff(kind); }

}  // namespace fmlab

#endif  // FMLAB_CUTOFF_HPP
