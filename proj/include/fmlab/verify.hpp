#ifndef FMLAB_VERIFY_HPP
#define FMLAB_VERIFY_HPP

// Property suites run by `fmlab verify`. Each check records its measured
// quantities and a verdict; reports carry no timings so reruns are byte-identical.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cutoff.hpp"
#include "dimension.hpp"
#include "fractional.hpp"
#include "io.hpp"
#include "lp_frames.hpp"
#include "maximal.hpp"
#include "mtilde.hpp"
#include "multiplier.hpp"

namespace fmlab {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dimension", "fraccalc", "frames", "multipliers", "maximal"};
  return names;
}

struct CheckList {
  json checks = json::array();
  bool pass = true;

  void add(const std::string& name, bool ok, json detail) {
    json c;
    c["name"] = name;
    c["pass"] = ok;
    c["detail"] = std::move(detail);
    checks.push_back(std::move(c));
    pass = pass && ok;
  }
};

namespace detail {

constexpr double verify_pi = 3.14159265358979323846;

inline double bump(double x) { return std::abs(x) < 1 ? std::exp(-1 / (1 - x * x)) : 0.0; }

inline GridFunction seeded_grid(int d, std::size_t n, double l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GridFunction g(d, n, l);
  for (auto& v : g.samples) v = cplx(2 * unit_uniform(rng) - 1, 2 * unit_uniform(rng) - 1);
  return g;
}

inline double telescoped(const SmoothCutoff& c, double xi, int jmax) {
  double s = 0.0;
  for (int j = -jmax; j <= jmax; ++j) s += c.psi(std::abs(xi) / std::ldexp(1.0, j));
  return s;
}

inline std::vector<std::pair<std::string, std::function<cplx(double, double)>>> hoelder_suite() {
  const double pi = verify_pi;
  return {
      {"gauss", [pi](double x, double) { return cplx(std::exp(-pi * x * x)); }},
      {"bump", [](double x, double) { return cplx(bump(x)); }},
      {"sinbump", [pi](double x, double) { return cplx(std::sin(4 * pi * x) * bump(x)); }},
      {"xgauss", [](double x, double) { return cplx(x * std::exp(-4 * x * x)); }},
      {"chirp", [](double x, double) { return std::exp(cplx(0, 6 * x)) * std::exp(-x * x); }},
  };
}

inline double max_rel_error(const SampledPath& got, const std::function<double(double)>& exact) {
  double err = 0, scale = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    err = std::max(err, std::abs(got.values[i] - exact(got.grid[i])));
    scale = std::max(scale, std::abs(exact(got.grid[i])));
  }
  return err / scale;
}

inline SampledPath real_path(double T, std::size_t n, const std::function<double(double)>& f) {
  return SampledPath::uniform(T, n, [f](double t) { return cplx(f(t)); }, 1.0);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline CheckList verify_dimension() {
  CheckList out;
  const auto sched = default_delta_schedule(1e-6);

  for (double a : {1.0, 0.5, 2.0}) {
    const auto e = kappa(DilationSet::power_sequence(a), sched, -4, 4);
    const double want = 1.0 / (1.0 + a);
    out.add("kappa_power_a" + std::to_string(a).substr(0, 3), std::abs(e.value - want) <= 0.05,
            {{"a", a}, {"expected", want}, {"estimate", to_json(e)}});
  }

  {
    const auto b = rescaled_block(DilationSet::cantor(3, {0, 2}, 12), 0);
    const auto e = minkowski_dimension(b, geometric_delta_schedule(3.0, 12));
    const double want = std::log(2.0) / std::log(3.0);
    out.add("minkowski_cantor_level12", std::abs(e.value - want) <= 0.03, {{"expected", want}, {"estimate", to_json(e)}});
  }

  {
    const std::vector<std::pair<std::string, DilationSet>> sets{
        {"two_point", DilationSet::points({1.0, 2.0})},
        {"cantor_level6", DilationSet::cantor(3, {0, 2}, 6)},
        {"cantor_level9", DilationSet::cantor(3, {0, 2}, 9)},
        {"cantor_level12", DilationSet::cantor(3, {0, 2}, 12)},
        {"power_a0.5", DilationSet::power_sequence(0.5)},
        {"power_a1", DilationSet::power_sequence(1.0)},
        {"power_a2", DilationSet::power_sequence(2.0)},
        {"lacunary", DilationSet::lacunary()},
        {"power_a1_union_lacunary", DilationSet::power_sequence(1.0).with_lacunary()},
        {"cantor5_union_power_a2",
         DilationSet::set_union({DilationSet::cantor(5, {0, 4}, 8), DilationSet::power_sequence(2.0)})},
    };
    const auto bound_sched = default_delta_schedule(1e-8);
    json cases = json::array();
    bool ok = true;
    for (const auto& [name, e] : sets) {
      const auto b = rescaled_block(e, 0);
      for (double a : {0.3, 0.5, 0.7}) {
        const auto r = dimension_bound_check(b, a, bound_sched);
        ok = ok && r.pass;
        cases.push_back({{"set", name},
                         {"a", a},
                         {"sup_delta_a_N", detail::number(r.lhs)},
                         {"distance_integral", detail::number(r.mid)},
                         {"covering_integral", detail::number(r.rhs)},
                         {"pass", r.pass}});
      }
    }
    out.add("dimension_bound_two_sided", ok, {{"constant", 10.0}, {"cases", cases}});
  }

  for (double a : {0.5, 1.0, 2.0}) {
    const auto e = gap_sum_exponent(DilationSet::power_sequence(a));
    const double want = 1.0 / (1.0 + a);
    out.add("gap_sum_flip_a" + std::to_string(a).substr(0, 3), std::abs(e.value - want) <= 0.05,
            {{"a", a}, {"expected", want}, {"estimate", to_json(e)}});
  }

  for (double r : {0.5, 1.0, 2.0}) {
    const auto res = lorentz_membership(SequenceRule::power(1.0 / r), r, default_lorentz_schedule());
    out.add("lorentz_power_r" + std::to_string(r).substr(0, 3), res.verdict && res.bound <= 2.0,
            {{"r", r}, {"bound", detail::number(res.bound)}, {"verdict", res.verdict}});
  }

  for (double r : {0.5, 1.0, 2.0}) {
    const auto b = rescaled_block(DilationSet::sequence(SequenceRule::power(1.0 / r), 1.0), 0);
    const auto e = minkowski_dimension(b, sched);
    const double want = r / (1.0 + r);
    out.add("decreasing_gap_dimension_r" + std::to_string(r).substr(0, 3), std::abs(e.value - want) <= 0.05,
            {{"r", r}, {"expected", want}, {"estimate", to_json(e)}});
  }
  return out;
}

inline CheckList verify_fraccalc() {
  CheckList out;
  const double two_pi = 2 * detail::verify_pi;

  {
    json cases = json::array();
    bool ok = true;
    const std::vector<std::pair<std::string, std::function<double(double)>>> fs{
        {"t^2", [](double t) { return t * t; }}, {"sin(2 pi t)", [two_pi](double t) { return std::sin(two_pi * t); }}};
    for (const auto& [name, f] : fs)
      for (std::size_t n : {4096, 8192})
        for (double a : {0.25, 0.5, 0.75}) {
          const double r = roundtrip_residual(detail::real_path(2.0, n, f), FractionalOrder(a));
          ok = ok && r <= 1e-3;
          cases.push_back({{"F", name}, {"n", n}, {"alpha", a}, {"residual", detail::number(r)}});
        }
    out.add("roundtrip_residual", ok, {{"tolerance", 1e-3}, {"cases", cases}});
  }

  {
    json cases = json::array();
    bool ok = true;
    for (double a : {0.25, 0.5, 0.75})
      for (int b : {1, 2, 3}) {
        auto p = SampledPath::uniform(2.0, 8192, [b](double t) { return cplx(std::pow(t, b)); }, 1.0);
        const auto d = marchaud_derivative(p, FractionalOrder(a));
        const double c = std::tgamma(b + 1.0) / std::tgamma(b + 1.0 - a);
        const double err = detail::max_rel_error(d, [=](double t) { return c * std::pow(t, b - a); });
        ok = ok && err <= 1e-4;
        cases.push_back({{"alpha", a}, {"power", b}, {"relative_error", detail::number(err)}});
      }
    out.add("marchaud_power_law", ok, {{"tolerance", 1e-4}, {"cases", cases}});
  }

  {
    json cases = json::array();
    bool ok = true;
    struct Case {
      double T;
      std::size_t n;
      int j;
      double a;
      int power;
    };
    for (const Case& c : {Case{4.0, 4096, 1, 0.3, 1}, Case{8.0, 4096, 2, 0.5, 2}, Case{8.0, 4096, 2, 0.7, 1}}) {
      auto p = SampledPath::uniform(c.T, c.n, [&](double t) { return cplx(std::pow(t, c.power)); }, 1.0);
      const double r = rescaled_derivative_check(p, c.j, FractionalOrder(c.a));
      ok = ok && r <= 1e-5;
      cases.push_back({{"power", c.power}, {"j", c.j}, {"alpha", c.a}, {"discrepancy", detail::number(r)}});
    }
    out.add("rescaled_derivative", ok, {{"tolerance", 1e-5}, {"cases", cases}});
  }

  {
    json cases = json::array();
    bool ok = true;
    for (double a : {0.25, 0.5, 0.75}) {
      std::vector<double> res;
      for (std::size_t n = 512; n <= 8192; n *= 2)
        res.push_back(roundtrip_residual(detail::real_path(2.0, n, [two_pi](double t) { return std::sin(two_pi * t); }),
                                         FractionalOrder(a)));
      bool halves = true;
      for (std::size_t i = 1; i < res.size(); ++i) halves = halves && res[i] <= 0.5 * res[i - 1];
      ok = ok && halves;
      cases.push_back({{"alpha", a}, {"n_first", 512}, {"residuals", res}, {"halves", halves}});
    }
    out.add("error_halves_per_doubling", ok, {{"cases", cases}});
  }
  return out;
}

inline CheckList verify_frames(std::uint64_t seed) {
  CheckList out;
  const auto cut = build_cutoffs();

  {
    double worst = 0.0;
    for (auto kind : {TransitionKind::smooth_exp, TransitionKind::raised_cosine}) {
      const auto c = build_cutoffs(kind);
      for (int i = 0; i <= 2000; ++i)
        worst = std::max(worst, std::abs(detail::telescoped(c, std::pow(2.0, -10.0 + 20.0 * i / 2000.0), 16) - 1.0));
    }
    out.add("partition_of_unity", worst <= 1e-12, {{"max_deviation", worst}, {"tolerance", 1e-12}});
  }

  {
    double worst = 0.0;
    for (int d : {1, 2})
      for (std::uint64_t k = 0; k < 3; ++k) {
        const auto g = detail::seeded_grid(d, d == 1 ? 2048 : 128, 2.0 + static_cast<double>(k), seed + k);
        const double a = g.l2_norm(), b = g.to_frequency().l2_norm();
        worst = std::max(worst, std::abs(a - b) / a);
      }
    out.add("grid_plancherel", worst <= 1e-10, {{"max_relative_gap", worst}, {"tolerance", 1e-10}});
  }

  {
    json cases = json::array();
    bool ok = true;
    for (const auto& [name, fn] : detail::hoelder_suite()) {
      const auto g = GridFunction::sample(1, 4096, 8.0, fn);
      for (double sp : {0.3, 0.5, 0.7}) {
        const double r = hoelder_norm(g, 0, sp) / besov_norm(g, BesovParams{INFINITY, sp, 6}, cut);
        ok = ok && r >= 1.0 / 8 && r <= 8.0;
        cases.push_back({{"f", name}, {"s", sp}, {"ratio", detail::number(r)}});
      }
    }
    out.add("hoelder_besov_equivalence", ok, {{"factor", 8.0}, {"cases", cases}});
  }

  {
    json cases = json::array();
    bool ok = true;
    for (double a : {0.5, 1.0, 1.5}) {
      const double r = a - 0.3;
      const auto res = sigma2_norm(MultiplierSpec::limited_decay(a), BesovParams{2.0, r, 12}, -3, 10, cut);
      std::vector<double> js, ls;
      bool zero_low = true;
      for (const auto& b : res.bands) {
        if (b.j <= -1 && b.norm != 0.0) zero_low = false;
        if (b.j >= 2) {
          js.push_back(b.j);
          ls.push_back(std::log2(b.norm));
        }
      }
      const double slope = detail::fit_line(js, ls).slope;
      const bool pass = zero_low && std::abs(slope - (r - a)) <= 0.1;
      ok = ok && pass;
      cases.push_back({{"a", a}, {"r", r}, {"slope", detail::number(slope)}, {"expected", r - a},
                       {"low_bands_zero", zero_low}, {"bands", to_json(res)["bands"]}});
    }
    out.add("sigma2_band_slopes", ok, {{"cases", cases}});
  }
  return out;
}

inline CheckList verify_multipliers() {
  CheckList out;
  const auto cut = build_cutoffs();

  {
    const auto p = decay_profile(MultiplierSpec::oscillatory(0.5, 1.0), 3, 10, 1);
    const double slope = p.slopes[1];
    out.add("oscillatory_decay_profile", std::abs(slope + 1.5) <= 0.1,
            {{"alpha", 0.5}, {"beta", 1.0}, {"order", 1}, {"slope", slope}, {"expected", -1.5}});
  }

  {
    const std::vector<std::pair<MultiplierSpec, double>> suite{
        {MultiplierSpec::band_bump(), 1.0},
        {MultiplierSpec::limited_decay(1.5), 0.5},
        {MultiplierSpec::oscillatory(0.5, 1.0), 0.5},
        {MultiplierSpec::slow_decay(1.0, 0.25), 0.5},
    };
    json cases = json::array();
    bool ok = true;
    for (const auto& [m, s] : suite)
      for (auto [alpha, eps] : {std::pair{0.3, 0.1}, std::pair{0.5, 0.1}}) {
        const auto r = embedding_check(m, alpha, eps, 2.0, s, -1, 4, cut);
        ok = ok && r.pass && r.ratio <= 32.0;
        cases.push_back({{"m", to_json(m)},
                         {"alpha", alpha},
                         {"eps", eps},
                         {"s", s},
                         {"numerator", detail::number(r.numerator)},
                         {"denominator", detail::number(r.denominator)},
                         {"ratio", detail::number(r.ratio)},
                         {"flagged", r.flagged}});
      }
    out.add("embedding", ok, {{"constant", 32.0}, {"cases", cases}});
  }
  return out;
}

/// The four standard ratio configurations: {BandBump, Oscillatory} x {harmonic, Cantor} sets.
inline std::vector<ExperimentConfig> lemma31_standard_suite() {
  std::vector<ExperimentConfig> out;
  const std::vector<std::pair<std::string, DilationSet>> sets{
      {"harmonic_union_dyadic", DilationSet::power_sequence(1.0).with_lacunary()},
      {"cantor4_union_dyadic", DilationSet::cantor(4, {0, 3}, 12).with_lacunary()},
  };
  for (const auto& m : {MultiplierSpec::band_bump(), MultiplierSpec::oscillatory(0.5, 1.0)})
    for (const auto& [name, e] : sets) {
      ExperimentConfig c;
      c.set_name = name;
      c.E = e;
      c.m = m;
      c.f = FunctionSpec::gaussian_bump(1.0);
      out.push_back(c);
    }
  return out;
}

struct HNormCase {
  std::string set_name;
  DilationSet E;
  MultiplierSpec m;
  double beta;
};

/// 3 multipliers x 2 sets x beta in {0.25, 0.35}.
inline std::vector<HNormCase> hnorm_standard_suite() {
  std::vector<HNormCase> out;
  const std::vector<std::pair<std::string, DilationSet>> sets{
      {"harmonic_union_dyadic", DilationSet::power_sequence(1.0).with_lacunary()},
      {"cantor5_union_dyadic", DilationSet::cantor(5, {0, 4}, 12).with_lacunary()},
  };
  for (const auto& m :
       {MultiplierSpec::band_bump(), MultiplierSpec::limited_decay(1.0), MultiplierSpec::slow_decay(1.0, 0.25)})
    for (const auto& [name, e] : sets)
      for (double beta : {0.25, 0.35}) out.push_back({name, e, m, beta});
  return out;
}

inline HNormReport run_hnorm_case(const HNormCase& c, const SmoothCutoff& cut, int depth = 12) {
  const auto w = build_hweights(c.E, c.beta, -10, 44, depth, HGridOptions{64});
  return mm_linf_h_norm(c.m, log_spaced_xi(-4, 8, 8), w, cut);
}

inline CheckList verify_maximal(std::uint64_t seed) {
  CheckList out;
  const auto cut = build_cutoffs();

  {
    double worst = 0.0;
    for (const auto& e : {DilationSet::lacunary(), DilationSet::power_sequence(1.0).with_lacunary(),
                          DilationSet::cantor(4, {0, 3}, 12).with_lacunary()})
      for (double beta : {0.3, 0.45}) {
        const auto w = build_hweights(e, beta, -2, 2, 8);
        for (const auto& b : w.blocks) {
          for (double v : b.weights)
            if (v < 0) worst = INFINITY;
          BlockSet blk;
          blk.points = b.points;
          const double exact = distance_integral(blk, 2 * beta);
          worst = std::max(worst, std::abs(b.total - exact) / exact);
        }
      }
    out.add("hweights_block_sums", worst <= 1e-6, {{"max_relative_error", worst}, {"tolerance", 1e-6}});
  }

  {
    double worst = 0.0;
    for (const auto& m : {MultiplierSpec::band_bump(), MultiplierSpec::oscillatory(0.5, 1.0)}) {
      const auto f = build_function(FunctionSpec::random_band(seed + 1), 1, 512, 16.0);
      const auto mf = maximal_function(f, m, DilationSet::points({1.0}), 3, -2, 2);
      worst = std::max(worst, mf.value.l2_norm() / f.l2_norm());
    }
    out.add("plancherel_contraction", worst <= 1.0 + 1e-10, {{"max_norm_ratio", worst}, {"sup_m", 1.0}});
  }

  {
    json cases = json::array();
    bool ok = true;
    for (const auto& c : lemma31_standard_suite()) {
      const auto r = lemma31_ratio(c);
      ok = ok && r.pass;
      json j = to_json(r);
      j["set"] = c.set_name;
      j["m"] = to_json(c.m);
      cases.push_back(std::move(j));
    }
    out.add("lemma31_ratio_stability", ok, {{"max_relative_change", 0.1}, {"cases", cases}});
  }

  {
    json cases = json::array();
    bool ok = true;
    for (const auto& c : hnorm_standard_suite()) {
      const auto r = run_hnorm_case(c, cut);
      ok = ok && r.pass;
      json j = to_json(r);
      j["set"] = c.set_name;
      j["m"] = to_json(c.m);
      j["beta"] = c.beta;
      cases.push_back(std::move(j));
    }
    out.add("h_norm_bound", ok, {{"constant", 16.0}, {"cases", cases}});
  }

  {
    const double xi0 = 1.0, alpha = 0.5;
    const auto f = build_function(FunctionSpec::single_mode(xi0), 1, 128, 8.0);
    std::vector<std::int64_t> schedule;
    for (int k = 3; k <= 14; ++k) schedule.push_back(std::int64_t{1} << k);
    const auto r = halfwave_convergence(f, alpha, 0.4, DilationSet::power_sequence(1.0), schedule);
    out.add("halfwave_single_mode", std::abs(r.slope - 1.0) <= 0.02, to_json(r));
  }

  {
    const auto f = build_function(FunctionSpec::gaussian_bump(1.0), 1, 1024, 32.0);
    std::vector<std::int64_t> schedule;
    for (int k = 1; k <= 12; ++k) schedule.push_back(std::int64_t{1} << k);
    const auto r = halfwave_convergence(f, 0.5, 0.4, DilationSet::power_sequence(1.0).with_lacunary(), schedule);
    out.add("halfwave_gaussian", r.slope >= 0.3, to_json(r));
  }
  return out;
}

/// Runs one suite (or "all"); throws std::invalid_argument for unknown names.
inline json run_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end()) {
    names = {suite};
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  json report;
  report["config"] = {{"suite", suite}, {"seed", seed}};
  report["suites"] = json::array();
  bool pass = true;
  for (const auto& n : names) {
    CheckList c;
    if (n == "dimension") c = verify_dimension();
    else if (n == "fraccalc") c = verify_fraccalc();
    else if (n == "frames") c = verify_frames(seed);
    else if (n == "multipliers") c = verify_multipliers();
    else c = verify_maximal(seed);
    pass = pass && c.pass;
    report["suites"].push_back({{"suite", n}, {"pass", c.pass}, {"checks", std::move(c.checks)}});
  }
  report["pass"] = pass;
  return report;
}

}  // namespace fmlab

#endif  // FMLAB_VERIFY_HPP
