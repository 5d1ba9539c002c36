#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fmlab/lp_frames.hpp"

using namespace fmlab;

namespace {

const double kPi = std::acos(-1.0);

double bump(double x) { return std::abs(x) < 1 ? std::exp(-1 / (1 - x * x)) : 0.0; }

GridFunction random_grid(int d, std::size_t n, double l, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  GridFunction g(d, n, l);
  for (auto& v : g.samples) v = cplx(nd(rng), nd(rng));
  return g;
}

// Midpoint rule for int_a^b f.
double midpoint(const std::function<double(double)>& f, double a, double b, int n) {
  double s = 0.0, h = (b - a) / n;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

struct Named {
  const char* name;
  std::function<cplx(double, double)> f;
};

std::vector<Named> hoelder_suite() {
  return {
      {"gauss", [](double x, double) { return cplx(std::exp(-kPi * x * x)); }},
      {"bump", [](double x, double) { return cplx(bump(x)); }},
      {"sinbump", [](double x, double) { return cplx(std::sin(4 * kPi * x) * bump(x)); }},
      {"xgauss", [](double x, double) { return cplx(x * std::exp(-4 * x * x)); }},
      {"chirp", [](double x, double) { return std::exp(cplx(0, 6 * x)) * std::exp(-x * x); }},
  };
}

}  // namespace

TEST(GridFunction, RoundTrip) {
  for (int d : {1, 2}) {
    const auto g = random_grid(d, d == 1 ? 1024 : 64, 3.0, 7);
    const auto back = g.to_frequency().to_space();
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(back.samples[i] - g.samples[i]));
      scale = std::max(scale, std::abs(g.samples[i]));
    }
    EXPECT_LE(worst, 1e-12 * scale);
  }
}

TEST(GridFunction, Plancherel) {
  for (int d : {1, 2})
    for (unsigned seed : {1u, 2u, 3u}) {
      const auto g = random_grid(d, d == 1 ? 2048 : 128, 1.0 + seed, seed);
      const double a = g.l2_norm(), b = g.to_frequency().l2_norm();
      EXPECT_NEAR(a, b, 1e-10 * a);
    }
}

TEST(GridFunction, GaussianTransform) {
  const auto g = GridFunction::sample(1, 1024, 8.0, [](double x, double) { return cplx(std::exp(-kPi * x * x)); });
  const auto s = g.to_frequency();
  for (std::size_t k = 0; k < 64; ++k)
    EXPECT_NEAR(std::abs(s.samples[k] - cplx(std::exp(-kPi * s.frequency(k) * s.frequency(k)))), 0.0, 1e-12);
}

TEST(GridFunction, Validation) {
  EXPECT_THROW(GridFunction(3, 64, 1.0), std::invalid_argument);
  EXPECT_THROW(GridFunction(1, 100, 1.0), std::invalid_argument);
  EXPECT_THROW(GridFunction(1, 64, 0.0), std::invalid_argument);
}

TEST(LpPiece, ConstantHasNoHighPieces) {
  const auto g = GridFunction::sample(1, 512, 4.0, [](double, double) { return cplx(3.0); });
  const auto cut = build_cutoffs();
  for (int j = 1; j <= 4; ++j) EXPECT_LE(lp_piece(g, j, cut).lp_norm(INFINITY), 1e-12);
  EXPECT_NEAR(lp_piece(g, 0, cut).samples[17].real(), 3.0, 1e-12);
}

TEST(LpPiece, BandContainment) {
  // A spectrum inside 2^{j-1/2} < |xi| < 2^{j+1/2} is split among pieces j-1, j, j+1 only.
  const auto cut = build_cutoffs();
  const int j = 3;
  const double lo = std::pow(2.0, j - 0.5), hi = std::pow(2.0, j + 0.5);
  const auto f = GridFunction::sample_frequency(1, 1024, 4.0, [&](double xi, double) {
    const double r = std::abs(xi);
    return r > lo && r < hi ? cplx(std::sin(r), 1.0) : cplx(0.0);
  }).to_space();
  GridFunction sum = lp_piece(f, j - 1, cut);
  for (int k : {j, j + 1})
    for (std::size_t i = 0; i < sum.size(); ++i) sum.samples[i] += lp_piece(f, k, cut).samples[i];
  for (std::size_t i = 0; i < sum.size(); ++i) EXPECT_NEAR(std::abs(sum.samples[i] - f.samples[i]), 0.0, 1e-12);
  for (int k : {1, j + 2}) EXPECT_LE(lp_piece(f, k, cut).lp_norm(INFINITY), 1e-13);
}

TEST(LpPiece, BandOutOfRange) {
  const auto g = GridFunction(1, 256, 4.0);  // Nyquist 16
  const auto cut = build_cutoffs();
  EXPECT_NO_THROW(lp_piece(g, 3, cut));
  EXPECT_THROW(lp_piece(g, 4, cut), std::invalid_argument);
  EXPECT_THROW(besov_norm(g, BesovParams{2.0, 0.0, 4}, cut), std::invalid_argument);
}

TEST(LpPiece, GaussianDecaysSuperAlgebraically) {
  const double s = 0.02;
  const auto g = GridFunction::sample(1, 8192, 2.0, [&](double x, double) { return cplx(std::exp(-kPi * x * x / (s * s))); });
  const auto cut = build_cutoffs();
  std::vector<double> l;
  for (int j = 3; j <= 8; ++j) l.push_back(std::log2(lp_piece(g, j, cut).lp_norm(INFINITY)));
  std::vector<double> steps;
  for (std::size_t i = 1; i < l.size(); ++i) steps.push_back(l[i] - l[i - 1]);
  for (std::size_t i = 1; i < steps.size(); ++i) EXPECT_LT(steps[i], steps[i - 1]);
  EXPECT_LT(steps.back(), -20.0);
}

TEST(Besov, ZeroFunction) {
  const GridFunction g(1, 512, 4.0);
  EXPECT_EQ(besov_norm(g, BesovParams{2.0, 1.0, 4}, build_cutoffs()), 0.0);
  EXPECT_EQ(besov_norm(g, BesovParams{INFINITY, 1.0, 4}, build_cutoffs()), 0.0);
}

TEST(Besov, PsiBandAgainstOverlapOracle) {
  // ||g||_{B_2^0}^2 = int psi^2 sum_k psi_k^2 for g^ = psi(./2^j), an overlap factor independent of j.
  const auto cut = build_cutoffs();
  const auto ratio_sq = midpoint([&](double r) {
    const double p = cut.psi(r);
    return p * p * (cut.psi(2 * r) * cut.psi(2 * r) + p * p + cut.psi(r / 2) * cut.psi(r / 2));
  }, 0.5, 2.0, 200000) / midpoint([&](double r) { return cut.psi(r) * cut.psi(r); }, 0.5, 2.0, 200000);
  for (int j : {2, 4}) {
    const auto f = GridFunction::sample_frequency(1, 4096, 8.0, [&](double xi, double) {
      return cplx(cut.psi(std::abs(xi) / std::ldexp(1.0, j)));
    }).to_space();
    const double b = besov_norm(f, BesovParams{2.0, 0.0, 6}, cut);
    EXPECT_NEAR(b / f.l2_norm(), std::sqrt(ratio_sq), 1e-6);
    EXPECT_GT(b / f.l2_norm(), 0.9);
    EXPECT_LE(b, f.l2_norm());
  }
}

TEST(Besov, SmoothCompactWithinFactorTwoOfL2) {
  const auto cut = build_cutoffs();
  for (const auto& [name, fn] : hoelder_suite()) {
    const auto g = GridFunction::sample(1, 4096, 8.0, fn);
    const double r = besov_norm(g, BesovParams{2.0, 0.0, 6}, cut) / g.l2_norm();
    EXPECT_GE(r, 0.5) << name;
    EXPECT_LE(r, 2.0) << name;
  }
}

TEST(Besov, MonotoneInSmoothness) {
  const auto cut = build_cutoffs();
  // Spectrum supported in |xi| >= 2 so only pieces j >= 1 are active.
  const auto g = GridFunction::sample_frequency(1, 2048, 4.0, [](double xi, double) {
    const double r = std::abs(xi);
    return r > 2.1 && r < 60 ? cplx(std::exp(-r / 10), std::sin(r)) : cplx(0.0);
  }).to_space();
  EXPECT_LE(lp_piece(g, 0, cut).lp_norm(INFINITY), 1e-13);
  for (double p : {1.5, 2.0, 4.0, double(INFINITY)}) {
    double prev = 0.0;
    for (double s : {-1.0, -0.3, 0.0, 0.4, 1.0, 2.5}) {
      const double v = besov_norm(g, BesovParams{p, s, 6}, cut);
      EXPECT_GE(v, prev) << "p=" << p << " s=" << s;
      prev = v;
    }
  }
}

TEST(Besov, StalenessFlag) {
  const auto cut = build_cutoffs();
  const auto flat = GridFunction::sample_frequency(1, 2048, 4.0, [](double xi, double) {
    return std::abs(xi) < 200 ? cplx(1.0) : cplx(0.0);
  });
  EXPECT_TRUE(besov_norm_report(flat, BesovParams{2.0, 1.0, 6}, cut).stale);
  const auto g = GridFunction::sample(1, 2048, 4.0, [](double x, double) { return cplx(std::exp(-kPi * x * x)); });
  EXPECT_FALSE(besov_norm_report(g, BesovParams{2.0, 1.0, 6}, cut).stale);
}

TEST(Besov, RejectsSmallExponent) {
  EXPECT_THROW(besov_norm(GridFunction(1, 64, 1.0), BesovParams{1.0, 0.0, 2}, build_cutoffs()), std::invalid_argument);
}

TEST(Hoelder, Constant) {
  const auto g = GridFunction::sample(1, 512, 4.0, [](double, double) { return cplx(-2.5); });
  EXPECT_NEAR(hoelder_norm(g, 0, 0.5), 2.5, 1e-12);
  EXPECT_NEAR(hoelder_norm(g, 2, 0.5), 2.5, 1e-10);
  const auto g2 = GridFunction::sample(2, 64, 4.0, [](double, double) { return cplx(1.5); });
  EXPECT_NEAR(hoelder_norm(g2, 1, 0.3), 1.5, 1e-10);
}

TEST(Hoelder, SinBumpSupNorms) {
  const double l = 4.0;
  const auto f = [&](double x) { return std::sin(2 * kPi * x / l) * bump(x); };
  const auto df = [&](double x) {
    if (std::abs(x) >= 1) return 0.0;
    const double db = bump(x) * (-2 * x / ((1 - x * x) * (1 - x * x)));
    return 2 * kPi / l * std::cos(2 * kPi * x / l) * bump(x) + std::sin(2 * kPi * x / l) * db;
  };
  double s0 = 0.0, s1 = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double x = -1 + 2.0 * i / 200000;
    s0 = std::max(s0, std::abs(f(x)));
    s1 = std::max(s1, std::abs(df(x)));
  }
  const auto g = GridFunction::sample(1, 4096, l, [&](double x, double) { return cplx(f(x)); });
  const auto rep = hoelder_norm_report(g, 1, 0.5);
  ASSERT_EQ(rep.sups.size(), 2u);
  EXPECT_NEAR(rep.sups[0], s0, 0.05 * s0);
  EXPECT_NEAR(rep.sups[1], s1, 0.05 * s1);
}

TEST(Hoelder, SeminormOfKink) {
  // |x|^{1/2} near 0 smoothed only by sampling: seminorm at s' = 0.5 stays O(1).
  const auto g = GridFunction::sample(1, 4096, 2.0, [](double x, double) {
    return cplx(std::sqrt(std::abs(x)) * std::exp(-4 * x * x));
  });
  const auto rep = hoelder_norm_report(g, 0, 0.5);
  EXPECT_GT(rep.seminorm, 0.5);
  EXPECT_LT(rep.seminorm, 3.0);
}

TEST(Hoelder, BesovEquivalenceOrderZero) {
  const auto cut = build_cutoffs();
  for (const auto& [name, fn] : hoelder_suite()) {
    const auto g = GridFunction::sample(1, 4096, 8.0, fn);
    for (double sp : {0.3, 0.5, 0.7}) {
      const double r = hoelder_norm(g, 0, sp) / besov_norm(g, BesovParams{INFINITY, sp, 6}, cut);
      EXPECT_GE(r, 1.0 / 8) << name;
      EXPECT_LE(r, 8.0) << name;
    }
  }
}

TEST(Hoelder, BesovEquivalenceOrderOne) {
  // The derivative of a band at 2^j cycles carries 2 pi 2^j, so the constant scales with 2 pi.
  const auto cut = build_cutoffs();
  for (const auto& [name, fn] : hoelder_suite()) {
    const auto g = GridFunction::sample(1, 4096, 8.0, fn);
    for (double sp : {0.3, 0.7}) {
      const double r = hoelder_norm(g, 1, sp) / besov_norm(g, BesovParams{INFINITY, 1 + sp, 6}, cut);
      EXPECT_GE(r, 1.0 / 8) << name;
      EXPECT_LE(r, 8.0 * 2 * kPi) << name;
    }
  }
}

TEST(Hoelder, TwoDimensionalGaussian) {
  const auto g = GridFunction::sample(2, 128, 4.0, [](double x, double y) { return cplx(std::exp(-kPi * (x * x + y * y))); });
  const auto rep = hoelder_norm_report(g, 1, 0.5);
  EXPECT_NEAR(rep.sups[0], 1.0, 1e-10);
  // sup |d_x g| + sup |d_y g| = 2 * 2 pi x e^{-pi x^2} at x = 1 / sqrt(2 pi).
  EXPECT_NEAR(rep.sups[1], 2 * std::sqrt(2 * kPi) * std::exp(-0.5), 0.03);
  EXPECT_THROW(hoelder_norm(g, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(hoelder_norm(g, -1, 0.5), std::invalid_argument);
}

TEST(Sigma2, BandBumpActiveBands) {
  const auto cut = build_cutoffs();
  const auto res = sigma2_norm(MultiplierSpec::band_bump(), BesovParams{2.0, 1.0, 12}, -4, 4, cut);
  for (const auto& b : res.bands) {
    if (std::abs(b.j) <= 1) EXPECT_GT(b.norm, 1e-3) << b.j;
    else EXPECT_EQ(b.norm, 0.0) << b.j;
  }
  EXPECT_TRUE(std::isfinite(res.value));
  EXPECT_TRUE(res.resolved);
}

TEST(Sigma2, LimitedDecaySlopes) {
  const auto cut = build_cutoffs();
  for (double a : {0.5, 1.0, 1.5})
    for (double r : {a - 0.3, a + 0.3}) {
      const auto res = sigma2_norm(MultiplierSpec::limited_decay(a), BesovParams{2.0, r, 12}, -3, 10, cut);
      std::vector<double> js, ls;
      for (const auto& b : res.bands) {
        if (b.j <= -1) EXPECT_EQ(b.norm, 0.0);
        if (b.j >= 2) {
          js.push_back(b.j);
          ls.push_back(std::log2(b.norm));
        }
        EXPECT_TRUE(b.resolved);
      }
      EXPECT_NEAR(detail::fit_line(js, ls).slope, r - a, 0.1) << "a=" << a << " r=" << r;
    }
}

TEST(Sigma2, FiniteIffSmoothnessBelowDecay) {
  const auto cut = build_cutoffs();
  for (double a : {0.5, 1.0, 1.5}) {
    EXPECT_FALSE(sigma2_norm(MultiplierSpec::limited_decay(a), BesovParams{2.0, a - 0.3, 15}, -1, 13, cut).stale) << a;
    EXPECT_TRUE(sigma2_norm(MultiplierSpec::limited_decay(a), BesovParams{2.0, a + 0.3, 15}, -1, 13, cut).stale) << a;
  }
}

TEST(Sigma2, ConstantMultiplierDiverges) {
  const auto cut = build_cutoffs();
  const auto res = sigma2_norm(MultiplierSpec::constant(1.0), BesovParams{2.0, 1.0, 12}, -3, 6, cut);
  for (const auto& b : res.bands) EXPECT_NEAR(b.norm, res.bands.front().norm, 1e-9 * b.norm);
  EXPECT_TRUE(res.stale);
}

TEST(Sigma2, ExactDyadicReindexing) {
  const auto cut = build_cutoffs();
  const auto m = MultiplierSpec::oscillatory(0.5, 1.0);
  const BesovParams p{2.0, 0.7, 12};
  const double base = sigma2_norm(m, p, -2, 6, cut).value;
  for (int k : {-2, 1, 3}) {
    const double v = sigma2_norm(m.dilated(std::ldexp(1.0, k)), p, -2 - k, 6 - k, cut).value;
    EXPECT_NEAR(v, base, 1e-12 * base) << k;
  }
}

TEST(Sigma2, DilationInvariance) {
  const auto cut = build_cutoffs();
  const auto m = MultiplierSpec::limited_decay(1.0);
  const BesovParams p{2.0, 0.5, 14};
  const auto rep = dilation_invariance_check(m, {0.73, 1.37, 2.0, 0.5}, p, -2, 12, cut);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.max_ratio, 8.0);
  for (auto [r, ratio] : rep.ratios) {
    EXPECT_GT(ratio, 1.0 / 8) << r;
    if (r == 2.0 || r == 0.5) EXPECT_NEAR(ratio, 1.0, 0.1) << r;
  }
}

TEST(Sigma2, TwoDimensionalBandBump) {
  const auto cut = build_cutoffs();
  const auto o = Sigma2Options::for_dim(2);
  const auto r2 = sigma2_norm(MultiplierSpec::band_bump(), BesovParams{2.0, 0.0, 12}, -2, 2, cut, o);
  EXPECT_TRUE(r2.resolved);
  // l = 0 norm in d = 2 against the weighted integral int |m|^2 |xi|^-2 dxi.
  const double ws = std::sqrt(sigma2_weighted_sobolev(MultiplierSpec::band_bump(), 0, -3, 3, 2));
  EXPECT_GE(r2.value / ws, 0.25);
  EXPECT_LE(r2.value / ws, 4.0);
}

TEST(WeightedSobolev, ZeroAndSingleTerm) {
  EXPECT_EQ(sigma2_weighted_sobolev(MultiplierSpec::zero(), 2, -3, 5), 0.0);
  const auto cut = build_cutoffs();
  // l = 0: 2 int_{1/2}^{2} psi(r)^2 r^-1 dr
  const double want = 2 * midpoint([&](double r) { return cut.psi(r) * cut.psi(r) / r; }, 0.5, 2.0, 400000);
  EXPECT_NEAR(sigma2_weighted_sobolev(MultiplierSpec::band_bump(), 0, -3, 3), want, 1e-9);
  const double want2 = 2 * kPi * midpoint([&](double r) { return cut.psi(r) * cut.psi(r) / r; }, 0.5, 2.0, 400000);
  EXPECT_NEAR(sigma2_weighted_sobolev(MultiplierSpec::band_bump(), 0, -3, 3, 2), want2, 1e-8);
}

TEST(WeightedSobolev, Validation) {
  const auto m = MultiplierSpec::band_bump();
  EXPECT_THROW(sigma2_weighted_sobolev(m, 2, -1, 2, 2), std::invalid_argument);
  EXPECT_THROW(sigma2_weighted_sobolev(m, 1, 2, 2), std::invalid_argument);
  EXPECT_THROW(sigma2_weighted_sobolev(m, 1, 0, 2, 3), std::invalid_argument);
}

TEST(WeightedSobolev, AgreesWithSigma2) {
  const auto cut = build_cutoffs();
  const MultiplierSpec suite[] = {MultiplierSpec::band_bump(), MultiplierSpec::limited_decay(1.5),
                                  MultiplierSpec::oscillatory(0.5, 1.5), MultiplierSpec::slow_decay(2.5, 0.5)};
  for (const auto& m : suite)
    for (int l : {0, 1, 2}) {
      const double s2 = sigma2_norm(m, BesovParams{2.0, double(l), 12}, -3, 8, cut).value;
      const double ws = std::sqrt(sigma2_weighted_sobolev(m, l, -4, 10));
      EXPECT_GE(s2 / ws, 0.25) << m.family_name() << " l=" << l;
      EXPECT_LE(s2 / ws, 4.0) << m.family_name() << " l=" << l;
    }
}
