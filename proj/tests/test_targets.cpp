#include "gps/targets.hpp"

#include <cmath>
#include <complex>

#include "gtest/gtest.h"
#include "gps/gauss_core.hpp"
#include "gps/herald.hpp"

using namespace gps;

namespace {

double quad_norm_sq(const RealWavefunction& psi) {
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(768, psi.half_width);
  return integrate([&](double x) { double v = psi(x); return v * v; }, grid);
}

std::complex<double> numeric_ft(const RealWavefunction& psi, double p) {
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(1024, psi.half_width);
  std::complex<double> acc(0.0, 0.0);
  for (int i = 0; i < grid.size(); ++i) {
    double x = grid.nodes()[i];
    acc += grid.weights()[i] * psi(x) * std::exp(std::complex<double>(0.0, -p * x));
  }
  return acc / std::sqrt(2.0 * kPi);
}

}  // namespace

TEST(CatTarget, Validation) {
  EXPECT_THROW(CatTarget(0.0, 0, 0.0), DomainError);
  EXPECT_THROW(CatTarget(-1.0, 0, 0.0), DomainError);
  EXPECT_THROW(CatTarget(1.0, 0, 6.0), DomainError);
  EXPECT_TRUE(CatTarget(1.0, 3, 0.0).odd());
  EXPECT_FALSE(CatTarget(1.0, 10, 0.0).odd());
  EXPECT_TRUE(CatTarget(1.0, -1, 0.0).odd());
}

TEST(CatWavefunctionX, PeakNearCoherentAmplitude) {
  // alpha = 2, k = 0, r = 0: peaks at x = sqrt(2) alpha = 2.828
  RealWavefunction cat = cat_wavefunction_x(CatTarget(2.0, 0, 0.0));
  double peak_x = std::sqrt(2.0) * 2.0;
  EXPECT_GT(cat(peak_x), cat(peak_x + 0.3));
  EXPECT_GT(cat(peak_x), cat(peak_x - 0.3));
  double d = (cat(peak_x + 1e-4) - cat(peak_x - 1e-4)) / 2e-4;
  EXPECT_NEAR(d, 0.0, 1e-4);
}

TEST(CatWavefunctionX, ParityMatchesK) {
  RealWavefunction even = cat_wavefunction_x(CatTarget(std::sqrt(10.0), 10, 0.2));
  RealWavefunction odd = cat_wavefunction_x(CatTarget(std::sqrt(10.0), 7, 0.2));
  for (double x : {0.3, 1.1, 2.9}) {
    EXPECT_NEAR(even(-x), even(x), 1e-15);
    EXPECT_NEAR(odd(-x), -odd(x), 1e-15);
  }
  EXPECT_DOUBLE_EQ(odd(0.0), 0.0);
}

TEST(CatWavefunctionX, NormalizedByConstruction) {
  for (double alpha : {1.0, std::sqrt(10.0)})
    for (int k : {0, 1})
      for (double r : {0.0, 0.576, -0.576}) {
        RealWavefunction cat = cat_wavefunction_x(CatTarget(alpha, k, r));
        EXPECT_NEAR(quad_norm_sq(cat), 1.0, 1e-10) << "alpha=" << alpha << " k=" << k << " r=" << r;
      }
}

TEST(CatWavefunctionX, OddSmallAlphaStaysFiniteAndNormalized) {
  RealWavefunction cat = cat_wavefunction_x(CatTarget(1e-5, 1, 0.0));
  EXPECT_NEAR(quad_norm_sq(cat), 1.0, 1e-9);
  // Shape approaches x e^{-x^2/2} normalized: ratio to that form is constant.
  double c1 = cat(0.5) / (0.5 * std::exp(-0.125));
  double c2 = cat(1.5) / (1.5 * std::exp(-1.125));
  EXPECT_NEAR(c1 / c2, 1.0, 1e-6);
}

TEST(CatWavefunctionX, DegenerateOddCatThrows) {
  EXPECT_THROW(cat_wavefunction_x(CatTarget(1e-13, 1, 0.0)), DegenerateState);
}

TEST(CatWavefunctionP, ParityPoints) {
  ComplexWavefunction even = cat_wavefunction_p(CatTarget(2.0, 0, 0.3));
  ComplexWavefunction odd = cat_wavefunction_p(CatTarget(2.0, 1, 0.3));
  EXPECT_GT(std::abs(even(0.0)), std::abs(even(0.4)));
  EXPECT_NEAR(std::abs(odd(0.0)), 0.0, 1e-15);
}

TEST(CatWavefunctionP, ModulusMatchesNumericFourierTransform) {
  double worst = 0.0;
  for (double alpha : {1.0, std::sqrt(5.0), std::sqrt(10.0), std::sqrt(20.0)})
    for (double r : {0.0, 0.576, -0.576})
      for (int k : {0, 1}) {
        CatTarget t(alpha, k, r);
        RealWavefunction cx = cat_wavefunction_x(t);
        ComplexWavefunction cp = cat_wavefunction_p(t);
        for (double p : {0.0, 0.5, 1.3, 2.4, 4.0}) {
          worst = std::max(worst, std::abs(std::abs(numeric_ft(cx, p)) - std::abs(cp(p))));
        }
      }
  EXPECT_LT(worst, 1e-8);
}

TEST(CatWavefunctionP, NormalizedInP) {
  ComplexWavefunction cp = cat_wavefunction_p(CatTarget(std::sqrt(10.0), 0, 0.576));
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(768, cp.half_width);
  double norm = integrate([&](double p) { return std::norm(cp(p)); }, grid);
  EXPECT_NEAR(norm, 1.0, 1e-10);
}

TEST(ApproxTarget, GaussianAtZeroPhotons) {
  RealWavefunction t = approx_target_wavefunction(0, 1.7);
  EXPECT_NEAR(quad_norm_sq(t), 1.0, 1e-12);
  // |psi|^2 is a Gaussian with exponent s^2 x^2 / 2.
  double ratio = std::log(t(0.0) / t(1.0));
  EXPECT_NEAR(ratio, 0.25 * 1.7 * 1.7, 1e-10);
}

TEST(ApproxTarget, NormalizedForLargeN) {
  for (int n : {1, 5, 10, 20, 40})
    EXPECT_NEAR(quad_norm_sq(approx_target_wavefunction(n, 1.3)), 1.0, 1e-10) << "n=" << n;
}

TEST(ApproxTarget, MatchesHeraldClosedShape) {
  // Same functional form as the closed-form heralded state when s^2 = |sigma| + sigma22.
  SqueezerPair sq(db_to_r(5.0), -db_to_r(5.0));
  SigmaMatrix sigma = build_sigma(sq, solve_reflectance(sq));
  double s = std::sqrt(sigma.det() + sigma.s22());
  RealWavefunction t = approx_target_wavefunction(10, s);
  HeraldOutcome out = herald(sigma, 10);
  for (double x : {0.4, 1.0, 2.0, 3.1}) {
    EXPECT_NEAR(out.psi(x) / t(x), 1.0, 1e-10);
  }
}

TEST(Fidelity, IdenticalAndOrthogonal) {
  RealWavefunction cat = cat_wavefunction_x(CatTarget(2.0, 0, 0.1));
  EXPECT_NEAR(fidelity(cat, cat), 1.0, 1e-10);
  RealWavefunction odd = cat_wavefunction_x(CatTarget(2.0, 1, 0.1));
  EXPECT_NEAR(fidelity(cat, odd), 0.0, 1e-12);
}

TEST(Fidelity, SymmetricAndSignInvariant) {
  RealWavefunction a = approx_target_wavefunction(4, 1.2);
  RealWavefunction b = cat_wavefunction_x(CatTarget(2.0, 4, std::log(1.2)));
  EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-13);
  RealWavefunction neg_a{[a](double x) { return -a(x); }, a.half_width};
  EXPECT_NEAR(fidelity(neg_a, b), fidelity(a, b), 1e-13);
}

TEST(Fidelity, ParityOrthogonalityAcrossParameters) {
  for (double alpha : {1.0, 2.5})
    for (double r : {-0.3, 0.0, 0.4}) {
      RealWavefunction even = cat_wavefunction_x(CatTarget(alpha, 0, r));
      RealWavefunction odd = cat_wavefunction_x(CatTarget(alpha, 1, r));
      EXPECT_LT(fidelity(even, odd), 1e-12);
    }
}

TEST(Fidelity, ApproxRuleOverWindow) {
  // |F_n - (1 - 0.03/n)| < 0.01 for n in [3, 20]; F_n is squeezing-invariant,
  // so evaluate at s = 1.
  for (int n = 3; n <= 20; ++n) {
    double f = fidelity(approx_target_wavefunction(n, 1.0),
                        cat_wavefunction_x(CatTarget(std::sqrt(double(n)), n, 0.0)));
    EXPECT_NEAR(f, 1.0 - 0.03 / n, 0.01) << "n=" << n;
  }
}

TEST(Fidelity, SqueezingInvariance) {
  // Squeezing both states by the same r preserves the overlap.
  double f1 = fidelity(approx_target_wavefunction(6, 1.0), cat_wavefunction_x(CatTarget(std::sqrt(6.0), 6, 0.0)));
  double f2 = fidelity(approx_target_wavefunction(6, std::exp(0.6)),
                       cat_wavefunction_x(CatTarget(std::sqrt(6.0), 6, 0.6)));
  EXPECT_NEAR(f1, f2, 1e-9);
}

TEST(BestCatFit, RecoversExactCat) {
  CatTarget truth(std::sqrt(8.0), 8, 0.35);
  CatFit fit = best_cat_fit(cat_wavefunction_x(truth), 8);
  EXPECT_NEAR(fit.alpha, truth.alpha, 0.02);
  EXPECT_NEAR(fit.r, truth.r, 0.02);
  EXPECT_GT(fit.fidelity, 1.0 - 1e-5);
}

TEST(BestCatFit, HeraldedTenPhotonState) {
  SqueezerPair sq(db_to_r(5.0), -db_to_r(5.0));
  SigmaMatrix sigma = build_sigma(sq, solve_reflectance(sq));
  HeraldOutcome out = herald(sigma, 10);
  CatFit fit = best_cat_fit(out.psi, 10);
  EXPECT_NEAR(fit.alpha, std::sqrt(10.0), 0.03 * std::sqrt(10.0));
  // Never below the canonical point (alpha = sqrt(n), r = r_c).
  double canonical = fidelity(out.psi, cat_wavefunction_x(CatTarget(std::sqrt(10.0), 10, out.r_c)));
  EXPECT_GE(fit.fidelity, canonical - 1e-9);
}

TEST(BestCatFit, TenDbFourPhotonQuality) {
  SqueezerPair sq(db_to_r(10.0), -db_to_r(10.0));
  SigmaMatrix sigma = build_sigma(sq, solve_reflectance(sq));
  CatFit fit = best_cat_fit(herald(sigma, 4).psi, 4);
  EXPECT_GE(fit.fidelity, 1.0 - 0.03 / 4 - 0.01);
}

TEST(BestCatFit, RejectsInvalidHint) {
  RealWavefunction cat = cat_wavefunction_x(CatTarget(2.0, 0, 0.0));
  EXPECT_THROW(best_cat_fit(cat, 0), DomainError);
}
