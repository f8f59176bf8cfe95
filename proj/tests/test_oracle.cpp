#include "gps/oracle.hpp"

#include <cmath>
#include <complex>

#include "gtest/gtest.h"
#include "gps/gauss_core.hpp"
#include "gps/herald.hpp"
#include "gps/targets.hpp"

using namespace gps;

namespace {

// Build the post-beam-splitter two-mode state for symmetric GPS inputs.
TwoModeFockState gps_state(double level_db, int n_max, BeamSplitter* bs_out = nullptr) {
  double r = db_to_r(level_db);
  SqueezerPair sq(r, -r);
  BeamSplitter bs = solve_reflectance(sq);
  if (bs_out) *bs_out = bs;
  TwoModeFockState in = TwoModeFockState::product(squeezed_vacuum_fock(r, n_max), squeezed_vacuum_fock(-r, n_max));
  BeamSplitterUnitary u(bs.reflectance, in.total_max());
  return u.apply(in);
}

}  // namespace

TEST(SqueezedVacuumFock, VacuumAtZeroSqueezing) {
  FockState s = squeezed_vacuum_fock(0.0, 10);
  EXPECT_DOUBLE_EQ(std::abs(s.amps()[0]), 1.0);
  for (int n = 1; n <= 10; ++n) EXPECT_DOUBLE_EQ(std::abs(s.amps()[n]), 0.0);
  EXPECT_DOUBLE_EQ(s.tail_mass(), 0.0);
}

TEST(SqueezedVacuumFock, OddAmplitudesExactlyZero) {
  FockState s = squeezed_vacuum_fock(0.8, 41);
  for (int n = 1; n <= 41; n += 2) EXPECT_DOUBLE_EQ(std::abs(s.amps()[n]), 0.0);
}

TEST(SqueezedVacuumFock, TailAndWavefunctionOverlapAtFiveDb) {
  FockState s = squeezed_vacuum_fock(0.576, 60);
  EXPECT_LT(s.tail_mass(), 1e-10);
  // Overlap with e^{r/2} phi_0(e^r x) pins the sign convention.
  double r = 0.576;
  RealWavefunction truth{[r](double x) { return std::exp(0.5 * r) * eval_phi(0, std::exp(r) * x); }, 8.0};
  RealWavefunction fock = fock_wavefunction(s);
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(512, fock.half_width);
  double overlap = integrate([&](double x) { return truth(x) * fock(x); }, grid);
  EXPECT_GE(overlap, 1.0 - 1e-8);
  // Sup-norm agreement of the reconstructed wavefunction.
  double worst = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.1) worst = std::max(worst, std::abs(truth(x) - fock(x)));
  EXPECT_LT(worst, 1e-7);
}

TEST(SqueezedVacuumFock, MeanPhotonNumberMatchesSinhSquared) {
  FockState s = squeezed_vacuum_fock(1.0, 60);
  EXPECT_NEAR(s.mean_photon_number(), std::sinh(1.0) * std::sinh(1.0), 1e-6);
}

TEST(SqueezedVacuumFock, TruncationAndDomainErrors) {
  EXPECT_THROW(squeezed_vacuum_fock(2.0, 20), TruncationError);
  EXPECT_THROW(squeezed_vacuum_fock(3.0, 200), DomainError);
}

TEST(BeamSplitterUnitary, FullReflectionIsIdentity) {
  BeamSplitterUnitary u(1.0, 12);
  for (int n : {0, 1, 5, 12}) {
    EXPECT_NEAR((u.block(n) - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  }
}

TEST(BeamSplitterUnitary, BalancedSinglePhoton) {
  BeamSplitterUnitary u(0.5, 4);
  TwoModeFockState in = TwoModeFockState::product(
      FockState(std::vector<std::complex<double>>{0.0, 1.0}), FockState::vacuum(1));
  TwoModeFockState out = u.apply(in);
  // |1,0> -> equal-weight superposition of |1,0> and |0,1> (fixed sign convention).
  EXPECT_NEAR(std::norm(out.block(1)[1]), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(out.block(1)[0]), 0.5, 1e-12);
}

TEST(BeamSplitterUnitary, BlocksUnitary) {
  for (double reflectance : {0.0, 0.05, 0.24, 0.5, 1.0}) {
    BeamSplitterUnitary u(reflectance, 60);
    double worst = 0.0;
    for (int n = 0; n <= 60; ++n) worst = std::max(worst, u.unitarity_residual(n));
    EXPECT_LT(worst, 1e-10) << "R=" << reflectance;
  }
}

TEST(BeamSplitterUnitary, QuadratureMomentsMatchSigmaInverse) {
  // After mixing the squeezed pair, paper-normalized x moments equal sigma^{-1}.
  double r = 0.576;
  SqueezerPair sq(r, -r);
  BeamSplitter bs(0.2403);
  TwoModeFockState in = TwoModeFockState::product(squeezed_vacuum_fock(r, 50), squeezed_vacuum_fock(-r, 50));
  BeamSplitterUnitary u(bs.reflectance, in.total_max());
  TwoModeFockState out = u.apply(in);
  SigmaMatrix si = build_sigma_inverse(sq, bs);
  EXPECT_NEAR(out.x_moment_paper(0, 0), si.s11(), 1e-8);
  EXPECT_NEAR(out.x_moment_paper(1, 1), si.s22(), 1e-8);
  EXPECT_NEAR(out.x_moment_paper(0, 1), si.s12(), 1e-8);
}

TEST(BeamSplitterUnitary, PhotonNumberBlockStructureExact) {
  // Block norms are preserved individually: total photon number commutes.
  TwoModeFockState in = TwoModeFockState::product(squeezed_vacuum_fock(0.7, 30), squeezed_vacuum_fock(-0.7, 30));
  BeamSplitterUnitary u(0.3, in.total_max());
  TwoModeFockState out = u.apply(in);
  for (int total = 0; total <= in.total_max(); ++total) {
    double before = 0.0, after = 0.0;
    for (const auto& c : in.block(total)) before += std::norm(c);
    for (const auto& c : out.block(total)) after += std::norm(c);
    EXPECT_NEAR(before, after, 1e-13);
  }
}

TEST(HeraldFock, UncorrelatedHeraldLeavesStateUntouched) {
  // Heralding 0 photons on |0> x psi returns psi (up to the truncated tail,
  // which re-enters through the normalization).
  FockState psi = squeezed_vacuum_fock(0.5, 20);
  TwoModeFockState st = TwoModeFockState::product(FockState::vacuum(0), psi);
  HeraldFockResult res = herald_fock(st, 0);
  double mass = psi.norm_sq();
  EXPECT_NEAR(res.prob, mass, 1e-14);
  for (int m = 0; m <= 20; ++m)
    EXPECT_NEAR(std::abs(res.heralded.amps()[m] - psi.amps()[m] / std::sqrt(mass)), 0.0, 1e-14);
}

TEST(HeraldFock, GpsProbabilityMatchesClosedForm) {
  BeamSplitter bs(0.0);
  TwoModeFockState mixed = gps_state(5.0, 60, &bs);
  SqueezerPair sq(db_to_r(5.0), -db_to_r(5.0));
  SigmaMatrix sigma = build_sigma(sq, bs);
  EXPECT_NEAR(herald_fock(mixed, 10).prob, prob_closed(sigma, 10), 1e-5);
}

TEST(HeraldFock, CompletenessOnTruncatedSpace) {
  TwoModeFockState mixed = gps_state(5.0, 40);
  double total = 0.0;
  for (int n = 0; n <= mixed.total_max(); ++n) {
    double p = 0.0;
    for (int m = 0; n + m <= mixed.total_max(); ++m) p += std::norm(mixed.block(n + m)[n]);
    total += p;
  }
  EXPECT_NEAR(total, 1.0 - mixed.tail_mass(), 1e-8);
}

TEST(HeraldFock, ParitySupportSelection) {
  // Two squeezed inputs populate even totals only; heralding n leaves mode 2
  // supported on the same parity as n.
  TwoModeFockState mixed = gps_state(5.0, 40);
  for (int n : {3, 10}) {
    HeraldFockResult res = herald_fock(mixed, n);
    for (int m = 0; m <= res.heralded.n_max(); ++m) {
      if ((m + n) % 2 == 1) EXPECT_DOUBLE_EQ(std::abs(res.heralded.amps()[m]), 0.0);
    }
  }
}

TEST(HeraldFock, ZeroProbabilityThrows) {
  // Squeezed vacuum has even support only; heralding n = 1 before any mixing
  // has exactly zero probability.
  TwoModeFockState st = TwoModeFockState::product(squeezed_vacuum_fock(0.5, 20), FockState::vacuum(0));
  EXPECT_THROW(herald_fock(st, 1), ZeroProbability);
}

TEST(FockToWavefunction, VacuumIsPhi0) {
  FockState vac = FockState::vacuum(5);
  for (double x : {-1.0, 0.0, 0.4, 2.0}) EXPECT_NEAR(fock_to_wavefunction(vac, x), eval_phi(0, x), 1e-15);
}

TEST(FockToWavefunction, HeraldedStateMatchesAnalyticPath) {
  BeamSplitter bs(0.0);
  TwoModeFockState mixed = gps_state(5.0, 60, &bs);
  SqueezerPair sq(db_to_r(5.0), -db_to_r(5.0));
  SigmaMatrix sigma = build_sigma(sq, bs);
  HeraldFockResult res = herald_fock(mixed, 10);
  double f = fidelity(fock_wavefunction(res.heralded), herald(sigma, 10).psi);
  EXPECT_GE(f, 1.0 - 1e-6);
}

TEST(ConventionalPs, NoTapNoHerald) {
  EXPECT_NEAR(conventional_ps_probability(1.0, 0.0, 0, 60), 1.0, 1e-8);
  // Exact zeros up to squared roundoff leakage of the block exponential.
  for (int n : {1, 2, 5}) EXPECT_NEAR(conventional_ps_probability(1.0, 0.0, n, 60), 0.0, 1e-25);
}

TEST(ConventionalPs, BothParitiesPopulated) {
  for (int n : {1, 2, 3, 4})
    EXPECT_GT(conventional_ps_probability(db_to_r(10.0), 0.05, n, 60), 0.0);
}

TEST(ConventionalPs, RateOrderBound) {
  // P(4)/P(2) = O(R^2); assert the spec's coarse bound P(4)/P(2) < 4R.
  double r10 = db_to_r(10.0);
  double p2 = conventional_ps_probability(r10, 0.05, 2, 60);
  double p4 = conventional_ps_probability(r10, 0.05, 4, 60);
  EXPECT_LT(p4 / p2, 4.0 * 0.05);
}

TEST(ConventionalPs, GpsBeatsConventionalByThreeOrders) {
  double r10 = db_to_r(10.0);
  SqueezerPair sq(r10, -r10);
  SigmaMatrix sigma = build_sigma(sq, solve_reflectance(sq));
  double gps_p = prob_closed(sigma, 10);
  double conv_p = conventional_ps_probability(r10, 0.05, 10, 60);
  EXPECT_GE(gps_p / conv_p, 1e3);
}

TEST(ConventionalPs, GeneralPathAgreesWithOracle) {
  // r2 = 0, R = 0.05 at 10 dB: the quadrature general path and the Fock
  // oracle agree on P(n) for n <= 8.
  double r10 = db_to_r(10.0);
  SigmaMatrix sigma = build_sigma(SqueezerPair(r10, 0.0), BeamSplitter(0.05));
  for (int n = 0; n <= 8; ++n) {
    double oracle_p = conventional_ps_probability(r10, 0.05, n, 60);
    EXPECT_NEAR(prob_general(sigma, n), oracle_p, 1e-5) << "n=" << n;
  }
}

TEST(Truncation, ProbabilitiesStableUnderNmaxIncrease) {
  // 8 dB: the largest round level at which N_max = 40 still meets the 1e-6
  // input-tail bound (10 dB needs N_max ~ 50).
  double r = db_to_r(8.0);
  SqueezerPair sq(r, -r);
  BeamSplitter bs = solve_reflectance(sq);
  auto probs_at = [&](int n_max) {
    TwoModeFockState in = TwoModeFockState::product(squeezed_vacuum_fock(r, n_max), squeezed_vacuum_fock(-r, n_max));
    BeamSplitterUnitary u(bs.reflectance, in.total_max());
    TwoModeFockState mixed = u.apply(in);
    std::vector<double> probs;
    for (int n = 0; n <= 10; ++n) probs.push_back(herald_fock(mixed, n).prob);
    return probs;
  };
  std::vector<double> p40 = probs_at(40), p60 = probs_at(60);
  for (int n = 0; n <= 10; ++n) EXPECT_NEAR(p40[n], p60[n], 1e-7) << "n=" << n;
}

TEST(FockState, NormInvariantEnforced) {
  std::vector<std::complex<double>> too_big{1.0, 0.5};
  EXPECT_THROW(FockState(std::move(too_big)), DomainError);
}
