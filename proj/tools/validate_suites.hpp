#pragma once
// Invariant suites behind `gpscat validate`: each check re-measures one of
// the library's cross-identities and reports the residual against its
// tolerance. Deterministic (fixed-seed draws only).

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gps/compare.hpp"
#include "gps/gauss_core.hpp"
#include "gps/herald.hpp"
#include "gps/oracle.hpp"
#include "gps/special_fn.hpp"
#include "gps/targets.hpp"

namespace gpstool {

struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool upper_bound = true;  // pass when measured < threshold (else measured > threshold)
  bool ok = false;
  std::string error_class;  // exception class when the check itself failed to run

  void judge() { ok = upper_bound ? (measured < threshold) : (measured > threshold); }
};

struct OracleParams {
  double level_db = 5.0;
  int n = 8;
  int n_max = 40;
};

inline void run_checked(std::vector<Check>& out, Check check, const std::function<void(Check&)>& body) {
  try {
    body(check);
    check.judge();
  } catch (const gps::TruncationError&) {
    check.error_class = "TruncationError";
    check.ok = false;
  } catch (const gps::NonConverged&) {
    check.error_class = "NonConverged";
    check.ok = false;
  } catch (const gps::NoSolutionError&) {
    check.error_class = "NoSolution";
    check.ok = false;
  } catch (const gps::ZeroProbability&) {
    check.error_class = "ZeroProbability";
    check.ok = false;
  } catch (const gps::DomainError&) {
    check.error_class = "DomainError";
    check.ok = false;
  }
  out.push_back(std::move(check));
}

inline std::vector<Check> suite_gauss() {
  using namespace gps;
  std::vector<Check> out;
  std::mt19937 rng(20240517);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  run_checked(out, Check{"gauss", "sigma * sigma_inverse = identity (400 draws)", 0, 1e-12}, [&](Check& c) {
    for (int i = 0; i < 400; ++i) {
      SqueezerPair sq(4.0 * unit(rng) - 2.0, 4.0 * unit(rng) - 2.0);
      BeamSplitter bs(unit(rng));
      SigmaMatrix s = build_sigma(sq, bs);
      SigmaMatrix si = build_sigma_inverse(sq, bs);
      double e11 = s.s11() * si.s11() + s.s12() * si.s12() - 1.0;
      double e12 = s.s11() * si.s12() + s.s12() * si.s22();
      double e22 = s.s12() * si.s12() + s.s22() * si.s22() - 1.0;
      c.measured = std::max({c.measured, std::abs(e11), std::abs(e12), std::abs(e22)});
    }
  });

  run_checked(out, Check{"gauss", "det/trace conservation (400 draws)", 0, 1e-12}, [&](Check& c) {
    for (int i = 0; i < 400; ++i) {
      SqueezerPair sq(4.0 * unit(rng) - 2.0, 4.0 * unit(rng) - 2.0);
      BeamSplitter bs(unit(rng));
      SigmaMatrix s = build_sigma(sq, bs);
      double det_ref = std::exp(2.0 * (sq.r1 + sq.r2));
      double tr_ref = std::exp(2.0 * sq.r1) + std::exp(2.0 * sq.r2);
      c.measured = std::max({c.measured, std::abs(s.det() - det_ref) / det_ref, std::abs(s.trace() - tr_ref) / tr_ref});
    }
  });

  run_checked(out, Check{"gauss", "solved R gives sigma11 = 1 (400 draws)", 0, 1e-12}, [&](Check& c) {
    for (int i = 0; i < 400; ++i) {
      SqueezerPair sq(2.0 * unit(rng) + 1e-3, -(2.0 * unit(rng) + 1e-3));
      SigmaMatrix s = build_sigma(sq, solve_reflectance(sq));
      c.measured = std::max(c.measured, std::abs(s.s11() - 1.0));
    }
  });

  run_checked(out, Check{"gauss", "output squeezing: matrix form vs input form (400 draws)", 0, 1e-12}, [&](Check& c) {
    for (int i = 0; i < 400; ++i) {
      SqueezerPair sq(2.0 * unit(rng) + 1e-3, -(2.0 * unit(rng) + 1e-3));
      SigmaMatrix s = build_sigma(sq, solve_reflectance(sq));
      double a = output_squeezing(s);
      double b = output_squeezing_from_inputs(sq);
      c.measured = std::max(c.measured, std::abs(a - b) / std::max(1e-30, std::abs(b)));
    }
  });

  run_checked(out, Check{"gauss", "p-domain sigma is an involution (400 draws)", 0, 1e-12}, [&](Check& c) {
    for (int i = 0; i < 400; ++i) {
      SqueezerPair sq(4.0 * unit(rng) - 2.0, 4.0 * unit(rng) - 2.0);
      SigmaMatrix s = build_sigma(sq, BeamSplitter(unit(rng)));
      SigmaMatrix back = p_domain_sigma(p_domain_sigma(s));
      c.measured = std::max({c.measured, std::abs(back.s11() - s.s11()), std::abs(back.s12() - s.s12()),
                             std::abs(back.s22() - s.s22())});
    }
  });

  return out;
}

inline std::vector<Check> suite_special() {
  using namespace gps;
  std::vector<Check> out;

  run_checked(out, Check{"special", "orthonormality of phi_n, n,m <= 20", 0, 1e-10}, [&](Check& c) {
    QuadratureGrid grid = QuadratureGrid::gauss_hermite(512);
    for (int n = 0; n <= 20; ++n)
      for (int m = n; m <= 20; ++m) {
        double v = integrate([&](double x) { return eval_phi(n, x) * eval_phi(m, x); }, grid);
        c.measured = std::max(c.measured, std::abs(v - (n == m ? 1.0 : 0.0)));
      }
  });

  run_checked(out, Check{"special", "vacuum convolution closed form vs numeric", 0, 1e-8}, [&](Check& c) {
    for (int n : {1, 5, 12, 20}) {
      QuadratureGrid grid = grid_for(n, 1.0);
      for (int i = 0; i <= 24; ++i) {
        double x = -6.0 + 0.5 * i;
        double numeric = integrate([&](double y) { return eval_phi(0, x - y) * eval_phi(n, y); }, grid);
        c.measured = std::max(c.measured, std::abs(numeric - vacuum_convolution(n, x)));
      }
    }
  });

  run_checked(out, Check{"special", "Hermite-Gaussian integral identity", 0, 1e-8}, [&](Check& c) {
    QuadratureGrid grid = QuadratureGrid::gauss_hermite(256);
    for (int n : {1, 4, 8, 12})
      for (double x : {0.5, 1.0, 2.0, 3.0}) {
        double numeric = integrate([&](double u) { return hermite_phys(n, u + x) * std::exp(-u * u); }, grid);
        double closed = hermite_gauss_integral(n, x);
        c.measured = std::max(c.measured, std::abs(numeric - closed) / std::abs(closed));
      }
  });

  run_checked(out, Check{"special", "odd integrand integrates to zero", 0, 1e-14}, [&](Check& c) {
    QuadratureGrid grid = QuadratureGrid::gauss_hermite(256);
    c.measured = std::abs(integrate([](double x) { return x * std::exp(-x * x); }, grid));
  });

  return out;
}

inline std::vector<Check> suite_targets() {
  using namespace gps;
  std::vector<Check> out;

  run_checked(out, Check{"targets", "self fidelity = 1", 0, 1e-10}, [&](Check& c) {
    RealWavefunction cat = cat_wavefunction_x(CatTarget(std::sqrt(10.0), 0, 0.3));
    c.measured = std::abs(fidelity(cat, cat) - 1.0);
  });

  run_checked(out, Check{"targets", "parity orthogonality", 0, 1e-12}, [&](Check& c) {
    RealWavefunction even = cat_wavefunction_x(CatTarget(2.0, 0, 0.2));
    RealWavefunction odd = cat_wavefunction_x(CatTarget(2.0, 1, 0.2));
    c.measured = fidelity(even, odd);
  });

  run_checked(out, Check{"targets", "F_n vs 1 - 0.03/n rule (n = 4, 10, 16)", 0, 0.01}, [&](Check& c) {
    for (int n : {4, 10, 16}) {
      double f = fidelity(approx_target_wavefunction(n, 1.0), cat_wavefunction_x(CatTarget(std::sqrt(double(n)), n, 0.0)));
      c.measured = std::max(c.measured, std::abs(f - (1.0 - 0.03 / n)));
    }
  });

  run_checked(out, Check{"targets", "x <-> p Fourier duality in modulus", 0, 1e-8}, [&](Check& c) {
    for (double alpha : {1.0, std::sqrt(10.0)})
      for (double r : {0.0, 0.576}) {
        CatTarget t(alpha, 0, r);
        RealWavefunction cx = cat_wavefunction_x(t);
        ComplexWavefunction cp = cat_wavefunction_p(t);
        QuadratureGrid grid = QuadratureGrid::gauss_hermite(768, cx.half_width);
        for (double p : {0.0, 0.7, 1.9, 3.1}) {
          std::complex<double> ft(0.0, 0.0);
          for (int i = 0; i < grid.size(); ++i) {
            double x = grid.nodes()[i];
            ft += grid.weights()[i] * cx(x) * std::exp(std::complex<double>(0.0, -p * x));
          }
          ft /= std::sqrt(2.0 * kPi);
          c.measured = std::max(c.measured, std::abs(std::abs(ft) - std::abs(cp(p))));
        }
      }
  });

  return out;
}

inline std::vector<Check> suite_herald() {
  using namespace gps;
  std::vector<Check> out;
  SqueezerPair sq(gps::db_to_r(5.0), -gps::db_to_r(5.0));
  SigmaMatrix sigma = build_sigma(sq, solve_reflectance(sq));

  run_checked(out, Check{"herald", "closed form vs general path at sigma11 = 1", 0, 1e-8}, [&](Check& c) {
    for (int n : {0, 3, 10}) {
      RealWavefunction gen = herald_unnormalized_general(sigma, n);
      for (int i = 0; i <= 40; ++i) {
        double x = -5.0 + 0.25 * i;
        c.measured = std::max(c.measured, std::abs(gen(x) - herald_wavefunction_closed(sigma, n, x)));
      }
    }
  });

  run_checked(out, Check{"herald", "normalized psi_10 integrates to 1", 0, 1e-8}, [&](Check& c) {
    HeraldOutcome out10 = herald(sigma, 10);
    QuadratureGrid grid = QuadratureGrid::gauss_hermite(512, out10.psi.half_width);
    double norm = integrate([&](double x) { double v = out10.psi(x); return v * v; }, grid);
    c.measured = std::abs(norm - 1.0);
  });

  run_checked(out, Check{"herald", "sum of P(n), n <= 80, deficit at 10 dB", 0, 1e-6}, [&](Check& c) {
    SqueezerPair sq10(gps::db_to_r(10.0), -gps::db_to_r(10.0));
    SigmaMatrix s10 = build_sigma(sq10, solve_reflectance(sq10));
    double total = 0.0;
    for (int n = 0; n <= 80; ++n) total += prob_closed(s10, n);
    c.measured = std::abs(1.0 - total);
  });

  run_checked(out, Check{"herald", "oscillation metric below 5% at sigma11 = 0.6", 0, 0.05}, [&](Check& c) {
    SigmaMatrix low = build_sigma(sq, solve_reflectance_for_sigma11(sq, 0.6));
    c.measured = oscillation_metric(herald(low, 10).psi);
  });

  run_checked(out, Check{"herald", "oscillation metric above 5% at sigma11 = 1.4", 0.0, 0.05, false}, [&](Check& c) {
    SigmaMatrix high = build_sigma(sq, solve_reflectance_for_sigma11(sq, 1.4));
    c.measured = oscillation_metric(herald(high, 10).psi);
  });

  return out;
}

inline std::vector<Check> suite_oracle(const OracleParams& p) {
  using namespace gps;
  std::vector<Check> out;
  double r = db_to_r(p.level_db);

  run_checked(out, Check{"oracle", "input Fock tail below 1e-6", 0, 1e-6}, [&](Check& c) {
    c.measured = squeezed_vacuum_fock(r, p.n_max).tail_mass();
  });

  run_checked(out, Check{"oracle", "beam splitter blocks unitary", 0, 1e-10}, [&](Check& c) {
    SqueezerPair sq(r, -r);
    BeamSplitterUnitary bs(solve_reflectance(sq).reflectance, std::min(2 * p.n_max, 80));
    for (int big_n = 0; big_n <= bs.total_max(); big_n += 7)
      c.measured = std::max(c.measured, bs.unitarity_residual(big_n));
  });

  run_checked(out, Check{"oracle", "x moments match sigma inverse", 0, 1e-8}, [&](Check& c) {
    SqueezerPair sq(r, -r);
    BeamSplitter bs = solve_reflectance(sq);
    TwoModeFockState state = TwoModeFockState::product(squeezed_vacuum_fock(r, p.n_max), squeezed_vacuum_fock(-r, p.n_max));
    BeamSplitterUnitary u(bs.reflectance, state.total_max());
    TwoModeFockState mixed = u.apply(state);
    SigmaMatrix si = build_sigma_inverse(sq, bs);
    c.measured = std::max({std::abs(mixed.x_moment_paper(0, 0) - si.s11()),
                           std::abs(mixed.x_moment_paper(1, 1) - si.s22()),
                           std::abs(mixed.x_moment_paper(0, 1) - si.s12())});
  });

  run_checked(out, Check{"oracle", "P(n): closed form vs Fock herald", 0, 1e-5}, [&](Check& c) {
    SqueezerPair sq(r, -r);
    BeamSplitter bs = solve_reflectance(sq);
    SigmaMatrix sigma = build_sigma(sq, bs);
    TwoModeFockState state = TwoModeFockState::product(squeezed_vacuum_fock(r, p.n_max), squeezed_vacuum_fock(-r, p.n_max));
    BeamSplitterUnitary u(bs.reflectance, state.total_max());
    TwoModeFockState mixed = u.apply(state);
    c.measured = std::abs(herald_fock(mixed, p.n).prob - prob_closed(sigma, p.n));
  });

  run_checked(out, Check{"oracle", "heralded-state fidelity across paths", 0, 1e-6}, [&](Check& c) {
    SqueezerPair sq(r, -r);
    BeamSplitter bs = solve_reflectance(sq);
    SigmaMatrix sigma = build_sigma(sq, bs);
    TwoModeFockState state = TwoModeFockState::product(squeezed_vacuum_fock(r, p.n_max), squeezed_vacuum_fock(-r, p.n_max));
    BeamSplitterUnitary u(bs.reflectance, state.total_max());
    TwoModeFockState mixed = u.apply(state);
    HeraldFockResult hf = herald_fock(mixed, p.n);
    double f = fidelity(fock_wavefunction(hf.heralded), herald(sigma, p.n).psi);
    c.measured = 1.0 - f;
  });

  return out;
}

inline std::vector<Check> suite_compare() {
  using namespace gps;
  std::vector<Check> out;

  run_checked(out, Check{"compare", "method ordering at 5 dB (n = 2..8)", 0, 0.5, true}, [&](Check& c) {
    double r = db_to_r(5.0);
    double violations = 0.0;
    for (int n = 2; n <= 8; ++n) {
      double pg = gps_success(r, n).probability;
      double ph = homodyne_method_success(r, n).probability;
      double pc = conventional_ps_success(r, n, 0.0, 40).probability;
      if (!(pg >= ph && ph >= pc)) violations += 1.0;
    }
    c.measured = violations;
  });

  run_checked(out, Check{"compare", "probabilities lie in [0, 1]", 0, 0.5, true}, [&](Check& c) {
    double bad = 0.0;
    for (double db : {1.0, 5.0, 10.0, 15.0})
      for (int n : {1, 5, 10}) {
        double r = db_to_r(db);
        for (double pr : {gps_success(r, n).probability, homodyne_method_success(r, n).probability}) {
          if (!(pr >= 0.0 && pr <= 1.0)) bad += 1.0;
        }
      }
    c.measured = bad;
  });

  return out;
}

inline std::vector<Check> run_suites(const std::string& filter, const OracleParams& params) {
  std::vector<Check> all;
  auto want = [&](const char* name) { return filter.empty() || filter == "all" || filter == name; };
  if (want("gauss")) {
    auto s = suite_gauss();
    all.insert(all.end(), s.begin(), s.end());
  }
  if (want("special")) {
    auto s = suite_special();
    all.insert(all.end(), s.begin(), s.end());
  }
  if (want("targets")) {
    auto s = suite_targets();
    all.insert(all.end(), s.begin(), s.end());
  }
  if (want("herald")) {
    auto s = suite_herald();
    all.insert(all.end(), s.begin(), s.end());
  }
  if (want("oracle")) {
    auto s = suite_oracle(params);
    all.insert(all.end(), s.begin(), s.end());
  }
  if (want("compare")) {
    auto s = suite_compare();
    all.insert(all.end(), s.begin(), s.end());
  }
  return all;
}

inline bool known_suite(const std::string& name) {
  return name.empty() || name == "all" || name == "gauss" || name == "special" || name == "targets" ||
         name == "herald" || name == "oracle" || name == "compare";
}

}  // namespace gpstool
