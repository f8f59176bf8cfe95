#pragma once
// Reference states: squeezed Schrodinger-cat wavefunctions in x and p, the
// x^n Gaussian approximate target, fidelity, and a best-cat fit search.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "gps/errors.hpp"
#include "gps/gauss_core.hpp"
#include "gps/special_fn.hpp"
#include "gps/wavefunction.hpp"

namespace gps {

/// Squeezed cat S(r)|Cat_{alpha,k}>: amplitude alpha > 0, parity index k
/// (only k mod 2 matters), squeezing parameter r of the applied S(r).
struct CatTarget {
  double alpha;
  int k;
  double r;
  CatTarget(double alpha_in, int k_in, double r_in) : alpha(alpha_in), k(k_in), r(r_in) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("CatTarget: alpha must be positive");
    if (!std::isfinite(r) || std::abs(r) > kMaxSqueezing) throw DomainError("CatTarget: |r| exceeds the sanity bound");
  }
  bool odd() const { return (k % 2 + 2) % 2 == 1; }
};

namespace detail {

// Unnormalized cat amplitude e^{-s^2(x-c)^2/2} + (-1)^k e^{-s^2(x+c)^2/2},
// c = sqrt(2) alpha / s. The odd branch is evaluated through the factored
// form 2 e^{-s^2(x^2+c^2)/2} sinh(s^2 c x), an exact rewrite that avoids the
// catastrophic cancellation of the direct difference at small alpha.
inline double cat_x_unnormalized(double s, double c, bool odd, double x) {
  double t = s * s * c * x;
  if (odd) {
    if (std::abs(t) < 35.0) return 2.0 * std::exp(-0.5 * s * s * (x * x + c * c)) * std::sinh(t);
    return std::exp(-0.5 * s * s * (x - c) * (x - c)) - std::exp(-0.5 * s * s * (x + c) * (x + c));
  }
  return std::exp(-0.5 * s * s * (x - c) * (x - c)) + std::exp(-0.5 * s * s * (x + c) * (x + c));
}

// Squared norm of the unnormalized cat: (2 sqrt(pi)/s) (1 +/- e^{-2 alpha^2}),
// with the odd branch through expm1 so small alpha keeps full precision.
inline double cat_x_norm_sq(double s, double alpha, bool odd) {
  double par = odd ? -std::expm1(-2.0 * alpha * alpha) : 1.0 + std::exp(-2.0 * alpha * alpha);
  return 2.0 * std::sqrt(kPi) / s * par;
}

}  // namespace detail

/// Normalized x-representation wavefunction of a squeezed cat.
inline RealWavefunction cat_wavefunction_x(const CatTarget& t) {
  double s = std::exp(t.r);
  double c = std::sqrt(2.0) * t.alpha / s;
  bool odd = t.odd();
  double norm_sq = detail::cat_x_norm_sq(s, t.alpha, odd);
  if (odd && std::sqrt(norm_sq) < 1e-12)
    throw DegenerateState("cat_wavefunction_x: odd cat norm vanishes at this alpha");
  double inv_norm = 1.0 / std::sqrt(norm_sq);
  RealWavefunction psi;
  psi.eval = [s, c, odd, inv_norm](double x) { return inv_norm * detail::cat_x_unnormalized(s, c, odd, x); };
  psi.half_width = std::max(8.0, c + 8.0 / s);
  return psi;
}

inline double cat_wavefunction_x(const CatTarget& t, double x) { return cat_wavefunction_x(t)(x); }

/// Normalized p-representation wavefunction: cos (even) or i sin (odd)
/// oscillation under the Gaussian envelope e^{-p^2/(2 s^2)}.
inline ComplexWavefunction cat_wavefunction_p(const CatTarget& t) {
  double s = std::exp(t.r);
  double b = std::sqrt(2.0) * t.alpha / s;
  bool odd = t.odd();
  double par = odd ? -std::expm1(-2.0 * t.alpha * t.alpha) : 1.0 + std::exp(-2.0 * t.alpha * t.alpha);
  double norm_sq = 2.0 * std::sqrt(kPi) * s * par;
  if (odd && std::sqrt(norm_sq) < 1e-12)
    throw DegenerateState("cat_wavefunction_p: odd cat norm vanishes at this alpha");
  double inv_norm = 2.0 / std::sqrt(norm_sq);
  ComplexWavefunction psi;
  psi.eval = [s, b, odd, inv_norm](double p) -> std::complex<double> {
    double env = std::exp(-0.5 * p * p / (s * s));
    if (odd) return std::complex<double>(0.0, inv_norm * std::sin(b * p) * env);
    return std::complex<double>(inv_norm * std::cos(b * p) * env, 0.0);
  };
  psi.half_width = std::max(8.0, 5.0 * s);
  return psi;
}

inline std::complex<double> cat_wavefunction_p(const CatTarget& t, double p) { return cat_wavefunction_p(t)(p); }

/// Normalized x^n e^{-s^2 x^2 / 4}, the closed-form approximant of the
/// squeezed cat with alpha = sqrt(n). Normalization in log space.
inline RealWavefunction approx_target_wavefunction(int n, double s) {
  if (n < 0) throw DomainError("approx_target_wavefunction: n must be non-negative");
  if (!(s > 0.0)) throw DomainError("approx_target_wavefunction: s must be positive");
  // ln of int x^{2n} e^{-s^2 x^2 / 2} dx
  double ln_norm_sq = log_double_factorial(2 * n - 1) - 2.0 * n * std::log(s) + 0.5 * std::log(2.0 * kPi) - std::log(s);
  RealWavefunction psi;
  psi.eval = [n, s, ln_norm_sq](double x) {
    if (n == 0) return std::exp(-0.25 * s * s * x * x - 0.5 * ln_norm_sq);
    if (x == 0.0) return 0.0;
    double sign = (x < 0.0 && (n & 1)) ? -1.0 : 1.0;
    return sign * std::exp(n * std::log(std::abs(x)) - 0.25 * s * s * x * x - 0.5 * ln_norm_sq);
  };
  psi.half_width = std::max(8.0, (std::sqrt(2.0 * n + 1.0) + 8.0) / s);
  return psi;
}

inline double approx_target_wavefunction(int n, double s, double x) { return approx_target_wavefunction(n, s)(x); }

/// Pure-state fidelity F = |int psi_a psi_b dx|^2 of two normalized real
/// wavefunctions. Symmetric; invariant under a global sign flip.
inline double fidelity(const RealWavefunction& a, const RealWavefunction& b) {
  double w = std::max(a.half_width, b.half_width);
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(512, w);
  double overlap = integrate_checked([&](double x) { return a(x) * b(x); }, grid, 1e-9);
  double f = overlap * overlap;
  return f > 1.0 ? 1.0 : (f < 0.0 ? 0.0 : f);
}

struct CatFit {
  double alpha;
  double r;
  double fidelity;
};

namespace detail {

template <typename F>
double golden_max(F&& f, double lo, double hi, int iters) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Maximize fidelity of psi against squeezed cats over (alpha, r):
/// 61x61 grid on alpha in [0.5, 1.5] sqrt(n), r centered on the moment
/// estimate s_est^2 = (2n+1)/<x^2>, then golden-section refinement per axis.
/// The grid center (sqrt(n), r_est) is always evaluated, so the returned
/// fidelity is >= the fidelity at that canonical point.
inline CatFit best_cat_fit(const RealWavefunction& psi, int n_hint) {
  if (n_hint < 1) throw DomainError("best_cat_fit: n_hint must be >= 1");
  QuadratureGrid moment_grid = QuadratureGrid::gauss_hermite(512, psi.half_width);
  double m2 = integrate([&](double x) { double v = psi(x); return x * x * v * v; }, moment_grid);
  if (!(m2 > 0.0)) throw DomainError("best_cat_fit: psi has no second moment");
  double r_center = std::log(std::sqrt((2.0 * n_hint + 1.0) / m2));

  double root_n = std::sqrt(static_cast<double>(n_hint));
  double alpha_lo = 0.5 * root_n, alpha_hi = 1.5 * root_n;
  double r_lo = r_center - 0.5, r_hi = r_center + 0.5;
  bool odd = (n_hint % 2) == 1;

  // One fixed grid for all overlaps; psi gets sampled once.
  double s_min = std::exp(r_lo);
  double cat_hw = std::max(8.0, std::sqrt(2.0) * alpha_hi / s_min + 8.0 / s_min);
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(512, std::max(psi.half_width, cat_hw));
  std::vector<double> psi_vals(grid.size());
  for (int i = 0; i < grid.size(); ++i) psi_vals[i] = psi(grid.nodes()[i]);

  auto overlap_f = [&](double alpha, double r) {
    double s = std::exp(r);
    double c = std::sqrt(2.0) * alpha / s;
    double inv_norm = 1.0 / std::sqrt(detail::cat_x_norm_sq(s, alpha, odd));
    double acc = 0.0;
    for (int i = 0; i < grid.size(); ++i)
      acc += grid.weights()[i] * psi_vals[i] * detail::cat_x_unnormalized(s, c, odd, grid.nodes()[i]);
    double f = acc * inv_norm;
    return f * f;
  };

  constexpr int kGrid = 61;
  double best_a = root_n, best_r = r_center, best_f = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    double alpha = alpha_lo + (alpha_hi - alpha_lo) * i / (kGrid - 1);
    for (int j = 0; j < kGrid; ++j) {
      double r = r_lo + (r_hi - r_lo) * j / (kGrid - 1);
      double f = overlap_f(alpha, r);
      if (f > best_f) {
        best_f = f;
        best_a = alpha;
        best_r = r;
      }
    }
  }

  double da = (alpha_hi - alpha_lo) / (kGrid - 1);
  double dr = (r_hi - r_lo) / (kGrid - 1);
  double ref_a = best_a, ref_r = best_r;
  for (int round = 0; round < 3; ++round) {
    ref_a = detail::golden_max([&](double a) { return overlap_f(a, ref_r); },
                               std::max(alpha_lo, ref_a - da), std::min(alpha_hi, ref_a + da), 40);
    ref_r = detail::golden_max([&](double r) { return overlap_f(ref_a, r); },
                               std::max(r_lo, ref_r - dr), std::min(r_hi, ref_r + dr), 40);
  }
  double ref_f = overlap_f(ref_a, ref_r);
  if (ref_f >= best_f) {  // refinement never regresses below the grid optimum
    best_a = ref_a;
    best_r = ref_r;
    best_f = ref_f;
  }
  return CatFit{best_a, best_r, best_f > 1.0 ? 1.0 : best_f};
}

}  // namespace gps
