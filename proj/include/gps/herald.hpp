#pragma once
// Heralded-state computation: closed-form and general-path wavefunctions,
// success probabilities, the p-domain transform, and waveform diagnostics.

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "gps/errors.hpp"
#include "gps/gauss_core.hpp"
#include "gps/special_fn.hpp"
#include "gps/wavefunction.hpp"

namespace gps {

// The closed forms hold at sigma11 = 1; tested to this tolerance.
inline constexpr double kGpsConditionTol = 1e-9;
// General-path callers this close to the condition get an advisory warning.
inline constexpr double kGpsWarningBand = 1e-6;

struct HeraldOutcome {
  int n = 0;
  double prob = 0.0;
  // Output squeezing r_c; NaN when sigma11 != 1 (undefined off the GPS point).
  double r_c = std::numeric_limits<double>::quiet_NaN();
  RealWavefunction psi;
  std::vector<std::string> warnings;
};

namespace detail {

inline void require_gps_condition(const SigmaMatrix& sigma, const char* who) {
  if (std::abs(sigma.s11() - 1.0) >= kGpsConditionTol)
    throw ConditionViolated(std::string(who) + ": closed form requires sigma11 = 1 within 1e-9");
}

}  // namespace detail

/// Unnormalized heralded amplitude at the GPS point,
///   Psi_n(x2) = (|sigma|/pi)^{1/4} (-sigma12)^n / sqrt(2^n n!) x2^n
///               exp(-(|sigma|+sigma22) x2^2 / 4),
/// with the magnitude carried in log space so large n stays finite.
inline double herald_wavefunction_closed(const SigmaMatrix& sigma, int n, double x2) {
  detail::require_gps_condition(sigma, "herald_wavefunction_closed");
  if (n < 0) throw DomainError("herald_wavefunction_closed: n must be non-negative");
  double d = sigma.det();
  double width_sq = d + sigma.s22();
  double ln_pref = 0.25 * std::log(d / kPi);
  if (n == 0) return std::exp(ln_pref - 0.25 * width_sq * x2 * x2);
  if (x2 == 0.0 || sigma.s12() == 0.0) return 0.0;
  double ln_mag = ln_pref + n * std::log(std::abs(sigma.s12())) + n * std::log(std::abs(x2)) -
                  0.5 * (n * kLn2 + log_factorial(n)) - 0.25 * width_sq * x2 * x2;
  double sign = 1.0;
  if (n & 1) sign = (-sigma.s12() * x2 < 0.0) ? -1.0 : 1.0;
  return sign * std::exp(ln_mag);
}

/// I_n^{(s11)}(x) = int phi_0(sqrt(s11) (x - y)) phi_n(y) dy by quadrature.
inline double herald_In(double s11, int n, double x, const QuadratureGrid& grid) {
  double root_s = std::sqrt(s11);
  return integrate([&](double y) { return eval_phi(0, root_s * (x - y)) * eval_phi(n, y); }, grid);
}

inline QuadratureGrid in_grid(double s11, int n) {
  double w = std::sqrt(2.0 * n + 1.0) + 4.0 + 8.0 / std::sqrt(s11);
  return QuadratureGrid::gauss_hermite(std::max(256, 16 * n), w);
}

inline double herald_In(double s11, int n, double x) {
  if (n < 0) throw DomainError("herald_In: n must be non-negative");
  if (!(s11 > 0.0)) throw DomainError("herald_In: sigma11 must be positive");
  return herald_In(s11, n, x, in_grid(s11, n));
}

/// Unnormalized heralded amplitude for any positive-definite sigma,
///   Psi_n(x2) = |sigma|^{1/4} phi_0(sqrt(|sigma|/s11) x2) I_n^{(s11)}(-(s12/s11) x2).
/// Handle form: the inner quadrature grid is built once and captured.
inline RealWavefunction herald_unnormalized_general(const SigmaMatrix& sigma, int n) {
  if (n < 0) throw DomainError("herald_wavefunction_general: n must be non-negative");
  double s11 = sigma.s11(), s12 = sigma.s12(), d = sigma.det();
  double pref = std::pow(d, 0.25);
  double env_scale = std::sqrt(d / s11);
  double arg_scale = -s12 / s11;
  QuadratureGrid grid = in_grid(s11, n);
  RealWavefunction psi;
  psi.eval = [pref, env_scale, arg_scale, s11, n, grid](double x2) {
    return pref * eval_phi(0, env_scale * x2) * herald_In(s11, n, arg_scale * x2, grid);
  };
  psi.half_width = suggested_half_width(n, env_scale);
  return psi;
}

inline double herald_wavefunction_general(const SigmaMatrix& sigma, int n, double x2) {
  return herald_unnormalized_general(sigma, n)(x2);
}

/// Success probability at the GPS point (log space),
///   P(n) = sqrt(|sigma|) (2n)! sigma12^{2n} / (8^n (n!)^2)
///          ((|sigma|+sigma22)/2)^{-n-1/2}.
inline double prob_closed(const SigmaMatrix& sigma, int n) {
  detail::require_gps_condition(sigma, "prob_closed");
  if (n < 0) throw DomainError("prob_closed: n must be non-negative");
  double d = sigma.det();
  double half_width_sq = 0.5 * (d + sigma.s22());
  if (n == 0) return std::exp(0.5 * std::log(d) - 0.5 * std::log(half_width_sq));
  if (sigma.s12() == 0.0) return 0.0;
  double ln_p = 0.5 * std::log(d) + log_factorial(2 * n) - 2.0 * log_factorial(n) +
                2.0 * n * std::log(std::abs(sigma.s12())) - n * std::log(8.0) -
                (n + 0.5) * std::log(half_width_sq);
  return std::exp(ln_p);
}

/// P(n) = int |Psi_n|^2 dx2 by quadrature; no sigma11 restriction.
inline double prob_general(const SigmaMatrix& sigma, int n) {
  RealWavefunction psi = herald_unnormalized_general(sigma, n);
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(std::max(384, 16 * n), psi.half_width);
  return integrate_checked([&](double x) { double v = psi(x); return v * v; }, grid, 1e-9);
}

/// Herald n photons: normalized psi_n, P(n), and r_c (GPS point only).
/// Dispatches to the closed form at sigma11 = 1, otherwise to the general
/// quadrature path; near-misses of the condition are reported as warnings.
inline HeraldOutcome herald(const SigmaMatrix& sigma, int n) {
  if (n < 0) throw DomainError("herald: n must be non-negative");
  HeraldOutcome out;
  out.n = n;
  double gap = std::abs(sigma.s11() - 1.0);
  if (gap < kGpsConditionTol) {
    out.prob = prob_closed(sigma, n);
    if (out.prob < kProbabilityFloor) throw ZeroProbability("herald: P(n) below 1e-300");
    out.r_c = output_squeezing(sigma);
    double width_sq = sigma.det() + sigma.s22();  // e^{2 r_c}
    double ln_norm_sq = log_double_factorial(2 * n - 1) - n * std::log(width_sq) +
                        0.5 * std::log(2.0 * kPi) - 0.5 * std::log(width_sq);
    double sign = ((n & 1) && sigma.s12() > 0.0) ? -1.0 : 1.0;  // (-sigma12)^n
    RealWavefunction psi;
    psi.eval = [n, width_sq, ln_norm_sq, sign](double x) {
      if (n == 0) return std::exp(-0.25 * width_sq * x * x - 0.5 * ln_norm_sq);
      if (x == 0.0) return 0.0;
      double s = sign * ((x < 0.0 && (n & 1)) ? -1.0 : 1.0);
      return s * std::exp(n * std::log(std::abs(x)) - 0.25 * width_sq * x * x - 0.5 * ln_norm_sq);
    };
    psi.half_width = suggested_half_width(n, std::sqrt(0.5 * width_sq));
    out.psi = psi;
    return out;
  }
  if (gap < kGpsWarningBand)
    out.warnings.push_back("sigma11 is within 1e-6 of the GPS condition; using the general path");
  RealWavefunction unnorm = herald_unnormalized_general(sigma, n);
  out.prob = prob_general(sigma, n);
  if (out.prob < kProbabilityFloor) throw ZeroProbability("herald: P(n) below 1e-300");
  double inv_root_p = 1.0 / std::sqrt(out.prob);
  RealWavefunction psi;
  psi.eval = [unnorm, inv_root_p](double x) { return inv_root_p * unnorm(x); };
  psi.half_width = unnorm.half_width;
  out.psi = psi;
  return out;
}

/// Fourier transform of the normalized heralded wavefunction,
/// psi_tilde(p) = int psi(x) e^{-ipx} dx / sqrt(2 pi). The x samples are
/// taken once at handle construction.
inline ComplexWavefunction p_domain_wavefunction(const SigmaMatrix& sigma, int n) {
  HeraldOutcome out = herald(sigma, n);
  QuadratureGrid grid = QuadratureGrid::gauss_hermite(1024, out.psi.half_width);
  auto samples = std::make_shared<std::vector<double>>(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    (*samples)[i] = grid.weights()[i] * out.psi(grid.nodes()[i]);
  std::vector<double> nodes(grid.nodes().begin(), grid.nodes().end());
  double inv_root_2pi = 1.0 / std::sqrt(2.0 * kPi);
  ComplexWavefunction wf;
  wf.eval = [samples, nodes = std::move(nodes), inv_root_2pi](double p) {
    std::complex<double> acc(0.0, 0.0);
    for (size_t i = 0; i < nodes.size(); ++i) {
      double phase = -p * nodes[i];
      acc += (*samples)[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc * inv_root_2pi;
  };
  wf.half_width = std::max(8.0, 4.0 * std::sqrt(sigma.det() + sigma.s22()));
  return wf;
}

inline std::complex<double> p_domain_wavefunction(const SigmaMatrix& sigma, int n, double p2) {
  return p_domain_wavefunction(sigma, n)(p2);
}

/// Max-abs residual between the directly computed I_n^{(s11)} and the
/// extra-convolution route g * I_n^{(1)}, where g is the Gaussian of
/// exponent s11 / (2 (1 - s11)). Valid for 0 < sigma11 < 1.
inline double extra_convolution_check(const SigmaMatrix& sigma, int n) {
  double s = sigma.s11();
  if (s >= 1.0) throw DomainError("extra_convolution_check: requires sigma11 < 1");
  if (n < 0) throw DomainError("extra_convolution_check: n must be non-negative");
  QuadratureGrid direct_grid = in_grid(s, n);
  // g has width sqrt((1-s)/s); as sigma11 -> 1 it approaches a delta, so the
  // u grid is scaled to that width.
  double g_width = std::sqrt((1.0 - s) / s);
  double g_norm = 1.0 / std::sqrt(2.0 * (1.0 - s) * kPi);
  double g_expo = s / (2.0 * (1.0 - s));
  QuadratureGrid conv_grid = QuadratureGrid::gauss_hermite(512, 10.0 * g_width);

  double x_max = std::sqrt(2.0 * n + 1.0) + 4.0;
  double residual = 0.0;
  constexpr int kScan = 161;
  for (int i = 0; i < kScan; ++i) {
    double x = -x_max + 2.0 * x_max * i / (kScan - 1);
    double direct = herald_In(s, n, x, direct_grid);
    double conv = integrate(
        [&](double u) { return g_norm * std::exp(-g_expo * u * u) * vacuum_convolution(n, x - u); }, conv_grid);
    residual = std::max(residual, std::abs(direct - conv));
  }
  return residual;
}

/// Interior-oscillation ratio of |psi|: the largest interior local maximum
/// between the two outermost peaks, divided by the global peak. 0 when the
/// waveform has at most two peaks (clean cat shape).
inline double oscillation_metric(const RealWavefunction& psi) {
  constexpr int kSamples = 4001;
  double w = psi.half_width;
  std::vector<double> mag(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    double x = -w + 2.0 * w * i / (kSamples - 1);
    mag[i] = std::abs(psi(x));
  }
  std::vector<int> peaks;
  double global = 0.0;
  for (int i = 1; i + 1 < kSamples; ++i) {
    if (mag[i] > mag[i - 1] && mag[i] > mag[i + 1]) peaks.push_back(i);
    global = std::max(global, mag[i]);
  }
  if (peaks.size() <= 2 || global == 0.0) return 0.0;
  double interior = 0.0;
  for (size_t j = 1; j + 1 < peaks.size(); ++j) interior = std::max(interior, mag[peaks[j]]);
  return interior / global;
}

}  // namespace gps
