#pragma once
// The two-mode Gaussian source: sigma-matrix construction from a squeezer
// pair and a beam splitter, the GPS condition solve, and derived quantities.
//
// Convention: sigma is the wavefunction-exponent matrix, G ∝ exp(-x^T sigma x / 2),
// with vacuum = identity. Its inverse equals twice the true x covariance.

#include <cmath>
#include <array>

#include "gps/errors.hpp"

namespace gps {

// Sanity bound on squeezing parameters (~43 dB, far beyond demonstrated hardware).
inline constexpr double kMaxSqueezing = 5.0;

/// Input squeezing parameters of the two source modes.
struct SqueezerPair {
  double r1;
  double r2;
  SqueezerPair(double r1_in, double r2_in) : r1(r1_in), r2(r2_in) {
    if (!std::isfinite(r1) || !std::isfinite(r2)) throw DomainError("SqueezerPair: parameters must be finite");
    if (std::abs(r1) > kMaxSqueezing || std::abs(r2) > kMaxSqueezing)
      throw DomainError("SqueezerPair: |r| exceeds the sanity bound of 5");
  }
};

/// Beam splitter described by its power reflectance; transmittance is 1 - R.
struct BeamSplitter {
  double reflectance;
  explicit BeamSplitter(double reflectance_in) : reflectance(reflectance_in) {
    if (!std::isfinite(reflectance) || reflectance < 0.0 || reflectance > 1.0)
      throw DomainError("BeamSplitter: reflectance must lie in [0, 1]");
  }
  double transmittance() const { return 1.0 - reflectance; }
};

/// Symmetric positive-definite 2x2 wavefunction matrix (s21 = s12 implied).
class SigmaMatrix {
 public:
  SigmaMatrix(double s11, double s12, double s22) : s11_(s11), s12_(s12), s22_(s22) {
    if (!std::isfinite(s11) || !std::isfinite(s12) || !std::isfinite(s22))
      throw DomainError("SigmaMatrix: entries must be finite");
    if (s11_ <= 0.0 || det() <= 0.0)
      throw DomainError("SigmaMatrix: matrix must be symmetric positive definite");
  }

  double s11() const { return s11_; }
  double s12() const { return s12_; }
  double s22() const { return s22_; }
  double det() const { return s11_ * s22_ - s12_ * s12_; }
  double trace() const { return s11_ + s22_; }

  SigmaMatrix inverse() const {
    double d = det();
    return SigmaMatrix(s22_ / d, -s12_ / d, s11_ / d);
  }

  static SigmaMatrix identity() { return SigmaMatrix(1.0, 0.0, 1.0); }

 private:
  double s11_, s12_, s22_;
};

/// Full Gaussian-state description. Displacements are fixed to zero in this
/// artifact (real-amplitude cats only), so this is a thin wrapper around sigma.
struct GaussianStateSpec {
  SigmaMatrix sigma;
  std::array<double, 2> mu{0.0, 0.0};
  std::array<double, 2> nu{0.0, 0.0};
};

/// sigma of the state made by interfering S(r1)|0> and S(r2)|0> on a beam
/// splitter of reflectance R:
///   s11 = R e^{2r1} + T e^{2r2},  s12 = sqrt(RT) (e^{2r1} - e^{2r2}),
///   s22 = T e^{2r1} + R e^{2r2}.
inline SigmaMatrix build_sigma(const SqueezerPair& sq, const BeamSplitter& bs) {
  double a = std::exp(2.0 * sq.r1);
  double b = std::exp(2.0 * sq.r2);
  double rt = std::sqrt(bs.reflectance * bs.transmittance());
  return SigmaMatrix(bs.reflectance * a + bs.transmittance() * b, rt * (a - b),
                     bs.transmittance() * a + bs.reflectance * b);
}

/// Matrix inverse of build_sigma; equal to twice the x covariance of the state.
/// Built directly from the sign-flipped squeezers (sigma^{-1} = sigma(-r1,-r2)),
/// which is algebraically identical to inverting build_sigma.
inline SigmaMatrix build_sigma_inverse(const SqueezerPair& sq, const BeamSplitter& bs) {
  return build_sigma(SqueezerPair(-sq.r1, -sq.r2), bs);
}

/// Reflectance that meets the GPS conditions sigma11 = 1, sigma12 != 0:
/// R = (1 - e^{2r2}) / (e^{2r1} - e^{2r2}). A solution exists iff r1 r2 < 0
/// (the inputs must be squeezed in orthogonal directions).
inline BeamSplitter solve_reflectance(const SqueezerPair& sq) {
  if (sq.r1 * sq.r2 >= 0.0)
    throw NoSolutionError("solve_reflectance: sigma11 = 1 with sigma12 != 0 requires r1 * r2 < 0");
  double a = std::exp(2.0 * sq.r1);
  double b = std::exp(2.0 * sq.r2);
  return BeamSplitter((1.0 - b) / (a - b));
}

/// Reflectance that yields a requested sigma11 (linear in R). Throws
/// NoSolutionError when no R in [0, 1] reaches the target.
inline BeamSplitter solve_reflectance_for_sigma11(const SqueezerPair& sq, double target_s11) {
  double a = std::exp(2.0 * sq.r1);
  double b = std::exp(2.0 * sq.r2);
  if (a == b) {
    if (target_s11 == a) return BeamSplitter(0.5);
    throw NoSolutionError("solve_reflectance_for_sigma11: sigma11 is fixed when r1 = r2");
  }
  double r = (target_s11 - b) / (a - b);
  if (!(r >= 0.0 && r <= 1.0))
    throw NoSolutionError("solve_reflectance_for_sigma11: target sigma11 unreachable for these squeezers");
  return BeamSplitter(r);
}

/// Output squeezing of the heralded state, e^{2 r_c} = |sigma| + sigma22.
inline double output_squeezing(const SigmaMatrix& sigma) {
  return 0.5 * std::log(sigma.det() + sigma.s22());
}

/// The same quantity from the input parameters, valid at sigma11 = 1:
/// e^{2 r_c} = e^{2(r1+r2)} + e^{2r1} + e^{2r2} - 1.
inline double output_squeezing_from_inputs(const SqueezerPair& sq) {
  double v = std::exp(2.0 * (sq.r1 + sq.r2)) + std::exp(2.0 * sq.r1) + std::exp(2.0 * sq.r2) - 1.0;
  if (v <= 0.0) throw DomainError("output_squeezing_from_inputs: expression valid only under the GPS condition");
  return 0.5 * std::log(v);
}

/// Wavefunction matrix of the same state in the p representation. The Fourier
/// transform of exp(-x^T sigma x / 2) is exp(-p^T sigma^{-1} p / 2), so
/// sigma_tilde = sigma^{-1}; for sigma built from squeezers this equals
/// build_sigma with (-r1, -r2). Applying the map twice returns sigma.
inline SigmaMatrix p_domain_sigma(const SigmaMatrix& sigma) { return sigma.inverse(); }

/// Squeezing level in dB <-> squeezing parameter r: level = 10 log10(e^{2r}).
inline double db_to_r(double level_db) {
  if (!(level_db >= 0.0)) throw DomainError("db_to_r: level must be non-negative");
  return level_db * std::log(10.0) / 20.0;
}

inline double r_to_db(double r) { return 20.0 * r / std::log(10.0); }

}  // namespace gps
