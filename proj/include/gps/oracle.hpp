#pragma once
// Brute-force validation in a truncated Fock space: squeezed-vacuum
// expansions, an exact block-unitary beam splitter, photon-number heralding,
// and bridges back to the quadrature domain.
//
// Two-mode states are stored per total-photon-number block (block N holds
// all splits |k, N-k>), so the beam splitter acts exactly block by block and
// the only truncation loss is the per-mode input cutoff.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "gps/errors.hpp"
#include "gps/special_fn.hpp"
#include "gps/wavefunction.hpp"

namespace gps {

inline constexpr double kFockTailTol = 1e-6;
inline constexpr double kOracleMaxSqueezing = 2.5;

/// Single-mode state over the truncated Fock basis |0> .. |n_max>.
class FockState {
 public:
  explicit FockState(std::vector<std::complex<double>> amps, double tail_mass = 0.0)
      : amps_(std::move(amps)), tail_mass_(tail_mass) {
    if (amps_.empty()) throw DomainError("FockState: amplitude table must be non-empty");
    if (norm_sq() > 1.0 + 1e-12) throw DomainError("FockState: norm exceeds 1");
  }

  static FockState vacuum(int n_max) {
    std::vector<std::complex<double>> a(static_cast<size_t>(n_max) + 1, 0.0);
    a[0] = 1.0;
    return FockState(std::move(a));
  }

  int n_max() const { return static_cast<int>(amps_.size()) - 1; }
  const std::vector<std::complex<double>>& amps() const { return amps_; }
  double tail_mass() const { return tail_mass_; }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& c : amps_) s += std::norm(c);
    return s;
  }

  double mean_photon_number() const {
    double s = 0.0;
    for (size_t n = 1; n < amps_.size(); ++n) s += n * std::norm(amps_[n]);
    return s;
  }

 private:
  std::vector<std::complex<double>> amps_;
  double tail_mass_;
};

/// Fock expansion of S(r)|0>, pinned to the wavefunction convention
/// <x|S(r)|0> = e^{r/2} phi_0(e^r x):
///   c_{2m} = (1/sqrt(cosh r)) (-tanh r)^m sqrt((2m)!) / (2^m m!),
/// odd amplitudes exactly zero.
inline FockState squeezed_vacuum_fock(double r, int n_max) {
  if (std::abs(r) > kOracleMaxSqueezing)
    throw DomainError("squeezed_vacuum_fock: |r| must be <= 2.5");
  if (n_max < 0) throw DomainError("squeezed_vacuum_fock: n_max must be non-negative");
  std::vector<std::complex<double>> amps(static_cast<size_t>(n_max) + 1, 0.0);
  double t = std::tanh(r);
  double c = 1.0 / std::sqrt(std::cosh(r));
  amps[0] = c;
  double mass = c * c;
  for (int m = 1; 2 * m <= n_max; ++m) {
    // ratio c_{2m} / c_{2m-2} = -tanh(r) sqrt((2m-1)/(2m))
    c *= -t * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
    amps[static_cast<size_t>(2 * m)] = c;
    mass += c * c;
  }
  double tail = std::max(0.0, 1.0 - mass);
  if (tail > kFockTailTol)
    throw TruncationError("squeezed_vacuum_fock: tail mass " + std::to_string(tail) + " exceeds 1e-6");
  return FockState(std::move(amps), tail);
}

/// Two-mode state stored per total-photon-number block.
class TwoModeFockState {
 public:
  static TwoModeFockState product(const FockState& mode1, const FockState& mode2) {
    TwoModeFockState st;
    int total = mode1.n_max() + mode2.n_max();
    st.blocks_.resize(static_cast<size_t>(total) + 1);
    for (int big_n = 0; big_n <= total; ++big_n) st.blocks_[static_cast<size_t>(big_n)].assign(static_cast<size_t>(big_n) + 1, 0.0);
    for (int n1 = 0; n1 <= mode1.n_max(); ++n1)
      for (int n2 = 0; n2 <= mode2.n_max(); ++n2)
        st.blocks_[static_cast<size_t>(n1 + n2)][static_cast<size_t>(n1)] = mode1.amps()[static_cast<size_t>(n1)] * mode2.amps()[static_cast<size_t>(n2)];
    st.tail_mass_ = std::max(0.0, 1.0 - st.norm_sq());
    return st;
  }

  int total_max() const { return static_cast<int>(blocks_.size()) - 1; }
  const std::vector<std::complex<double>>& block(int total_n) const { return blocks_.at(static_cast<size_t>(total_n)); }
  std::vector<std::vector<std::complex<double>>>& blocks() { return blocks_; }
  const std::vector<std::vector<std::complex<double>>>& blocks() const { return blocks_; }
  double tail_mass() const { return tail_mass_; }
  void set_tail_mass(double t) { tail_mass_ = t; }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& b : blocks_)
      for (const auto& c : b) s += std::norm(c);
    return s;
  }

  /// Second quadrature moments in the paper normalization (twice the true
  /// covariance): moment(i, j) = 2 <x_i x_j>, i, j in {0, 1}.
  double x_moment_paper(int i, int j) const {
    if (i > j) std::swap(i, j);
    int nt = total_max();
    auto amp = [&](int big_n, int k) -> std::complex<double> {
      if (big_n < 0 || big_n > nt || k < 0 || k > big_n) return 0.0;
      return blocks_[static_cast<size_t>(big_n)][static_cast<size_t>(k)];
    };
    if (i == j) {
      double mean_n = 0.0;
      std::complex<double> a_sq(0.0, 0.0);
      for (int big_n = 0; big_n <= nt; ++big_n)
        for (int k = 0; k <= big_n; ++k) {
          std::complex<double> c = amp(big_n, k);
          if (c == 0.0) continue;
          int occ = (i == 0) ? k : big_n - k;
          mean_n += occ * std::norm(c);
          // <a_i^2>: lowering twice within mode i drops the total by 2.
          if (i == 0 && k >= 2)
            a_sq += std::conj(amp(big_n - 2, k - 2)) * std::sqrt(static_cast<double>(k) * (k - 1)) * c;
          if (i == 1 && big_n - k >= 2)
            a_sq += std::conj(amp(big_n - 2, k)) * std::sqrt(static_cast<double>(big_n - k) * (big_n - k - 1)) * c;
        }
      return 2.0 * a_sq.real() + 2.0 * mean_n + 1.0;
    }
    std::complex<double> a1a2(0.0, 0.0), a1a2dag(0.0, 0.0);
    for (int big_n = 0; big_n <= nt; ++big_n)
      for (int k = 1; k <= big_n; ++k) {
        std::complex<double> c = amp(big_n, k);
        if (c == 0.0) continue;
        if (big_n - k >= 1)
          a1a2 += std::conj(amp(big_n - 2, k - 1)) * std::sqrt(static_cast<double>(k) * (big_n - k)) * c;
        a1a2dag += std::conj(amp(big_n, k - 1)) * std::sqrt(static_cast<double>(k) * (big_n - k + 1)) * c;
      }
    return 2.0 * (a1a2.real() + a1a2dag.real());
  }

 private:
  std::vector<std::vector<std::complex<double>>> blocks_;
  double tail_mass_ = 0.0;
};

/// Beam splitter U = exp(theta (a1 a2^dag - a1^dag a2)) with cos(theta) =
/// sqrt(R), built blockwise per total photon number. The generator restricted
/// to block N is antisymmetric tridiagonal; conjugating by diag(i^k) turns it
/// into i S with S real symmetric, so each block is recovered from a real
/// symmetric eigendecomposition and is orthogonal to machine precision.
/// Heisenberg action: x -> M x with M = [[sqrt(R), -sqrt(T)], [sqrt(T), sqrt(R)]].
class BeamSplitterUnitary {
 public:
  BeamSplitterUnitary(double reflectance, int total_max) : reflectance_(reflectance) {
    if (!(reflectance >= 0.0 && reflectance <= 1.0))
      throw DomainError("BeamSplitterUnitary: reflectance must lie in [0, 1]");
    if (total_max < 0) throw DomainError("BeamSplitterUnitary: total_max must be non-negative");
    theta_ = std::acos(std::sqrt(reflectance));
    blocks_.reserve(static_cast<size_t>(total_max) + 1);
    for (int big_n = 0; big_n <= total_max; ++big_n) blocks_.push_back(build_block(big_n, theta_));
  }

  double reflectance() const { return reflectance_; }
  double theta() const { return theta_; }
  int total_max() const { return static_cast<int>(blocks_.size()) - 1; }
  const Eigen::MatrixXd& block(int total_n) const { return blocks_.at(static_cast<size_t>(total_n)); }

  double unitarity_residual(int total_n) const {
    const Eigen::MatrixXd& u = block(total_n);
    Eigen::MatrixXd gram = u.transpose() * u;
    gram.diagonal().array() -= 1.0;
    return gram.cwiseAbs().maxCoeff();
  }

  TwoModeFockState apply(const TwoModeFockState& state) const {
    if (state.total_max() > total_max())
      throw DomainError("BeamSplitterUnitary: state exceeds the built block range");
    TwoModeFockState out = state;
    for (int big_n = 0; big_n <= state.total_max(); ++big_n) {
      const auto& v = state.block(big_n);
      const Eigen::MatrixXd& u = blocks_[static_cast<size_t>(big_n)];
      int dim = big_n + 1;
      Eigen::VectorXd re(dim), im(dim);
      for (int k = 0; k < dim; ++k) {
        re[k] = v[static_cast<size_t>(k)].real();
        im[k] = v[static_cast<size_t>(k)].imag();
      }
      Eigen::VectorXd out_re = u * re;
      Eigen::VectorXd out_im = u * im;
      auto& dst = out.blocks()[static_cast<size_t>(big_n)];
      for (int k = 0; k < dim; ++k) dst[static_cast<size_t>(k)] = std::complex<double>(out_re[k], out_im[k]);
    }
    return out;
  }

 private:
  static Eigen::MatrixXd build_block(int big_n, double theta) {
    int dim = big_n + 1;
    if (dim == 1) return Eigen::MatrixXd::Identity(1, 1);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sub(dim - 1);
    for (int k = 0; k < dim - 1; ++k)
      sub[k] = std::sqrt(static_cast<double>(k + 1) * (big_n - k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NonConverged("BeamSplitterUnitary: eigensolve failed");
    const Eigen::MatrixXd& vec = es.eigenvectors();
    Eigen::ArrayXd angles = theta * es.eigenvalues().array();
    Eigen::MatrixXd cos_part = vec * angles.cos().matrix().asDiagonal() * vec.transpose();
    Eigen::MatrixXd sin_part = vec * angles.sin().matrix().asDiagonal() * vec.transpose();
    // U = D exp(i theta S) D^dag with D = diag(i^k); real by construction.
    Eigen::MatrixXd u(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        switch (((j - k) % 4 + 4) % 4) {
          case 0: u(j, k) = cos_part(j, k); break;
          case 1: u(j, k) = -sin_part(j, k); break;
          case 2: u(j, k) = -cos_part(j, k); break;
          default: u(j, k) = sin_part(j, k); break;
        }
      }
    return u;
  }

  double reflectance_;
  double theta_;
  std::vector<Eigen::MatrixXd> blocks_;
};

struct HeraldFockResult {
  double prob;
  FockState heralded;
};

/// Project mode 1 onto |n>: prob = sum_m |c_{n,m}|^2, heralded mode-2
/// amplitudes c_{n,m} / sqrt(prob).
inline HeraldFockResult herald_fock(const TwoModeFockState& state, int n) {
  if (n < 0 || n > state.total_max()) throw DomainError("herald_fock: n outside the truncated range");
  int m_max = state.total_max() - n;
  std::vector<std::complex<double>> amps(static_cast<size_t>(m_max) + 1, 0.0);
  double prob = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    std::complex<double> c = state.block(n + m)[static_cast<size_t>(n)];
    amps[static_cast<size_t>(m)] = c;
    prob += std::norm(c);
  }
  if (prob < kProbabilityFloor) throw ZeroProbability("herald_fock: probability below 1e-300");
  double inv = 1.0 / std::sqrt(prob);
  for (auto& c : amps) c *= inv;
  return HeraldFockResult{prob, FockState(std::move(amps))};
}

/// Quadrature-domain amplitude sum c_n phi_n(x). Meaningful for states with
/// real amplitudes (everything this pipeline heralds); the real part is taken.
inline double fock_to_wavefunction(const FockState& state, double x) {
  std::vector<double> phi = eval_phi_table(state.n_max(), x);
  std::complex<double> acc(0.0, 0.0);
  for (int n = 0; n <= state.n_max(); ++n) acc += state.amps()[static_cast<size_t>(n)] * phi[static_cast<size_t>(n)];
  return acc.real();
}

inline RealWavefunction fock_wavefunction(const FockState& state) {
  RealWavefunction wf;
  std::vector<std::complex<double>> amps = state.amps();
  int n_max = state.n_max();
  wf.eval = [amps = std::move(amps), n_max](double x) {
    std::vector<double> phi = eval_phi_table(n_max, x);
    std::complex<double> acc(0.0, 0.0);
    for (int n = 0; n <= n_max; ++n) acc += amps[static_cast<size_t>(n)] * phi[static_cast<size_t>(n)];
    return acc.real();
  };
  wf.half_width = std::sqrt(2.0 * n_max + 1.0) + 6.0;
  return wf;
}

/// Conventional photon subtraction: S(r1)|0> tapped by a beam splitter of
/// reflectance R with vacuum on the other port, n photons detected in the tap.
inline double conventional_ps_probability(double r1, double reflectance, int n, int n_max) {
  FockState in1 = squeezed_vacuum_fock(r1, n_max);
  FockState in2 = FockState::vacuum(0);
  TwoModeFockState state = TwoModeFockState::product(in1, in2);
  BeamSplitterUnitary bs(reflectance, state.total_max());
  TwoModeFockState mixed = bs.apply(state);
  if (n > mixed.total_max()) return 0.0;
  double prob = 0.0;
  for (int m = 0; m + n <= mixed.total_max(); ++m) prob += std::norm(mixed.block(n + m)[static_cast<size_t>(n)]);
  return prob;
}

}  // namespace gps
