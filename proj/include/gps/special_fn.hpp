#pragma once
// Hermite polynomials and Hermite functions (stable normalized recurrence),
// log-space factorial helpers, and Gauss-Hermite quadrature over the real line.

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "gps/errors.hpp"

namespace gps {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;
// pi^(-1/4), the peak value of the vacuum wavefunction phi_0(0).
inline constexpr double kInvPiQuarter = 0.75112554446494248286;

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence
/// H_{k+1} = 2 x H_k - 2 k H_{k-1}. Overflows double precision for large
/// n and |x|; use eval_phi for anything that needs normalized values.
inline double hermite_phys(int n, double x) {
  if (n < 0) throw DomainError("hermite_phys: n must be non-negative");
  double h_prev = 0.0;
  double h = 1.0;
  for (int k = 0; k < n; ++k) {
    double h_next = 2.0 * x * h - 2.0 * static_cast<double>(k) * h_prev;
    h_prev = h;
    h = h_next;
  }
  return h;
}

/// Hermite function phi_n(x) = H_n(x) exp(-x^2/2) / (pi^{1/4} sqrt(2^n n!)),
/// evaluated by the normalized recurrence
///   phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1},
/// which stays O(1) for all n instead of overflowing near n ~ 150.
/// Parity phi_n(-x) = (-1)^n phi_n(x) holds bit-for-bit: every recurrence
/// step is sign-symmetric in x.
inline double eval_phi(int n, double x) {
  if (n < 0) throw DomainError("eval_phi: n must be non-negative");
  double p_prev = 0.0;
  double p = kInvPiQuarter * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    double p_next = x * std::sqrt(2.0 / (k + 1)) * p - std::sqrt(static_cast<double>(k) / (k + 1)) * p_prev;
    p_prev = p;
    p = p_next;
  }
  return p;
}

/// phi_0(x) .. phi_{n_max}(x) in one recurrence pass.
inline std::vector<double> eval_phi_table(int n_max, double x) {
  if (n_max < 0) throw DomainError("eval_phi_table: n_max must be non-negative");
  std::vector<double> out(static_cast<size_t>(n_max) + 1);
  out[0] = kInvPiQuarter * std::exp(-0.5 * x * x);
  if (n_max == 0) return out;
  out[1] = x * std::sqrt(2.0) * out[0];
  for (int k = 1; k < n_max; ++k) {
    out[k + 1] = x * std::sqrt(2.0 / (k + 1)) * out[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * out[k - 1];
  }
  return out;
}

/// ln(n!), accumulated exactly (no Stirling) with a table up to n = 10^4.
inline double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: n must be non-negative");
  static const std::vector<double> table = [] {
    std::vector<double> t(10001);
    t[0] = 0.0;
    for (size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
  }();
  if (n < static_cast<int>(table.size())) return table[static_cast<size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// ln(n!!). Uses (2m)!! = 2^m m! and (2m-1)!! = (2m)! / (2^m m!).
inline double log_double_factorial(int n) {
  if (n < -1) throw DomainError("log_double_factorial: n must be >= -1");
  if (n <= 0) return 0.0;  // (-1)!! = 0!! = 1
  if (n % 2 == 0) {
    int m = n / 2;
    return m * kLn2 + log_factorial(m);
  }
  int m = (n + 1) / 2;
  return log_factorial(2 * m) - m * kLn2 - log_factorial(m);
}

/// Closed form of the convolution (phi_0 * phi_n)(x) = x^n e^{-x^2/4} / sqrt(2^n n!),
/// evaluated in log space so large n stays finite.
inline double vacuum_convolution(int n, double x) {
  if (n < 0) throw DomainError("vacuum_convolution: n must be non-negative");
  if (n == 0) return std::exp(-0.25 * x * x);
  if (x == 0.0) return 0.0;
  double ln_mag = n * std::log(std::abs(x)) - 0.25 * x * x - 0.5 * (n * kLn2 + log_factorial(n));
  double sign = (x < 0.0 && (n & 1)) ? -1.0 : 1.0;
  return sign * std::exp(ln_mag);
}

/// Integral formula int H_n(y) e^{-(y-x)^2} dy = sqrt(pi) (2x)^n.
/// Test oracle for vacuum_convolution; not used on any production path.
inline double hermite_gauss_integral(int n, double x) {
  if (n < 0) throw DomainError("hermite_gauss_integral: n must be non-negative");
  return std::sqrt(kPi) * std::pow(2.0 * x, n);
}

namespace detail {

// (phi_{n-1}, phi_n) at x carrying a shared base-2 exponent, so magnitudes
// stay representable even where e^{-x^2/2} itself underflows (|x| > 38.6,
// reached by the outer nodes of grids beyond ~700 points).
struct ScaledPhiPair {
  double lower = 0.0;  // phi_{n-1} * 2^{-exp2}
  double upper = 0.0;  // phi_n * 2^{-exp2}
  long exp2 = 0;
};

inline ScaledPhiPair eval_phi_pair_scaled(int n, double x) {
  double ln0 = std::log(kInvPiQuarter) - 0.5 * x * x;
  ScaledPhiPair out;
  out.exp2 = static_cast<long>(ln0 / kLn2);
  double p_prev = 0.0;
  double p = std::exp(ln0 - out.exp2 * kLn2);
  for (int k = 0; k < n; ++k) {
    double next = x * std::sqrt(2.0 / (k + 1)) * p - std::sqrt(static_cast<double>(k) / (k + 1)) * p_prev;
    p_prev = p;
    p = next;
    double mag = std::max(std::abs(p), std::abs(p_prev));
    if (mag > 1e150) {
      p *= 0x1p-512;
      p_prev *= 0x1p-512;
      out.exp2 += 512;
    } else if (mag > 0.0 && mag < 1e-150) {
      p *= 0x1p512;
      p_prev *= 0x1p512;
      out.exp2 -= 512;
    }
  }
  out.lower = p_prev;
  out.upper = p;
  return out;
}

inline double log_abs(const ScaledPhiPair& s, bool upper) {
  double v = upper ? s.upper : s.lower;
  return std::log(std::abs(v)) + s.exp2 * kLn2;
}

}  // namespace detail

/// Nodes and weights for integration of decaying integrands over the real
/// line: int f(x) dx ~ sum_i w_i f(x_i). Gauss-Hermite nodes with the
/// weight folded into w_i, optionally rescaled to a requested half-width.
/// With the natural width (half_width <= 0) the rule integrates
/// p(x) e^{-x^2} exactly for polynomials p up to degree 2m-1.
class QuadratureGrid {
 public:
  static QuadratureGrid gauss_hermite(int num_nodes, double half_width = 0.0) {
    if (num_nodes < 2) throw DomainError("QuadratureGrid: need at least 2 nodes");
    QuadratureGrid g;
    g.scheme_ = "gauss-hermite-folded";
    g.requested_nodes_ = num_nodes;
    g.requested_half_width_ = half_width;

    const int m = num_nodes;
    // Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
    // matrix with off-diagonal beta_k = sqrt(k/2).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sub(m - 1);
    for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NonConverged("QuadratureGrid: eigenvalue solve failed");

    std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + m);
    // Two Newton polish steps on phi_m(x) = 0; phi_m'(x) = sqrt(2m) phi_{m-1}(x) - x phi_m(x).
    // The shared scaling exponent cancels in the update ratio.
    for (double& xi : x) {
      for (int it = 0; it < 2; ++it) {
        detail::ScaledPhiPair sp = detail::eval_phi_pair_scaled(m, xi);
        double deriv = std::sqrt(2.0 * m) * sp.lower - xi * sp.upper;
        if (deriv != 0.0) xi -= sp.upper / deriv;
      }
    }
    // Enforce exact +/- symmetry of the node set.
    for (int i = 0; i < m / 2; ++i) {
      double a = 0.5 * (std::abs(x[i]) + std::abs(x[m - 1 - i]));
      x[i] = -a;
      x[m - 1 - i] = a;
    }
    if (m % 2 == 1) x[m / 2] = 0.0;

    // Folded weights w_i = gh_weight_i * e^{x_i^2} = 1 / (m phi_{m-1}(x_i)^2),
    // an O(1/sqrt(m)) quantity, assembled in log space.
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) {
      detail::ScaledPhiPair sp = detail::eval_phi_pair_scaled(m - 1, x[i]);
      w[i] = std::exp(-std::log(static_cast<double>(m)) - 2.0 * detail::log_abs(sp, true));
    }

    double natural_max = x.back();
    double scale = (half_width > 0.0) ? half_width / natural_max : 1.0;
    for (int i = 0; i < m; ++i) {
      x[i] *= scale;
      w[i] *= scale;
    }
    g.nodes_ = std::move(x);
    g.weights_ = std::move(w);
    return g;
  }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  const std::string& scheme() const { return scheme_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  double half_width() const { return nodes_.back(); }
  double target_accuracy() const { return target_accuracy_; }

  /// Same coverage, doubled node count (for convergence self-checks).
  QuadratureGrid refined() const {
    double w = (requested_half_width_ > 0.0) ? requested_half_width_ : half_width();
    return gauss_hermite(2 * requested_nodes_, w);
  }

 private:
  QuadratureGrid() = default;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::string scheme_;
  double target_accuracy_ = 1e-12;
  int requested_nodes_ = 0;
  double requested_half_width_ = 0.0;
};

template <typename F>
double integrate(F&& f, const QuadratureGrid& grid) {
  double sum = 0.0;
  auto x = grid.nodes();
  auto w = grid.weights();
  for (size_t i = 0; i < x.size(); ++i) sum += w[i] * f(x[i]);
  return sum;
}

/// Integrate with a node-doubling self-check. Throws NonConverged when the
/// refined result moves by more than tol (relative with an absolute floor of 1),
/// which signals the integrand violates the grid's decay assumptions.
template <typename F>
double integrate_checked(F&& f, const QuadratureGrid& grid, double tol) {
  double coarse = integrate(f, grid);
  double fine = integrate(f, grid.refined());
  if (std::abs(fine - coarse) > tol * std::max(1.0, std::abs(fine))) {
    throw NonConverged("integrate_checked: node doubling moved the result by " +
                       std::to_string(std::abs(fine - coarse)));
  }
  return fine;
}

/// Half-width covering the classically allowed region of phi_n under the
/// narrowest Gaussian scale s_min in play: max(8, 2 sqrt(2n+1) / s_min).
inline double suggested_half_width(int n, double s_min) {
  if (s_min <= 0.0) throw DomainError("suggested_half_width: s_min must be positive");
  return std::max(8.0, 2.0 * std::sqrt(2.0 * n + 1.0) / s_min);
}

/// Default grid for integrands built from phi_n and Gaussians of scale >= s_min.
inline QuadratureGrid grid_for(int n, double s_min, int nodes = 0) {
  int m = nodes > 0 ? nodes : std::max(256, 16 * n);
  return QuadratureGrid::gauss_hermite(m, suggested_half_width(n, s_min));
}

}  // namespace gps
