#pragma once
// Method comparison: GPS vs homodyne conditioning vs conventional photon
// subtraction, plus deterministic parameter sweeps with rate estimates.

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gps/errors.hpp"
#include "gps/gauss_core.hpp"
#include "gps/herald.hpp"
#include "gps/oracle.hpp"
#include "gps/targets.hpp"

namespace gps {

enum class Method { kGps, kHomodyne, kConventional };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::kGps: return "gps";
    case Method::kHomodyne: return "hom";
    default: return "conv";
  }
}

struct MethodResult {
  Method method = Method::kGps;
  int n = 0;
  double probability = 0.0;
  double rate = 0.0;  // probability * f_rep, Hz
  double reflectance = std::numeric_limits<double>::quiet_NaN();
  double r_c = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();
};

/// Fidelity of the x^n Gaussian approximant against the squeezed cat with
/// alpha = sqrt(n). Independent of the squeezing (overlaps are invariant
/// under squeezing both states), so it is evaluated at s = 1 and memoized
/// per n (sweeps ask for it at every grid point).
inline double gps_target_fidelity(int n) {
  if (n < 1) return std::numeric_limits<double>::quiet_NaN();
  static std::mutex mu;
  static std::map<int, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  double f = fidelity(approx_target_wavefunction(n, 1.0), cat_wavefunction_x(CatTarget(std::sqrt(double(n)), n, 0.0)));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(n, f);
  return f;
}

/// GPS at the symmetric operating point r1 = -r2 = r with R solved for
/// sigma11 = 1; probability from the closed form.
inline MethodResult gps_success(double r, int n, double f_rep = 0.0) {
  if (!(r > 0.0)) throw DomainError("gps_success: r must be positive");
  SqueezerPair sq(r, -r);
  BeamSplitter bs = solve_reflectance(sq);
  SigmaMatrix sigma = build_sigma(sq, bs);
  MethodResult res;
  res.method = Method::kGps;
  res.n = n;
  res.probability = prob_closed(sigma, n);
  res.rate = res.probability * f_rep;
  res.reflectance = bs.reflectance;
  res.r_c = output_squeezing(sigma);
  res.fidelity = gps_target_fidelity(n);
  return res;
}

/// Homodyne conditioning: Fock generation from a two-mode squeezed vacuum,
/// (1 - tanh^2 r) tanh^{2n} r, times the 1/(10 n) conditioning acceptance.
/// The 0.99-fidelity qualifier of the scheme is carried as metadata only.
inline MethodResult homodyne_method_success(double r, int n, double f_rep = 0.0) {
  if (!(r > 0.0)) throw DomainError("homodyne_method_success: r must be positive");
  if (n < 1) throw DomainError("homodyne_method_success: n must be >= 1");
  double t = std::tanh(r);
  MethodResult res;
  res.method = Method::kHomodyne;
  res.n = n;
  res.probability = (1.0 - t * t) * std::pow(t, 2 * n) / (10.0 * n);
  res.rate = res.probability * f_rep;
  res.reflectance = 0.5;  // 50:50 split stage
  res.fidelity = 0.99;
  return res;
}

/// Conventional photon subtraction (r2 = 0) with the standard R = 0.05 tap,
/// evaluated by the Fock-space oracle.
inline MethodResult conventional_ps_success(double r, int n, double f_rep = 0.0, int n_max = 60,
                                            double reflectance = 0.05) {
  if (!(r > 0.0)) throw DomainError("conventional_ps_success: r must be positive");
  MethodResult res;
  res.method = Method::kConventional;
  res.n = n;
  res.probability = conventional_ps_probability(r, reflectance, n, n_max);
  res.rate = res.probability * f_rep;
  res.reflectance = reflectance;
  return res;
}

struct SweepSpec {
  std::vector<Method> methods{Method::kGps, Method::kHomodyne, Method::kConventional};
  double db_lo = 0.5;
  double db_hi = 22.0;
  double db_step = 0.1;
  std::vector<int> photon_numbers{5, 10, 20};
  double f_rep = 1e8;
  int oracle_nmax = 60;
  double conv_reflectance = 0.05;
};

struct SweepCell {
  Method method = Method::kGps;
  int n = 0;
  std::optional<MethodResult> result;
  std::string flag;  // error class when the point failed
};

struct SweepRow {
  double level_db = 0.0;
  double r = 0.0;
  std::vector<SweepCell> cells;  // ordered: per method, per photon number
};

inline std::vector<double> sweep_axis(const SweepSpec& spec) {
  if (!(spec.db_step > 0.0) || spec.db_hi < spec.db_lo)
    throw DomainError("sweep: grid must be strictly increasing");
  std::vector<double> axis;
  int count = static_cast<int>(std::floor((spec.db_hi - spec.db_lo) / spec.db_step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) axis.push_back(spec.db_lo + i * spec.db_step);
  return axis;
}

/// Deterministic sweep over the input squeezing level. Failed points carry
/// the error class in their flag instead of aborting the sweep. At exactly
/// 0 dB the GPS column holds the r -> 0+ limit (P(0) = 1, P(n >= 1) = 0)
/// since no reflectance meets the GPS condition there.
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  if (!(spec.f_rep > 0.0)) throw DomainError("sweep: f_rep must be positive");
  std::vector<double> axis = sweep_axis(spec);

  // The conventional tap is fixed across the sweep, so its unitary is shared.
  std::optional<BeamSplitterUnitary> conv_bs;
  for (Method m : spec.methods)
    if (m == Method::kConventional) conv_bs.emplace(spec.conv_reflectance, spec.oracle_nmax);

  std::vector<SweepRow> rows;
  rows.reserve(axis.size());
  for (double db : axis) {
    SweepRow row;
    row.level_db = db;
    row.r = db_to_r(db);
    for (Method m : spec.methods) {
      for (int n : spec.photon_numbers) {
        SweepCell cell;
        cell.method = m;
        cell.n = n;
        try {
          switch (m) {
            case Method::kGps:
              if (row.r == 0.0) {
                MethodResult res;
                res.method = Method::kGps;
                res.n = n;
                res.probability = (n == 0) ? 1.0 : 0.0;
                res.rate = res.probability * spec.f_rep;
                cell.result = res;
              } else {
                cell.result = gps_success(row.r, n, spec.f_rep);
              }
              break;
            case Method::kHomodyne:
              if (row.r == 0.0 && n >= 1) {
                MethodResult res;
                res.method = Method::kHomodyne;
                res.n = n;
                cell.result = res;  // probability 0
              } else {
                cell.result = homodyne_method_success(row.r, n, spec.f_rep);
              }
              break;
            case Method::kConventional: {
              FockState in1 = squeezed_vacuum_fock(row.r, spec.oracle_nmax);
              TwoModeFockState state = TwoModeFockState::product(in1, FockState::vacuum(0));
              TwoModeFockState mixed = conv_bs->apply(state);
              double prob = 0.0;
              for (int mm = 0; mm + n <= mixed.total_max(); ++mm)
                prob += std::norm(mixed.block(n + mm)[static_cast<size_t>(n)]);
              MethodResult res;
              res.method = Method::kConventional;
              res.n = n;
              res.probability = prob;
              res.rate = prob * spec.f_rep;
              res.reflectance = spec.conv_reflectance;
              cell.result = res;
              break;
            }
          }
        } catch (const TruncationError&) {
          cell.flag = "TruncationError";
        } catch (const NoSolutionError&) {
          cell.flag = "NoSolution";
        } catch (const DomainError&) {
          cell.flag = "DomainError";
        } catch (const NonConverged&) {
          cell.flag = "NonConverged";
        } catch (const ZeroProbability&) {
          cell.flag = "ZeroProbability";
        }
        row.cells.push_back(std::move(cell));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gps
