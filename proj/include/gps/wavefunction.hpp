#pragma once
// Evaluation handles for single-mode wavefunctions. half_width is the
// suggested integration half-width (amplitudes are negligible beyond it).

#include <complex>
#include <functional>

namespace gps {

struct RealWavefunction {
  std::function<double(double)> eval;
  double half_width = 8.0;
  double operator()(double x) const { return eval(x); }
};

struct ComplexWavefunction {
  std::function<std::complex<double>(double)> eval;
  double half_width = 8.0;
  std::complex<double> operator()(double x) const { return eval(x); }
};

}  // namespace gps
