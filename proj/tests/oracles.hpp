#pragma once

// Test-side oracles kept independent of the library paths they check.

#include <functional>

#include <unsupported/Eigen/MatrixFunctions>

#include "speclab/types.hpp"

namespace oracle {

using speclab::Complex;
using speclab::ComplexMatrix;
using speclab::ComplexVector;

/// Dense matrix exponential by Eigen's scaling-and-squaring.
inline ComplexMatrix expm(const ComplexMatrix& a) { return a.exp(); }

/// Residue sum sum_n g(lambda_n) f_n e_n for a diagonal operator.
inline ComplexVector diagonal_residue_sum(const ComplexMatrix& w_diag,
                                          const std::function<Complex(Complex)>& g,
                                          const ComplexVector& f) {
  ComplexVector out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) out(i) = g(w_diag(i, i)) * f(i);
  return out;
}

/// Central-difference Taylor coefficients F^{(m)}(x)/m!, m = 0..2: 4th-order
/// stencils sharpened by one Richardson level (h and h/2).
inline std::vector<Complex> fd_taylor2(const std::function<Complex(Complex)>& fun, Complex x,
                                       double h) {
  auto stencil = [&](double step) {
    Complex fp1 = fun(x + step), fm1 = fun(x - step);
    Complex fp2 = fun(x + 2 * step), fm2 = fun(x - 2 * step);
    Complex f0 = fun(x);
    Complex d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * step);
    Complex d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * step * step);
    return std::pair<Complex, Complex>{d1, d2};
  };
  auto [d1h, d2h] = stencil(h);
  auto [d1h2, d2h2] = stencil(h / 2);
  Complex d1 = (16.0 * d1h2 - d1h) / 15.0;
  Complex d2 = (16.0 * d2h2 - d2h) / 15.0;
  return {fun(x), d1, d2 / 2.0};
}

/// Simpson quadrature of a real function on [a, b].
inline double simpson(const std::function<double(double)>& fun, double a, double b, int panels) {
  double h = (b - a) / (2 * panels);
  double acc = fun(a) + fun(b);
  for (int i = 1; i < 2 * panels; ++i) acc += fun(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace oracle
