#pragma once

#include <functional>

#include "speclab/jordan.hpp"
#include "speclab/types.hpp"

namespace speclab {

using ScalarFunction = std::function<Complex(Complex)>;

/// Taylor coefficients h^{(m)}(center)/m!, m = 0..degree, by trapezoid-rule
/// Cauchy integrals on the circle |z - center| = radius. h must be analytic
/// on the closed disk.
std::vector<Complex> taylor_coefficients(const ScalarFunction& h, Complex center, int degree,
                                         double radius, int nodes = 256);

/// Primary matrix function h(B) f through the Jordan structure:
/// h(B) = E h(J) E^{-1}, with the per-block Taylor coefficients computed by
/// Cauchy integrals of radius radius_factor * min(|mu|, separation/2).
ComplexVector apply_matrix_function(const RootSystem& rs, const ScalarFunction& h,
                                    const ComplexVector& f, double radius_factor = 0.25);

ComplexMatrix matrix_function_dense(const RootSystem& rs, const ScalarFunction& h,
                                    double radius_factor = 0.25);

}  // namespace speclab
