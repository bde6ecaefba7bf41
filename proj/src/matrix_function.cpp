#include "speclab/matrix_function.hpp"

#include <cmath>

#include <Eigen/LU>

namespace speclab {

std::vector<Complex> taylor_coefficients(const ScalarFunction& h, Complex center, int degree,
                                         double radius, int nodes) {
  if (degree < 0) throw std::invalid_argument("taylor_coefficients: degree must be >= 0");
  if (!(radius > 0.0)) throw std::invalid_argument("taylor_coefficients: radius must be positive");
  std::vector<Complex> coeff(degree + 1, Complex(0.0, 0.0));
  if (degree == 0) {
    coeff[0] = h(center);
    return coeff;
  }
  for (int j = 0; j < nodes; ++j) {
    double angle = 2.0 * kPi * j / nodes;
    Complex rot = std::polar(1.0, angle);
    Complex value = h(center + radius * rot);
    Complex rot_pow = 1.0;
    for (int m = 0; m <= degree; ++m) {
      coeff[m] += value / rot_pow;
      rot_pow *= rot;
    }
  }
  double r_pow = 1.0;
  for (int m = 0; m <= degree; ++m) {
    coeff[m] /= double(nodes) * r_pow;
    r_pow *= radius;
  }
  return coeff;
}

namespace {

// Per-group disk radius: stay well inside the analyticity region (h is
// typically singular at 0 and at other eigenvalue clusters).
double group_radius(const RootSystem& rs, int group, double radius_factor) {
  Complex mu = rs.groups[group].eigenvalue;
  double r = radius_factor * std::abs(mu);
  for (size_t g = 0; g < rs.groups.size(); ++g) {
    if (static_cast<int>(g) == group) continue;
    r = std::min(r, 0.4 * std::abs(mu - rs.groups[g].eigenvalue));
  }
  if (!(r > 0.0)) throw std::runtime_error("apply_matrix_function: degenerate disk radius");
  return r;
}

}  // namespace

ComplexVector apply_matrix_function(const RootSystem& rs, const ScalarFunction& h,
                                    const ComplexVector& f, double radius_factor) {
  if (f.size() != rs.dim) throw std::invalid_argument("apply_matrix_function: dimension mismatch");
  if (rs.nu_total() != rs.dim) {
    throw std::invalid_argument("apply_matrix_function: root system does not span the truncation");
  }
  ComplexMatrix e = rs.basis_matrix();
  Eigen::PartialPivLU<ComplexMatrix> lu(e);
  ComplexVector coords = lu.solve(f);

  ComplexVector image_coords(rs.dim);
  int base = 0;
  for (size_t g = 0; g < rs.groups.size(); ++g) {
    const auto& group = rs.groups[g];
    int max_len = 0;
    for (const auto& c : group.chains) max_len = std::max(max_len, c.length());
    std::vector<Complex> taylor;
    if (max_len == 1) {
      taylor = {h(group.eigenvalue)};
    } else {
      taylor = taylor_coefficients(h, group.eigenvalue, max_len - 1,
                                   group_radius(rs, static_cast<int>(g), radius_factor));
    }
    for (const auto& c : group.chains) {
      int k = c.length();
      // h(J) on one block is upper-triangular Toeplitz in the chain basis:
      // (h(B) e_j) coordinates pick up taylor[d] from e_{j-d}.
      for (int j = 0; j < k; ++j) {
        Complex acc = 0.0;
        for (int d = 0; d + j < k; ++d) {
          acc += taylor[d] * coords(base + j + d);
        }
        image_coords(base + j) = acc;
      }
      base += k;
    }
  }
  return e * image_coords;
}

ComplexMatrix matrix_function_dense(const RootSystem& rs, const ScalarFunction& h,
                                    double radius_factor) {
  ComplexMatrix out(rs.dim, rs.dim);
  for (int j = 0; j < rs.dim; ++j) {
    ComplexVector basis = ComplexVector::Zero(rs.dim);
    basis(j) = 1.0;
    out.col(j) = apply_matrix_function(rs, h, basis, radius_factor);
  }
  return out;
}

}  // namespace speclab
