#pragma once

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace speclab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

void require_square(const ComplexMatrix& a, const char* who);
void require_finite(const ComplexMatrix& a, const char* who);

bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12);

/// Singular values, descending.
std::vector<double> singular_values(const ComplexMatrix& a);

/// Eigenvalues of a Hermitian matrix, ascending. Hermitizes (a+a*)/2 first.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

double spectral_norm(const ComplexMatrix& a);

/// Positive semidefinite test with relative slack: smallest eigenvalue
/// >= -tol * max(|eigenvalue|).
bool is_positive_semidefinite(const ComplexMatrix& hermitian, double tol = 1e-10);

/// H^{1/2} of a Hermitian PSD matrix via eigendecomposition. Eigenvalues in
/// [-clip, 0] are clipped to zero; anything more negative is an error.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& h, double clip = 1e-12);

/// Eigenvalues sorted by descending modulus.
std::vector<Complex> eigenvalues_by_modulus(const ComplexMatrix& a);

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine); }
  Complex cnormal() { return Complex(normal(), normal()); }
};

ComplexVector random_vector(int n, Rng& rng);
ComplexVector random_unit_vector(int n, Rng& rng);
ComplexMatrix random_matrix(int n, Rng& rng);
ComplexMatrix random_hermitian(int n, Rng& rng);
/// Hermitian positive definite with smallest eigenvalue >= shift.
ComplexMatrix random_hpd(int n, Rng& rng, double shift = 0.1);
ComplexMatrix random_unitary(int n, Rng& rng);

/// FNV-1a 64-bit digest, hex-encoded. Used to stamp reports with their inputs.
std::string digest_hex(const std::string& payload);

/// Fixed-format double for reproducible CSV output (%.17g).
std::string format_double(double x);

}  // namespace speclab
