#include "speclab/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace speclab {

void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_finite(const ComplexMatrix& a, const char* who) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
  }
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= tol * scale;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const auto& w = es.eigenvalues();
  return std::vector<double>(w.data(), w.data() + w.size());
}

double spectral_norm(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

bool is_positive_semidefinite(const ComplexMatrix& hermitian, double tol) {
  auto w = hermitian_eigenvalues(hermitian);
  double scale = 0.0;
  for (double v : w) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return true;
  return w.front() >= -tol * scale;
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& h, double clip) {
  require_square(h, "hermitian_sqrt");
  ComplexMatrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hs);
  RealVector w = es.eigenvalues();
  double scale = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
  RealVector sq(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double v = w(i);
    if (v < 0.0) {
      if (v < -clip * std::max(1.0, scale)) {
        throw std::invalid_argument("hermitian_sqrt: matrix is not positive semidefinite (eigenvalue " +
                                    std::to_string(v) + ")");
      }
      v = 0.0;
    }
    sq(i) = std::sqrt(v);
  }
  return es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<Complex> eigenvalues_by_modulus(const ComplexMatrix& a) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a, false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::stable_sort(ev.begin(), ev.end(),
                   [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });
  return ev;
}

ComplexVector random_vector(int n, Rng& rng) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cnormal();
  return v;
}

ComplexVector random_unit_vector(int n, Rng& rng) {
  ComplexVector v = random_vector(n, rng);
  return v / v.norm();
}

ComplexMatrix random_matrix(int n, Rng& rng) {
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  return a;
}

ComplexMatrix random_hermitian(int n, Rng& rng) {
  ComplexMatrix a = random_matrix(n, rng);
  return 0.5 * (a + a.adjoint());
}

ComplexMatrix random_hpd(int n, Rng& rng, double shift) {
  ComplexMatrix a = random_matrix(n, rng);
  return a * a.adjoint() + shift * ComplexMatrix::Identity(n, n);
}

ComplexMatrix random_unitary(int n, Rng& rng) {
  ComplexMatrix a = random_matrix(n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  // fix the phase ambiguity so the result is deterministic in exact arithmetic
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

std::string digest_hex(const std::string& payload) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

}  // namespace speclab
