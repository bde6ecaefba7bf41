#pragma once

#include <optional>
#include <string>
#include <vector>

#include "speclab/function_spec.hpp"
#include "speclab/operator_core.hpp"
#include "speclab/schatten.hpp"
#include "speclab/types.hpp"

namespace speclab {

struct SturmLiouvilleModel {
  ComplexMatrix matrix;  // diag(n^2)
  int n = 0;
  /// Quadrature of int_0^pi sin(nx) sin(mx) dx on a Gauss grid; equals
  /// (pi/2) delta_nm for the declared basis.
  double basis_inner(int n_idx, int m_idx) const;
};

SturmLiouvilleModel sturm_liouville(int n);

struct Elliptic2dModel {
  ComplexMatrix matrix;  // diag of a2 (m^2+k^2) + a0 sorted by modulus
  std::vector<Complex> eigenvalues;
};

Elliptic2dModel elliptic2d(Complex a2, Complex a0, int n);

struct DifferenceFractionalModel {
  std::vector<double> coefficients;  // M_k, k = 0..k_terms
  ComplexMatrix y;                   // c (I - S_d) on the periodic grid
  ComplexMatrix y_beta;              // sum_k M_k S_d^k truncated
  double c = 0.0, d = 0.0, beta = 0.0;
  int grid = 0, shift_cells = 0;
  /// Symbol of the truncated Y^beta at frequency index j (grid periodic).
  Complex symbol(int j) const;
  Complex exact_symbol(int j) const;  // c^beta (1 - e^{-i omega d})^beta
};

DifferenceFractionalModel difference_fractional(double c, double d, double beta, int k_terms,
                                                int grid, int shift_cells = 1);

struct RieszKernelModel {
  ComplexMatrix full;     // B_beta |s-x|^{beta-1} integrated cellwise
  ComplexMatrix i_plus;   // left fractional integral piece
  ComplexMatrix i_minus;  // right piece
  double b_beta = 0.0;
};

/// Uniform grid of `cells` cells on [lo, hi]; diagonal singularity handled by
/// the closed-form cell integral of |u|^{beta-1}.
RieszKernelModel riesz_kernel(double beta, double lo, double hi, int cells);

ComplexMatrix subtle_diagonal(double kappa, double q, int n);
/// Generator form of the same eigenvalue sequence (increasing).
Sequence subtle_eigenvalues(double kappa, double q, double check_up_to = 1e12);

struct PsiValues {
  Complex value;   // split-formula evaluation
  double re = 0.0;
  double im = 0.0;
  double abs2 = 0.0;
  double arg = 0.0;
  Complex direct;  // z^xi ln z lnln z evaluated directly
};

/// Real/imaginary split of psi(z) = z^xi ln z lnln z per the explicit
/// a-notation decomposition; |z| must exceed e.
PsiValues psi_function(Complex z, double xi);

struct PhiKappaReport {
  std::vector<double> ratio;    // (n ln n lnln n)^kappa / Re psi^kappa(lambda_n)
  double c1_window = 0.0;       // min ratio over the window
  double c2_window = 0.0;       // max ratio over the window
  int positivity_threshold = -1;  // first index with Re psi^kappa > 0 onwards
  bool positive_beyond_threshold = false;
};

/// eq-style window bounds for spectra with |lambda_n| ~ n^{1/xi}; requires
/// xi*kappa*theta < pi/2.
PhiKappaReport phi_kappa_checks(const std::vector<Complex>& spectrum, double xi, double kappa,
                                double theta, int window_lo = 1);

/// B = U diag(s) with U = diag(e^{i phi_n}), |phi_n| <= theta/2 random;
/// certified sectorial at theta, singular values exactly s_seq.
ComplexMatrix phase_constructed(const std::vector<double>& s_seq, double theta,
                                std::uint64_t seed);

struct EmbeddingReport {
  struct Row {
    int k = 0;
    double tail = 0.0;
    double bound = 0.0;  // ||f||^2 / |phi(lambda_k)|
    bool ok = false;
  };
  std::vector<Row> rows;
  bool all_ok = true;
};

/// Tail bound sum_{n>=k} |phi_n|^{-1} |f_n|^2 <= ||f||^2 / |phi_k| for
/// increasing |phi_n| (rearranged if needed).
EmbeddingReport embedding_compactness_check(std::vector<double> phi_abs,
                                            const std::vector<ComplexVector>& f_samples,
                                            const std::vector<int>& k_grid);

struct RealComponentCheck {
  std::vector<double> matched_lhs;  // lambda_n(Re phi(W)) sorted
  std::vector<double> matched_rhs;  // Re phi(lambda_n(W)) sorted
  double max_deviation = 0.0;
  bool ok = false;
};

/// For normal truncations: the spectrum of Re phi(W) equals {Re phi(lambda_n)}
/// as a multiset. Non-normal input is rejected.
RealComponentCheck real_component_eigen_check(const ComplexMatrix& w,
                                              const OperatorFunctionSpec& phi);

}  // namespace speclab
