#include "speclab/zoo.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace speclab {

namespace {

// 64-node Gauss-Legendre on [0, pi], computed once
const std::vector<std::pair<double, double>>& sine_quadrature() {
  static const std::vector<std::pair<double, double>> table = [] {
    const int n = 64;
    std::vector<std::pair<double, double>> t;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      double node = 0.5 * kPi * (1.0 - z);          // map [-1,1] -> [0,pi]
      double weight = kPi / ((1.0 - z * z) * pp * pp);
      t.push_back({node, weight});
    }
    return t;
  }();
  return table;
}

}  // namespace

double SturmLiouvilleModel::basis_inner(int n_idx, int m_idx) const {
  double acc = 0.0;
  for (const auto& [x, w] : sine_quadrature()) {
    acc += w * std::sin(n_idx * x) * std::sin(m_idx * x);
  }
  return acc;
}

SturmLiouvilleModel sturm_liouville(int n) {
  if (n < 1) throw std::invalid_argument("sturm_liouville: N must be >= 1");
  SturmLiouvilleModel model;
  model.n = n;
  model.matrix = ComplexMatrix::Zero(n, n);
  for (int i = 1; i <= n; ++i) model.matrix(i - 1, i - 1) = double(i) * double(i);
  return model;
}

Elliptic2dModel elliptic2d(Complex a2, Complex a0, int n) {
  if (n < 1) throw std::invalid_argument("elliptic2d: N must be >= 1");
  if (!(a2.real() > 0.0)) throw std::invalid_argument("elliptic2d: Re a2 must be positive");
  Elliptic2dModel model;
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= n; ++k) {
      model.eigenvalues.push_back(a2 * double(m * m + k * k) + a0);
    }
  }
  std::stable_sort(model.eigenvalues.begin(), model.eigenvalues.end(),
                   [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  const int dim = n * n;
  model.matrix = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) model.matrix(i, i) = model.eigenvalues[i];
  return model;
}

Complex DifferenceFractionalModel::symbol(int j) const {
  double omega = 2.0 * kPi * j / double(grid);
  Complex acc = 0.0;
  for (size_t k = 0; k < coefficients.size(); ++k) {
    acc += coefficients[k] * std::exp(Complex(0.0, -omega * double(shift_cells) * double(k)));
  }
  return acc;
}

Complex DifferenceFractionalModel::exact_symbol(int j) const {
  double omega = 2.0 * kPi * j / double(grid);
  Complex base = 1.0 - std::exp(Complex(0.0, -omega * double(shift_cells)));
  if (base == Complex(0.0, 0.0)) return 0.0;
  return std::pow(c, beta) * std::pow(base, beta);
}

DifferenceFractionalModel difference_fractional(double c, double d, double beta, int k_terms,
                                                int grid, int shift_cells) {
  if (!(c > 0.0) || !(d > 0.0)) throw std::invalid_argument("difference_fractional: need c, d > 0");
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw std::invalid_argument("difference_fractional: beta must lie in (0,1)");
  }
  if (k_terms < 1) throw std::invalid_argument("difference_fractional: K_terms must be >= 1");
  if (grid < 2 || shift_cells < 1) throw std::invalid_argument("difference_fractional: bad grid");

  DifferenceFractionalModel model;
  model.c = c;
  model.d = d;
  model.beta = beta;
  model.grid = grid;
  model.shift_cells = shift_cells;

  // M_0 = c^beta; for k >= 1 the log-gamma form avoids overflow:
  // M_k = -beta Gamma(k-beta) / (k! Gamma(1-beta)) c^beta < 0.
  const double cb = std::pow(c, beta);
  model.coefficients.resize(k_terms + 1);
  model.coefficients[0] = cb;
  for (int k = 1; k <= k_terms; ++k) {
    double lg = std::lgamma(double(k) - beta) - std::lgamma(double(k) + 1.0) - std::lgamma(1.0 - beta);
    model.coefficients[k] = -beta * std::exp(lg) * cb;
  }

  ComplexMatrix shift = ComplexMatrix::Zero(grid, grid);  // (S f)(x) = f(x - d)
  for (int i = 0; i < grid; ++i) shift(i, ((i - shift_cells) % grid + grid) % grid) = 1.0;
  model.y = c * (ComplexMatrix::Identity(grid, grid) - shift);

  // S^k shifts by k*shift_cells cells mod grid; fold the band onto the
  // periodic shift classes and assemble once per class.
  std::vector<double> class_weight(grid, 0.0);
  for (int k = 0; k <= k_terms; ++k) {
    class_weight[(std::int64_t(k) * shift_cells) % grid] += model.coefficients[k];
  }
  model.y_beta = ComplexMatrix::Zero(grid, grid);
  for (int cls = 0; cls < grid; ++cls) {
    if (class_weight[cls] == 0.0) continue;
    for (int i = 0; i < grid; ++i) {
      model.y_beta(i, ((i - cls) % grid + grid) % grid) += class_weight[cls];
    }
  }
  return model;
}

RieszKernelModel riesz_kernel(double beta, double lo, double hi, int cells) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw std::invalid_argument("riesz_kernel: beta must lie in (0,1)");
  if (!(hi > lo) || cells < 2) throw std::invalid_argument("riesz_kernel: bad grid");
  RieszKernelModel model;
  const double gamma_beta = std::tgamma(beta);
  model.b_beta = 1.0 / (2.0 * gamma_beta * std::cos(beta * kPi / 2.0));
  const double h = (hi - lo) / cells;

  // Entries depend only on the cell separation k = j - i on the uniform grid
  // (x_i at cell centers): int over cell j of |s - x_i|^{beta-1} ds with the
  // closed-form antiderivative |u|^beta / beta, split at s = x_i for k = 0.
  auto anti = [&](double u) { return std::pow(u, beta) / beta; };
  std::vector<double> sep_left(cells, 0.0), sep_right(cells, 0.0);
  sep_left[0] = anti(0.5 * h);
  sep_right[0] = anti(0.5 * h);
  for (int k = 1; k < cells; ++k) {
    sep_right[k] = anti((k + 0.5) * h) - anti((k - 0.5) * h);
  }

  model.full = ComplexMatrix::Zero(cells, cells);
  model.i_plus = ComplexMatrix::Zero(cells, cells);
  model.i_minus = ComplexMatrix::Zero(cells, cells);
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      int k = j - i;
      double left = (k <= 0) ? ((k == 0) ? sep_left[0] : sep_right[-k]) : 0.0;
      double right = (k >= 0) ? ((k == 0) ? sep_right[0] : sep_right[k]) : 0.0;
      model.i_plus(i, j) = left / gamma_beta;    // f(x - s), s > 0: sources left of x
      model.i_minus(i, j) = right / gamma_beta;  // sources right of x
      model.full(i, j) = model.b_beta * (left + right);
    }
  }
  return model;
}

ComplexMatrix subtle_diagonal(double kappa, double q, int n) {
  const double e_to_e = std::exp(std::exp(1.0));
  if (!(q > e_to_e - 1.0)) throw std::invalid_argument("subtle_diagonal: need q > e^e - 1");
  if (!(kappa > 0.0) || n < 1) throw std::invalid_argument("subtle_diagonal: bad parameters");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    double ln = std::log(double(i) + q);
    m(i - 1, i - 1) = std::pow(double(i) * ln * std::log(ln), kappa);
  }
  return m;
}

Sequence subtle_eigenvalues(double kappa, double q, double check_up_to) {
  const double e_to_e = std::exp(std::exp(1.0));
  if (!(q > e_to_e - 1.0)) throw std::invalid_argument("subtle_eigenvalues: need q > e^e - 1");
  return Sequence::increasing_generator(
      [kappa, q](double n) {
        double ln = std::log(n + q);
        return std::pow(n * ln * std::log(ln), kappa);
      },
      "subtle", check_up_to);
}

PsiValues psi_function(Complex z, double xi) {
  double mod = std::abs(z);
  if (!(mod > std::exp(1.0))) {
    throw std::domain_error("psi_function: |z| must exceed e");
  }
  if (!(xi > 0.0) || xi > 1.0) throw std::invalid_argument("psi_function: xi must lie in (0,1]");
  const double phi = std::arg(z);
  const double lnmod = std::log(mod);
  const double tau = std::atan(phi / lnmod);
  const double a = std::log(std::abs(Complex(lnmod, phi)));  // ln|ln|z| + i phi|

  PsiValues out;
  const double zxi = std::pow(mod, xi);
  const double inner_re = a * lnmod - phi * tau;
  const double inner_im = a * phi + lnmod * tau;
  out.re = zxi * (std::cos(xi * phi) * inner_re - std::sin(xi * phi) * inner_im);
  out.im = zxi * (std::sin(xi * phi) * inner_re + std::cos(xi * phi) * inner_im);
  out.value = Complex(out.re, out.im);
  out.abs2 = zxi * zxi * (lnmod * lnmod + phi * phi) * (a * a + tau * tau);
  out.arg = std::arg(out.value);
  out.direct = psi_scalar(z, xi);
  return out;
}

PhiKappaReport phi_kappa_checks(const std::vector<Complex>& spectrum, double xi, double kappa,
                                double theta, int window_lo) {
  if (!(xi * kappa * theta < kPi / 2.0)) {
    throw std::invalid_argument("phi_kappa_checks: xi*kappa*theta = " +
                                std::to_string(xi * kappa * theta) + " >= pi/2");
  }
  OperatorFunctionSpec phi = OperatorFunctionSpec::psi_kappa(xi, kappa);
  const double dom = phi.min_modulus();
  PhiKappaReport rep;
  rep.c1_window = std::numeric_limits<double>::infinity();
  rep.c2_window = 0.0;
  bool positive_tail = true;
  for (int n = static_cast<int>(spectrum.size()); n >= 1; --n) {
    if (std::abs(spectrum[n - 1]) <= dom) {
      positive_tail = false;  // below the nested-logarithm domain
      continue;
    }
    double re = phi(spectrum[n - 1]).real();
    if (re > 0.0 && positive_tail) rep.positivity_threshold = n;
    else positive_tail = false;
  }
  rep.positive_beyond_threshold = rep.positivity_threshold >= 1;
  for (int n = std::max(window_lo, 3); n <= static_cast<int>(spectrum.size()); ++n) {
    if (std::abs(spectrum[n - 1]) <= dom) continue;
    double re = phi(spectrum[n - 1]).real();
    if (!(re > 0.0)) continue;
    double lnn = std::log(double(n));
    double numer = std::pow(double(n) * lnn * std::log(lnn), kappa);
    double ratio = numer / re;
    rep.ratio.push_back(ratio);
    rep.c1_window = std::min(rep.c1_window, ratio);
    rep.c2_window = std::max(rep.c2_window, ratio);
  }
  return rep;
}

ComplexMatrix phase_constructed(const std::vector<double>& s_seq, double theta,
                                std::uint64_t seed) {
  if (!(theta > 0.0) || theta >= kPi / 2.0) {
    throw std::invalid_argument("phase_constructed: theta must lie in (0, pi/2)");
  }
  for (size_t i = 0; i < s_seq.size(); ++i) {
    if (!(s_seq[i] > 0.0)) throw std::invalid_argument("phase_constructed: singular values must be positive");
    if (i > 0 && s_seq[i] > s_seq[i - 1] * (1.0 + 1e-12)) {
      throw std::invalid_argument("phase_constructed: singular values must be non-increasing");
    }
  }
  const int n = static_cast<int>(s_seq.size());
  Rng rng(seed);
  SectorSpec sector{0.0, theta};
  for (int attempt = 0; attempt < 100; ++attempt) {
    ComplexMatrix b = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      double phase = rng.uniform(-theta / 2.0, theta / 2.0);
      b(i, i) = std::polar(s_seq[i], phase);
    }
    if (sector_check(b, sector)) return b;
  }
  throw std::runtime_error("phase_constructed: failed sector certification after 100 attempts");
}

EmbeddingReport embedding_compactness_check(std::vector<double> phi_abs,
                                            const std::vector<ComplexVector>& f_samples,
                                            const std::vector<int>& k_grid) {
  if (phi_abs.empty()) throw std::invalid_argument("embedding_compactness_check: empty phi list");
  std::sort(phi_abs.begin(), phi_abs.end());  // rearrangement to increasing
  for (size_t i = 0; i + 1 < phi_abs.size(); ++i) {
    if (!(phi_abs[i] > 0.0)) {
      throw std::invalid_argument("embedding_compactness_check: |phi| values must be positive");
    }
    if (phi_abs[i + 1] < phi_abs[i] * (1.0 - 1e-12)) {
      throw std::invalid_argument("embedding_compactness_check: non-monotone after rearrangement");
    }
  }
  EmbeddingReport rep;
  for (const auto& f : f_samples) {
    if (f.size() != static_cast<Eigen::Index>(phi_abs.size())) {
      throw std::invalid_argument("embedding_compactness_check: sample dimension mismatch");
    }
    double fnorm2 = f.squaredNorm();
    for (int k : k_grid) {
      if (k < 1 || k > static_cast<int>(phi_abs.size())) continue;
      double tail = 0.0;
      for (int m = k; m <= static_cast<int>(phi_abs.size()); ++m) {
        tail += std::norm(f(m - 1)) / phi_abs[m - 1];
      }
      EmbeddingReport::Row row;
      row.k = k;
      row.tail = tail;
      row.bound = fnorm2 / phi_abs[k - 1];
      row.ok = tail <= row.bound * (1.0 + 1e-12);
      if (!row.ok) rep.all_ok = false;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

RealComponentCheck real_component_eigen_check(const ComplexMatrix& w,
                                              const OperatorFunctionSpec& phi) {
  require_square(w, "real_component_eigen_check");
  double scale = std::max(w.norm(), 1e-300);
  if ((w * w.adjoint() - w.adjoint() * w).norm() > 1e-10 * scale * scale) {
    throw std::invalid_argument("real_component_eigen_check: input is not normal");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> es(w, true);
  const int n = static_cast<int>(w.rows());
  ComplexMatrix phi_w = ComplexMatrix::Zero(n, n);
  std::vector<double> rhs;
  {
    ComplexMatrix v = es.eigenvectors();
    ComplexVector d(n);
    for (int i = 0; i < n; ++i) {
      Complex image = phi(es.eigenvalues()(i));
      d(i) = image;
      rhs.push_back(image.real());
    }
    phi_w = v * d.asDiagonal() * v.inverse();
  }
  ComplexMatrix re_phi = 0.5 * (phi_w + phi_w.adjoint());
  RealComponentCheck check;
  check.matched_lhs = hermitian_eigenvalues(re_phi);
  check.matched_rhs = rhs;
  std::sort(check.matched_lhs.begin(), check.matched_lhs.end());
  std::sort(check.matched_rhs.begin(), check.matched_rhs.end());
  for (int i = 0; i < n; ++i) {
    check.max_deviation = std::max(check.max_deviation,
                                   std::abs(check.matched_lhs[i] - check.matched_rhs[i]));
  }
  check.ok = check.max_deviation <= 1e-10 * std::max(1.0, std::abs(check.matched_rhs.back()));
  return check;
}

}  // namespace speclab
