#include "speclab/operator_core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace speclab {

namespace {
constexpr double kPsdTol = 1e-10;

// Smallest eigenvalue and its eigenvector of a Hermitian matrix.
std::pair<double, ComplexVector> min_eigenpair(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

double psd_threshold(const ComplexMatrix& h) {
  auto w = hermitian_eigenvalues(h);
  double scale = 0.0;
  for (double v : w) scale = std::max(scale, std::abs(v));
  return -kPsdTol * scale;
}
}  // namespace

void SectorSpec::validate() const {
  if (!(semi_angle >= 0.0) || semi_angle >= kPi / 2.0) {
    throw std::invalid_argument("SectorSpec: semi_angle must lie in [0, pi/2), got " +
                                std::to_string(semi_angle));
  }
}

HermitianSplit hermitian_split(const ComplexMatrix& b) {
  require_square(b, "hermitian_split");
  require_finite(b, "hermitian_split");
  HermitianSplit out;
  out.re_part = 0.5 * (b + b.adjoint());
  out.im_part = (b - b.adjoint()) / Complex(0.0, 2.0);
  return out;
}

SectorCheckResult sector_check(const ComplexMatrix& b, const SectorSpec& s) {
  require_square(b, "sector_check");
  s.validate();
  ComplexMatrix shifted = b;
  if (s.vertex != 0.0) {
    shifted -= s.vertex * ComplexMatrix::Identity(b.rows(), b.cols());
  }
  auto split = hermitian_split(shifted);
  const double tan_theta = std::tan(s.semi_angle);

  SectorCheckResult res;
  res.inside = true;

  auto fail_with = [&](const ComplexMatrix& m) {
    auto [lambda, v] = min_eigenpair(m);
    (void)lambda;
    res.inside = false;
    res.witness = v;
    res.witness_value = v.dot(b * v);  // (bf, f); Eigen's dot conjugates the left argument
  };

  ComplexMatrix upper = tan_theta * split.re_part - split.im_part;
  ComplexMatrix lower = tan_theta * split.re_part + split.im_part;

  double thr_u = psd_threshold(upper);
  double thr_l = psd_threshold(lower);
  double thr_r = psd_threshold(split.re_part);

  if (hermitian_eigenvalues(upper).front() < thr_u) {
    fail_with(upper);
    return res;
  }
  if (hermitian_eigenvalues(lower).front() < thr_l) {
    fail_with(lower);
    return res;
  }
  if (hermitian_eigenvalues(split.re_part).front() < thr_r) {
    fail_with(split.re_part);
    return res;
  }
  return res;
}

std::vector<InequalityInstance> KyFanReport::failed() const {
  std::vector<InequalityInstance> out;
  for (const auto& inst : instances)
    if (!inst.ok) out.push_back(inst);
  return out;
}

KyFanReport kyfan_suite(const ComplexMatrix& b, const SectorSpec& s) {
  require_square(b, "kyfan_suite");
  s.validate();
  const int dim = static_cast<int>(b.rows());
  const double tan_theta = std::tan(s.semi_angle);
  const double sec_theta = 1.0 / std::cos(s.semi_angle);

  auto split = hermitian_split(b);
  ComplexMatrix re2 = split.re_part * split.re_part;
  ComplexMatrix im2 = split.im_part * split.im_part;
  ComplexMatrix sum2 = re2 + im2;

  std::vector<double> s_sum = singular_values(sum2);
  std::vector<double> s_re2 = singular_values(re2);
  std::vector<double> s_im2 = singular_values(im2);
  std::vector<double> s_b = singular_values(b);

  std::vector<double> lam_re = hermitian_eigenvalues(split.re_part);
  std::reverse(lam_re.begin(), lam_re.end());  // descending
  std::vector<double> lam_im_abs = hermitian_eigenvalues(split.im_part);
  for (double& v : lam_im_abs) v = std::abs(v);
  std::sort(lam_im_abs.begin(), lam_im_abs.end(), std::greater<double>());

  double scale = std::max({s_sum[0], s_b[0], 1e-300});
  const double tol = 1e-12 * scale;

  KyFanReport report;
  auto push = [&](std::string kind, int m, int n, double lhs, double rhs) {
    InequalityInstance inst{std::move(kind), m, n, lhs, rhs, lhs <= rhs + tol};
    if (!inst.ok) ++report.violations;
    report.instances.push_back(std::move(inst));
  };

  for (int m = 1; m <= dim; ++m) {
    for (int n = 1; m + n - 1 <= dim; ++n) {
      push("kyfan_sum", m, n, s_sum[m + n - 2], s_re2[m - 1] + s_im2[n - 1]);
    }
  }
  for (int n = 1; n <= dim; ++n) {
    push("im_vs_re", 0, n, lam_im_abs[n - 1], tan_theta * lam_re[n - 1]);
  }
  const double c = std::sqrt(2.0) * sec_theta;
  for (int m = 1; 2 * m - 1 <= dim; ++m) {
    push("sqrt2sec_odd", m, 2 * m - 1, s_b[2 * m - 2], c * lam_re[m - 1]);
    if (2 * m <= dim) {
      push("sqrt2sec_even", m, 2 * m, s_b[2 * m - 1], c * lam_re[m - 1]);
    }
  }
  return report;
}

ComplexMatrix SectorFactorization::h_sqrt() const { return hermitian_sqrt(h); }

ComplexMatrix SectorFactorization::assemble() const {
  require_square(h, "SectorFactorization");
  ComplexMatrix hs = h_sqrt();
  ComplexMatrix mid = ComplexMatrix::Identity(h.rows(), h.cols()) + Complex(0.0, 1.0) * g;
  return hs * mid * hs;
}

SectorNormCriteria sector_norm_criteria(const SectorFactorization& f, const SectorSpec& s) {
  require_square(f.h, "sector_norm_criteria");
  s.validate();
  if (!is_hermitian(f.h, 1e-10) || !is_hermitian(f.g, 1e-10)) {
    throw std::invalid_argument("sector_norm_criteria: h and g must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (f.h + f.h.adjoint()));
  RealVector lam = es.eigenvalues();
  if (lam(0) <= 0.0) {
    throw std::invalid_argument("sector_norm_criteria: h must be positive definite, min eigenvalue " +
                                std::to_string(lam(0)));
  }
  ComplexMatrix bmat = es.eigenvectors().adjoint() * f.g * es.eigenvectors();
  double sum = 0.0;
  for (Eigen::Index n = 0; n < lam.size(); ++n) {
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
      sum += std::norm(bmat(n, k)) * lam(n) / lam(k);
    }
  }
  SectorNormCriteria out;
  out.lambda_min = lam(0);
  out.lhs = std::sqrt(sum);
  const double ctg = (s.semi_angle > 0.0) ? 1.0 / std::tan(s.semi_angle)
                                          : std::numeric_limits<double>::infinity();
  const double c = ctg / lam(0);
  out.rhs_eq6d = std::isinf(c) ? -std::numeric_limits<double>::infinity()
                               : 0.5 * std::sqrt(c * c + 4.0) - c;
  out.eq7c_holds = out.lhs < 1.0;
  out.premise_holds = out.lhs < out.rhs_eq6d;
  if (out.premise_holds) {
    out.implication_holds = static_cast<bool>(sector_check(f.assemble(), s));
  }
  return out;
}

WSquareIdentity w_square_identity(const SectorFactorization& f, const ComplexVector& sample) {
  require_square(f.h, "w_square_identity");
  if (sample.size() != f.h.rows()) {
    throw std::invalid_argument("w_square_identity: sample dimension mismatch");
  }
  ComplexMatrix hs = f.h_sqrt();
  ComplexMatrix v = hs * f.g * hs;  // Im W
  ComplexMatrix w = f.h + Complex(0.0, 1.0) * v;
  ComplexMatrix w2 = w * w;

  WSquareIdentity out;
  Complex q = sample.dot(w2 * sample);  // (W^2 f, f)
  out.re_quadratic = q.real();
  out.im_quadratic = q.imag();
  ComplexVector hf = f.h * sample;
  ComplexVector vf = v * sample;
  out.re_split = hf.squaredNorm() - vf.squaredNorm();
  out.im_split = 2.0 * hf.dot(vf).real();  // 2 Re(Vf, Hf)
  out.scale = hf.squaredNorm() + vf.squaredNorm();
  return out;
}

ProbeReport h1h2_probe(const ComplexMatrix& l, const ComplexMatrix& plus_gram, int samples,
                       std::uint64_t seed) {
  require_square(l, "h1h2_probe");
  require_square(plus_gram, "h1h2_probe");
  if (l.rows() != plus_gram.rows()) {
    throw std::invalid_argument("h1h2_probe: dimension mismatch");
  }
  if (!is_positive_semidefinite(plus_gram, 1e-12) ||
      hermitian_eigenvalues(plus_gram).front() <= 0.0) {
    throw std::invalid_argument("h1h2_probe: plus_gram must be Hermitian positive definite");
  }
  const int n = static_cast<int>(l.rows());
  Rng rng(seed);
  auto plus_unit = [&](ComplexVector v) {
    double norm_plus = std::sqrt(std::abs(v.dot(plus_gram * v)));
    return ComplexVector(v / norm_plus);
  };
  ProbeReport report;
  report.sample_count = samples;
  double c1 = 0.0;
  double c2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    ComplexVector f = plus_unit(random_vector(n, rng));
    ComplexVector g = plus_unit(random_vector(n, rng));
    Complex lf_g = g.dot(l * f);   // (Lf, g)
    Complex lf_f = f.dot(l * f);   // (Lf, f)
    c1 = std::max({c1, std::abs(lf_g), std::abs(lf_f)});
    c2 = std::min(c2, lf_f.real());
  }
  report.c1_estimate = c1;
  report.c2_estimate = c2;
  report.verdict = c2 > 0.0;
  return report;
}

HermitianSquareMonitor hermitian_square_monitor(const ComplexMatrix& b) {
  require_square(b, "hermitian_square_monitor");
  Eigen::FullPivLU<ComplexMatrix> lu(b);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("hermitian_square_monitor: matrix is singular");
  }
  ComplexMatrix w = lu.inverse();
  ComplexMatrix a2 = b * b;
  ComplexMatrix lhs_mat = 0.5 * (a2 + a2.adjoint());
  ComplexMatrix w2 = w * w;
  ComplexMatrix rhs_mat = 0.5 * (w2 + w2.adjoint());

  HermitianSquareMonitor mon;
  mon.lhs_eigs = hermitian_eigenvalues(lhs_mat);
  std::reverse(mon.lhs_eigs.begin(), mon.lhs_eigs.end());  // descending
  mon.rhs_eigs = hermitian_eigenvalues(rhs_mat);            // ascending
  const size_t n = mon.lhs_eigs.size();
  mon.ratios.resize(n);
  for (size_t i = 0; i < n; ++i) {
    mon.ratios[i] = mon.lhs_eigs[i] * mon.rhs_eigs[i];
  }
  bool inc = true, dec = true;
  for (size_t i = 0; i + 1 < n; ++i) {
    double slack = 1e-9 * (std::abs(mon.ratios[i]) + std::abs(mon.ratios[i + 1]));
    if (mon.ratios[i + 1] > mon.ratios[i] + slack) dec = false;
    if (mon.ratios[i + 1] < mon.ratios[i] - slack) inc = false;
  }
  mon.monotone = inc || dec;
  return mon;
}

}  // namespace speclab
