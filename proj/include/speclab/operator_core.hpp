#pragma once

#include <optional>
#include <string>
#include <vector>

#include "speclab/types.hpp"

namespace speclab {

/// Closed sector {z : |arg(z - vertex)| <= semi_angle} with vertex on the
/// real axis and semi-angle strictly below pi/2.
struct SectorSpec {
  double vertex = 0.0;
  double semi_angle = 0.0;
  void validate() const;
};

struct HermitianSplit {
  ComplexMatrix re_part;
  ComplexMatrix im_part;
};

/// re = (b+b*)/2, im = (b-b*)/(2i); b = re + i*im.
HermitianSplit hermitian_split(const ComplexMatrix& b);

struct SectorCheckResult {
  bool inside = false;
  /// Unit vector f with (bf,f) outside the sector; empty when inside.
  ComplexVector witness;
  Complex witness_value{0.0, 0.0};
  explicit operator bool() const { return inside; }
};

/// Exact numerical-range test: true iff tan(theta)*Re(b) +- Im(b) and Re(b)
/// are all positive semidefinite (after shifting by the vertex).
SectorCheckResult sector_check(const ComplexMatrix& b, const SectorSpec& s);

struct InequalityInstance {
  std::string kind;
  int m = 0;
  int n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
  double margin() const { return rhs - lhs; }
};

struct KyFanReport {
  std::vector<InequalityInstance> instances;
  int violations = 0;
  bool all_ok() const { return violations == 0; }
  std::vector<InequalityInstance> failed() const;
};

/// Singular-value inequality suite for a sector-certified matrix:
///   s_{m+n-1}(Re^2+Im^2) <= s_m(Re^2) + s_n(Im^2)      (all valid m,n)
///   |lambda_n(Im)|       <= tan(theta) * lambda_n(Re)  (all n)
///   s_{2m-1}(b), s_{2m}(b) <= sqrt(2) sec(theta) s_m(Re)
/// Violations are reported with indices, never silently dropped.
KyFanReport kyfan_suite(const ComplexMatrix& b, const SectorSpec& s);

/// Assembled operator H^{1/2}(I + iG)H^{1/2} with H Hermitian PSD and G
/// Hermitian.
struct SectorFactorization {
  ComplexMatrix h;
  ComplexMatrix g;
  ComplexMatrix assemble() const;
  ComplexMatrix h_sqrt() const;
};

struct SectorNormCriteria {
  double lhs = 0.0;            // weighted Hilbert-Schmidt norm of G in H's eigenbasis
  double rhs_eq6d = 0.0;       // 0.5*sqrt((ctg/l1)^2+4) - ctg/l1
  bool eq7c_holds = false;     // lhs < 1
  bool premise_holds = false;  // lhs < rhs_eq6d
  /// premise => sector_check(assembled, theta); true when the premise fails.
  bool implication_holds = true;
  double lambda_min = 0.0;
};

/// lhs = (sum_{n,k} |b_nk|^2 lambda_n/lambda_k)^{1/2} with b the matrix of g
/// in h's eigenbasis; requires h positive definite.
SectorNormCriteria sector_norm_criteria(const SectorFactorization& f, const SectorSpec& s);

struct WSquareIdentity {
  double re_quadratic = 0.0;  // Re(W^2 f, f)
  double re_split = 0.0;      // ||Hf||^2 - ||H^{1/2}GH^{1/2} f||^2
  double im_quadratic = 0.0;  // Im(W^2 f, f)
  double im_split = 0.0;      // 2 Re(H^{1/2}GH^{1/2} f, Hf)
  double scale = 0.0;         // ||Hf||^2 + ||H^{1/2}GH^{1/2} f||^2, for relative margins
};

WSquareIdentity w_square_identity(const SectorFactorization& f, const ComplexVector& sample);

struct ProbeReport {
  double c1_estimate = 0.0;
  double c2_estimate = 0.0;
  int sample_count = 0;
  bool verdict = false;  // pass iff c2_estimate > 0
};

/// Samples unit vectors of the ||.||_+ norm induced by plus_gram and estimates
/// the boundedness/coercivity constants of l over the sample set. Pairs (f,g)
/// and the diagonal (f,f) are both sampled. Deterministic under fixed seed.
ProbeReport h1h2_probe(const ComplexMatrix& l, const ComplexMatrix& plus_gram, int samples,
                       std::uint64_t seed);

struct HermitianSquareMonitor {
  std::vector<double> lhs_eigs;  // eigenvalues of (A^2+A*^2)/2, descending (A := b)
  std::vector<double> rhs_eigs;  // eigenvalues of Re(W^2), ascending (W := b^{-1})
  std::vector<double> ratios;    // lhs[i] * rhs[i], i.e. lhs[i] / (1/rhs[i])
  bool monotone = true;          // false flags non-monotone ratio drift
};

/// Ratio trace for the asymptotic comparison of (A^2+A*^2)/2 against the
/// reciprocal spectrum of Re(W^2); report only, no pass/fail.
HermitianSquareMonitor hermitian_square_monitor(const ComplexMatrix& b);

}  // namespace speclab
