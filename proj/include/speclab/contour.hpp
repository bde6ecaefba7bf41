#pragma once

#include <vector>

#include "speclab/abel_lidskii.hpp"
#include "speclab/function_spec.hpp"
#include "speclab/schatten.hpp"
#include "speclab/types.hpp"

namespace speclab {

/// Sector contour: arc {|l| = r, theta0-eps <= arg l <= theta1+eps} joined to
/// the two rays {|l| > r, arg l = theta0-eps or theta1+eps}. Traversal order
/// (lower ray in, arc counterclockwise, upper ray out) makes
/// (1/2pi i) * integral reproduce positive residues at the enclosed spectrum.
struct ContourSpec {
  double r = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  double epsilon = 0.0;
  double r_max = 0.0;  // 0 = choose from the integrand decay
  int nodes_arc = 24;  // Gauss-Legendre nodes per arc panel
  int nodes_ray = 12;  // Gauss-Legendre nodes per geometric ray panel
  void validate() const;
};

/// R_W(lambda) f = (W - lambda I)^{-1} f; residual-checked solve. The bridge
/// identity R_W(lambda) = B (I - lambda B)^{-1} with B = W^{-1} holds in this
/// convention.
ComplexVector resolvent_apply(const ComplexMatrix& w, Complex lambda, const ComplexVector& f);

struct QuadratureResult {
  ComplexVector value;
  double error_estimate = 0.0;  // node-doubling comparison
  double tail_bound = 0.0;      // integrand modulus at the truncated ray end
};

/// (1/2pi i) contour integral of e^{-phi(l) t} phi(l) R_W(l) f; equals the
/// residue sum over the truncation spectrum within error_estimate.
QuadratureResult operator_function_apply(const ComplexMatrix& w, const OperatorFunctionSpec& phi,
                                         double t, const ComplexVector& f,
                                         const ContourSpec& contour);

struct TZeroResult {
  ComplexVector limit;
  bool monotone = true;
  double error_estimate = 0.0;
};

/// Richardson extrapolation of samples u(t_j) on a geometric t grid to t = 0.
TZeroResult t_zero_extrapolation(const std::vector<double>& t_values,
                                 const std::vector<ComplexVector>& u_values);

struct S1ContourResult {
  ComplexVector total;                     // sum of the segment integrals
  ComplexVector full;                      // unsegmented contour integral (same node set)
  std::vector<ComplexVector> group_values; // per bracketed group
  std::vector<double> j_arch;              // ||(1/2pi i) integral over arch nu||
  std::vector<double> j_plus;              // upper-ray segment magnitudes
  std::vector<double> j_minus;             // lower-ray segment magnitudes
  bool arch_summable = false;
  bool plus_summable = false;
  bool minus_summable = false;
};

/// Segmented evaluation of (1/2pi i) * integral of e^{-l^alpha t} B(I-lB)^{-1} f
/// over the sector contour, cut along the plan's arch radii; the segment around
/// group nu reproduces the bracketed group sum.
S1ContourResult s1_contour_sum(const ComplexMatrix& b, double alpha, double t,
                               const ComplexVector& f, const ContourSpec& contour,
                               const BracketingPlan& plan);

struct RayBoundReport {
  double sup_value = 0.0;
  std::vector<double> values;  // ||(I - l B)^{-1}|| * sin(psi) per radius
  double psi = 0.0;
  bool ok = false;  // sup <= 1 + 1e-8
};

/// Resolvent bound along a ray outside the sector: for sector-certified b,
/// ||(I - l B)^{-1}|| <= 1/sin(psi) with psi the angular distance of the ray
/// from the sector.
RayBoundReport ray_resolvent_bound(const ComplexMatrix& b, double sector_halfangle,
                                   double ray_angle, const std::vector<double>& radii);

struct EnvelopeCheckRow {
  int nu = 0;
  double radius = 0.0;
  double resolvent_max = 0.0;
  double envelope = 0.0;
  bool ok = false;
};

/// Fredholm-determinant growth envelope on the plan's arch radii:
/// max_arch ||(I-lB)^{-1}|| <= e^{gamma(|l|)|l|^alpha} |l|^m with
/// gamma(|l|) = beta(|l|^{m+1}) + (2+ln(4e/delta_nu)) beta(sigma |l|^{m+1}) sigma^{alpha/(m+1)}.
std::vector<EnvelopeCheckRow> fredholm_envelope_check(const ComplexMatrix& b,
                                                      const BracketingPlan& plan, double alpha,
                                                      int samples_per_arch = 24);

}  // namespace speclab
