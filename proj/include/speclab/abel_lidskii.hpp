#pragma once

#include <vector>

#include "speclab/function_spec.hpp"
#include "speclab/jordan.hpp"
#include "speclab/types.hpp"

namespace speclab {

/// H_m(phi, z, t) = (e^{phi(z)t}/m!) d^m/dzeta^m e^{-phi(1/zeta)t} at
/// zeta = 1/z, computed by jet arithmetic. H_0 = 1 identically.
std::vector<Complex> hm_coefficients(const OperatorFunctionSpec& phi, Complex z, double t,
                                     int m_max);

/// Time-dependent chain coefficients:
/// c_i(t) = e^{-phi(lambda)t} sum_{m=0}^{k-1-i} H_m(phi, lambda, t) c_{i+m},
/// with lambda the characteristic number of the chain's eigenvalue group.
std::vector<Complex> chain_coefficients_t(const OperatorFunctionSpec& phi, Complex lambda,
                                          double t, const std::vector<Complex>& c0);

/// Group boundaries, ring radii and shrink factors for the bracketed series.
struct BracketingPlan {
  double alpha = 0.0;
  int m = 0;  // floor(alpha)
  double K = 0.0;
  /// Characteristic moduli, increasing (one per eigenvalue group).
  std::vector<double> moduli;
  /// Boundary positions: group nu covers moduli indices (boundaries[nu], boundaries[nu+1]],
  /// 0-based half-open; boundaries.front() == 0, boundaries.back() == moduli.size().
  std::vector<int> boundaries;
  std::vector<double> boundary_modulus;  // |mu_{N_nu}| per interior/final boundary
  std::vector<double> delta;             // delta_nu^{-1} = 1 + K^{-1}|mu|^alpha
  std::vector<double> ring_outer;        // R_nu = K|mu|^{1-alpha} + |mu|
  std::vector<double> arch_radius;       // R~_nu in ((1-delta)R, R)
  bool single_group_warning = false;

  int group_count() const { return static_cast<int>(boundaries.size()) - 1; }
  std::pair<int, int> group_range(int nu) const {
    return {boundaries[nu], boundaries[nu + 1]};
  }
  double delta0() const { return delta.empty() ? 0.5 : delta.front(); }
  double sigma() const { return std::pow(2.0 * std::exp(1.0) / (1.0 - delta0()), m + 1); }
  /// Re-verifies every algebraic invariant; returns the worst absolute defect.
  double verify() const;
};

/// Boundaries are placed exactly where |mu_{N+1}| - |mu_N| >= K |mu_N|^{1-alpha}.
/// A list with no interior boundary yields a single-group plan with a warning.
BracketingPlan bracketing_plan(const std::vector<double>& char_moduli_increasing, double alpha,
                               double K);

/// Default gap constant: half the smallest observed gap ratio
/// (|mu_{n+1}| - |mu_n|) / |mu_n|^{1-alpha}.
double default_gap_constant(const std::vector<double>& char_moduli_increasing, double alpha);

/// Root-system groups ordered by increasing characteristic modulus, shared by
/// the summation engine and the contour cross-checks.
struct SummationContext {
  const RootSystem* rs = nullptr;
  const BiorthogonalSystem* bs = nullptr;
  std::vector<int> order;          // group indices sorted by |1/mu| increasing
  std::vector<double> char_moduli; // sorted |1/mu|
};

SummationContext make_summation_context(const RootSystem& rs, const BiorthogonalSystem& bs);

struct GroupSum {
  int nu = 0;
  ComplexVector value;
  double norm = 0.0;
};

GroupSum group_sum(const ComplexVector& f, const SummationContext& ctx,
                   const OperatorFunctionSpec& phi, double t, const BracketingPlan& plan, int nu);

struct AbelLidskiiResult {
  ComplexVector value;
  std::vector<double> group_norms;
};

/// Sum of all bracketed groups; at t = 0 returns the plain biorthogonal
/// expansion. Groups may be evaluated concurrently; accumulation is always
/// in ascending nu with compensated summation.
AbelLidskiiResult abel_lidskii_sum(const SummationContext& ctx, const OperatorFunctionSpec& phi,
                                   double t, const ComplexVector& f, const BracketingPlan& plan,
                                   int threads = 1);

struct S1DecayRow {
  double t = 0.0;
  double max_norm = 0.0;
  double last_norm = 0.0;
  int monotone_from = -1;  // first group index after which norms are non-increasing
  bool summable = false;   // last norm <= 1e-3 * max norm
};

struct S1DecayReport {
  std::vector<S1DecayRow> rows;
  bool all_summable() const;
};

/// Decay diagnostics of per-group norms over a t grid; requires >= 3 groups.
S1DecayReport s1_norm_monitor(const std::vector<std::vector<double>>& group_norms_per_t,
                              const std::vector<double>& t_grid);

}  // namespace speclab
