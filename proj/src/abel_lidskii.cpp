#include "speclab/abel_lidskii.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace speclab {

std::vector<Complex> hm_coefficients(const OperatorFunctionSpec& phi, Complex z, double t,
                                     int m_max) {
  if (z == Complex(0.0, 0.0)) throw std::invalid_argument("hm_coefficients: z must be nonzero");
  if (m_max < 0) throw std::invalid_argument("hm_coefficients: m_max must be >= 0");
  std::vector<Complex> h(m_max + 1, Complex(0.0, 0.0));
  h[0] = 1.0;
  if (m_max == 0 || t == 0.0) return h;  // derivatives of a constant vanish at t = 0

  // g(zeta) = -t phi(1/zeta) expanded at zeta0 = 1/z; then
  // H_m = [eps^m] exp(g(zeta0+eps) - g(zeta0)).
  const int deg = m_max;
  Jet zeta = Jet::variable(1.0 / z, deg);
  Jet inner = zeta.reciprocal();  // 1/zeta, constant term z
  Jet g = phi.evaluate(inner) * Complex(-t, 0.0);
  g[0] = 0.0;  // exp(g - g0)
  Jet e = g.exp();
  for (int m = 1; m <= m_max; ++m) h[m] = e[m];
  return h;
}

std::vector<Complex> chain_coefficients_t(const OperatorFunctionSpec& phi, Complex lambda,
                                          double t, const std::vector<Complex>& c0) {
  const int k = static_cast<int>(c0.size());
  if (k == 0) return {};
  if (t == 0.0) return c0;
  auto h = hm_coefficients(phi, lambda, t, k - 1);
  Complex damp = std::exp(-phi(lambda) * t);
  std::vector<Complex> out(k);
  for (int i = 0; i < k; ++i) {
    Complex acc = 0.0;
    for (int m = 0; m + i < k; ++m) acc += h[m] * c0[i + m];
    out[i] = damp * acc;
  }
  return out;
}

double BracketingPlan::verify() const {
  double worst = 0.0;
  // relative defects: the identities tie together quantities of size |mu|^alpha
  auto track = [&](double defect, double scale) {
    worst = std::max(worst, std::abs(defect) / std::max(1.0, std::abs(scale)));
  };
  for (size_t v = 0; v < boundary_modulus.size(); ++v) {
    double mu = boundary_modulus[v];
    double inv_delta = 1.0 + std::pow(mu, alpha) / K;
    track(1.0 / delta[v] - inv_delta, inv_delta);
    track(ring_outer[v] - (K * std::pow(mu, 1.0 - alpha) + mu), ring_outer[v]);
    track(ring_outer[v] * (1.0 - delta[v]) - mu, mu);
    if (!((1.0 - delta[v]) * ring_outer[v] < arch_radius[v] && arch_radius[v] < ring_outer[v])) {
      track(1.0, 1.0);
    }
    if (v + 1 < boundary_modulus.size()) {
      if (!(ring_outer[v] < ring_outer[v + 1] * (1.0 - delta[v + 1]) + 1e-12 * ring_outer[v])) {
        track(ring_outer[v] - ring_outer[v + 1] * (1.0 - delta[v + 1]), ring_outer[v]);
      }
    }
  }
  // grouping conditions: boundary gaps >= K|mu|^{1-alpha}, in-group gaps <=
  for (int nu = 0; nu < group_count(); ++nu) {
    auto [lo, hi] = group_range(nu);
    for (int i = lo + 1; i < hi; ++i) {
      double gap = moduli[i] - moduli[i - 1];
      double cap = K * std::pow(moduli[i - 1], 1.0 - alpha);
      if (gap > cap * (1.0 + 1e-12)) track(gap - cap, cap);
    }
    if (hi < static_cast<int>(moduli.size())) {
      double gap = moduli[hi] - moduli[hi - 1];
      double need = K * std::pow(moduli[hi - 1], 1.0 - alpha);
      if (gap < need * (1.0 - 1e-12)) track(need - gap, need);
    }
  }
  return worst;
}

BracketingPlan bracketing_plan(const std::vector<double>& mu, double alpha, double K) {
  if (mu.empty()) throw std::invalid_argument("bracketing_plan: empty modulus list");
  if (!(alpha > 0.0) || alpha == std::floor(alpha)) {
    throw std::invalid_argument("bracketing_plan: alpha must be positive non-integer");
  }
  if (!(K > 0.0)) throw std::invalid_argument("bracketing_plan: K must be positive");
  for (size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0)) throw std::invalid_argument("bracketing_plan: moduli must be positive");
    if (i > 0 && mu[i] < mu[i - 1]) {
      throw std::invalid_argument("bracketing_plan: moduli must be sorted increasing");
    }
  }

  BracketingPlan plan;
  plan.alpha = alpha;
  plan.m = static_cast<int>(std::floor(alpha));
  plan.K = K;
  plan.moduli = mu;
  plan.boundaries.push_back(0);
  for (size_t i = 0; i + 1 < mu.size(); ++i) {
    double gap = mu[i + 1] - mu[i];
    if (gap >= K * std::pow(mu[i], 1.0 - alpha)) {
      plan.boundaries.push_back(static_cast<int>(i) + 1);
    }
  }
  plan.boundaries.push_back(static_cast<int>(mu.size()));
  if (plan.boundaries.size() == 2) plan.single_group_warning = true;

  for (size_t v = 1; v < plan.boundaries.size(); ++v) {
    double m_abs = mu[plan.boundaries[v] - 1];
    double d = 1.0 / (1.0 + std::pow(m_abs, alpha) / K);
    double r = K * std::pow(m_abs, 1.0 - alpha) + m_abs;
    plan.boundary_modulus.push_back(m_abs);
    plan.delta.push_back(d);
    plan.ring_outer.push_back(r);
    plan.arch_radius.push_back(0.5 * ((1.0 - d) * r + r));  // ring midpoint
  }
  return plan;
}

double default_gap_constant(const std::vector<double>& mu, double alpha) {
  if (mu.size() < 2) return 1.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < mu.size(); ++i) {
    double gap = mu[i + 1] - mu[i];
    if (gap <= 0.0) continue;
    min_ratio = std::min(min_ratio, gap / std::pow(mu[i], 1.0 - alpha));
  }
  if (!std::isfinite(min_ratio) || min_ratio <= 0.0) return 1.0;
  return 0.5 * min_ratio;
}

SummationContext make_summation_context(const RootSystem& rs, const BiorthogonalSystem& bs) {
  SummationContext ctx;
  ctx.rs = &rs;
  ctx.bs = &bs;
  ctx.order.resize(rs.groups.size());
  for (size_t i = 0; i < rs.groups.size(); ++i) ctx.order[static_cast<int>(i)] = static_cast<int>(i);
  std::stable_sort(ctx.order.begin(), ctx.order.end(), [&](int a, int b) {
    return std::abs(rs.characteristic_number(a)) < std::abs(rs.characteristic_number(b));
  });
  for (int g : ctx.order) ctx.char_moduli.push_back(std::abs(rs.characteristic_number(g)));
  return ctx;
}

GroupSum group_sum(const ComplexVector& f, const SummationContext& ctx,
                   const OperatorFunctionSpec& phi, double t, const BracketingPlan& plan, int nu) {
  if (nu < 0 || nu >= plan.group_count()) {
    throw std::invalid_argument("group_sum: group index out of range");
  }
  const RootSystem& rs = *ctx.rs;
  auto coeffs = coefficients_c0(f, rs, *ctx.bs);

  GroupSum out;
  out.nu = nu;
  out.value = ComplexVector::Zero(rs.dim);
  auto [lo, hi] = plan.group_range(nu);
  for (int pos = lo; pos < hi; ++pos) {
    int g = ctx.order[pos];
    const auto& group = rs.groups[g];
    Complex lambda = rs.characteristic_number(g);
    int base = rs.flat_index(g, 0, 0);
    int offset = 0;
    for (const auto& chain : group.chains) {
      int k = chain.length();
      std::vector<Complex> c0(coeffs.begin() + base + offset, coeffs.begin() + base + offset + k);
      auto ct = (t == 0.0) ? c0 : chain_coefficients_t(phi, lambda, t, c0);
      for (int i = 0; i < k; ++i) out.value += chain.vectors[i] * ct[i];
      offset += k;
    }
  }
  out.norm = out.value.norm();
  return out;
}

AbelLidskiiResult abel_lidskii_sum(const SummationContext& ctx, const OperatorFunctionSpec& phi,
                                   double t, const ComplexVector& f, const BracketingPlan& plan,
                                   int threads) {
  const int groups = plan.group_count();
  std::vector<GroupSum> sums(groups);
  if (threads > 1 && groups > 1) {
    std::vector<std::future<GroupSum>> futures;
    futures.reserve(groups);
    for (int nu = 0; nu < groups; ++nu) {
      futures.push_back(std::async(std::launch::async, [&, nu] {
        return group_sum(f, ctx, phi, t, plan, nu);
      }));
    }
    for (int nu = 0; nu < groups; ++nu) sums[nu] = futures[nu].get();
  } else {
    for (int nu = 0; nu < groups; ++nu) sums[nu] = group_sum(f, ctx, phi, t, plan, nu);
  }

  AbelLidskiiResult result;
  result.value = ComplexVector::Zero(ctx.rs->dim);
  // compensated accumulation in ascending nu
  ComplexVector comp = ComplexVector::Zero(ctx.rs->dim);
  for (int nu = 0; nu < groups; ++nu) {
    for (Eigen::Index i = 0; i < result.value.size(); ++i) {
      Complex y = sums[nu].value(i) - comp(i);
      Complex s = result.value(i) + y;
      comp(i) = (s - result.value(i)) - y;
      result.value(i) = s;
    }
    result.group_norms.push_back(sums[nu].norm);
  }
  return result;
}

bool S1DecayReport::all_summable() const {
  for (const auto& r : rows)
    if (!r.summable) return false;
  return !rows.empty();
}

S1DecayReport s1_norm_monitor(const std::vector<std::vector<double>>& group_norms_per_t,
                              const std::vector<double>& t_grid) {
  if (group_norms_per_t.size() != t_grid.size()) {
    throw std::invalid_argument("s1_norm_monitor: grid size mismatch");
  }
  S1DecayReport report;
  for (size_t ti = 0; ti < t_grid.size(); ++ti) {
    const auto& norms = group_norms_per_t[ti];
    if (norms.size() < 3) throw std::invalid_argument("s1_norm_monitor: need >= 3 groups");
    S1DecayRow row;
    row.t = t_grid[ti];
    row.max_norm = *std::max_element(norms.begin(), norms.end());
    row.last_norm = norms.back();
    row.monotone_from = 0;
    for (size_t i = 0; i + 1 < norms.size(); ++i) {
      if (norms[i + 1] > norms[i] * (1.0 + 1e-12)) row.monotone_from = static_cast<int>(i) + 1;
    }
    row.summable = row.last_norm <= 1e-3 * row.max_norm;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace speclab
