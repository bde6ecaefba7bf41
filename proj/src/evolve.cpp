#include "speclab/evolve.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/LU>

#include "speclab/contour.hpp"
#include "speclab/matrix_function.hpp"
#include "speclab/matrix_market.hpp"
#include "speclab/zoo.hpp"

namespace speclab {

namespace {

RootSystem diagonal_root_system(const ComplexMatrix& b) {
  // exact structure for diagonal truncations, ordered by |1/mu| increasing
  const int n = static_cast<int>(b.rows());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int c) {
    return std::abs(1.0 / b(a, a)) < std::abs(1.0 / b(c, c));
  });
  RootSystem rs;
  rs.dim = n;
  for (int i : idx) {
    EigenvalueGroup g;
    g.eigenvalue = b(i, i);
    JordanChain chain;
    chain.eigenvalue = b(i, i);
    ComplexVector e = ComplexVector::Zero(n);
    e(i) = 1.0;
    chain.vectors.push_back(e);
    g.chains.push_back(chain);
    rs.groups.push_back(std::move(g));
  }
  return rs;
}

bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

}  // namespace

ModelBuild build_model(const Config& cfg) {
  ModelBuild out;
  out.variant = cfg.get("model.variant");
  std::string side = "W";
  if (out.variant == "sturm_liouville") {
    out.w = sturm_liouville(static_cast<int>(cfg.get_int("model.n"))).matrix;
  } else if (out.variant == "elliptic2d") {
    Complex a2(cfg.get_double_or("model.a2_re", 1.0), cfg.get_double_or("model.a2_im", 0.0));
    Complex a0(cfg.get_double_or("model.a0_re", 0.0), cfg.get_double_or("model.a0_im", 0.0));
    out.w = elliptic2d(a2, a0, static_cast<int>(cfg.get_int("model.n"))).matrix;
  } else if (out.variant == "subtle_diagonal") {
    out.w = subtle_diagonal(cfg.get_double("model.kappa"), cfg.get_double("model.q"),
                            static_cast<int>(cfg.get_int("model.n")));
  } else if (out.variant == "diag") {
    auto vals = cfg.get_doubles("model.values");
    out.w = ComplexMatrix::Zero(vals.size(), vals.size());
    for (size_t i = 0; i < vals.size(); ++i) out.w(i, i) = vals[i];
  } else if (out.variant == "phase_constructed") {
    side = "B";
    int n = static_cast<int>(cfg.get_int("model.n"));
    double rho = cfg.get_double_or("model.rho", 1.5);
    std::vector<double> s;
    for (int m = 1; m <= n; ++m) {
      double mm = double(m) + 1.0;  // (m ln m) starts at m = 2 to dodge ln 1 = 0
      s.push_back(std::pow(mm * std::log(mm), -1.0 / rho));
    }
    double theta = cfg.get_double_or("model.theta", 0.3);
    out.b = phase_constructed(s, theta, static_cast<std::uint64_t>(cfg.get_int_or("model.seed", 1)));
    out.sector_halfangle = theta;
  } else if (out.variant == "file") {
    out.w = read_matrix_market(cfg.get("model.path"));
  } else {
    throw std::invalid_argument("build_model: unknown variant '" + out.variant + "'");
  }
  side = cfg.get_or("model.side", side);
  if (side == "B") {
    if (out.b.size() == 0) {
      out.b = out.w;
    }
    Eigen::FullPivLU<ComplexMatrix> lu(out.b);
    if (!lu.isInvertible()) throw std::invalid_argument("build_model: singular truncation");
    out.w = lu.inverse();
  } else {
    Eigen::FullPivLU<ComplexMatrix> lu(out.w);
    if (!lu.isInvertible()) throw std::invalid_argument("build_model: singular truncation");
    out.b = lu.inverse();
  }
  if (is_diagonal(out.b)) {
    out.root_system = diagonal_root_system(out.b);
  } else {
    out.root_system = jordan_decompose(out.b, cfg.get_double_or("model.jordan_tol", 1e-8));
  }
  out.biorthogonal = biorthogonal_system(out.root_system, out.b);
  return out;
}

ComplexVector initial_vector(const Config& cfg, int dim) {
  std::string kind = cfg.get_or("f", "ones");
  if (kind == "ones") {
    ComplexVector f = ComplexVector::Ones(dim);
    return f / f.norm();
  }
  if (kind.rfind("basis:", 0) == 0) {
    int idx = std::stoi(kind.substr(6));
    if (idx < 1 || idx > dim) throw std::invalid_argument("initial_vector: basis index out of range");
    ComplexVector f = ComplexVector::Zero(dim);
    f(idx - 1) = 1.0;
    return f;
  }
  if (kind == "random") {
    Rng rng(static_cast<std::uint64_t>(cfg.get_int_or("f.seed", cfg.get_int_or("seed", 1))));
    return random_unit_vector(dim, rng);
  }
  throw std::invalid_argument("initial_vector: unknown f spec '" + kind + "'");
}

CauchyResult solve_cauchy(const ModelBuild& model, const OperatorFunctionSpec& phi,
                          const std::vector<double>& t_grid, const ComplexVector& f,
                          const BracketingPlan& plan, int threads) {
  for (size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument("solve_cauchy: t grid must be increasing");
    }
  }
  CauchyResult res;
  res.t_grid = t_grid;
  res.f = f;
  res.plan = plan;

  SummationContext ctx = make_summation_context(model.root_system, model.biorthogonal);
  auto u_of = [&](double t) {
    return abel_lidskii_sum(ctx, phi, t, f, plan, threads).value;
  };
  // phi(W) u through the compact side: phi(W) = g(B) with g(mu) = phi(1/mu)
  auto phi_w_apply = [&](const ComplexVector& u) {
    return apply_matrix_function(model.root_system, [&](Complex mu) { return phi(1.0 / mu); }, u);
  };

  for (double t : t_grid) {
    auto full = abel_lidskii_sum(ctx, phi, t, f, plan, threads);
    res.u.push_back(full.value);
    res.group_norms.push_back(full.group_norms);
    if (t == 0.0) {
      res.residuals.push_back(-1.0);
      continue;
    }
    double h = std::min(1e-3, t / 8.0);
    ComplexVector dudt =
        (u_of(t - 2 * h) - 8.0 * u_of(t - h) + 8.0 * u_of(t + h) - u_of(t + 2 * h)) / (12.0 * h);
    ComplexVector residual_vec = dudt + phi_w_apply(full.value);
    double rel = residual_vec.norm() / std::max(full.value.norm(), 1e-300);
    res.residuals.push_back(rel);
    res.max_residual = std::max(res.max_residual, rel);
  }

  // u(t) -> f by Richardson extrapolation on a geometric refinement
  {
    double t0 = 1e-3;
    std::vector<double> ts;
    std::vector<ComplexVector> us;
    for (int j = 0; j < 6; ++j) {
      double t = t0 * std::pow(0.5, j);
      ts.push_back(t);
      us.push_back(u_of(t));
    }
    auto ext = t_zero_extrapolation(ts, us);
    res.t0_extrapolation_error = (ext.limit - f).norm() / std::max(f.norm(), 1e-300);
    res.t0_ok = res.t0_extrapolation_error <= 1e-6;
  }
  return res;
}

bool ReportEnvelope::all_pass() const {
  for (const auto& [name, ok] : verdicts) {
    (void)name;
    if (!ok) return false;
  }
  return true;
}

std::string ReportEnvelope::to_json() const {
  std::ostringstream os;
  os << "{\n  \"tool_version\": \"" << tool_version << "\",\n";
  os << "  \"inputs_digest\": \"" << inputs_digest << "\",\n";
  os << "  \"verdicts\": {";
  for (size_t i = 0; i < verdicts.size(); ++i) {
    if (i) os << ",";
    os << "\n    \"" << verdicts[i].first << "\": " << (verdicts[i].second ? "true" : "false");
  }
  os << "\n  },\n  \"metrics\": {";
  for (size_t i = 0; i < metrics.size(); ++i) {
    if (i) os << ",";
    os << "\n    \"" << metrics[i].first << "\": " << format_double(metrics[i].second);
  }
  os << "\n  },\n  \"all_pass\": " << (all_pass() ? "true" : "false") << "\n}\n";
  return os.str();
}

ReportEnvelope run_experiment(const Config& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  ReportEnvelope env;
  env.tool_version = kToolVersion;
  env.inputs_digest = digest_hex(cfg.canonical());

  ModelBuild model = build_model(cfg);
  const int dim = static_cast<int>(model.w.rows());
  OperatorFunctionSpec phi = OperatorFunctionSpec::parse(cfg.get_or("phi", "identity"));
  ComplexVector f = initial_vector(cfg, dim);
  auto t_grid = cfg.get_doubles("t_grid");
  int threads = static_cast<int>(cfg.get_int_or("threads", 1));

  write_matrix_market(out_dir + "/model_w.mtx", model.w);

  // sector certification when the model declares a semi-angle
  if (cfg.has("model.theta") || model.sector_halfangle > 0.0) {
    double theta = cfg.get_double_or("model.theta", model.sector_halfangle);
    SectorSpec sector{0.0, theta};
    env.verdicts.push_back({"sector_certified", static_cast<bool>(sector_check(model.b, sector))});
  }

  // singular diagnostics of the compact side
  {
    auto sv = singular_values(model.b);
    std::ofstream diag(out_dir + "/singular_values.csv", std::ios::binary);
    diag << "n,s_n\n";
    for (size_t i = 0; i < sv.size(); ++i) {
      diag << (i + 1) << "," << format_double(sv[i]) << "\n";
    }
  }

  SummationContext ctx = make_summation_context(model.root_system, model.biorthogonal);
  double alpha = cfg.get_double_or("plan.alpha", 0.5);
  double gap_k = cfg.has("plan.K") ? cfg.get_double("plan.K")
                                   : default_gap_constant(ctx.char_moduli, alpha);
  BracketingPlan plan = bracketing_plan(ctx.char_moduli, alpha, gap_k);
  env.metrics.push_back({"plan_groups", double(plan.group_count())});
  env.metrics.push_back({"plan_defect", plan.verify()});
  env.verdicts.push_back({"plan_algebra", plan.verify() <= 1e-12});

  CauchyResult traj = solve_cauchy(model, phi, t_grid, f, plan, threads);

  {
    std::ofstream tr(out_dir + "/trajectory.csv", std::ios::binary);
    tr << "t,u_norm,residual\n";
    for (size_t i = 0; i < traj.t_grid.size(); ++i) {
      tr << format_double(traj.t_grid[i]) << "," << format_double(traj.u[i].norm()) << ","
         << format_double(traj.residuals[i]) << "\n";
    }
    std::ofstream gr(out_dir + "/group_norms.csv", std::ios::binary);
    gr << "t,nu,group_norm\n";
    for (size_t i = 0; i < traj.t_grid.size(); ++i) {
      for (size_t nu = 0; nu < traj.group_norms[i].size(); ++nu) {
        gr << format_double(traj.t_grid[i]) << "," << nu << ","
           << format_double(traj.group_norms[i][nu]) << "\n";
      }
    }
  }
  double residual_tol = cfg.get_double_or("tol.residual", 1e-6);
  env.metrics.push_back({"max_residual", traj.max_residual});
  env.verdicts.push_back({"residual_bound", traj.max_residual <= residual_tol});
  env.metrics.push_back({"t0_extrapolation_error", traj.t0_extrapolation_error});
  env.verdicts.push_back({"t0_limit", traj.t0_ok});

  // contour cross-check for power-kind phi under the sector-opening condition
  if (phi.kind() == OperatorFunctionSpec::Kind::power && plan.group_count() >= 1) {
    double theta = cfg.get_double_or("model.theta", model.sector_halfangle);
    double eps = cfg.get_double_or("contour.epsilon", 0.35);
    if ((theta + eps) < kPi / (2.0 * phi.alpha())) {
      double t_check = cfg.get_double_or("contour.t_check", t_grid.back() > 0 ? t_grid.back() : 1.0);
      ContourSpec contour;
      contour.r = cfg.get_double_or("contour.r", 0.5 * ctx.char_moduli.front());
      contour.theta0 = -theta;
      contour.theta1 = theta;
      contour.epsilon = eps;
      contour.nodes_arc = static_cast<int>(cfg.get_int_or("contour.nodes_arc", 48));
      contour.nodes_ray = static_cast<int>(cfg.get_int_or("contour.nodes_ray", 24));
      auto s1 = s1_contour_sum(model.b, phi.alpha(), t_check, f, contour, plan);
      auto alg = abel_lidskii_sum(ctx, phi, t_check, f, plan, threads);
      double rel = (s1.total - alg.value).norm() / std::max(alg.value.norm(), 1e-300);
      env.metrics.push_back({"contour_vs_series", rel});
      env.verdicts.push_back({"contour_matches_series", rel <= cfg.get_double_or("tol.cross", 1e-8)});
      std::ofstream arcs(out_dir + "/contour_segments.csv", std::ios::binary);
      arcs << "nu,j_arch,j_plus,j_minus\n";
      for (size_t v = 0; v < s1.j_plus.size(); ++v) {
        arcs << v << "," << (v < s1.j_arch.size() ? format_double(s1.j_arch[v]) : "")
             << "," << format_double(s1.j_plus[v]) << "," << format_double(s1.j_minus[v]) << "\n";
      }
    }
  }

  std::ofstream envf(out_dir + "/envelope.json", std::ios::binary);
  envf << env.to_json();
  return env;
}

}  // namespace speclab
