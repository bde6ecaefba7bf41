#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "speclab/contour.hpp"
#include "speclab/evolve.hpp"
#include "speclab/matrix_market.hpp"
#include "speclab/zoo.hpp"

namespace {

using namespace speclab;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  long long seed = -1;
  int threads = 1;
};

Config load_config(const CommonOpts& opts) {
  Config cfg = Config::parse_file(opts.config_path);
  if (opts.seed >= 0) cfg.set("seed", std::to_string(opts.seed));
  cfg.set("threads", std::to_string(opts.threads));
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file")->required();
  cmd->add_option("--out-dir", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "override the config seed");
  cmd->add_option("--threads", opts.threads, "worker threads for group sums");
}

int cmd_zoo_build(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ModelBuild model = build_model(cfg);
  std::filesystem::create_directories(opts.out_dir);
  write_matrix_market(opts.out_dir + "/model_w.mtx", model.w);
  write_matrix_market(opts.out_dir + "/model_b.mtx", model.b);
  std::cout << "built " << model.variant << " dim=" << model.w.rows() << " -> " << opts.out_dir
            << "/model_w.mtx\n";
  return 0;
}

int cmd_diag(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  std::filesystem::create_directories(opts.out_dir);

  // sequence source: the model's singular values, a CSV file, or a named generator
  SingularSequence seq = [&] {
    if (cfg.has("diag.sequence_file")) return read_sequence_csv(cfg.get("diag.sequence_file"));
    if (cfg.has("diag.sequence")) return parse_singular_generator(cfg.get("diag.sequence"));
    return SingularSequence::decreasing(singular_values(build_model(cfg).b));
  }();

  double p = cfg.get_double_or("diag.p", 1.0);
  long long n_max = cfg.get_int_or("diag.n_max", seq.finite() ? static_cast<long long>(seq.size())
                                                              : 1000000);
  auto norm = schatten_norm(seq, p, n_max);
  long long rows = std::min<long long>(n_max, 100000);
  std::ofstream out(opts.out_dir + "/schatten.csv", std::ios::binary);
  out << "n,s_n,one_over_s\n";
  for (long long i = 1; i <= rows; ++i) {
    double s = seq.value(double(i));
    out << i << "," << format_double(s) << "," << format_double(1.0 / s) << "\n";
  }
  std::cout << "schatten p=" << p << " partial=" << format_double(norm.partial)
            << " tail_suspect=" << (norm.tail_suspect ? "yes" : "no") << "\n";
  double window_hi = seq.finite() ? double(seq.size()) : cfg.get_double_or("diag.window_hi", 1e6);
  if (window_hi >= 16) {
    auto est = convergence_exponent(seq, 1, window_hi,
                                    std::min<int>(200, static_cast<int>(window_hi)));
    // both membership thresholds are reported; which is tight per truncation
    // is recorded output, not adjudicated
    std::cout << "order mu=" << format_double(est.mu_hat)
              << " thresholds: p > " << format_double(1.0 / est.mu_hat) << " (refined), p > "
              << format_double(2.0 / est.mu_hat) << " (previous)\n";
  }
  return 0;
}

int cmd_jordan(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ModelBuild model = build_model(cfg);
  std::filesystem::create_directories(opts.out_dir);
  std::ofstream out(opts.out_dir + "/root_system.json", std::ios::binary);
  out << model.root_system.to_json() << "\n";
  std::cout << "root system: " << model.root_system.groups.size() << " eigenvalue groups, nu_total="
            << model.root_system.nu_total() << " -> " << opts.out_dir << "/root_system.json\n";
  return 0;
}

int cmd_sum(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ModelBuild model = build_model(cfg);
  OperatorFunctionSpec phi = OperatorFunctionSpec::parse(cfg.get_or("phi", "identity"));
  ComplexVector f = initial_vector(cfg, static_cast<int>(model.w.rows()));
  SummationContext ctx = make_summation_context(model.root_system, model.biorthogonal);
  double alpha = cfg.get_double_or("plan.alpha", 0.5);
  double k = cfg.has("plan.K") ? cfg.get_double("plan.K")
                               : default_gap_constant(ctx.char_moduli, alpha);
  BracketingPlan plan = bracketing_plan(ctx.char_moduli, alpha, k);
  std::filesystem::create_directories(opts.out_dir);
  std::ofstream out(opts.out_dir + "/group_norms.csv", std::ios::binary);
  out << "nu,group_norm,t\n";
  for (double t : cfg.get_doubles("t_grid")) {
    auto res = abel_lidskii_sum(ctx, phi, t, f, plan, opts.threads);
    for (size_t nu = 0; nu < res.group_norms.size(); ++nu) {
      out << nu << "," << format_double(res.group_norms[nu]) << "," << format_double(t) << "\n";
    }
    std::cout << "t=" << t << " |u|=" << format_double(res.value.norm()) << " groups="
              << res.group_norms.size() << "\n";
  }
  return 0;
}

int cmd_contour(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ModelBuild model = build_model(cfg);
  OperatorFunctionSpec phi = OperatorFunctionSpec::parse(cfg.get_or("phi", "power:0.5"));
  if (phi.kind() != OperatorFunctionSpec::Kind::power) {
    std::cerr << "contour: S1 cross-check requires a power-kind phi\n";
    return 2;
  }
  ComplexVector f = initial_vector(cfg, static_cast<int>(model.w.rows()));
  SummationContext ctx = make_summation_context(model.root_system, model.biorthogonal);
  double alpha = phi.alpha();
  double k = cfg.has("plan.K") ? cfg.get_double("plan.K")
                               : default_gap_constant(ctx.char_moduli, alpha);
  BracketingPlan plan = bracketing_plan(ctx.char_moduli, alpha, k);
  double theta = cfg.get_double_or("model.theta", model.sector_halfangle);
  ContourSpec contour;
  contour.r = cfg.get_double_or("contour.r", 0.5 * ctx.char_moduli.front());
  contour.theta0 = -theta;
  contour.theta1 = theta;
  contour.epsilon = cfg.get_double_or("contour.epsilon", 0.35);
  contour.nodes_arc = static_cast<int>(cfg.get_int_or("contour.nodes_arc", 48));
  contour.nodes_ray = static_cast<int>(cfg.get_int_or("contour.nodes_ray", 24));
  double t = cfg.get_double_or("contour.t_check", 1.0);
  auto s1 = s1_contour_sum(model.b, alpha, t, f, contour, plan);
  auto alg = abel_lidskii_sum(ctx, phi, t, f, plan, opts.threads);
  double rel = (s1.total - alg.value).norm() / std::max(alg.value.norm(), 1e-300);
  std::cout << "contour vs series relative deviation: " << format_double(rel) << "\n";
  return rel <= cfg.get_double_or("tol.cross", 1e-8) ? 0 : 1;
}

int cmd_evolve(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ModelBuild model = build_model(cfg);
  OperatorFunctionSpec phi = OperatorFunctionSpec::parse(cfg.get_or("phi", "identity"));
  ComplexVector f = initial_vector(cfg, static_cast<int>(model.w.rows()));
  SummationContext ctx = make_summation_context(model.root_system, model.biorthogonal);
  double alpha = cfg.get_double_or("plan.alpha", 0.5);
  double k = cfg.has("plan.K") ? cfg.get_double("plan.K")
                               : default_gap_constant(ctx.char_moduli, alpha);
  BracketingPlan plan = bracketing_plan(ctx.char_moduli, alpha, k);
  auto res = solve_cauchy(model, phi, cfg.get_doubles("t_grid"), f, plan, opts.threads);
  std::filesystem::create_directories(opts.out_dir);
  std::ofstream out(opts.out_dir + "/trajectory.csv", std::ios::binary);
  out << "t,u_norm,residual\n";
  for (size_t i = 0; i < res.t_grid.size(); ++i) {
    out << format_double(res.t_grid[i]) << "," << format_double(res.u[i].norm()) << ","
        << format_double(res.residuals[i]) << "\n";
  }
  std::cout << "max residual " << format_double(res.max_residual) << ", t->0 error "
            << format_double(res.t0_extrapolation_error) << "\n";
  return res.max_residual <= cfg.get_double_or("tol.residual", 1e-6) && res.t0_ok ? 0 : 1;
}

int cmd_report(const CommonOpts& opts) {
  Config cfg = load_config(opts);
  ReportEnvelope env = run_experiment(cfg, opts.out_dir);
  std::cout << env.to_json();
  return env.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral laboratory for non-selfadjoint truncations"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto* zoo = app.add_subcommand("zoo", "model constructors");
  auto* zoo_build = zoo->add_subcommand("build", "build the configured model");
  add_common(zoo_build, opts);
  auto* diag = app.add_subcommand("diag", "sequence diagnostics");
  auto* diag_schatten = diag->add_subcommand("schatten", "singular-value diagnostics");
  add_common(diag_schatten, opts);
  auto* jordan = app.add_subcommand("jordan", "root system extraction");
  add_common(jordan, opts);
  auto* sum = app.add_subcommand("sum", "bracketed series evaluation");
  add_common(sum, opts);
  auto* contour = app.add_subcommand("contour", "contour cross-check");
  add_common(contour, opts);
  auto* evolve = app.add_subcommand("evolve", "Cauchy trajectory with residuals");
  add_common(evolve, opts);
  auto* report = app.add_subcommand("report", "full pipeline with envelope");
  add_common(report, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (zoo_build->parsed()) return cmd_zoo_build(opts);
    if (diag_schatten->parsed()) return cmd_diag(opts);
    if (jordan->parsed()) return cmd_jordan(opts);
    if (sum->parsed()) return cmd_sum(opts);
    if (contour->parsed()) return cmd_contour(opts);
    if (evolve->parsed()) return cmd_evolve(opts);
    if (report->parsed()) return cmd_report(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  std::cerr << "no subcommand\n";
  return 2;
}
