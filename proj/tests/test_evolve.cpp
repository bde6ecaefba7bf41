#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "speclab/evolve.hpp"
#include "speclab/matrix_market.hpp"

using namespace speclab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSturmConfig =
    "model.variant = sturm_liouville\n"
    "model.n = 3\n"
    "phi = power:0.5\n"
    "plan.alpha = 0.5\n"
    "t_grid = 0.1 0.5 1.0 2.0\n"
    "f = ones\n"
    "seed = 1\n";

}  // namespace

TEST_CASE("config parser") {
  auto cfg = Config::parse_string("a.b = 1.5 # comment\nlist = 1 2 3\nname = power:0.5\n");
  CHECK(cfg.get_double("a.b") == 1.5);
  CHECK(cfg.get_doubles("list") == std::vector<double>{1, 2, 3});
  CHECK(cfg.get("name") == "power:0.5");
  CHECK(cfg.get_or("missing", "x") == "x");
  CHECK_THROWS_AS(cfg.get("missing"), std::invalid_argument);
  CHECK_THROWS_AS(Config::parse_string("novalue\n"), std::invalid_argument);
  auto canon1 = Config::parse_string("b = 2\na = 1\n").canonical();
  auto canon2 = Config::parse_string("a = 1\nb = 2\n").canonical();
  CHECK(canon1 == canon2);
}

TEST_CASE("matrix market round trip") {
  Rng rng(25);
  ComplexMatrix a = random_matrix(5, rng);
  auto dir = std::filesystem::temp_directory_path() / "speclab_mm_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "a.mtx").string();
  write_matrix_market(path, a);
  ComplexMatrix back = read_matrix_market(path);
  CHECK((a - back).norm() == 0.0);  // %.17g round-trips doubles exactly

  std::ofstream bad(dir / "bad.mtx");
  bad << "not a header\n";
  bad.close();
  CHECK_THROWS_AS(read_matrix_market((dir / "bad.mtx").string()), std::runtime_error);
}

TEST_CASE("build_model variants") {
  auto cfg = Config::parse_string(kSturmConfig);
  auto model = build_model(cfg);
  CHECK(model.w.rows() == 3);
  CHECK(model.b(2, 2) == Complex(1.0 / 9.0, 0.0));
  CHECK(model.root_system.nu_total() == 3);

  auto cfg2 = Config::parse_string(
      "model.variant = phase_constructed\nmodel.n = 6\nmodel.theta = 0.3\nmodel.seed = 5\n");
  auto model2 = build_model(cfg2);
  CHECK(model2.sector_halfangle == 0.3);
  CHECK((model2.b * model2.w - ComplexMatrix::Identity(6, 6)).norm() <= 1e-10);

  auto cfg3 = Config::parse_string("model.variant = nonsense\n");
  CHECK_THROWS_AS(build_model(cfg3), std::invalid_argument);
}

TEST_CASE("initial_vector kinds") {
  auto cfg = Config::parse_string("f = basis:2\nseed = 1\n");
  auto f = initial_vector(cfg, 3);
  CHECK(f(1) == Complex(1, 0));
  auto cfg2 = Config::parse_string("f = random\nf.seed = 9\n");
  auto f2 = initial_vector(cfg2, 4);
  auto f3 = initial_vector(cfg2, 4);
  CHECK((f2 - f3).norm() == 0.0);
  CHECK(f2.norm() == doctest::Approx(1.0).epsilon(1e-12));
  auto cfg4 = Config::parse_string("f = basis:9\n");
  CHECK_THROWS_AS(initial_vector(cfg4, 3), std::invalid_argument);
}

TEST_CASE("solve_cauchy on the closed-form Sturm-Liouville trajectory") {
  auto cfg = Config::parse_string(kSturmConfig);
  auto model = build_model(cfg);
  auto phi = OperatorFunctionSpec::power(0.5);
  ComplexVector f = initial_vector(cfg, 3);
  auto ctx = make_summation_context(model.root_system, model.biorthogonal);
  auto plan = bracketing_plan(ctx.char_moduli, 0.5, default_gap_constant(ctx.char_moduli, 0.5));
  auto res = solve_cauchy(model, phi, {0.1, 0.5, 1.0, 2.0}, f, plan);

  for (size_t ti = 0; ti < res.t_grid.size(); ++ti) {
    double t = res.t_grid[ti];
    for (int n = 1; n <= 3; ++n) {
      Complex expect = std::exp(-double(n) * t) * f(n - 1);  // sqrt(n^2) = n
      CHECK(std::abs(res.u[ti](n - 1) - expect) <= 1e-10 * std::abs(expect));
    }
    CHECK(res.residuals[ti] <= 1e-6);
  }
  CHECK(res.max_residual <= 1e-6);
  CHECK(res.t0_ok);
}

TEST_CASE("solve_cauchy t = 0 entry returns f exactly") {
  auto cfg = Config::parse_string(kSturmConfig);
  auto model = build_model(cfg);
  ComplexVector f = initial_vector(cfg, 3);
  auto ctx = make_summation_context(model.root_system, model.biorthogonal);
  auto plan = bracketing_plan(ctx.char_moduli, 0.5, default_gap_constant(ctx.char_moduli, 0.5));
  auto res = solve_cauchy(model, OperatorFunctionSpec::power(0.5), {0.0, 0.5}, f, plan);
  CHECK((res.u[0] - f).norm() == 0.0);
  CHECK(res.residuals[0] == -1.0);
}

TEST_CASE("solve_cauchy Jordan model matches the dense exponential oracle") {
  // declared 2-block structure on the compact side; phi = identity makes
  // u(t) = exp(-t W) f testable against scaling-and-squaring
  ComplexMatrix s(4, 4);
  Rng srng(41);
  s = ComplexMatrix::Identity(4, 4) + 0.2 * random_matrix(4, srng);
  auto declared = declared_root_system({{Complex(0.5, 0.05), 2}, {Complex(0.2, 0.0), 2}}, s);
  ModelBuild model;
  model.variant = "declared";
  model.b = declared.matrix;
  model.w = declared.matrix.inverse();
  model.root_system = declared.root_system;
  model.biorthogonal = biorthogonal_system(declared.root_system, declared.matrix);

  auto ctx = make_summation_context(model.root_system, model.biorthogonal);
  auto plan = bracketing_plan(ctx.char_moduli, 0.5, default_gap_constant(ctx.char_moduli, 0.5));
  Rng rng(42);
  ComplexVector f = random_unit_vector(4, rng);
  auto res = solve_cauchy(model, OperatorFunctionSpec::identity(), {0.25, 1.0}, f, plan);
  for (size_t ti = 0; ti < res.t_grid.size(); ++ti) {
    ComplexMatrix propagator = oracle::expm(-res.t_grid[ti] * model.w);
    ComplexVector expect = propagator * f;
    CHECK((res.u[ti] - expect).norm() <= 1e-8 * expect.norm());
    CHECK(res.residuals[ti] <= 1e-6);
  }
}

TEST_CASE("run_experiment produces a passing, byte-stable envelope") {
  auto cfg = Config::parse_string(kSturmConfig);
  auto dir1 = std::filesystem::temp_directory_path() / "speclab_exp1";
  auto dir2 = std::filesystem::temp_directory_path() / "speclab_exp2";
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  auto env1 = run_experiment(cfg, dir1.string());
  auto env2 = run_experiment(cfg, dir2.string());
  CHECK(env1.all_pass());
  for (const auto& name : {"trajectory.csv", "group_norms.csv", "envelope.json",
                           "singular_values.csv", "model_w.mtx"}) {
    INFO("file ", name);
    CHECK(slurp((dir1 / name).string()) == slurp((dir2 / name).string()));
  }
  CHECK(env1.inputs_digest == env2.inputs_digest);

  bool saw_contour = false;
  for (auto& [name, ok] : env1.verdicts) {
    if (name == "contour_matches_series") {
      saw_contour = true;
      CHECK(ok);
    }
  }
  CHECK(saw_contour);
}

TEST_CASE("run_experiment minimal diagonal config") {
  auto cfg = Config::parse_string(
      "model.variant = diag\nmodel.values = 1 2\nphi = identity\nt_grid = 0.5\nf = ones\nseed = 1\n");
  auto dir = std::filesystem::temp_directory_path() / "speclab_min";
  std::filesystem::remove_all(dir);
  auto env = run_experiment(cfg, dir.string());
  CHECK(env.all_pass());
  std::string csv = slurp((dir / "trajectory.csv").string());
  CHECK(csv.find("t,u_norm,residual") == 0);
  // one trajectory row
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("report envelope digest changes with the config") {
  auto cfg1 = Config::parse_string("model.variant = diag\nmodel.values = 1 2\nt_grid = 0.5\n");
  auto cfg2 = Config::parse_string("model.variant = diag\nmodel.values = 1 3\nt_grid = 0.5\n");
  CHECK(digest_hex(cfg1.canonical()) != digest_hex(cfg2.canonical()));
}
