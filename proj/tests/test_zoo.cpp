#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "speclab/operator_core.hpp"
#include "speclab/schatten.hpp"
#include "speclab/zoo.hpp"

using namespace speclab;

TEST_CASE("sturm_liouville model") {
  auto model = sturm_liouville(4);
  for (int n = 1; n <= 4; ++n) {
    CHECK(model.matrix(n - 1, n - 1) == Complex(double(n * n), 0.0));
  }
  CHECK(std::abs(model.basis_inner(2, 3)) <= 1e-10);
  CHECK(model.basis_inner(2, 2) == doctest::Approx(kPi / 2.0).epsilon(1e-10));
  CHECK_THROWS_AS(sturm_liouville(0), std::invalid_argument);

  // order estimate: s_n(R_L) = n^{-2} gives mu = 2
  auto s = Sequence::decreasing_generator([](double n) { return 1.0 / (n * n); }, "sl", 1e8);
  auto est = convergence_exponent(s, 10, 1e6);
  CHECK(est.mu_hat == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("elliptic2d model") {
  auto model = elliptic2d(Complex(1, 0), Complex(0, 0), 4);
  std::vector<double> first;
  for (int i = 0; i < 6; ++i) first.push_back(model.eigenvalues[i].real());
  CHECK(first == std::vector<double>{2, 5, 5, 8, 10, 10});

  auto shifted = elliptic2d(Complex(1, 0), Complex(0.5, 0.25), 4);
  for (size_t i = 0; i < shifted.eigenvalues.size(); ++i) {
    CHECK(std::abs(shifted.eigenvalues[i] - model.eigenvalues[i] - Complex(0.5, 0.25)) <= 1e-12);
  }

  // order: sorted |lambda_n| grows linearly in n (mu = m/n = 2/2 = 1)
  auto big = elliptic2d(Complex(1, 0.2), Complex(0, 0), 30);
  std::vector<double> mods;
  for (auto& l : big.eigenvalues) mods.push_back(std::abs(l));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (size_t n = 30; n <= mods.size(); ++n, ++count) {
    double x = std::log(double(n)), y = std::log(mods[n - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  CHECK(std::abs(slope - 1.0) <= 0.1);
  CHECK_THROWS_AS(elliptic2d(Complex(-1, 0), Complex(0, 0), 2), std::invalid_argument);
}

TEST_CASE("difference_fractional coefficients") {
  double c = 2.0, beta = 0.6;
  auto model = difference_fractional(c, 0.1, beta, 10000, 32);
  CHECK(model.coefficients[0] == doctest::Approx(std::pow(c, beta)).epsilon(1e-12));
  for (size_t k = 1; k < model.coefficients.size(); ++k) CHECK(model.coefficients[k] < 0.0);

  // |sum_{k<=K} M_k| ~ C K^{-beta} with a stable fitted constant
  std::vector<double> fitted;
  for (long long cap : {100, 1000, 10000}) {
    double acc = 0.0;
    for (long long k = 0; k <= cap; ++k) acc += model.coefficients[k];
    fitted.push_back(std::abs(acc) * std::pow(double(cap), beta));
  }
  for (double cfit : fitted) {
    CHECK(std::abs(cfit - fitted.back()) <= 0.2 * fitted.back());
  }
}

TEST_CASE("difference_fractional beta near one degenerates to Y") {
  double c = 1.3;
  auto model = difference_fractional(c, 0.1, 1.0 - 1e-6, 50, 16);
  CHECK(std::abs(model.coefficients[0] - c) <= 1e-4);
  CHECK(std::abs(model.coefficients[1] + c) <= 1e-4);
  for (size_t k = 2; k < model.coefficients.size(); ++k) {
    CHECK(std::abs(model.coefficients[k]) <= 1e-4);
  }
  CHECK_THROWS_AS(difference_fractional(1.0, 0.1, 1.0, 10, 16), std::invalid_argument);
  CHECK_THROWS_AS(difference_fractional(1.0, 0.1, 0.5, 0, 16), std::invalid_argument);
}

TEST_CASE("difference_fractional symbol consistency") {
  auto model = difference_fractional(1.5, 0.2, 0.5, 10000, 64);
  for (int j = 1; j <= 10; ++j) {
    Complex approx = model.symbol(j);
    Complex exact = model.exact_symbol(j);
    CHECK(std::abs(approx - exact) <= 1e-3 * std::abs(exact));
  }
  // the assembled matrix applied to a discrete exponential realizes the symbol
  const int grid = model.grid;
  for (int j : {1, 5}) {
    ComplexVector wave(grid);
    for (int i = 0; i < grid; ++i) {
      wave(i) = std::exp(Complex(0.0, 2.0 * kPi * j * i / double(grid)));
    }
    ComplexVector image = model.y_beta * wave;
    Complex ratio = image(0) / wave(0);
    CHECK(std::abs(ratio - model.symbol(j)) <= 1e-10 * std::abs(model.symbol(j)));
  }
}

TEST_CASE("riesz_kernel") {
  auto model = riesz_kernel(0.5, -1.0, 1.0, 24);
  CHECK(model.b_beta == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-12));
  CHECK((model.full - model.full.transpose()).norm() == 0.0);  // exact symmetry by construction
  double gb = std::tgamma(0.5);
  ComplexMatrix recombined = model.b_beta * gb * (model.i_plus + model.i_minus);
  CHECK((model.full - recombined).norm() <= 1e-12 * model.full.norm());
  CHECK_THROWS_AS(riesz_kernel(1.0, -1.0, 1.0, 8), std::invalid_argument);

  // cellwise values against independent quadrature away from the singularity
  double h = 2.0 / 24.0;
  double x0 = -1.0 + 0.5 * h;
  double cell_lo = -1.0 + 5 * h, cell_hi = -1.0 + 6 * h;
  double reference = oracle::simpson(
      [&](double s) { return std::pow(std::abs(s - x0), -0.5); }, cell_lo, cell_hi, 200);
  CHECK(model.full(0, 5).real() == doctest::Approx(model.b_beta * reference).epsilon(1e-8));
}

TEST_CASE("subtle_diagonal and its generator") {
  auto m = subtle_diagonal(1.0, 15.0, 8);
  double l1 = std::log(16.0) * std::log(std::log(16.0));
  CHECK(m(0, 0).real() == doctest::Approx(l1).epsilon(1e-14));
  for (int i = 1; i < 8; ++i) CHECK(m(i, i).real() > m(i - 1, i - 1).real());

  auto gen = subtle_eigenvalues(1.0, 15.0);
  CHECK(gen.value(1.0) == doctest::Approx(l1).epsilon(1e-14));
  CHECK_THROWS_AS(subtle_diagonal(1.0, 10.0, 4), std::invalid_argument);
}

TEST_CASE("psi_function split equals direct evaluation") {
  SUBCASE("real axis kills the imaginary part") {
    auto v = psi_function(Complex(10.0, 0.0), 0.7);
    CHECK(std::abs(v.im) <= 1e-14 * std::abs(v.re));
  }
  SUBCASE("named point") {
    Complex z = std::polar(10.0, 0.3);
    auto v = psi_function(z, 0.5);
    CHECK(std::abs(v.value - v.direct) <= 1e-12 * std::abs(v.direct));
    CHECK(v.abs2 == doctest::Approx(std::norm(v.direct)).epsilon(1e-12));
  }
  SUBCASE("random sector points") {
    Rng rng(17);
    for (int trial = 0; trial < 10000; ++trial) {
      double mod = std::exp(rng.uniform(std::log(2.8), std::log(1e6)));
      double ang = rng.uniform(-1.2, 1.2);
      double xi = rng.uniform(0.1, 1.0);
      auto v = psi_function(std::polar(mod, ang), xi);
      CHECK(std::abs(v.value - v.direct) <= 1e-12 * std::abs(v.direct));
    }
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(psi_function(Complex(2.0, 0.0), 0.5), std::domain_error);
    CHECK_THROWS_AS(psi_function(Complex(10.0, 0.0), 1.5), std::invalid_argument);
  }
}

TEST_CASE("psi argument drifts to xi * arg z, slowly") {
  double xi = 0.5, ang = 0.4;
  double previous = std::numeric_limits<double>::infinity();
  double at_1e8 = 0.0, at_1e60 = 0.0;
  for (double j : {4.0, 8.0, 16.0, 30.0, 60.0}) {
    auto v = psi_function(std::polar(std::pow(10.0, j), ang), xi);
    double deviation = std::abs(v.arg / ang - xi);
    CHECK(deviation < previous);
    previous = deviation;
    if (j == 8.0) at_1e8 = deviation;
    if (j == 60.0) at_1e60 = deviation;
  }
  // the approach is logarithmic: still ~0.073 at |z| = 1e8, below 1e-2 only
  // around |z| = 1e60
  CHECK(at_1e8 == doctest::Approx(0.0729).epsilon(0.05));
  CHECK(at_1e60 < 1e-2);
}

TEST_CASE("phi_kappa_checks") {
  SUBCASE("real power spectrum has a convergent ratio window") {
    std::vector<Complex> spectrum;
    for (int n = 1; n <= 10000; ++n) spectrum.push_back(std::pow(double(n), 2.0));  // xi = 0.5
    auto rep = phi_kappa_checks(spectrum, 0.5, 0.8, 0.3, 1000);
    CHECK(rep.c1_window > 0.0);
    CHECK(rep.c2_window / rep.c1_window <= 1.1);
    CHECK(rep.positive_beyond_threshold);
  }
  SUBCASE("sectorial phases keep a finite positivity threshold") {
    std::vector<Complex> spectrum;
    for (int n = 1; n <= 500; ++n) spectrum.push_back(std::polar(std::pow(double(n), 2.0) + 3.0, 0.5));
    auto rep = phi_kappa_checks(spectrum, 0.5, 0.8, 0.5);
    CHECK(rep.positive_beyond_threshold);
    CHECK(rep.positivity_threshold >= 1);
  }
  SUBCASE("angle product bound") {
    std::vector<Complex> spectrum{Complex(10, 0)};
    CHECK_THROWS_AS(phi_kappa_checks(spectrum, 1.0, 2.0, 1.0), std::invalid_argument);
    CHECK_NOTHROW(phi_kappa_checks(spectrum, 1.0, 1.0, kPi / 2.0 - 1e-3));
  }
}

TEST_CASE("phase_constructed") {
  std::vector<double> s;
  for (int m = 2; m <= 9; ++m) s.push_back(std::pow(m * std::log(double(m)), -1.0 / 1.5));
  double theta = 0.3;
  ComplexMatrix b = phase_constructed(s, theta, 71);
  CHECK(sector_check(b, {0.0, theta}).inside);
  auto sv = singular_values(b);
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(sv[i] == doctest::Approx(s[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(phase_constructed(s, 0.0, 1), std::invalid_argument);

  // scalar-phase criterion: e^{i theta0} diag(s) passes exactly when theta0 <= theta
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 0.5;
  for (double theta0 : {0.1, 0.25}) {
    ComplexMatrix rotated = std::polar(1.0, theta0) * d;
    CHECK(sector_check(rotated, {0.0, 0.3}).inside == (theta0 <= 0.3));
  }
  ComplexMatrix outside = std::polar(1.0, 0.5) * d;
  CHECK_FALSE(sector_check(outside, {0.0, 0.3}).inside);
}

TEST_CASE("embedding_compactness_check") {
  std::vector<double> phi;
  for (int n = 1; n <= 12; ++n) phi.push_back(double(n));
  SUBCASE("concentrated vector attains equality") {
    ComplexVector f = ComplexVector::Zero(12);
    f(6) = 2.0;
    auto rep = embedding_compactness_check(phi, {f}, {7});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].tail == doctest::Approx(rep.rows[0].bound).epsilon(1e-14));
    CHECK(rep.all_ok);
  }
  SUBCASE("random vectors on a k grid") {
    Rng rng(19);
    std::vector<ComplexVector> samples;
    for (int i = 0; i < 10; ++i) samples.push_back(random_vector(12, rng));
    auto rep = embedding_compactness_check(phi, samples, {1, 3, 6, 9, 12});
    CHECK(rep.all_ok);
    for (const auto& row : rep.rows) CHECK(row.tail <= row.bound * (1 + 1e-12));
  }
  SUBCASE("zero vector") {
    auto rep = embedding_compactness_check(phi, {ComplexVector::Zero(12)}, {1, 5});
    for (const auto& row : rep.rows) CHECK(row.tail == 0.0);
  }
  SUBCASE("rejects non-positive weights") {
    CHECK_THROWS_AS(embedding_compactness_check({0.0, 1.0}, {ComplexVector::Zero(2)}, {1}),
                    std::invalid_argument);
  }
}

TEST_CASE("real_component_eigen_check") {
  SUBCASE("real diagonal with the identity function") {
    ComplexMatrix w = ComplexMatrix::Zero(3, 3);
    w(0, 0) = 1.0;
    w(1, 1) = 2.0;
    w(2, 2) = 3.0;
    auto check = real_component_eigen_check(w, OperatorFunctionSpec::identity());
    CHECK(check.ok);
    CHECK(check.max_deviation <= 1e-12);
  }
  SUBCASE("complex sectorial diagonal with psi^kappa") {
    ComplexMatrix w = ComplexMatrix::Zero(4, 4);
    for (int n = 1; n <= 4; ++n) {
      w(n - 1, n - 1) = std::polar(3.0 + std::pow(double(n), 2.0), 0.25);
    }
    auto check = real_component_eigen_check(w, OperatorFunctionSpec::psi_kappa(0.5, 0.8));
    CHECK(check.ok);
  }
  SUBCASE("degenerate phi values tie-break by sorting") {
    ComplexMatrix w = ComplexMatrix::Zero(2, 2);
    w(0, 0) = Complex(2.0, 1.0);
    w(1, 1) = Complex(2.0, -1.0);  // conjugate pair, equal Re phi for identity
    auto check = real_component_eigen_check(w, OperatorFunctionSpec::identity());
    CHECK(check.ok);
  }
  SUBCASE("non-normal input rejected") {
    ComplexMatrix w(2, 2);
    w << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
    CHECK_THROWS_AS(real_component_eigen_check(w, OperatorFunctionSpec::identity()),
                    std::invalid_argument);
  }
}
