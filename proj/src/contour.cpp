#include "speclab/contour.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace speclab {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
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
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

using Integrand = std::function<ComplexVector(Complex)>;

// integral over the straight segment [a, b] in the complex plane
ComplexVector segment_integral(const Integrand& g, Complex a, Complex b, int nodes, int dim) {
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  ComplexVector acc = ComplexVector::Zero(dim);
  Complex mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < nodes; ++i) {
    acc += w[i] * g(mid + x[i] * half);
  }
  return half * acc;
}

// integral over the arc radius rho, angles [a0, a1] (increasing = CCW)
ComplexVector arc_integral(const Integrand& g, double rho, double a0, double a1, int nodes_per_panel,
                           int dim) {
  int panels = std::max(1, static_cast<int>(std::ceil(std::abs(a1 - a0) / (kPi / 4.0))));
  std::vector<double> x, w;
  gauss_legendre(nodes_per_panel, x, w);
  ComplexVector acc = ComplexVector::Zero(dim);
  for (int p = 0; p < panels; ++p) {
    double b0 = a0 + (a1 - a0) * p / panels;
    double b1 = a0 + (a1 - a0) * (p + 1) / panels;
    double mid = 0.5 * (b0 + b1), half = 0.5 * (b1 - b0);
    for (int i = 0; i < nodes_per_panel; ++i) {
      double angle = mid + x[i] * half;
      Complex lambda = std::polar(rho, angle);
      acc += (w[i] * half) * (Complex(0.0, 1.0) * lambda * g(lambda));
    }
  }
  return acc;
}

// Geometric panels on a ray segment [s0, s1] at the given angle. Panels stay
// short (ratio 1.35) while the ray passes the spectrum zone [0, fine_until],
// then stretch to ratio 2.
ComplexVector ray_integral(const Integrand& g, double angle, double s0, double s1, int nodes,
                           int dim, double fine_until = 0.0) {
  ComplexVector acc = ComplexVector::Zero(dim);
  const Complex dir = std::polar(1.0, angle);
  double lo = s0;
  while (lo < s1 * (1.0 - 1e-15)) {
    double ratio = (lo < fine_until) ? 1.35 : 2.0;
    double hi = std::min(ratio * lo, s1);
    acc += segment_integral([&](Complex s) { return g(s.real() * dir); }, Complex(lo, 0.0),
                            Complex(hi, 0.0), nodes, dim);
    lo = hi;
  }
  return dir * acc;
}

double min_distance_to_contour(const std::vector<Complex>& points, const ContourSpec& c,
                               double r_max) {
  double a0 = c.theta0 - c.epsilon, a1 = c.theta1 + c.epsilon;
  double best = std::numeric_limits<double>::infinity();
  for (Complex p : points) {
    double rho = std::abs(p), ang = std::arg(p);
    // distance to the arc
    if (ang >= a0 && ang <= a1) best = std::min(best, std::abs(rho - c.r));
    // distance to the two rays
    for (double ray : {a0, a1}) {
      Complex dir = std::polar(1.0, ray);
      double along = (p * std::conj(dir)).real();
      along = std::clamp(along, c.r, r_max);
      best = std::min(best, std::abs(p - along * dir));
    }
  }
  return best;
}

}  // namespace

void ContourSpec::validate() const {
  if (!(r > 0.0)) throw std::invalid_argument("ContourSpec: arc radius must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("ContourSpec: angular margin must be positive");
  if (!(theta1 >= theta0)) throw std::invalid_argument("ContourSpec: theta1 < theta0");
  if (nodes_arc < 2 || nodes_ray < 2) throw std::invalid_argument("ContourSpec: too few nodes");
}

ComplexVector resolvent_apply(const ComplexMatrix& w, Complex lambda, const ComplexVector& f) {
  require_square(w, "resolvent_apply");
  if (f.size() != w.rows()) throw std::invalid_argument("resolvent_apply: dimension mismatch");
  ComplexMatrix shifted = w - lambda * ComplexMatrix::Identity(w.rows(), w.cols());
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  ComplexVector x = lu.solve(f);
  double residual = (shifted * x - f).norm();
  if (!(residual <= 1e-10 * std::max(f.norm(), 1e-300)) || !x.allFinite()) {
    throw std::runtime_error("resolvent_apply: singular resolvent near lambda=(" +
                             std::to_string(lambda.real()) + "," + std::to_string(lambda.imag()) +
                             "), residual " + std::to_string(residual));
  }
  return x;
}

namespace {

struct PieceSums {
  ComplexVector total;
  std::size_t nodes = 0;
};

// full contour integral with the node schedule scaled by `factor`
ComplexVector full_contour(const Integrand& g, const ContourSpec& c, double r_max, int dim,
                           int factor, double fine_until) {
  double a0 = c.theta0 - c.epsilon, a1 = c.theta1 + c.epsilon;
  ComplexVector lower = ray_integral(g, a0, c.r, r_max, c.nodes_ray * factor, dim, fine_until);
  ComplexVector arc = arc_integral(g, c.r, a0, a1, c.nodes_arc * factor, dim);
  ComplexVector upper = ray_integral(g, a1, c.r, r_max, c.nodes_ray * factor, dim, fine_until);
  ComplexVector total = -lower + arc + upper;  // lower ray traversed inward
  return total / Complex(0.0, 2.0 * kPi);
}

}  // namespace

QuadratureResult operator_function_apply(const ComplexMatrix& w, const OperatorFunctionSpec& phi,
                                         double t, const ComplexVector& f,
                                         const ContourSpec& contour) {
  require_square(w, "operator_function_apply");
  contour.validate();
  if (!(t > 0.0)) throw std::invalid_argument("operator_function_apply: t must be positive");
  if (!phi.regular_growth()) {
    throw std::invalid_argument("operator_function_apply: phi lacks the regular-growth property");
  }
  const int dim = static_cast<int>(w.rows());

  // spectrum clearance
  Eigen::ComplexEigenSolver<ComplexMatrix> es(w, false);
  std::vector<Complex> spectrum(es.eigenvalues().data(), es.eigenvalues().data() + dim);
  double scale = std::max(w.norm(), 1e-300);
  for (Complex l : spectrum) {
    double ang = std::arg(l);
    if (std::abs(l) <= contour.r || ang <= contour.theta0 - contour.epsilon ||
        ang >= contour.theta1 + contour.epsilon) {
      throw std::invalid_argument("operator_function_apply: spectrum escapes the contour interior");
    }
  }

  // ray truncation from the e^{-Re phi} decay at the ray angle
  double r_max = contour.r_max;
  double ray_angle = contour.theta1 + contour.epsilon;
  auto damping = [&](double s) {
    return std::exp(-t * phi(std::polar(s, ray_angle)).real());
  };
  if (r_max <= 0.0) {
    r_max = std::max(2.0 * contour.r, 2.0 * scale);
    while (damping(r_max) > 1e-14 && r_max < 1e12) r_max *= 2.0;
  }
  double tail = damping(r_max);
  if (tail > 1e-10) {
    throw std::runtime_error("operator_function_apply: ray tail bound " + std::to_string(tail) +
                             " above tolerance at R_max " + std::to_string(r_max));
  }
  if (min_distance_to_contour(spectrum, contour, r_max) < 1e-8 * scale) {
    throw std::invalid_argument("operator_function_apply: eigenvalue within 1e-8 of the contour");
  }

  Integrand g = [&](Complex lambda) -> ComplexVector {
    return std::exp(-phi(lambda) * t) * phi(lambda) * resolvent_apply(w, lambda, f);
  };

  double fine_until = 0.0;
  for (Complex l : spectrum) fine_until = std::max(fine_until, 1.5 * std::abs(l));
  QuadratureResult out;
  ComplexVector coarse = full_contour(g, contour, r_max, dim, 1, fine_until);
  ComplexVector fine = full_contour(g, contour, r_max, dim, 2, fine_until);
  out.value = fine;
  out.error_estimate = (fine - coarse).norm();
  out.tail_bound = tail;
  return out;
}

TZeroResult t_zero_extrapolation(const std::vector<double>& t_values,
                                 const std::vector<ComplexVector>& u_values) {
  if (t_values.size() != u_values.size() || t_values.size() < 4) {
    throw std::invalid_argument("t_zero_extrapolation: need >= 4 samples (j >= 3)");
  }
  const int n = static_cast<int>(t_values.size());
  const int dim = static_cast<int>(u_values.front().size());
  // Neville tableau evaluated at t = 0: P_i <- (t1 P_i - t0 P_{i+1}) / (t1 - t0)
  std::vector<ComplexVector> p(u_values.begin(), u_values.end());
  for (int level = 1; level < n; ++level) {
    for (int i = 0; i + level < n; ++i) {
      double t0 = t_values[i], t1 = t_values[i + level];
      p[i] = (t1 * p[i] - t0 * p[i + 1]) / (t1 - t0);
    }
  }
  TZeroResult out;
  out.limit = ComplexVector(p[0]);
  out.monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double dist = (u_values[i] - out.limit).norm();
    if (dist > prev * (1.0 + 1e-9)) out.monotone = false;
    prev = dist;
  }
  (void)dim;
  out.error_estimate = (u_values.back() - out.limit).norm();
  return out;
}

S1ContourResult s1_contour_sum(const ComplexMatrix& b, double alpha, double t,
                               const ComplexVector& f, const ContourSpec& contour,
                               const BracketingPlan& plan) {
  require_square(b, "s1_contour_sum");
  contour.validate();
  if (!(t > 0.0)) throw std::invalid_argument("s1_contour_sum: t must be positive");
  const double theta = std::max(std::abs(contour.theta0), std::abs(contour.theta1));
  const double opening = theta + contour.epsilon;
  if (!(opening < kPi / (2.0 * alpha))) {
    throw std::invalid_argument("s1_contour_sum: sector condition violated, theta+eps = " +
                                std::to_string(opening) + " >= pi/(2 alpha) = " +
                                std::to_string(kPi / (2.0 * alpha)));
  }
  const int dim = static_cast<int>(b.rows());
  OperatorFunctionSpec phi = OperatorFunctionSpec::power(alpha);

  ComplexVector bf = b * f;
  Integrand g = [&](Complex lambda) -> ComplexVector {
    ComplexMatrix shifted = ComplexMatrix::Identity(dim, dim) - lambda * b;
    Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
    ComplexVector x = lu.solve(bf);
    if (!x.allFinite()) throw std::runtime_error("s1_contour_sum: resolvent solve failed");
    return std::exp(-phi(lambda) * t) * x;
  };

  const double a0 = contour.theta0 - contour.epsilon, a1 = contour.theta1 + contour.epsilon;
  const int arch_count = static_cast<int>(plan.arch_radius.size());

  // tail truncation along the rays
  double r_max = contour.r_max;
  auto damping = [&](double s) { return std::exp(-t * phi(std::polar(s, a1)).real()); };
  if (r_max <= 0.0) {
    r_max = 2.0 * (arch_count ? plan.arch_radius.back() : contour.r);
    while (damping(r_max) > 1e-14 && r_max < 1e12) r_max *= 2.0;
  }

  // radii ladder: r = rho_0 < R~_1 < ... < R~_G < rho_{G+1} = r_max
  std::vector<double> rho{contour.r};
  for (double rr : plan.arch_radius) rho.push_back(rr);
  rho.push_back(r_max);
  for (size_t i = 0; i + 1 < rho.size(); ++i) {
    if (!(rho[i] < rho[i + 1])) {
      throw std::invalid_argument("s1_contour_sum: contour radii are not nested (r too large or R_max too small)");
    }
  }

  const Complex inv2pii = 1.0 / Complex(0.0, 2.0 * kPi);

  std::vector<ComplexVector> arch(arch_count + 1, ComplexVector::Zero(dim));
  arch[0] = arc_integral(g, rho[0], a0, a1, contour.nodes_arc, dim);
  for (int v = 1; v <= arch_count; ++v) {
    arch[v] = arc_integral(g, rho[v], a0, a1, contour.nodes_arc, dim);
  }
  const double fine_until = arch_count ? 1.5 * plan.arch_radius.back() : 2.0 * contour.r;
  std::vector<ComplexVector> upper(arch_count + 1, ComplexVector::Zero(dim));
  std::vector<ComplexVector> lower(arch_count + 1, ComplexVector::Zero(dim));
  for (int v = 0; v <= arch_count; ++v) {
    upper[v] = ray_integral(g, a1, rho[v], rho[v + 1], contour.nodes_ray, dim, fine_until);
    lower[v] = ray_integral(g, a0, rho[v], rho[v + 1], contour.nodes_ray, dim, fine_until);
  }

  S1ContourResult out;
  out.total = ComplexVector::Zero(dim);
  for (int nu = 0; nu < arch_count; ++nu) {
    // region between arch nu (inner; nu=0 is the small arc) and arch nu+1,
    // traversed clockwise around the enclosed characteristic values
    ComplexVector group = inv2pii * (arch[nu] + upper[nu] - arch[nu + 1] - lower[nu]);
    out.group_values.push_back(group);
    out.total += group;
  }
  {
    ComplexVector rays = ComplexVector::Zero(dim);
    for (int v = 0; v <= arch_count; ++v) rays += upper[v] - lower[v];
    out.full = inv2pii * (arch[0] + rays);
  }
  for (int v = 1; v <= arch_count; ++v) out.j_arch.push_back((inv2pii * arch[v]).norm());
  for (int v = 0; v <= arch_count; ++v) {
    out.j_plus.push_back((inv2pii * upper[v]).norm());
    out.j_minus.push_back((inv2pii * lower[v]).norm());
  }
  auto decays = [](const std::vector<double>& j) {
    if (j.size() < 2) return false;
    double mx = *std::max_element(j.begin(), j.end());
    return j.back() <= 1e-3 * std::max(mx, 1e-300);
  };
  out.arch_summable = decays(out.j_arch);
  out.plus_summable = decays(out.j_plus);
  out.minus_summable = decays(out.j_minus);
  return out;
}

RayBoundReport ray_resolvent_bound(const ComplexMatrix& b, double sector_halfangle,
                                   double ray_angle, const std::vector<double>& radii) {
  require_square(b, "ray_resolvent_bound");
  double wrapped = std::remainder(ray_angle, 2.0 * kPi);
  if (std::abs(wrapped) <= sector_halfangle) {
    throw std::invalid_argument("ray_resolvent_bound: ray lies inside the sector");
  }
  if (wrapped == 0.0 || std::abs(std::abs(wrapped) - kPi) < 1e-15) {
    throw std::invalid_argument("ray_resolvent_bound: ray must avoid the real axis");
  }
  RayBoundReport rep;
  rep.psi = std::min(std::abs(wrapped - sector_halfangle), std::abs(wrapped + sector_halfangle));
  const int dim = static_cast<int>(b.rows());
  for (double s : radii) {
    Complex lambda = std::polar(s, wrapped);
    ComplexMatrix m = ComplexMatrix::Identity(dim, dim) - lambda * b;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    double inv_norm = 1.0 / svd.singularValues()(dim - 1);
    rep.values.push_back(inv_norm * std::sin(rep.psi));
    rep.sup_value = std::max(rep.sup_value, rep.values.back());
  }
  rep.ok = rep.sup_value <= 1.0 + 1e-8;
  return rep;
}

std::vector<EnvelopeCheckRow> fredholm_envelope_check(const ComplexMatrix& b,
                                                      const BracketingPlan& plan, double alpha,
                                                      int samples_per_arch) {
  require_square(b, "fredholm_envelope_check");
  const int dim = static_cast<int>(b.rows());
  const int m = static_cast<int>(std::floor(alpha));

  ComplexMatrix bp = b;
  for (int i = 0; i < m; ++i) bp = bp * b;
  auto sv = singular_values(bp);
  std::vector<double> positive;
  for (double s : sv)
    if (s > 1e-300) positive.push_back(s);
  SingularSequence powered = SingularSequence::decreasing(positive);

  const double sigma = plan.sigma();
  std::vector<EnvelopeCheckRow> rows;
  for (size_t v = 0; v < plan.arch_radius.size(); ++v) {
    double rr = plan.arch_radius[v];
    double gamma = beta_envelope(powered, alpha, m, std::pow(rr, m + 1)) +
                   (2.0 + std::log(4.0 * std::exp(1.0) / plan.delta[v])) *
                       beta_envelope(powered, alpha, m, sigma * std::pow(rr, m + 1)) *
                       std::pow(sigma, alpha / double(m + 1));
    double envelope = std::exp(gamma * std::pow(rr, alpha)) * std::pow(rr, m);
    double worst = 0.0;
    for (int s = 0; s < samples_per_arch; ++s) {
      double angle = -kPi + 2.0 * kPi * (s + 0.5) / samples_per_arch;
      Complex lambda = std::polar(rr, angle);
      ComplexMatrix mm = ComplexMatrix::Identity(dim, dim) - lambda * b;
      Eigen::JacobiSVD<ComplexMatrix> svd(mm);
      worst = std::max(worst, 1.0 / svd.singularValues()(dim - 1));
    }
    EnvelopeCheckRow row;
    row.nu = static_cast<int>(v);
    row.radius = rr;
    row.resolvent_max = worst;
    row.envelope = envelope;
    row.ok = worst <= envelope;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace speclab
