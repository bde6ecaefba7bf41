#include "speclab/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace speclab {

namespace {

void check_monotone(const std::function<double(double)>& gen, Sequence::Direction dir,
                    double up_to, const std::string& name) {
  double prev = gen(1.0);
  if (!(prev > 0.0)) throw std::invalid_argument("Sequence " + name + ": values must be positive");
  for (double n = 1.0; n < up_to; n *= 1.7782794100389228) {  // quarter-decade grid
    double v = gen(n);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("Sequence " + name + ": non-finite or non-positive value at n=" +
                                  std::to_string(n));
    }
    if (n > 1.0) {
      if (dir == Sequence::Direction::decreasing && v > prev * (1.0 + 1e-12)) {
        throw std::invalid_argument("Sequence " + name + ": not decreasing near n=" + std::to_string(n));
      }
      if (dir == Sequence::Direction::increasing && v < prev * (1.0 - 1e-12)) {
        throw std::invalid_argument("Sequence " + name + ": not increasing near n=" + std::to_string(n));
      }
    }
    prev = v;
  }
}

void check_monotone_list(const std::vector<double>& v, Sequence::Direction dir) {
  if (v.empty()) throw std::invalid_argument("Sequence: empty list");
  for (size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw std::invalid_argument("Sequence: entries must be positive and finite");
    }
    if (i > 0) {
      if (dir == Sequence::Direction::decreasing && v[i] > v[i - 1] * (1.0 + 1e-12)) {
        throw std::invalid_argument("Sequence: list is not non-increasing at index " + std::to_string(i));
      }
      if (dir == Sequence::Direction::increasing && v[i] < v[i - 1] * (1.0 - 1e-12)) {
        throw std::invalid_argument("Sequence: list is not non-decreasing at index " + std::to_string(i));
      }
    }
  }
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> out;
  out.reserve(points);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    out.push_back(std::exp(llo + (lhi - llo) * i / double(points - 1)));
  }
  return out;
}

}  // namespace

Sequence Sequence::decreasing(std::vector<double> values) {
  check_monotone_list(values, Direction::decreasing);
  Sequence s;
  s.values_ = std::move(values);
  s.dir_ = Direction::decreasing;
  s.name_ = "explicit";
  return s;
}

Sequence Sequence::increasing(std::vector<double> values) {
  check_monotone_list(values, Direction::increasing);
  Sequence s;
  s.values_ = std::move(values);
  s.dir_ = Direction::increasing;
  s.name_ = "explicit";
  return s;
}

Sequence Sequence::decreasing_generator(std::function<double(double)> gen, std::string name,
                                        double check_up_to) {
  check_monotone(gen, Direction::decreasing, check_up_to, name);
  Sequence s;
  s.gen_ = std::move(gen);
  s.dir_ = Direction::decreasing;
  s.name_ = std::move(name);
  return s;
}

Sequence Sequence::increasing_generator(std::function<double(double)> gen, std::string name,
                                        double check_up_to) {
  check_monotone(gen, Direction::increasing, check_up_to, name);
  Sequence s;
  s.gen_ = std::move(gen);
  s.dir_ = Direction::increasing;
  s.name_ = std::move(name);
  return s;
}

std::size_t Sequence::size() const {
  if (!finite()) throw std::logic_error("Sequence::size: generator-backed sequence has no length");
  return values_.size();
}

double Sequence::value(double n) const {
  if (!(n >= 1.0)) throw std::invalid_argument("Sequence::value: index must be >= 1");
  if (finite()) {
    auto idx = static_cast<std::size_t>(n);
    if (idx < 1 || idx > values_.size()) {
      throw std::out_of_range("Sequence::value: index " + std::to_string(idx) + " out of range");
    }
    return values_[idx - 1];
  }
  return gen_(n);
}

SingularSequence read_sequence_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_sequence_csv: cannot open " + path);
  std::vector<std::pair<long long, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    long long n = 0;
    double s = 0.0;
    if (!(is >> n >> s)) continue;  // header or malformed line
    rows.push_back({n, s});
  }
  if (rows.empty()) throw std::runtime_error("read_sequence_csv: no (n, s_n) rows in " + path);
  std::sort(rows.begin(), rows.end());
  std::vector<double> values;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != static_cast<long long>(i) + 1) {
      throw std::runtime_error("read_sequence_csv: indices must run 1..N in " + path);
    }
    values.push_back(rows[i].second);
  }
  return Sequence::decreasing(std::move(values));
}

SingularSequence parse_singular_generator(const std::string& text) {
  std::vector<std::string> parts;
  {
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ':')) parts.push_back(item);
  }
  if (parts.size() == 2 && parts[0] == "power") {
    double rho = std::stod(parts[1]);
    return Sequence::decreasing_generator(
        [rho](double n) { return std::pow(n, -1.0 / rho); }, text, 1e12);
  }
  if (parts.size() == 2 && parts[0] == "nlogn") {
    double rho = std::stod(parts[1]);
    return Sequence::decreasing_generator(
        [rho](double n) { return std::pow(n * std::log(n + 1.0), -1.0 / rho); }, text, 1e12);
  }
  if (parts.size() == 3 && parts[0] == "subtle") {
    double kappa = std::stod(parts[1]);
    double q = std::stod(parts[2]);
    const double e_to_e = std::exp(std::exp(1.0));
    if (!(q > e_to_e - 1.0)) throw std::invalid_argument("parse_singular_generator: q too small");
    return Sequence::decreasing_generator(
        [kappa, q](double n) {
          double ln = std::log(n + q);
          return std::pow(n * ln * std::log(ln), -kappa);
        },
        text, 1e12);
  }
  throw std::invalid_argument("parse_singular_generator: cannot parse '" + text + "'");
}

long long counting_function(const SingularSequence& seq, double r, long long max_index) {
  if (!(r > 0.0)) throw std::invalid_argument("counting_function: r must be positive");
  if (seq.direction() != Sequence::Direction::decreasing) {
    throw std::invalid_argument("counting_function: sequence must be decreasing");
  }
  const double cutoff = 1.0 / r;  // count indices with s_i > cutoff
  if (seq.finite()) {
    long long count = 0;
    for (std::size_t i = 1; i <= seq.size(); ++i) {
      if (seq.value(double(i)) > cutoff) ++count;
      else break;
    }
    return count;
  }
  if (!(seq.value(1.0) > cutoff)) return 0;
  long long lo = 1, hi = 2;
  while (hi <= max_index && seq.value(double(hi)) > cutoff) {
    lo = hi;
    hi *= 2;
  }
  if (hi > max_index) return max_index;  // saturated; caller declared the horizon
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (seq.value(double(mid)) > cutoff) lo = mid;
    else hi = mid;
  }
  return lo;
}

SchattenPartial schatten_norm(const SingularSequence& seq, double p, long long n_max) {
  if (!(p > 0.0)) throw std::invalid_argument("schatten_norm: p must be positive");
  if (seq.finite()) n_max = std::min<long long>(n_max, static_cast<long long>(seq.size()));
  if (n_max < 1) throw std::invalid_argument("schatten_norm: n_max must be >= 1");
  double total = 0.0;
  double last_decade = 0.0;
  const long long decade_start = n_max / 10;
  for (long long n = 1; n <= n_max; ++n) {
    double term = std::pow(seq.value(double(n)), p);
    total += term;
    if (n > decade_start) last_decade += term;
  }
  SchattenPartial out;
  out.sum = total;
  out.partial = std::pow(total, 1.0 / p);
  out.last_decade_share = (total > 0.0) ? last_decade / total : 0.0;
  out.tail_suspect = out.last_decade_share > 0.01;
  return out;
}

OrderEstimate convergence_exponent(const SingularSequence& seq, double window_lo, double window_hi,
                                   int points) {
  if (!(window_lo >= 1.0) || !(window_hi > window_lo)) {
    throw std::invalid_argument("convergence_exponent: bad window");
  }
  if (seq.finite() && window_hi > double(seq.size())) {
    throw std::invalid_argument("convergence_exponent: window exceeds sequence length");
  }
  if (points < 10) throw std::invalid_argument("convergence_exponent: window must hold >= 10 samples");

  auto grid = log_spaced(window_lo, window_hi, points);
  std::vector<double> x(points), y(points), z(points);
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    double s = seq.value(grid[i]);
    if (s > prev * (1.0 + 1e-12)) {
      throw std::invalid_argument("convergence_exponent: non-monotone data in window");
    }
    prev = s;
    x[i] = std::log(grid[i]);
    y[i] = std::log(1.0 / s);
    z[i] = std::log(x[i]);  // lnln n, for the three-term fit
  }

  // two-term least squares y = slope*x + c
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < points; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double npts = points;
  double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  double intercept = (sy - slope * sx) / npts;
  double rss = 0.0;
  for (int i = 0; i < points; ++i) {
    double e = y[i] - slope * x[i] - intercept;
    rss += e * e;
  }

  OrderEstimate est;
  est.window_lo = window_lo;
  est.window_hi = window_hi;
  est.residual = std::sqrt(rss / npts);
  est.super_polynomial = slope > 25.0 || est.residual > 0.5;
  est.rho_hat = (slope > 0.0) ? 1.0 / slope : 0.0;
  est.mu_hat = slope;

  // three-term fit y = a x + b z + c via normal equations
  double residual3 = 0.0;
  {
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (int i = 0; i < points; ++i) {
      Eigen::Vector3d row(x[i], z[i], 1.0);
      ata += row * row.transpose();
      atb += row * y[i];
    }
    Eigen::Vector3d sol = ata.ldlt().solve(atb);
    est.fit_a = sol(0);
    est.fit_b = sol(1);
    for (int i = 0; i < points; ++i) {
      double e = y[i] - sol(0) * x[i] - sol(1) * z[i] - sol(2);
      residual3 += e * e;
    }
    residual3 = std::sqrt(residual3 / npts);
  }

  // class probe on the fitted model: sum s_n^p ~ sum n^{-a p} (ln n)^{-b p};
  // divergent iff a*p < 1, or a*p == 1 (within fit tolerance) and b*p <= 1.
  auto classify_divergent = [&](double p) {
    double ap = est.fit_a * p;
    double bp = est.fit_b * p;
    const double fit_tol = 5e-3 + 10.0 * residual3;
    if (ap < 1.0 - fit_tol) return true;
    if (ap > 1.0 + fit_tol) return false;
    return bp <= 1.0 + fit_tol;
  };
  if (est.rho_hat > 0.0 && !est.super_polynomial) {
    bool div_at_rho = classify_divergent(est.rho_hat);
    bool conv_above = !classify_divergent(est.rho_hat * 1.05);
    if (div_at_rho && conv_above) est.class_tag = OrderEstimate::Tag::S_star_rho;
    else if (!div_at_rho) est.class_tag = OrderEstimate::Tag::S_p;
    else est.class_tag = OrderEstimate::Tag::undetermined;
  }
  return est;
}

SubtleConditionReport subtle_condition_check(const Sequence& lam, double kappa,
                                             const std::vector<double>& grid) {
  if (lam.direction() != Sequence::Direction::increasing) {
    throw std::invalid_argument("subtle_condition_check: eigenvalue sequence must be increasing");
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("subtle_condition_check: kappa must be positive");
  if (grid.size() < 2) throw std::invalid_argument("subtle_condition_check: grid too short");

  SubtleConditionReport rep;
  rep.grid = grid;
  rep.rho_trace.reserve(grid.size());
  for (double n : grid) {
    double l = lam.value(n);
    if (!(l > 1.0)) {
      throw std::invalid_argument("subtle_condition_check: lambda_n <= 1 at n=" + std::to_string(n) +
                                  " (logarithm domain)");
    }
    rep.rho_trace.push_back(std::pow(n, kappa) * (1.0 + kappa) * std::pow(std::log(l), kappa) / l);
  }
  double lo = grid.front(), hi = grid.back();
  double first_hi = lo * 10.0, last_lo = hi / 10.0;
  double sf = 0, cf = 0, sl = 0, cl = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= first_hi) {
      sf += rep.rho_trace[i];
      cf += 1;
    }
    if (grid[i] >= last_lo) {
      sl += rep.rho_trace[i];
      cl += 1;
    }
  }
  rep.first_decade = sf / std::max(cf, 1.0);
  rep.last_decade = sl / std::max(cl, 1.0);
  rep.decrease_factor = (rep.last_decade > 0.0) ? rep.first_decade / rep.last_decade : 0.0;
  rep.pass = rep.decrease_factor >= 10.0;
  return rep;
}

DivergenceReport example1_divergence(double kappa, double q,
                                     const std::vector<double>& checkpoints) {
  const double e_to_e = std::exp(std::exp(1.0));
  if (!(q > e_to_e - 1.0)) {
    throw std::invalid_argument("example1_divergence: need q > e^e - 1, got " + std::to_string(q));
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("example1_divergence: kappa must be positive");
  if (checkpoints.empty()) throw std::invalid_argument("example1_divergence: no checkpoints");
  for (size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw std::invalid_argument("example1_divergence: checkpoints must be increasing");
    }
  }

  DivergenceReport rep;
  rep.checkpoints = checkpoints;
  // lambda_n^{-1/kappa} = 1/(n ln(n+q) lnln(n+q)) regardless of kappa
  double sum = 0.0;
  long long n = 1;
  for (double cp : checkpoints) {
    long long target = static_cast<long long>(cp);
    for (; n <= target; ++n) {
      double ln = std::log(double(n) + q);
      sum += 1.0 / (double(n) * ln * std::log(ln));
    }
    rep.partial_sums.push_back(sum);
  }
  rep.growth_ratio = rep.partial_sums.back() / rep.partial_sums.front();
  rep.spans_three_decades = checkpoints.back() >= 1000.0 * checkpoints.front();
  rep.pass = rep.partial_sums.size() == 1 ||
             (rep.spans_three_decades && rep.growth_ratio >= 2.0);
  return rep;
}

namespace {

// Real-valued counting for generator-backed sequences; exact for explicit
// lists. Generators are bisected in log index space. Saturating the index
// horizon means the counting function grows too fast for a tail integral.
double counting_real(const Sequence& seq, double r, double max_index = 1e120) {
  const double cutoff = 1.0 / r;
  if (seq.finite()) return double(counting_function(seq, r));
  if (!(seq.value(1.0) > cutoff)) return 0.0;
  double lo = 1.0, hi = 2.0;
  while (hi < max_index && seq.value(hi) > cutoff) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= max_index) {
    throw std::runtime_error(
        "counting function exceeded the declared index horizon (tail integral non-convergent)");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-13 * hi; ++it) {
    double mid = std::sqrt(lo * hi);
    if (seq.value(mid) > cutoff) lo = mid;
    else hi = mid;
  }
  return lo;
}

struct StepIntegrals {
  double inner = 0.0;  // int_0^r n(t)/t dt
  double outer = 0.0;  // r int_r^inf n(t)/t^2 dt
};

// Exact integrals of the step counting function t -> #{ t_i < t } with jumps
// at t_i = s_i^{-power}:
//   int_0^r n(t)/t dt       = sum_{t_i<r} ln(r/t_i)
//   r int_r^inf n(t)/t^2 dt = n(r) + sum_{t_i>=r} r/t_i
StepIntegrals step_integrals_explicit(const SingularSequence& seq, int power, double r) {
  StepIntegrals out;
  double n_at_r = 0.0;
  for (std::size_t i = 1; i <= seq.size(); ++i) {
    double t = std::pow(1.0 / seq.value(double(i)), power);
    if (t < r) {
      out.inner += std::log(r / t);
      n_at_r += 1.0;
    } else {
      out.outer += r / t;
    }
  }
  out.outer += n_at_r;
  return out;
}

// Log-spaced trapezoid quadrature against the bisected counting function,
// with the outer tail truncated once a decade contributes < 1e-16 relative.
StepIntegrals step_integrals_generator(const SingularSequence& seq, int power, double r,
                                       int nodes_per_decade = 16) {
  StepIntegrals out;
  auto n_power = [&](double t) { return counting_real(seq, std::pow(t, 1.0 / power)); };
  const double t_first = std::pow(1.0 / seq.value(1.0), power);
  if (r > t_first) {
    // inner: integrate n(e^u) du over u in [ln t_first, ln r]
    double u0 = std::log(t_first), u1 = std::log(r);
    int nodes = std::max(8, int((u1 - u0) / std::log(10.0) * nodes_per_decade));
    double h = (u1 - u0) / nodes;
    double acc = 0.5 * (n_power(t_first) + n_power(r));
    for (int i = 1; i < nodes; ++i) acc += n_power(std::exp(u0 + i * h));
    out.inner = acc * h;
  }
  // outer: r * int n(e^u) e^{-u} du over u in [ln max(r,t_first), inf)
  double u = std::log(std::max(r, t_first));
  const double du = std::log(10.0) / nodes_per_decade;
  double prev = n_power(std::exp(u)) * std::exp(-u);
  double acc = 0.0;
  double decade_acc = 0.0;
  int decades = 0;
  bool converged = false;
  for (int step = 1; step <= 20000; ++step) {
    double un = u + du;
    double cur = n_power(std::exp(un)) * std::exp(-un);
    double piece = 0.5 * (prev + cur) * du;
    acc += piece;
    decade_acc += piece;
    u = un;
    prev = cur;
    if (step % nodes_per_decade == 0) {
      ++decades;
      if (decades >= 2 && decade_acc < 1e-16 * std::max(acc, 1e-300)) {
        converged = true;
        break;
      }
      decade_acc = 0.0;
    }
  }
  if (!converged) {
    throw std::runtime_error("growth_envelope: tail integral did not converge by the declared cutoff");
  }
  out.outer = r * acc;
  return out;
}

StepIntegrals step_integrals(const SingularSequence& seq, int power, double r) {
  return seq.finite() ? step_integrals_explicit(seq, power, r)
                      : step_integrals_generator(seq, power, r);
}

bool grid_decreasing(const std::vector<double>& v) {
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] > v[i] * (1.0 + 1e-12)) return false;
  }
  return v.size() < 2 || v.back() < v.front();
}

}  // namespace

GrowthEnvelope growth_envelope(const SingularSequence& seq, double alpha,
                               std::vector<double> r_grid, double delta0) {
  if (!(alpha > 0.0) || alpha == std::floor(alpha)) {
    throw std::invalid_argument("growth_envelope: alpha must be positive non-integer");
  }
  if (r_grid.size() < 2) throw std::invalid_argument("growth_envelope: grid too short");
  GrowthEnvelope env;
  env.alpha = alpha;
  env.m = static_cast<int>(std::floor(alpha));
  env.sigma = std::pow(2.0 * std::exp(1.0) / (1.0 - delta0), env.m + 1);
  env.r_grid = std::move(r_grid);

  const int p = env.m + 1;
  for (double r : env.r_grid) {
    auto si = step_integrals(seq, p, r);
    double beta = std::pow(r, -alpha / double(p)) * (si.inner + si.outer);
    env.beta.push_back(beta);
    double n_r = counting_real(seq, r);
    env.n_of_r.push_back(n_r);
    env.premise.push_back(std::log(r) * n_r / std::pow(r, alpha));
    env.beta_ln_r.push_back(beta * std::log(r));
  }
  env.premise_decreasing = grid_decreasing(env.premise);
  env.conclusion_decreasing = grid_decreasing(env.beta_ln_r);
  env.implication_ok = !env.premise_decreasing || env.conclusion_decreasing;
  return env;
}

double beta_envelope(const SingularSequence& powered_seq, double alpha, int m, double r) {
  auto si = step_integrals(powered_seq, 1, r);
  return std::pow(r, -alpha / double(m + 1)) * (si.inner + si.outer);
}

PowerCountingBound power_counting_bound(const ComplexMatrix& b, int m, double r) {
  require_square(b, "power_counting_bound");
  if (m < 1) throw std::invalid_argument("power_counting_bound: m must be >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("power_counting_bound: r must be positive");
  ComplexMatrix bp = b;
  for (int i = 0; i < m; ++i) bp = bp * b;
  auto count = [](const std::vector<double>& s, double radius) {
    long long c = 0;
    for (double v : s) {
      if (v > 0.0 && 1.0 / v < radius) ++c;
    }
    return c;
  };
  PowerCountingBound out;
  out.lhs = count(singular_values(bp), std::pow(r, m + 1));
  out.rhs = (m + 1) * count(singular_values(b), r);
  out.ok = out.lhs <= out.rhs;
  return out;
}

EigenDecayProbe eigen_decay_probe(const ComplexMatrix& b, double tau, std::optional<double> rho) {
  require_square(b, "eigen_decay_probe");
  if (!(tau > 0.0)) throw std::invalid_argument("eigen_decay_probe: tau must be positive");
  EigenDecayProbe probe;
  auto ev = eigenvalues_by_modulus(b);
  probe.s_vals = singular_values(b);
  probe.lam_mod.reserve(ev.size());
  for (auto& l : ev) probe.lam_mod.push_back(std::abs(l));
  for (size_t n = 0; n < probe.lam_mod.size(); ++n) {
    probe.lam_times_ntau.push_back(probe.lam_mod[n] * std::pow(double(n + 1), tau));
    if (rho) probe.s_times_nrho.push_back(probe.s_vals[n] * std::pow(double(n + 1), 1.0 / *rho));
  }
  // Weyl multiplicative majorization: prod_{i<=m} |lambda_i| <= prod_{i<=m} s_i
  probe.weyl_ok = true;
  double pl = 1.0, ps = 1.0;
  for (size_t i = 0; i < probe.lam_mod.size(); ++i) {
    pl *= probe.lam_mod[i];
    ps *= probe.s_vals[i];
    probe.weyl_margin.push_back(ps - pl);
    if (pl > ps * (1.0 + 1e-10)) probe.weyl_ok = false;
  }
  return probe;
}

}  // namespace speclab
