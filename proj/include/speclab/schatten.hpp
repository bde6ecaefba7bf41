#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "speclab/types.hpp"

namespace speclab {

/// Strictly positive monotone sequence, either an explicit finite list or an
/// analytic generator n -> value (n treated as a real index so generators can
/// be probed far beyond 2^53). Monotonicity of generators is spot-checked on
/// a logarithmic index grid at construction.
class Sequence {
 public:
  enum class Direction { decreasing, increasing };

  static Sequence decreasing(std::vector<double> values);
  static Sequence increasing(std::vector<double> values);
  static Sequence decreasing_generator(std::function<double(double)> gen, std::string name,
                                       double check_up_to = 1e12);
  static Sequence increasing_generator(std::function<double(double)> gen, std::string name,
                                       double check_up_to = 1e12);

  bool is_explicit() const { return !values_.empty() || !gen_; }
  bool finite() const { return !gen_; }
  Direction direction() const { return dir_; }
  std::size_t size() const;           // explicit only
  double value(double n) const;       // n >= 1
  const std::string& name() const { return name_; }

 private:
  Sequence() = default;
  std::vector<double> values_;
  std::function<double(double)> gen_;
  Direction dir_ = Direction::decreasing;
  std::string name_;
};

/// Singular sequences are decreasing by convention.
using SingularSequence = Sequence;

/// CSV with columns (n, s_n); a header line is skipped if present.
SingularSequence read_sequence_csv(const std::string& path);

/// Named generator specs: "power:RHO" for n^{-1/rho}, "nlogn:RHO" for
/// (n ln(n+1))^{-1/rho}, "subtle:KAPPA:Q" for the reciprocal of
/// (n ln(n+q) lnln(n+q))^kappa.
SingularSequence parse_singular_generator(const std::string& text);

/// n(r) = #{ i : 1/s_i < r } for a decreasing sequence; monotone bisection
/// for generators, direct scan for short explicit lists.
long long counting_function(const SingularSequence& seq, double r,
                            long long max_index = 1'000'000'000'000LL);

struct SchattenPartial {
  double partial = 0.0;           // (sum_{n<=n_max} s_n^p)^{1/p}
  double sum = 0.0;               // sum_{n<=n_max} s_n^p
  double last_decade_share = 0.0; // fraction contributed by n in (n_max/10, n_max]
  bool tail_suspect = false;      // last decade contributed > 1%
};

SchattenPartial schatten_norm(const SingularSequence& seq, double p, long long n_max);

struct OrderEstimate {
  enum class Tag { S_p, S_star_rho, undetermined };
  double rho_hat = 0.0;       // reciprocal of the log-log slope
  double mu_hat = 0.0;        // 1/rho_hat, operator-order companion value
  Tag class_tag = Tag::undetermined;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double residual = 0.0;      // rms residual of the log-log fit
  bool super_polynomial = false;
  // three-term fit ln(1/s_n) ~ a ln n + b lnln n + c, used by the class probe
  double fit_a = 0.0, fit_b = 0.0;
};

/// Least-squares slope of ln(1/s_n) against ln n over [window_lo, window_hi]
/// (log-spaced samples); the S*_rho tag requires numeric evidence of
/// divergence at rho_hat and convergence at rho_hat*(1.05).
OrderEstimate convergence_exponent(const SingularSequence& seq, double window_lo,
                                   double window_hi, int points = 200);

struct SubtleConditionReport {
  std::vector<double> grid;
  std::vector<double> rho_trace;  // n^k (1+k) ln^k(lam_n) / lam_n
  double first_decade = 0.0;      // mean of rho over the grid's first decade
  double last_decade = 0.0;
  double decrease_factor = 0.0;   // first_decade / last_decade
  bool pass = false;              // decrease_factor >= 10
};

/// lam must be increasing with values > 1 (logarithm domain).
SubtleConditionReport subtle_condition_check(const Sequence& lam, double kappa,
                                             const std::vector<double>& grid);

struct DivergenceReport {
  std::vector<double> checkpoints;
  std::vector<double> partial_sums;
  double growth_ratio = 0.0;  // last partial sum / first partial sum
  bool spans_three_decades = false;
  bool pass = false;          // growth_ratio >= 2 when spanning >= 3 decades
};

/// Partial sums of sum_n lam_n^{-1/kappa} for lam_n = n^k ln^k(n+q) lnln^k(n+q).
DivergenceReport example1_divergence(double kappa, double q,
                                     const std::vector<double>& checkpoints);

struct GrowthEnvelope {
  double alpha = 0.0;
  int m = 0;                  // floor(alpha)
  double sigma = 0.0;         // (2e/(1-delta0))^{m+1}
  std::vector<double> r_grid;
  std::vector<double> beta;           // beta(r)
  std::vector<double> n_of_r;         // n(r) of the base sequence
  std::vector<double> premise;        // ln r * n(r) / r^alpha
  std::vector<double> beta_ln_r;      // beta(r) * ln r
  bool premise_decreasing = false;
  bool conclusion_decreasing = false;
  bool implication_ok = true;         // premise_decreasing => conclusion_decreasing
};

/// beta(r) = r^{-alpha/(m+1)} ( int_0^r n_{m+1}(t)/t dt + r int_r^inf n_{m+1}(t)/t^2 dt )
/// with n_{m+1} the counting function of the (m+1)-th powers of s_n. Exact
/// stepwise integration for explicit lists; log-spaced trapezoid + declared
/// tail cutoff for generators.
GrowthEnvelope growth_envelope(const SingularSequence& seq, double alpha,
                               std::vector<double> r_grid, double delta0 = 0.5);

/// beta(r) = r^{-alpha/(m+1)} ( int_0^r n(t)/t dt + r int_r^inf n(t)/t^2 dt )
/// for a sequence whose own counting function is used directly (the caller
/// supplies the (m+1)-th power sequence, e.g. singular values of b^{m+1}).
double beta_envelope(const SingularSequence& powered_seq, double alpha, int m, double r);

struct PowerCountingBound {
  long long lhs = 0;  // n_{b^{m+1}}(r^{m+1})
  long long rhs = 0;  // (m+1) n_b(r)
  bool ok = false;
};

PowerCountingBound power_counting_bound(const ComplexMatrix& b, int m, double r);

struct EigenDecayProbe {
  std::vector<double> lam_mod;        // |lambda_n|, descending
  std::vector<double> s_vals;         // s_n, descending
  std::vector<double> lam_times_ntau; // |lambda_n| n^tau
  std::vector<double> s_times_nrho;   // s_n n^{1/rho} when rho supplied
  /// Weyl majorization margins: prod_{i<=m} s_i - prod_{i<=m}|lambda_i| >= 0.
  std::vector<double> weyl_margin;
  bool weyl_ok = false;
};

EigenDecayProbe eigen_decay_probe(const ComplexMatrix& b, double tau,
                                  std::optional<double> rho = std::nullopt);

}  // namespace speclab
