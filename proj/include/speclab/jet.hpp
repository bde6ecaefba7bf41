#pragma once

#include <vector>

#include "speclab/types.hpp"

namespace speclab {

/// Truncated power series sum_{k=0..deg} c_k eps^k with complex coefficients.
/// Degree is fixed at construction; products truncate at that degree.
class Jet {
 public:
  explicit Jet(int degree) : c_(degree + 1, Complex(0.0, 0.0)) {}
  static Jet constant(Complex value, int degree);
  /// value + eps
  static Jet variable(Complex value, int degree);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Complex& operator[](int k) { return c_[k]; }
  const Complex& operator[](int k) const { return c_[k]; }
  Complex value() const { return c_[0]; }

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator*(Complex s) const;
  Jet operator+(Complex s) const;

  /// 1/this; constant term must be nonzero.
  Jet reciprocal() const;
  /// Principal log; constant term must be nonzero.
  Jet log() const;
  Jet exp() const;
  /// exp(alpha * log(this)), principal branch.
  Jet pow(Complex alpha) const;

 private:
  void check_same(const Jet& o) const;
  std::vector<Complex> c_;
};

}  // namespace speclab
