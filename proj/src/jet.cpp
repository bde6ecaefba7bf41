#include "speclab/jet.hpp"

#include <cmath>

namespace speclab {

Jet Jet::constant(Complex value, int degree) {
  Jet j(degree);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(Complex value, int degree) {
  Jet j(degree);
  j.c_[0] = value;
  if (degree >= 1) j.c_[1] = 1.0;
  return j;
}

void Jet::check_same(const Jet& o) const {
  if (o.degree() != degree()) throw std::invalid_argument("Jet: degree mismatch");
}

Jet Jet::operator+(const Jet& o) const {
  check_same(o);
  Jet out(degree());
  for (int k = 0; k <= degree(); ++k) out.c_[k] = c_[k] + o.c_[k];
  return out;
}

Jet Jet::operator-(const Jet& o) const {
  check_same(o);
  Jet out(degree());
  for (int k = 0; k <= degree(); ++k) out.c_[k] = c_[k] - o.c_[k];
  return out;
}

Jet Jet::operator*(const Jet& o) const {
  check_same(o);
  Jet out(degree());
  for (int i = 0; i <= degree(); ++i) {
    if (c_[i] == Complex(0.0, 0.0)) continue;
    for (int j = 0; i + j <= degree(); ++j) out.c_[i + j] += c_[i] * o.c_[j];
  }
  return out;
}

Jet Jet::operator*(Complex s) const {
  Jet out(degree());
  for (int k = 0; k <= degree(); ++k) out.c_[k] = c_[k] * s;
  return out;
}

Jet Jet::operator+(Complex s) const {
  Jet out = *this;
  out.c_[0] += s;
  return out;
}

Jet Jet::reciprocal() const {
  if (c_[0] == Complex(0.0, 0.0)) throw std::domain_error("Jet::reciprocal: zero constant term");
  Jet out(degree());
  out.c_[0] = 1.0 / c_[0];
  for (int k = 1; k <= degree(); ++k) {
    Complex acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += c_[j] * out.c_[k - j];
    out.c_[k] = -acc / c_[0];
  }
  return out;
}

Jet Jet::log() const {
  if (c_[0] == Complex(0.0, 0.0)) throw std::domain_error("Jet::log: zero constant term");
  // b' = a'/a solved coefficientwise: k b_k = (k a_k - sum_{j=1..k-1} j b_j a_{k-j}) / a_0
  Jet out(degree());
  out.c_[0] = std::log(c_[0]);
  for (int k = 1; k <= degree(); ++k) {
    Complex acc = double(k) * c_[k];
    for (int j = 1; j < k; ++j) acc -= double(j) * out.c_[j] * c_[k - j];
    out.c_[k] = acc / (double(k) * c_[0]);
  }
  return out;
}

Jet Jet::exp() const {
  // b_0 = exp(a_0); k b_k = sum_{j=1..k} j a_j b_{k-j}
  Jet out(degree());
  out.c_[0] = std::exp(c_[0]);
  for (int k = 1; k <= degree(); ++k) {
    Complex acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += double(j) * c_[j] * out.c_[k - j];
    out.c_[k] = acc / double(k);
  }
  return out;
}

Jet Jet::pow(Complex alpha) const { return (log() * alpha).exp(); }

}  // namespace speclab
