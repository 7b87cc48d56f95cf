#include "heis/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "heis/error.hpp"

namespace heis {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace

Polynomial::Polynomial(std::span<const Term> terms, int max_degree) {
  for (const Term& term : terms) {
    const Exponent& e = term.exponent;
    if (e.i < 0 || e.j < 0 || e.k < 0) {
      fail(ErrorKind::InvalidArgument, "polynomial exponents must be nonnegative");
    }
    if (e.degree() > max_degree) {
      fail(ErrorKind::InvalidArgument,
           "polynomial term degree " + std::to_string(e.degree()) +
               " exceeds bound " + std::to_string(max_degree));
    }
    if (!std::isfinite(term.coefficient)) {
      fail(ErrorKind::InvalidArgument, "polynomial coefficients must be finite");
    }
    add_term(e, term.coefficient);
  }
}

Polynomial Polynomial::constant(double c) { return monomial({0, 0, 0}, c); }

Polynomial Polynomial::monomial(Exponent e, double c) {
  Polynomial p;
  p.add_term(e, c);
  return p;
}

void Polynomial::add_term(Exponent e, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::operator()(const Point& x) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    sum += c * ipow(x.x11, e.i) * ipow(x.x12, e.j) * ipow(x.t, e.k);
  }
  return sum;
}

Polynomial Polynomial::partial(int coordinate) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    Exponent d = e;
    int power = 0;
    switch (coordinate) {
      case 0: power = d.i--; break;
      case 1: power = d.j--; break;
      case 2: power = d.k--; break;
      default:
        fail(ErrorKind::InvalidArgument, "coordinate index must be 0, 1 or 2");
    }
    if (power > 0) out.add_term(d, c * power);
  }
  return out;
}

Polynomial Polynomial::times(Exponent m) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    out.add_term({e.i + m.i, e.j + m.j, e.k + m.k}, c);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [e, c] : b.terms_) {
    Polynomial shifted = a.times(e);
    shifted *= c;
    out += shifted;
  }
  return out;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.degree());
  return d;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    if (e.i) os << "*x11^" << e.i;
    if (e.j) os << "*x12^" << e.j;
    if (e.k) os << "*t^" << e.k;
  }
  return os.str();
}

std::pair<Polynomial, Polynomial> horiz_grad_poly(const Polynomial& p) {
  const Polynomial dt = p.partial(2);
  Polynomial x1 = p.partial(0) - dt.times({0, 1, 0});
  Polynomial x2 = p.partial(1) + dt.times({1, 0, 0});
  return {std::move(x1), std::move(x2)};
}

}  // namespace heis
