#pragma once

#include <array>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <utility>

#include "heis/group.hpp"

namespace heis {

/// Exponent triple (i, j, k) of the monomial x11^i x12^j t^k.
struct Exponent {
  int i = 0;
  int j = 0;
  int k = 0;

  int degree() const { return i + j + k; }
  auto operator<=>(const Exponent&) const = default;
};

/// One serialized term: exponents and coefficient.
struct Term {
  Exponent exponent;
  double coefficient = 0.0;
};

/// Sparse trivariate polynomial in (x11, x12, t). Zero coefficients are
/// never stored.
class Polynomial {
 public:
  static constexpr int kDefaultMaxDegree = 16;

  Polynomial() = default;
  explicit Polynomial(std::span<const Term> terms,
                      int max_degree = kDefaultMaxDegree);

  static Polynomial constant(double c);
  static Polynomial x11() { return monomial({1, 0, 0}); }
  static Polynomial x12() { return monomial({0, 1, 0}); }
  static Polynomial t() { return monomial({0, 0, 1}); }
  static Polynomial monomial(Exponent e, double c = 1.0);

  double operator()(const Point& x) const;

  /// Partial derivative with respect to coordinate 0 (x11), 1 (x12), 2 (t).
  Polynomial partial(int coordinate) const;
  /// Multiplication by x11^i x12^j t^k.
  Polynomial times(Exponent e) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  const std::map<Exponent, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void add_term(Exponent e, double c);
  std::map<Exponent, double> terms_;
};

/// Level set {p = level} of a polynomial.
struct PolySurface {
  Polynomial poly;
  double level = 0.0;
};

/// Exact (X1 p, X2 p) with X1 = ∂11 - x12 ∂t and X2 = ∂12 + x11 ∂t.
std::pair<Polynomial, Polynomial> horiz_grad_poly(const Polynomial& p);

}  // namespace heis
