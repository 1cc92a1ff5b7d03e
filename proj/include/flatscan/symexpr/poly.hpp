#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatscan/symexpr/symbol.hpp"

namespace flatscan::symexpr {

class Valuation;

// Sparse power product; factors sorted by symbol id, exponents positive.
struct Monomial {
  std::vector<std::pair<SymbolId, std::uint32_t>> factors;

  std::uint32_t degree_in(SymbolId var) const;
  std::uint32_t total_degree() const;
  bool operator==(const Monomial&) const = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);
// Lex order, smaller symbol id is more significant. Returns <0, 0, >0.
int compare_lex(const Monomial& a, const Monomial& b);
// True when b divides a; quotient written to out.
bool divides(const Monomial& b, const Monomial& a, Monomial* out);

struct Term {
  Monomial monomial;
  mpq_class coefficient;
};

// Multivariate polynomial over the rationals. Terms are kept sorted in
// decreasing lex order with nonzero coefficients, so equality is structural.
class Poly {
 public:
  Poly() = default;
  Poly(long value);  // NOLINT(google-explicit-constructor)
  explicit Poly(const mpq_class& value);
  static Poly variable(SymbolId var, std::uint32_t exponent = 1);
  static Poly from_terms(std::vector<Term> terms);  // merges and sorts

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  mpq_class constant_value() const;  // requires is_constant()
  const Term& leading_term() const { return terms_.front(); }
  std::size_t size() const { return terms_.size(); }

  std::uint32_t degree_in(SymbolId var) const;
  std::uint32_t total_degree() const;
  std::vector<SymbolId> variables() const;
  bool contains(SymbolId var) const;

  // Coefficients with respect to var: result[k] multiplies var^k.
  std::vector<Poly> coefficients_in(SymbolId var) const;
  static Poly from_coefficients(SymbolId var, const std::vector<Poly>& coeffs);

  Poly derivative(SymbolId var) const;
  // Flips the sign of the terms with odd degree in var (var -> -var).
  Poly reflect(SymbolId var) const;
  Poly scaled(const mpq_class& factor) const;
  Poly times_monomial(const Monomial& m, const mpq_class& c) const;
  Poly pow(std::uint32_t exponent) const;

  mpq_class evaluate(const Valuation& values) const;

  // Makes the leading coefficient one; returns the removed factor.
  Poly monic() const;

  std::string to_string() const;
  std::size_t hash() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

 private:
  std::vector<Term> terms_;
};

// Exact division; std::nullopt when b does not divide a.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
// Monic greatest common divisor over Q (gcd(0,0) = 0).
Poly gcd(const Poly& a, const Poly& b);
Poly lcm(const Poly& a, const Poly& b);
// Pseudo-remainder of a by b with respect to var.
Poly pseudo_remainder(const Poly& a, const Poly& b, SymbolId var);
// Exact square root when a is a perfect square in Q[vars].
std::optional<Poly> square_root(const Poly& a);

std::string format_rational(const mpq_class& q);

}  // namespace flatscan::symexpr
