#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

#include "flatscan/symexpr/poly.hpp"
#include "flatscan/symexpr/symbol.hpp"

namespace flatscan::symexpr {

class Valuation;

// Canonical quotient of two polynomials over Q.
//
// Invariants (established by every constructor and operation):
//  - the numerator is reduced modulo sin(a)^2 + cos(a)^2 - 1 for every
//    trig pair, i.e. it has degree at most one in each sin symbol;
//  - the denominator contains no sin symbol;
//  - numerator and denominator are coprime and the denominator is monic.
// Under these invariants equal values have identical representations, so
// equality and the zero test are structural.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(long value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  explicit RatFunc(const mpq_class& value) : num_(value), den_(1) {}
  explicit RatFunc(const Poly& polynomial);
  static RatFunc fraction(const Poly& numerator, const Poly& denominator);
  static RatFunc symbol(SymbolId id);
  static RatFunc symbol(std::string_view name);
  static RatFunc function(SymbolKind kind, const RatFunc& argument);

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return den_.is_one() && num_.is_constant(); }
  mpq_class constant_value() const { return num_.constant_value(); }

  // Symbols occurring syntactically (plain and extension).
  std::vector<SymbolId> variables() const;
  // True when the value changes with the plain symbol `var`, directly or
  // through the argument of an extension symbol.
  bool depends_on(SymbolId var) const;
  // Plain symbols the value depends on.
  std::vector<SymbolId> plain_dependencies() const;

  // Exact partial derivative with respect to a plain symbol.
  RatFunc derivative(SymbolId var) const;
  RatFunc pow(int exponent) const;

  mpq_class evaluate(const Valuation& values) const;

  // Sum of total degrees of numerator and denominator (pivot heuristic).
  std::size_t degree() const { return num_.total_degree() + den_.total_degree(); }
  std::size_t term_count() const { return num_.size() + den_.size(); }

  std::string to_string() const;
  std::size_t hash() const { return num_.hash() * 31U + den_.hash(); }

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

 private:
  struct Canonical {};
  RatFunc(Poly num, Poly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

  Poly num_;
  Poly den_;
};

// Rewrites sin(a)^k, k >= 2, through sin(a)^2 = 1 - cos(a)^2.
Poly reduce_trig(const Poly& p);

// d(symbol)/d(var) for a symbol (plain or extension).
RatFunc symbol_derivative(SymbolId symbol, SymbolId var);

}  // namespace flatscan::symexpr
