#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "flatscan/symexpr/chart.hpp"
#include "flatscan/symexpr/ratfunc.hpp"
#include "flatscan/symexpr/sample.hpp"

namespace flatscan::symexpr {

enum class ExprKind { Constant, Symbol, Sum, Product, Power, Quotient, Call };

// Immutable expression tree as written by the user. Arithmetic happens on
// RatFunc; the tree is kept for parsing and printing.
class Expr {
 public:
  Expr();  // constant zero
  static Expr constant(const mpq_class& value);
  static Expr symbol(std::string name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, long exponent);
  static Expr quotient(Expr numerator, Expr denominator);
  static Expr call(SymbolKind function, Expr argument);
  // Named call; accepts tan and cot in addition to the primitive functions.
  static Expr call(std::string_view function, Expr argument);

  ExprKind kind() const;
  const mpq_class& value() const;          // Constant
  const std::string& name() const;         // Symbol, or function name for Call
  const std::vector<Expr>& children() const;
  long exponent() const;                   // Power

  std::string to_string() const;
  bool operator==(const Expr& other) const;
  bool operator!=(const Expr& other) const { return !(*this == other); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Parses the infix grammar. With a chart, identifiers must be coordinates
// or parameters of it (UnknownSymbolError otherwise).
Expr parse(std::string_view text, const Chart* chart = nullptr);
Expr parse(std::string_view text, const Chart& chart);

// Parses straight to the canonical rational function.
RatFunc parse_ratfunc(std::string_view text, const Chart* chart = nullptr);
RatFunc parse_ratfunc(std::string_view text, const Chart& chart);

RatFunc to_ratfunc(const Expr& e);
Expr from_ratfunc(const RatFunc& r);

// Canonical form as a tree; idempotent.
Expr normalize(const Expr& e);
Expr differentiate(const Expr& e, std::string_view var);
mpq_class eval_at(const Expr& e, const SamplePoint& p);

// Printed canonical form, re-parseable by parse().
std::string format(const RatFunc& r);

}  // namespace flatscan::symexpr
