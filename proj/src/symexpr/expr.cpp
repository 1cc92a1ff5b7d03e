#include "flatscan/symexpr/expr.hpp"

#include <cctype>
#include <cstdlib>

#include "flatscan/errors.hpp"

namespace flatscan::symexpr {

struct Expr::Node {
  ExprKind kind = ExprKind::Constant;
  mpq_class value;
  std::string name;
  std::vector<Expr> children;
  long exponent = 0;
};

namespace {

const std::vector<Expr> kNoChildren;

enum Prec { kSum = 1, kMul = 2, kUnary = 3, kPow = 4, kAtom = 5 };

bool is_negative_constant(const Expr& e) {
  return e.kind() == ExprKind::Constant && sgn(e.value()) < 0;
}

bool has_leading_minus(const Expr& e) {
  if (is_negative_constant(e)) return true;
  return e.kind() == ExprKind::Product && !e.children().empty() &&
         is_negative_constant(e.children().front());
}

Expr negated(const Expr& e) {
  if (e.kind() == ExprKind::Constant) return Expr::constant(-e.value());
  auto factors = e.children();
  mpq_class c = -factors.front().value();
  if (c == 1 && factors.size() > 1) {
    factors.erase(factors.begin());
  } else {
    factors.front() = Expr::constant(c);
  }
  return factors.size() == 1 ? factors.front() : Expr::product(std::move(factors));
}

int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant:
      if (sgn(e.value()) < 0) return kUnary;
      return e.value().get_den() == 1 ? kAtom : kMul;
    case ExprKind::Symbol:
    case ExprKind::Call:
      return kAtom;
    case ExprKind::Sum:
      return kSum;
    case ExprKind::Product:
      return has_leading_minus(e) ? kUnary : kMul;
    case ExprKind::Quotient:
      return kMul;
    case ExprKind::Power:
      return kPow;
  }
  return kAtom;
}

std::string print(const Expr& e, int min_prec);

std::string wrap(const Expr& e, int min_prec) {
  std::string s = print(e, 0);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string print(const Expr& e, int /*min_prec*/) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e.value().get_str();
    case ExprKind::Symbol:
      return e.name();
    case ExprKind::Call:
      return e.name() + "(" + print(e.children().front(), 0) + ")";
    case ExprKind::Sum: {
      std::string out;
      bool first = true;
      for (const auto& c : e.children()) {
        if (first) {
          out += wrap(c, kSum);
        } else if (has_leading_minus(c)) {
          out += " - " + wrap(negated(c), kMul);
        } else {
          out += " + " + wrap(c, kMul);
        }
        first = false;
      }
      return out;
    }
    case ExprKind::Product: {
      const auto& f = e.children();
      std::size_t start = 0;
      std::string out;
      if (!f.empty() && f.front().kind() == ExprKind::Constant && f.front().value() == -1 &&
          f.size() > 1) {
        out = "-";
        start = 1;
        // unary minus binds looser than ^, so the first factor may stay bare
        out += wrap(f[1], f.size() == 2 ? kUnary : kMul);
        start = 2;
      }
      for (std::size_t i = start; i < f.size(); ++i) {
        if (!out.empty() && out != "-") out += "*";
        out += wrap(f[i], i == 0 ? kMul : kUnary);
      }
      return out;
    }
    case ExprKind::Quotient:
      return wrap(e.children()[0], kMul) + "/" + wrap(e.children()[1], kUnary);
    case ExprKind::Power: {
      std::string exp = std::to_string(e.exponent());
      return wrap(e.children().front(), kPow) + "^" + exp;
    }
  }
  return {};
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::string_view text, const Chart* chart) : text_(text), chart_(chart) {}

  Expr run() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_sum();
    skip_space();
    if (pos_ < text_.size()) {
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    std::vector<Expr> terms{parse_product()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(parse_product());
      } else if (accept('-')) {
        Expr t = parse_product();
        terms.push_back(Expr::product({Expr::constant(-1), t}));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms.front() : Expr::sum(std::move(terms));
  }

  Expr parse_product() {
    Expr acc = parse_unary();
    std::vector<Expr> factors{acc};
    for (;;) {
      if (accept('*')) {
        factors.push_back(parse_unary());
      } else if (accept('/')) {
        Expr lhs = factors.size() == 1 ? factors.front() : Expr::product(factors);
        factors = {Expr::quotient(lhs, parse_unary())};
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors.front() : Expr::product(std::move(factors));
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::product({Expr::constant(-1), parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    while (accept('^')) {
      skip_space();
      const std::size_t at = pos_;
      bool negative = false;
      if (accept('-')) {
        negative = true;
      } else {
        accept('+');
      }
      Expr ex = parse_primary();
      RatFunc r = to_ratfunc(ex);
      if (!r.is_constant() || r.constant_value().get_den() != 1 ||
          !r.constant_value().get_num().fits_slong_p()) {
        throw ParseError("exponent must be an integer constant", at);
      }
      long k = r.constant_value().get_num().get_si();
      base = Expr::power(base, negative ? -k : k);
    }
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string id(text_.substr(start, pos_ - start));
      if (is_reserved_name(id)) {
        if (!accept('(')) throw ParseError("expected '(' after " + id, pos_);
        Expr arg = parse_sum();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return Expr::call(id, arg);
      }
      if (chart_ != nullptr && !chart_->contains(id)) throw UnknownSymbolError(id);
      return Expr::symbol(id);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    std::string digits;
    std::size_t frac_digits = 0;
    bool seen_dot = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
        digits += c;
        if (seen_dot) ++frac_digits;
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) throw ParseError("malformed number", start);
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
    mpq_class q(num, den);
    q.canonicalize();
    return Expr::constant(q);
  }

  std::string_view text_;
  const Chart* chart_;
  std::size_t pos_ = 0;
};

Expr term_expr(const Term& t) {
  std::vector<Expr> factors;
  if (t.coefficient != 1 || t.monomial.factors.empty()) factors.push_back(Expr::constant(t.coefficient));
  for (const auto& [v, e] : t.monomial.factors) {
    const SymbolInfo& info = symbol_info(v);
    Expr base = info.kind == SymbolKind::Plain
                    ? Expr::symbol(info.name)
                    : Expr::call(info.kind, from_ratfunc(*info.argument));
    factors.push_back(e > 1 ? Expr::power(base, e) : base);
  }
  return factors.size() == 1 ? factors.front() : Expr::product(std::move(factors));
}

Expr poly_expr(const Poly& p) {
  if (p.is_zero()) return Expr::constant(0);
  std::vector<Expr> terms;
  for (const auto& t : p.terms()) terms.push_back(term_expr(t));
  return terms.size() == 1 ? terms.front() : Expr::sum(std::move(terms));
}

}  // namespace

Expr::Expr() : node_(std::make_shared<const Node>()) {}

Expr Expr::constant(const mpq_class& value) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Constant;
  n->value = value;
  return Expr(n);
}

Expr Expr::symbol(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Symbol;
  n->name = std::move(name);
  return Expr(n);
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return constant(0);
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Sum;
  n->children = std::move(terms);
  return Expr(n);
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return constant(1);
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Product;
  n->children = std::move(factors);
  return Expr(n);
}

Expr Expr::power(Expr base, long exponent) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Power;
  n->children = {std::move(base)};
  n->exponent = exponent;
  return Expr(n);
}

Expr Expr::quotient(Expr numerator, Expr denominator) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Quotient;
  n->children = {std::move(numerator), std::move(denominator)};
  return Expr(n);
}

Expr Expr::call(SymbolKind function, Expr argument) {
  return call(std::string_view(function_name(function)), std::move(argument));
}

Expr Expr::call(std::string_view function, Expr argument) {
  if (!is_reserved_name(function)) throw ValidationError("unknown function '" + std::string(function) + "'");
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Call;
  n->name = std::string(function);
  n->children = {std::move(argument)};
  return Expr(n);
}

ExprKind Expr::kind() const { return node_->kind; }
const mpq_class& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
long Expr::exponent() const { return node_->exponent; }

std::string Expr::to_string() const { return print(*this, 0); }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.kind == b.kind && a.value == b.value && a.name == b.name && a.exponent == b.exponent &&
         a.children == b.children;
}

Expr parse(std::string_view text, const Chart* chart) { return Parser(text, chart).run(); }
Expr parse(std::string_view text, const Chart& chart) { return parse(text, &chart); }

RatFunc parse_ratfunc(std::string_view text, const Chart* chart) {
  return to_ratfunc(parse(text, chart));
}
RatFunc parse_ratfunc(std::string_view text, const Chart& chart) {
  return parse_ratfunc(text, &chart);
}

RatFunc to_ratfunc(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return RatFunc(e.value());
    case ExprKind::Symbol:
      return RatFunc::symbol(e.name());
    case ExprKind::Sum: {
      RatFunc acc;
      for (const auto& c : e.children()) acc += to_ratfunc(c);
      return acc;
    }
    case ExprKind::Product: {
      RatFunc acc(1);
      for (const auto& c : e.children()) acc *= to_ratfunc(c);
      return acc;
    }
    case ExprKind::Quotient: {
      RatFunc den = to_ratfunc(e.children()[1]);
      if (den.is_zero()) throw DivisionByZeroError("division by zero in '" + e.to_string() + "'");
      return to_ratfunc(e.children()[0]) / den;
    }
    case ExprKind::Power: {
      RatFunc base = to_ratfunc(e.children().front());
      if (e.exponent() < 0 && base.is_zero()) {
        throw DivisionByZeroError("zero raised to a negative power");
      }
      return base.pow(static_cast<int>(e.exponent()));
    }
    case ExprKind::Call: {
      RatFunc arg = to_ratfunc(e.children().front());
      const std::string& f = e.name();
      if (f == "sin") return RatFunc::function(SymbolKind::Sin, arg);
      if (f == "cos") return RatFunc::function(SymbolKind::Cos, arg);
      if (f == "exp") return RatFunc::function(SymbolKind::Exp, arg);
      if (f == "ln") return RatFunc::function(SymbolKind::Ln, arg);
      if (f == "sqrt") return RatFunc::function(SymbolKind::Sqrt, arg);
      RatFunc s = RatFunc::function(SymbolKind::Sin, arg);
      RatFunc c = RatFunc::function(SymbolKind::Cos, arg);
      if (f == "tan") {
        if (c.is_zero()) throw DivisionByZeroError("tan of a pole");
        return s / c;
      }
      if (s.is_zero()) throw DivisionByZeroError("cot of a pole");
      return c / s;
    }
  }
  return RatFunc();
}

Expr from_ratfunc(const RatFunc& r) {
  Expr n = poly_expr(r.numerator());
  if (r.denominator().is_one()) return n;
  return Expr::quotient(n, poly_expr(r.denominator()));
}

Expr normalize(const Expr& e) { return from_ratfunc(to_ratfunc(e)); }

Expr differentiate(const Expr& e, std::string_view var) {
  return from_ratfunc(to_ratfunc(e).derivative(intern(var)));
}

mpq_class eval_at(const Expr& e, const SamplePoint& p) { return eval_at(to_ratfunc(e), p); }

std::string format(const RatFunc& r) { return r.to_string(); }

}  // namespace flatscan::symexpr
