#include "flatscan/symexpr/ratfunc.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "flatscan/errors.hpp"
#include "flatscan/symexpr/sample.hpp"

namespace flatscan::symexpr {
namespace {

std::vector<SymbolId> sin_symbols(const Poly& p) {
  std::vector<SymbolId> out;
  for (SymbolId v : p.variables()) {
    if (symbol_info(v).kind == SymbolKind::Sin) out.push_back(v);
  }
  return out;
}

// Derivatives of extension symbols are requested repeatedly during bracket
// computations; they are pure functions of (symbol, var) so they are memoized.
struct DerivativeCache {
  std::shared_mutex mutex;
  std::map<std::pair<SymbolId, SymbolId>, RatFunc> entries;
};

DerivativeCache& derivative_cache() {
  static DerivativeCache cache;
  return cache;
}

RatFunc extension_derivative(SymbolId w, SymbolId var) {
  const SymbolInfo& info = symbol_info(w);
  if (!std::binary_search(info.plain_dependencies.begin(), info.plain_dependencies.end(), var)) {
    return RatFunc();
  }
  DerivativeCache& cache = derivative_cache();
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.entries.find({w, var}); it != cache.entries.end()) return it->second;
  }
  const RatFunc darg = info.argument->derivative(var);
  RatFunc out;
  switch (info.kind) {
    case SymbolKind::Sin: out = RatFunc::symbol(info.partner) * darg; break;
    case SymbolKind::Cos: out = -(RatFunc::symbol(info.partner) * darg); break;
    case SymbolKind::Exp: out = RatFunc::symbol(w) * darg; break;
    case SymbolKind::Ln: out = darg / *info.argument; break;
    case SymbolKind::Sqrt: out = darg / (RatFunc(2) * RatFunc::symbol(w)); break;
    case SymbolKind::Plain: break;
  }
  std::unique_lock lock(cache.mutex);
  cache.entries.emplace(std::make_pair(w, var), out);
  return out;
}

// d(p)/d(var) for a polynomial whose symbols may be extension symbols.
RatFunc poly_derivative(const Poly& p, SymbolId var) {
  RatFunc out(reduce_trig(p.derivative(var)));
  for (SymbolId w : p.variables()) {
    if (w == var || !is_extension(w)) continue;
    RatFunc dw = extension_derivative(w, var);
    if (dw.is_zero()) continue;
    out += RatFunc(reduce_trig(p.derivative(w))) * dw;
  }
  return out;
}

}  // namespace

Poly reduce_trig(const Poly& p) {
  Poly out = p;
  for (SymbolId s : sin_symbols(p)) {
    if (out.degree_in(s) < 2) continue;
    const SymbolId c = symbol_info(s).partner;
    const Poly one_minus_c2 = Poly(1) - Poly::variable(c, 2);
    auto coeffs = out.coefficients_in(s);
    std::vector<Poly> reduced(2);
    Poly power(1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (k >= 2 && k % 2 == 0) power = power * one_minus_c2;
      if (coeffs[k].is_zero()) continue;
      reduced[k % 2] += coeffs[k] * power;
    }
    out = Poly::from_coefficients(s, reduced);
  }
  return out;
}

RatFunc::RatFunc(const Poly& polynomial) : num_(reduce_trig(polynomial)), den_(1) {}

RatFunc RatFunc::fraction(const Poly& numerator, const Poly& denominator) {
  if (denominator.is_zero()) {
    throw DivisionByZeroError("denominator normalizes to the zero polynomial");
  }
  Poly num = reduce_trig(numerator);
  Poly den = reduce_trig(denominator);
  if (den.is_zero()) throw DivisionByZeroError("denominator normalizes to the zero polynomial");
  if (num.is_zero()) return RatFunc();
  for (SymbolId s : sin_symbols(den)) {
    if (!den.contains(s)) continue;
    const Poly conj = den.reflect(s);
    num = reduce_trig(num * conj);
    den = reduce_trig(den * conj);
  }
  if (den.is_zero()) throw DivisionByZeroError("denominator normalizes to the zero polynomial");
  if (num.is_zero()) return RatFunc();
  if (den.is_constant()) return RatFunc(num.scaled(1 / den.constant_value()), Poly(1), Canonical{});
  const Poly g = gcd(num, den);
  if (!g.is_one()) {
    num = *divide_exact(num, g);
    den = *divide_exact(den, g);
  }
  const mpq_class lc = den.leading_term().coefficient;
  if (lc != 1) {
    num = num.scaled(1 / lc);
    den = den.scaled(1 / lc);
  }
  return RatFunc(std::move(num), std::move(den), Canonical{});
}

RatFunc RatFunc::symbol(SymbolId id) { return RatFunc(Poly::variable(id), Poly(1), Canonical{}); }

RatFunc RatFunc::symbol(std::string_view name) { return symbol(intern(name)); }

RatFunc RatFunc::function(SymbolKind kind, const RatFunc& argument) {
  if (argument.is_constant()) {
    const mpq_class a = argument.constant_value();
    if (sgn(a) == 0) {
      if (kind == SymbolKind::Sin) return RatFunc();
      if (kind == SymbolKind::Cos || kind == SymbolKind::Exp) return RatFunc(1);
      if (kind == SymbolKind::Sqrt) return RatFunc();
    }
    if (kind == SymbolKind::Ln && a == 1) return RatFunc();
  }
  return symbol(intern_function(kind, argument));
}

std::vector<SymbolId> RatFunc::variables() const {
  auto a = num_.variables();
  auto b = den_.variables();
  std::vector<SymbolId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool RatFunc::depends_on(SymbolId var) const {
  for (SymbolId v : variables()) {
    if (v == var) return true;
    const SymbolInfo& info = symbol_info(v);
    if (info.kind != SymbolKind::Plain &&
        std::binary_search(info.plain_dependencies.begin(), info.plain_dependencies.end(), var)) {
      return true;
    }
  }
  return false;
}

std::vector<SymbolId> RatFunc::plain_dependencies() const {
  std::vector<SymbolId> out;
  for (SymbolId v : variables()) {
    const SymbolInfo& info = symbol_info(v);
    if (info.kind == SymbolKind::Plain) {
      out.push_back(v);
    } else {
      out.insert(out.end(), info.plain_dependencies.begin(), info.plain_dependencies.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RatFunc RatFunc::derivative(SymbolId var) const {
  if (!depends_on(var)) return RatFunc();
  const RatFunc dnum = poly_derivative(num_, var);
  if (den_.is_one()) return dnum;
  const RatFunc dden = poly_derivative(den_, var);
  const RatFunc den(den_);
  const RatFunc num(num_);
  return (dnum * den - num * dden) / (den * den);
}

RatFunc RatFunc::pow(int exponent) const {
  if (exponent == 0) return RatFunc(1);
  if (exponent < 0) {
    if (is_zero()) throw DivisionByZeroError("negative power of zero");
    return RatFunc(1) / pow(-exponent);
  }
  const auto e = static_cast<std::uint32_t>(exponent);
  return fraction(num_.pow(e), den_.pow(e));
}

mpq_class RatFunc::evaluate(const Valuation& values) const {
  const mpq_class d = den_.evaluate(values);
  if (sgn(d) == 0) throw PoleError(den_.to_string());
  if (den_.is_one()) return num_.evaluate(values);
  return num_.evaluate(values) / d;
}

std::string RatFunc::to_string() const {
  if (den_.is_one()) return num_.to_string();
  std::string n = num_.to_string();
  if (num_.size() > 1) n = "(" + n + ")";
  const auto& dt = den_.terms();
  const bool bare_symbol = dt.size() == 1 && dt.front().coefficient == 1 &&
                           dt.front().monomial.factors.size() == 1 &&
                           dt.front().monomial.factors.front().second == 1;
  std::string d = den_.to_string();
  if (!bare_symbol) d = "(" + d + ")";
  return n + "/" + d;
}

RatFunc RatFunc::operator-() const { return RatFunc(num_.scaled(-1), den_, Canonical{}); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ + b.num_, Poly(1), RatFunc::Canonical{});
  if (a.den_ == b.den_) return RatFunc::fraction(a.num_ + b.num_, a.den_);
  if (b.den_.is_one()) return RatFunc::fraction(a.num_ + b.num_ * a.den_, a.den_);
  if (a.den_.is_one()) return RatFunc::fraction(a.num_ * b.den_ + b.num_, b.den_);
  return RatFunc::fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc();
  if (a.is_constant()) {
    return RatFunc(b.num_.scaled(a.num_.constant_value()), b.den_, RatFunc::Canonical{});
  }
  if (b.is_constant()) {
    return RatFunc(a.num_.scaled(b.num_.constant_value()), a.den_, RatFunc::Canonical{});
  }
  if (a.den_.is_one() && b.den_.is_one()) {
    return RatFunc(reduce_trig(a.num_ * b.num_), Poly(1), RatFunc::Canonical{});
  }
  return RatFunc::fraction(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw DivisionByZeroError("division by the zero function");
  if (a.is_zero()) return RatFunc();
  if (b.is_constant()) {
    return RatFunc(a.num_.scaled(1 / b.num_.constant_value()), a.den_, RatFunc::Canonical{});
  }
  return RatFunc::fraction(a.num_ * b.den_, a.den_ * b.num_);
}

RatFunc symbol_derivative(SymbolId symbol, SymbolId var) {
  if (symbol == var) return RatFunc(1);
  if (!is_extension(symbol)) return RatFunc();
  return extension_derivative(symbol, var);
}

}  // namespace flatscan::symexpr
