#include "flatscan/symexpr/poly.hpp"

#include <algorithm>
#include <functional>

#include "flatscan/errors.hpp"
#include "flatscan/symexpr/sample.hpp"

namespace flatscan::symexpr {

// ---------------------------------------------------------------- Monomial

std::uint32_t Monomial::degree_in(SymbolId var) const {
  for (const auto& [v, e] : factors) {
    if (v == var) return e;
    if (v > var) break;
  }
  return 0;
}

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& f : factors) d += f.second;
  return d;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  auto i = a.factors.begin();
  auto j = b.factors.begin();
  while (i != a.factors.end() && j != b.factors.end()) {
    if (i->first < j->first) {
      out.factors.push_back(*i++);
    } else if (j->first < i->first) {
      out.factors.push_back(*j++);
    } else {
      out.factors.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  out.factors.insert(out.factors.end(), i, a.factors.end());
  out.factors.insert(out.factors.end(), j, b.factors.end());
  return out;
}

int compare_lex(const Monomial& a, const Monomial& b) {
  auto i = a.factors.begin();
  auto j = b.factors.begin();
  for (; i != a.factors.end() && j != b.factors.end(); ++i, ++j) {
    if (i->first != j->first) return i->first < j->first ? 1 : -1;
    if (i->second != j->second) return i->second > j->second ? 1 : -1;
  }
  if (i != a.factors.end()) return 1;
  if (j != b.factors.end()) return -1;
  return 0;
}

bool divides(const Monomial& b, const Monomial& a, Monomial* out) {
  Monomial q;
  auto j = a.factors.begin();
  for (const auto& [v, e] : b.factors) {
    while (j != a.factors.end() && j->first < v) q.factors.push_back(*j++);
    if (j == a.factors.end() || j->first != v || j->second < e) return false;
    if (j->second > e) q.factors.emplace_back(v, j->second - e);
    ++j;
  }
  q.factors.insert(q.factors.end(), j, a.factors.end());
  if (out != nullptr) *out = std::move(q);
  return true;
}

// -------------------------------------------------------------------- Poly

namespace {

bool term_greater(const Term& a, const Term& b) { return compare_lex(a.monomial, b.monomial) > 0; }

mpq_class pow_q(const mpq_class& base, std::uint32_t e) {
  mpq_class out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) {
    return std::nullopt;
  }
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return mpq_class(rn, rd);
}

}  // namespace

Poly::Poly(long value) {
  if (value != 0) terms_.push_back(Term{Monomial{}, mpq_class(value)});
}

Poly::Poly(const mpq_class& value) {
  if (sgn(value) != 0) terms_.push_back(Term{Monomial{}, value});
}

Poly Poly::variable(SymbolId var, std::uint32_t exponent) {
  Poly p;
  Monomial m;
  if (exponent > 0) m.factors.emplace_back(var, exponent);
  p.terms_.push_back(Term{std::move(m), mpq_class(1)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  Poly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
      p.terms_.back().coefficient += t.coefficient;
    } else {
      if (!p.terms_.empty() && sgn(p.terms_.back().coefficient) == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && sgn(p.terms_.back().coefficient) == 0) p.terms_.pop_back();
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().monomial.factors.empty());
}

bool Poly::is_one() const {
  return terms_.size() == 1 && terms_.front().monomial.factors.empty() &&
         terms_.front().coefficient == 1;
}

mpq_class Poly::constant_value() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) throw Error("constant_value of a non-constant polynomial");
  return terms_.front().coefficient;
}

std::uint32_t Poly::degree_in(SymbolId var) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.degree_in(var));
  return d;
}

std::uint32_t Poly::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.total_degree());
  return d;
}

std::vector<SymbolId> Poly::variables() const {
  std::vector<SymbolId> vars;
  for (const auto& t : terms_) {
    for (const auto& f : t.monomial.factors) vars.push_back(f.first);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool Poly::contains(SymbolId var) const {
  for (const auto& t : terms_) {
    if (t.monomial.degree_in(var) > 0) return true;
  }
  return false;
}

std::vector<Poly> Poly::coefficients_in(SymbolId var) const {
  std::vector<std::vector<Term>> buckets(degree_in(var) + 1);
  for (const auto& t : terms_) {
    Term stripped{Monomial{}, t.coefficient};
    std::uint32_t d = 0;
    for (const auto& f : t.monomial.factors) {
      if (f.first == var) {
        d = f.second;
      } else {
        stripped.monomial.factors.push_back(f);
      }
    }
    buckets[d].push_back(std::move(stripped));
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Poly Poly::from_coefficients(SymbolId var, const std::vector<Poly>& coeffs) {
  std::vector<Term> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    Monomial vk;
    if (k > 0) vk.factors.emplace_back(var, static_cast<std::uint32_t>(k));
    for (const auto& t : coeffs[k].terms_) terms.push_back(Term{t.monomial * vk, t.coefficient});
  }
  return from_terms(std::move(terms));
}

Poly Poly::derivative(SymbolId var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const std::uint32_t e = t.monomial.degree_in(var);
    if (e == 0) continue;
    Term d{t.monomial, t.coefficient * e};
    for (auto it = d.monomial.factors.begin(); it != d.monomial.factors.end(); ++it) {
      if (it->first == var) {
        if (--it->second == 0) d.monomial.factors.erase(it);
        break;
      }
    }
    out.push_back(std::move(d));
  }
  return from_terms(std::move(out));
}

Poly Poly::reflect(SymbolId var) const {
  Poly p = *this;
  for (auto& t : p.terms_) {
    if (t.monomial.degree_in(var) % 2 == 1) t.coefficient = -t.coefficient;
  }
  return p;
}

Poly Poly::scaled(const mpq_class& factor) const {
  if (sgn(factor) == 0) return Poly();
  Poly p = *this;
  for (auto& t : p.terms_) t.coefficient *= factor;
  return p;
}

Poly Poly::times_monomial(const Monomial& m, const mpq_class& c) const {
  Poly p;
  if (sgn(c) == 0) return p;
  p.terms_.reserve(terms_.size());
  // Multiplying by a monomial preserves the lex order of the terms.
  for (const auto& t : terms_) p.terms_.push_back(Term{t.monomial * m, t.coefficient * c});
  return p;
}

Poly Poly::pow(std::uint32_t exponent) const {
  Poly result(1);
  Poly base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

mpq_class Poly::evaluate(const Valuation& values) const {
  mpq_class sum = 0;
  mpq_class term;
  for (const auto& t : terms_) {
    term = t.coefficient;
    for (const auto& [v, e] : t.monomial.factors) {
      const mpq_class& x = values.value(v);
      if (e == 1) {
        term *= x;
      } else {
        term *= pow_q(x, e);
      }
    }
    sum += term;
  }
  return sum;
}

Poly Poly::monic() const {
  if (terms_.empty()) return *this;
  const mpq_class& lc = terms_.front().coefficient;
  if (lc == 1) return *this;
  return scaled(1 / lc);
}

std::string format_rational(const mpq_class& q) { return q.get_str(); }

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    mpq_class c = t.coefficient;
    const bool negative = sgn(c) < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const bool unit = (c == 1);
    if (!unit || t.monomial.factors.empty()) {
      out += format_rational(c);
      if (!t.monomial.factors.empty()) out += "*";
    }
    bool first_factor = true;
    for (const auto& [v, e] : t.monomial.factors) {
      if (!first_factor) out += "*";
      first_factor = false;
      out += symbol_name(v);
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

std::size_t Poly::hash() const {
  std::size_t h = terms_.size();
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& t : terms_) {
    for (const auto& [v, e] : t.monomial.factors) {
      mix(v);
      mix(e);
    }
    mix(std::hash<std::string>{}(t.coefficient.get_str()));
  }
  return h;
}

Poly Poly::operator-() const { return scaled(-1); }

Poly operator+(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Poly out;
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  while (i != a.terms_.end() && j != b.terms_.end()) {
    const int c = compare_lex(i->monomial, j->monomial);
    if (c > 0) {
      out.terms_.push_back(*i++);
    } else if (c < 0) {
      out.terms_.push_back(*j++);
    } else {
      mpq_class s = i->coefficient + j->coefficient;
      if (sgn(s) != 0) out.terms_.push_back(Term{i->monomial, std::move(s)});
      ++i;
      ++j;
    }
  }
  out.terms_.insert(out.terms_.end(), i, a.terms_.end());
  out.terms_.insert(out.terms_.end(), j, b.terms_.end());
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (a.is_constant()) return b.scaled(a.terms_.front().coefficient);
  if (b.is_constant()) return a.scaled(b.terms_.front().coefficient);
  if (a.terms_.size() == 1) return b.times_monomial(a.terms_.front().monomial, a.terms_.front().coefficient);
  if (b.terms_.size() == 1) return a.times_monomial(b.terms_.front().monomial, b.terms_.front().coefficient);
  // Sum of shifted copies, combined pairwise to keep merges balanced.
  std::vector<Poly> parts;
  const Poly& small = a.terms_.size() <= b.terms_.size() ? a : b;
  const Poly& large = a.terms_.size() <= b.terms_.size() ? b : a;
  parts.reserve(small.terms_.size());
  for (const auto& t : small.terms_) parts.push_back(large.times_monomial(t.monomial, t.coefficient));
  while (parts.size() > 1) {
    std::vector<Poly> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t k = 0; k + 1 < parts.size(); k += 2) next.push_back(parts[k] + parts[k + 1]);
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (terms_[k].coefficient != o.terms_[k].coefficient) return false;
    if (!(terms_[k].monomial == o.terms_[k].monomial)) return false;
  }
  return true;
}

// ----------------------------------------------------------------- Division

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZeroError("polynomial division by zero");
  if (a.is_zero()) return Poly();
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  for (SymbolId v : b.variables()) {
    if (b.degree_in(v) > a.degree_in(v)) return std::nullopt;
  }
  if (b.size() == 1) {
    const Term& lt = b.leading_term();
    std::vector<Term> q;
    q.reserve(a.size());
    for (const auto& t : a.terms()) {
      Monomial m;
      if (!divides(lt.monomial, t.monomial, &m)) return std::nullopt;
      q.push_back(Term{std::move(m), t.coefficient / lt.coefficient});
    }
    return Poly::from_terms(std::move(q));
  }
  std::vector<Term> quotient;
  Poly r = a;
  const Term& lb = b.leading_term();
  while (!r.is_zero()) {
    const Term& lr = r.leading_term();
    Monomial m;
    if (!divides(lb.monomial, lr.monomial, &m)) return std::nullopt;
    mpq_class c = lr.coefficient / lb.coefficient;
    r -= b.times_monomial(m, c);
    quotient.push_back(Term{std::move(m), std::move(c)});
  }
  return Poly::from_terms(std::move(quotient));
}

Poly pseudo_remainder(const Poly& a, const Poly& b, SymbolId var) {
  const std::uint32_t db = b.degree_in(var);
  const Poly lcb = b.coefficients_in(var).back();
  Poly r = a;
  while (!r.is_zero()) {
    const std::uint32_t dr = r.degree_in(var);
    if (dr < db) break;
    const Poly lcr = r.coefficients_in(var).back();
    r = lcb * r - lcr * Poly::variable(var, dr - db) * b;
  }
  return r;
}

namespace {

Poly content_in(const Poly& p, SymbolId var);

Poly primitive_part(const Poly& p, SymbolId var) {
  const Poly c = content_in(p, var);
  if (c.is_constant()) return p.monic();
  auto q = divide_exact(p, c);
  if (!q) throw InternalDiagnostic("content does not divide polynomial");
  return q->monic();
}

Poly monomial_gcd(const Poly& mono, const Poly& p) {
  // Largest power product dividing the monomial and every term of p.
  Monomial g = mono.leading_term().monomial;
  for (const auto& t : p.terms()) {
    Monomial next;
    for (const auto& [v, e] : g.factors) {
      const std::uint32_t d = t.monomial.degree_in(v);
      if (d > 0) next.factors.emplace_back(v, std::min(d, e));
    }
    g = std::move(next);
    if (g.factors.empty()) break;
  }
  return Poly::from_terms({Term{g, mpq_class(1)}});
}

}  // namespace

namespace {

// Heuristic gcd over Z: evaluate the main variable at a large integer,
// recurse, and rebuild from the xi-adic expansion. Every candidate is checked
// by exact division, so a result is always correct; std::nullopt means the
// evaluation points were unlucky and the caller should fall back.
struct HeuResult {
  Poly h, cff, cfg;
};

mpz_class integer_of(const mpq_class& q) { return q.get_num(); }

// Scales p to integer coefficients with content one; returns the multiplier.
Poly integer_primitive(const Poly& p) {
  mpz_class den = 1, num = 0;
  for (const auto& t : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coefficient.get_den_mpz_t());
  }
  for (const auto& t : p.terms()) {
    mpz_class c = integer_of(t.coefficient * den);
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_mpz_t());
  }
  if (num == 0) return p;
  return p.scaled(mpq_class(den, num));
}

mpz_class ground_content(const Poly& p) {
  mpz_class g = 0;
  for (const auto& t : p.terms()) {
    mpz_class c = integer_of(t.coefficient);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  return g;
}

mpz_class max_norm(const Poly& p) {
  mpz_class m = 0;
  for (const auto& t : p.terms()) {
    mpz_class c = abs(integer_of(t.coefficient));
    if (c > m) m = c;
  }
  return m;
}

Poly substitute(const Poly& p, SymbolId var, const mpz_class& x) {
  std::vector<Term> out;
  out.reserve(p.size());
  mpz_class power;
  for (const auto& t : p.terms()) {
    Monomial m;
    std::uint32_t e = 0;
    for (const auto& f : t.monomial.factors) {
      if (f.first == var) e = f.second;
      else m.factors.push_back(f);
    }
    mpz_pow_ui(power.get_mpz_t(), x.get_mpz_t(), e);
    out.push_back(Term{std::move(m), t.coefficient * mpq_class(power)});
  }
  return Poly::from_terms(std::move(out));
}

Poly interpolate(Poly h, SymbolId var, const mpz_class& x) {
  const mpz_class half = x / 2;
  std::vector<Poly> coeffs;
  while (!h.is_zero()) {
    std::vector<Term> g;
    for (const auto& t : h.terms()) {
      mpz_class c = integer_of(t.coefficient) % x;
      if (c < 0) c += x;
      if (c > half) c -= x;
      if (c != 0) g.push_back(Term{t.monomial, mpq_class(c)});
    }
    Poly gp = Poly::from_terms(std::move(g));
    h = (h - gp).scaled(mpq_class(1) / mpq_class(x));
    coeffs.push_back(std::move(gp));
  }
  Poly r = Poly::from_coefficients(var, coeffs);
  if (!r.is_zero() && r.leading_term().coefficient < 0) r = -r;
  return r;
}

bool is_integral(const Poly& p) {
  for (const auto& t : p.terms()) {
    if (t.coefficient.get_den() != 1) return false;
  }
  return true;
}

// Exact division over Z.
std::optional<Poly> divide_integral(const Poly& a, const Poly& b) {
  auto q = divide_exact(a, b);
  if (q && !is_integral(*q)) return std::nullopt;
  return q;
}

std::optional<HeuResult> heu_gcd(const Poly& f, const Poly& g,
                                 const std::vector<SymbolId>& vars,
                                 std::size_t level) {
  if (f.is_zero() && g.is_zero()) return HeuResult{Poly(), Poly(), Poly()};
  if (f.is_zero()) {
    const long s = g.leading_term().coefficient < 0 ? -1 : 1;
    return HeuResult{g.scaled(s), Poly(), Poly(s)};
  }
  if (g.is_zero()) {
    const long s = f.leading_term().coefficient < 0 ? -1 : 1;
    return HeuResult{f.scaled(s), Poly(s), Poly()};
  }
  if (level == vars.size()) {
    mpz_class a = integer_of(f.constant_value()), b = integer_of(g.constant_value());
    mpz_class h;
    mpz_gcd(h.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return HeuResult{Poly(mpq_class(h)), Poly(mpq_class(a / h)), Poly(mpq_class(b / h))};
  }
  const SymbolId var = vars[level];
  if (!f.contains(var) && !g.contains(var)) return heu_gcd(f, g, vars, level + 1);

  const mpz_class cf = ground_content(f), cg = ground_content(g);
  mpz_class common;
  mpz_gcd(common.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
  const Poly F = f.scaled(mpq_class(1) / mpq_class(common));
  const Poly G = g.scaled(mpq_class(1) / mpq_class(common));

  const mpz_class fn = max_norm(F), gn = max_norm(G);
  const mpz_class B = 2 * std::min(fn, gn) + 29;
  mpz_class x = std::min(B, mpz_class(99 * sqrt(B)));
  const mpz_class lf = abs(integer_of(F.leading_term().coefficient));
  const mpz_class lg = abs(integer_of(G.leading_term().coefficient));
  x = std::max(x, mpz_class(2 * std::min(mpz_class(fn / lf), mpz_class(gn / lg)) + 4));

  auto accept = [&](const Poly& h, const Poly& cff, const Poly& cfg) {
    return HeuResult{h.scaled(mpq_class(common)), cff, cfg};
  };
  auto normalize = [](Poly h) {
    const mpz_class c = ground_content(h);
    if (c != 0) h = h.scaled(mpq_class(1) / mpq_class(c));
    return h;
  };

  for (int attempt = 0; attempt < 6; ++attempt) {
    const Poly ff = substitute(F, var, x);
    const Poly gg = substitute(G, var, x);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto sub = heu_gcd(ff, gg, vars, level + 1);
      if (!sub) return std::nullopt;
      Poly h = normalize(interpolate(sub->h, var, x));
      if (!h.is_zero()) {
        if (auto qf = divide_integral(F, h)) {
          if (auto qg = divide_integral(G, h)) return accept(h, *qf, *qg);
        }
      }
      const Poly cff = interpolate(sub->cff, var, x);
      if (!cff.is_zero()) {
        if (auto hh = divide_integral(F, cff)) {
          if (auto qg = divide_integral(G, *hh)) return accept(*hh, cff, *qg);
        }
      }
      const Poly cfg = interpolate(sub->cfg, var, x);
      if (!cfg.is_zero()) {
        if (auto hh = divide_integral(G, cfg)) {
          if (auto qf = divide_integral(F, *hh)) return accept(*hh, *qf, cfg);
        }
      }
    }
    mpz_class r = sqrt(sqrt(x));
    x = 73794 * x * r / 27011;
  }
  return std::nullopt;
}

std::optional<Poly> heuristic_gcd(const Poly& a, const Poly& b) {
  auto vars = a.variables();
  for (SymbolId v : b.variables()) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  auto r = heu_gcd(integer_primitive(a), integer_primitive(b), vars, 0);
  if (!r) return std::nullopt;
  return r->h.monic();
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a.size() == 1) return monomial_gcd(a, b);
  if (b.size() == 1) return monomial_gcd(b, a);
  if (a == b) return a.monic();

  const auto va = a.variables();
  const auto vb = b.variables();
  for (SymbolId v : va) {
    if (!std::binary_search(vb.begin(), vb.end(), v)) return gcd(content_in(a, v), b);
  }
  for (SymbolId v : vb) {
    if (!std::binary_search(va.begin(), va.end(), v)) return gcd(a, content_in(b, v));
  }

  if (auto h = heuristic_gcd(a, b)) return *h;

  SymbolId main = va.front();
  std::uint32_t best = ~0U;
  for (SymbolId v : va) {
    const std::uint32_t d = std::max(a.degree_in(v), b.degree_in(v));
    if (d < best) {
      best = d;
      main = v;
    }
  }

  const Poly ca = content_in(a, main);
  const Poly cb = content_in(b, main);
  const Poly g_content = gcd(ca, cb);
  Poly p = primitive_part(a, main);
  Poly q = primitive_part(b, main);
  if (p.degree_in(main) < q.degree_in(main)) std::swap(p, q);
  while (true) {
    Poly r = pseudo_remainder(p, q, main);
    if (r.is_zero()) break;
    if (r.degree_in(main) == 0) {
      q = Poly(1);
      break;
    }
    p = std::move(q);
    q = primitive_part(r, main);
  }
  return (g_content * primitive_part(q, main)).monic();
}

namespace {

Poly content_in(const Poly& p, SymbolId var) {
  auto coeffs = p.coefficients_in(var);
  std::sort(coeffs.begin(), coeffs.end(),
            [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
  Poly g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

}  // namespace

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  const Poly g = gcd(a, b);
  auto q = divide_exact(a, g);
  return (*q * b).monic();
}

std::optional<Poly> square_root(const Poly& a) {
  if (a.is_zero()) return Poly();
  const Term& lt = a.leading_term();
  auto c = rational_sqrt(lt.coefficient);
  if (!c) return std::nullopt;
  Monomial m;
  for (const auto& [v, e] : lt.monomial.factors) {
    if (e % 2 != 0) return std::nullopt;
    m.factors.emplace_back(v, e / 2);
  }
  Poly root = Poly::from_terms({Term{m, *c}});
  const Term lead = root.leading_term();
  const std::size_t cap = 4 * a.size() + 8;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    const Poly rest = a - root * root;
    if (rest.is_zero()) return root;
    const Term& lr = rest.leading_term();
    Monomial q;
    if (!divides(lead.monomial, lr.monomial, &q)) return std::nullopt;
    Term next{q, lr.coefficient / (2 * lead.coefficient)};
    if (compare_lex(next.monomial, lead.monomial) >= 0) return std::nullopt;
    root += Poly::from_terms({next});
  }
  return std::nullopt;
}

}  // namespace flatscan::symexpr
