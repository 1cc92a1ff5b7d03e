#include "flatscan/diffgeo/integrals.hpp"

#include <algorithm>
#include <numeric>

#include "flatscan/errors.hpp"

namespace flatscan::diffgeo {

using symexpr::Monomial;
using symexpr::Poly;
using symexpr::SymbolId;
using symexpr::SymbolKind;

namespace {

bool symbol_depends_on(SymbolId s, SymbolId var) {
  if (s == var) return true;
  const auto& info = symexpr::symbol_info(s);
  return info.kind != SymbolKind::Plain &&
         std::binary_search(info.plain_dependencies.begin(), info.plain_dependencies.end(), var);
}

RatFunc cos_power_integral(int k, const RatFunc& x, const RatFunc& s, const RatFunc& c) {
  if (k == 0) return x;
  if (k == 1) return s;
  return c.pow(k - 1) * s * RatFunc(mpq_class(1, k)) +
         RatFunc(mpq_class(k - 1, k)) * cos_power_integral(k - 2, x, s, c);
}

}  // namespace

std::optional<RatFunc> antiderivative(const RatFunc& r, SymbolId var) {
  const RatFunc x = RatFunc::symbol(var);
  if (r.is_zero()) return RatFunc();
  if (!r.depends_on(var)) return r * x;
  const SymbolId s_id = symexpr::intern_function(SymbolKind::Sin, x);
  const SymbolId c_id = symexpr::intern_function(SymbolKind::Cos, x);
  const SymbolId e_id = symexpr::intern_function(SymbolKind::Exp, x);
  const RatFunc s = RatFunc::symbol(s_id);
  const RatFunc c = RatFunc::symbol(c_id);
  const RatFunc e = RatFunc::symbol(e_id);

  // denominator = c^m * D0 with D0 free of var
  const Poly& den = r.denominator();
  const std::uint32_t m = den.degree_in(c_id);
  auto d0 = symexpr::divide_exact(den, Poly::variable(c_id, m));
  if (!d0) return std::nullopt;
  for (SymbolId v : d0->variables()) {
    if (symbol_depends_on(v, var)) return std::nullopt;
  }
  const RatFunc inv_d0 = RatFunc(1) / RatFunc(*d0);

  RatFunc out;
  for (const auto& t : r.numerator().terms()) {
    int p = 0, a = 0, j = -static_cast<int>(m), ee = 0;
    Monomial rest;
    for (const auto& [v, k] : t.monomial.factors) {
      if (v == var) {
        p = static_cast<int>(k);
      } else if (v == s_id) {
        a = static_cast<int>(k);
      } else if (v == c_id) {
        j += static_cast<int>(k);
      } else if (v == e_id) {
        ee = static_cast<int>(k);
      } else if (symbol_depends_on(v, var)) {
        return std::nullopt;
      } else {
        rest.factors.emplace_back(v, k);
      }
    }
    RatFunc f;
    if (a == 0 && j == 0 && ee == 0) {
      f = x.pow(p + 1) * RatFunc(mpq_class(1, p + 1));
    } else if (p == 0 && ee == 0 && a == 1 && j != -1) {
      f = -c.pow(j + 1) * RatFunc(mpq_class(1, j + 1));
    } else if (p == 0 && ee == 0 && a == 0 && j >= 0) {
      f = cos_power_integral(j, x, s, c);
    } else if (p == 0 && ee == 0 && a == 0 && j == -2) {
      f = s / c;
    } else if (p == 0 && a == 0 && j == 0 && ee > 0) {
      f = e.pow(ee) * RatFunc(mpq_class(1, ee));
    } else {
      return std::nullopt;
    }
    Poly coeff = Poly::from_terms({symexpr::Term{rest, t.coefficient}});
    out += RatFunc(coeff) * f;
  }
  return out * inv_d0;
}

namespace {

// Integrates w over the coordinates in `free_idx`, ignoring the others.
std::optional<RatFunc> integrate_form(const Row& w, const Chart& chart,
                                      const std::vector<std::size_t>& free_idx) {
  const auto& ids = chart.coordinate_ids();
  // closedness on the free block
  for (std::size_t a = 0; a < free_idx.size(); ++a) {
    for (std::size_t b = a + 1; b < free_idx.size(); ++b) {
      const std::size_t i = free_idx[a], k = free_idx[b];
      if (w[i].derivative(ids[k]) != w[k].derivative(ids[i])) return std::nullopt;
    }
  }
  RatFunc h;
  std::vector<SymbolId> done;
  for (std::size_t i : free_idx) {
    RatFunc rem = w[i] - h.derivative(ids[i]);
    for (SymbolId v : done) {
      if (rem.depends_on(v)) return std::nullopt;
    }
    auto part = antiderivative(rem, ids[i]);
    if (!part) return std::nullopt;
    h += *part;
    done.push_back(ids[i]);
  }
  for (std::size_t i : free_idx) {
    if (h.derivative(ids[i]) != w[i]) return std::nullopt;
  }
  if (h.is_constant()) return std::nullopt;
  return h;
}

}  // namespace

FirstIntegrals first_integrals(const Codistribution& q, const RankOracle& oracle) {
  if (!is_integrable(q, oracle)) throw NotIntegrableError("codistribution is not integrable");
  const Chart& chart = q.chart();
  const std::size_t n = chart.dim();
  FirstIntegrals out;
  std::vector<CovectorField> found_forms;
  std::vector<bool> frozen(n, false);

  auto try_accept = [&](const RatFunc& h) {
    CovectorField dh = CovectorField::differential(chart, h);
    if (dh.is_zero() || !contains(q, dh, oracle)) return false;
    auto forms = found_forms;
    forms.push_back(dh);
    if (generic_rank(forms, oracle) != forms.size()) return false;
    found_forms.push_back(dh);
    out.functions.push_back(h);
    return true;
  };

  std::vector<std::size_t> forward(n);
  std::iota(forward.begin(), forward.end(), 0);
  std::vector<std::size_t> reverse(forward.rbegin(), forward.rend());
  const auto rows = rows_of(q.basis());

  bool progress = true;
  while (progress && out.functions.size() < q.rank()) {
    progress = false;
    for (std::size_t i = 0; i < n && out.functions.size() < q.rank(); ++i) {
      if (frozen[i]) continue;
      if (try_accept(RatFunc::symbol(chart.coordinate_ids()[i]))) {
        frozen[i] = true;
        progress = true;
      }
    }
    if (out.functions.size() == q.rank()) break;
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (!frozen[i]) free_idx.push_back(i);
    }
    for (const auto* order : {&forward, &reverse}) {
      if (progress) break;
      const Echelon e = eliminate(rows, n, true, *order);
      for (const Row& w : e.rows) {
        if (progress) break;
        std::vector<std::size_t> norms;
        for (auto it = free_idx.rbegin(); it != free_idx.rend(); ++it) {
          if (!w[*it].is_zero()) norms.push_back(*it);
        }
        for (std::size_t j : norms) {
          Row scaled(n);
          for (std::size_t k = 0; k < n; ++k) scaled[k] = w[k] / w[j];
          auto h = integrate_form(scaled, chart, free_idx);
          if (h && try_accept(*h)) {
            progress = true;
            break;
          }
        }
      }
    }
  }
  out.shortfall = q.rank() - out.functions.size();
  return out;
}

}  // namespace flatscan::diffgeo
