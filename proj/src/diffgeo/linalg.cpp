#include "flatscan/diffgeo/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace flatscan::diffgeo {

using symexpr::Poly;

bool is_zero_row(const Row& r) {
  return std::all_of(r.begin(), r.end(), [](const RatFunc& e) { return e.is_zero(); });
}

Row primitive(const Row& r) {
  if (is_zero_row(r)) return r;
  Poly den(1);
  for (const auto& e : r) {
    if (!e.is_zero() && !e.denominator().is_one()) den = symexpr::lcm(den, e.denominator());
  }
  Row out(r.size());
  const RatFunc scale = RatFunc(den);
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i].is_zero() ? r[i] : r[i] * scale;
  Poly g;
  for (const auto& e : out) {
    if (e.is_zero()) continue;
    g = g.is_zero() ? e.numerator() : symexpr::gcd(g, e.numerator());
    if (g.is_one()) break;
  }
  mpq_class lead;
  for (const auto& e : out) {
    if (!e.is_zero()) {
      lead = e.numerator().leading_term().coefficient;
      break;
    }
  }
  RatFunc divisor = RatFunc(g.scaled(lead / g.leading_term().coefficient));
  if (divisor == RatFunc(1)) return out;
  for (auto& e : out) {
    if (!e.is_zero()) e = e / divisor;
  }
  return out;
}

Echelon eliminate(std::vector<Row> rows, std::size_t ncols, bool reduced,
                  const std::vector<std::size_t>& column_order) {
  std::vector<std::size_t> order = column_order;
  if (order.empty()) {
    order.resize(ncols);
    std::iota(order.begin(), order.end(), 0);
  }
  rows.erase(std::remove_if(rows.begin(), rows.end(), is_zero_row), rows.end());
  for (auto& r : rows) r = primitive(r);
  Echelon out;
  std::size_t rank = 0;
  for (std::size_t c : order) {
    if (rank == rows.size()) break;
    std::size_t best = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i) {
      if (rows[i][c].is_zero()) continue;
      if (best == rows.size() || rows[i][c].degree() < rows[best][c].degree()) best = i;
    }
    if (best == rows.size()) continue;
    std::swap(rows[rank], rows[best]);
    const Row& piv = rows[rank];
    const std::size_t first = reduced ? 0 : rank + 1;
    for (std::size_t i = first; i < rows.size(); ++i) {
      if (i == rank || rows[i][c].is_zero()) continue;
      const RatFunc a = piv[c];
      const RatFunc b = rows[i][c];
      Row next(ncols);
      for (std::size_t k = 0; k < ncols; ++k) next[k] = a * rows[i][k] - b * piv[k];
      rows[i] = primitive(next);
    }
    out.pivots.push_back(c);
    ++rank;
  }
  rows.resize(rank);
  if (reduced) {
    for (std::size_t i = 0; i < rank; ++i) {
      const RatFunc p = rows[i][out.pivots[i]];
      for (auto& e : rows[i]) {
        if (!e.is_zero()) e = e / p;
      }
    }
  }
  out.rows = std::move(rows);
  return out;
}

std::size_t exact_rank(const std::vector<Row>& rows, std::size_t ncols) {
  return eliminate(rows, ncols, false).rows.size();
}

std::vector<Row> null_space(const std::vector<Row>& a, std::size_t ncols) {
  Echelon e = eliminate(a, ncols, true);
  std::vector<bool> is_pivot(ncols, false);
  for (std::size_t p : e.pivots) is_pivot[p] = true;
  std::vector<Row> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    Row x(ncols);
    x[f] = RatFunc(1);
    for (std::size_t i = 0; i < e.rows.size(); ++i) x[e.pivots[i]] = -e.rows[i][f];
    out.push_back(primitive(x));
  }
  return out;
}

std::vector<Row> left_null_space(const std::vector<Row>& a, std::size_t ncols) {
  std::vector<Row> t(ncols, Row(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < ncols; ++j) t[j][i] = a[i][j];
  }
  return null_space(t, a.size());
}

RatFunc dot(const Row& a, const Row& b) {
  RatFunc s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  }
  return s;
}

Row combine(const std::vector<Row>& rows, const Row& coefficients, std::size_t ncols) {
  Row out(ncols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (coefficients[i].is_zero()) continue;
    for (std::size_t k = 0; k < ncols; ++k) {
      if (!rows[i][k].is_zero()) out[k] += coefficients[i] * rows[i][k];
    }
  }
  return out;
}

}  // namespace flatscan::diffgeo
