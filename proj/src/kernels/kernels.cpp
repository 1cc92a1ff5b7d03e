#include "flatscan/kernels/kernels.hpp"

#include <algorithm>

namespace flatscan::kernels {

std::vector<QMatrix> evaluate(const std::vector<SymRow>& rows, std::size_t cols,
                              const std::vector<symexpr::SamplePoint>& points, Policy policy) {
  std::vector<const symexpr::RatFunc*> all;
  for (const auto& r : rows) {
    for (const auto& e : r) all.push_back(&e);
  }
  const auto symbols = symexpr::symbols_of(all);
  std::vector<symexpr::Valuation> valuations;
  valuations.reserve(points.size());
  for (const auto& p : points) valuations.push_back(p.valuation_for(symbols));

  std::vector<QMatrix> out(points.size(), QMatrix(rows.size(), cols));
  const std::size_t cells = rows.size() * cols;
  for_each_index(points.size() * cells, policy, [&](std::size_t k) {
    const std::size_t p = k / cells;
    const std::size_t cell = k % cells;
    const auto& e = rows[cell / cols][cell % cols];
    if (!e.is_zero()) out[p].data[cell] = e.evaluate(valuations[p]);
  });
  return out;
}

namespace {

// Eliminates column `col` from rows [first, rows) using pivot row `pivot`.
void eliminate_below(QMatrix& m, std::size_t pivot, std::size_t col, Policy policy) {
  const std::size_t first = pivot + 1;
  const std::size_t count = m.rows - first;
  for_each_index(count, policy, [&](std::size_t k) {
    const std::size_t r = first + k;
    if (sgn(m.at(r, col)) == 0) return;
    mpq_class factor = m.at(r, col) / m.at(pivot, col);
    for (std::size_t c = col; c < m.cols; ++c) m.at(r, c) -= factor * m.at(pivot, c);
  });
}

}  // namespace

std::size_t rank(QMatrix m, Policy policy) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && sgn(m.at(p, c)) == 0) ++p;
    if (p == m.rows) continue;
    if (p != r) {
      for (std::size_t k = 0; k < m.cols; ++k) std::swap(m.at(p, k), m.at(r, k));
    }
    eliminate_below(m, r, c, policy);
    ++r;
  }
  return r;
}

namespace {

// Row echelon state at one point: stored reduced rows with their pivots.
struct Echelon {
  std::vector<std::vector<mpq_class>> rows;
  std::vector<std::size_t> pivots;

  // Reduces v in place; returns the pivot column of the remainder or npos.
  std::size_t reduce(std::vector<mpq_class>& v) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::size_t pc = pivots[i];
      if (sgn(v[pc]) == 0) continue;
      mpq_class f = v[pc] / rows[i][pc];
      for (std::size_t c = 0; c < v.size(); ++c) {
        if (sgn(rows[i][c]) != 0) v[c] -= f * rows[i][c];
      }
    }
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (sgn(v[c]) != 0) return c;
    }
    return static_cast<std::size_t>(-1);
  }
};

}  // namespace

std::vector<std::size_t> independent_rows(const std::vector<QMatrix>& evaluated, Policy policy) {
  std::vector<std::size_t> kept;
  if (evaluated.empty()) return kept;
  const std::size_t nrows = evaluated.front().rows;
  const std::size_t ncols = evaluated.front().cols;
  const std::size_t npts = evaluated.size();
  std::vector<Echelon> ech(npts);
  std::vector<std::vector<mpq_class>> reduced(npts);
  std::vector<std::size_t> pivot(npts);
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  for (std::size_t j = 0; j < nrows && kept.size() < ncols; ++j) {
    for_each_index(npts, policy, [&](std::size_t p) {
      const QMatrix& m = evaluated[p];
      reduced[p].assign(m.data.begin() + j * ncols, m.data.begin() + (j + 1) * ncols);
      pivot[p] = ech[p].reduce(reduced[p]);
    });
    bool keep = false;
    for (std::size_t p = 0; p < npts; ++p) {
      if (ech[p].rows.size() == kept.size() && pivot[p] != none) keep = true;
    }
    if (!keep) continue;
    kept.push_back(j);
    for (std::size_t p = 0; p < npts; ++p) {
      if (pivot[p] == none) continue;
      ech[p].rows.push_back(std::move(reduced[p]));
      ech[p].pivots.push_back(pivot[p]);
    }
  }
  return kept;
}

}  // namespace flatscan::kernels
