#include "flatscan/diffgeo/distribution.hpp"

#include <algorithm>

#include "flatscan/errors.hpp"

namespace flatscan::diffgeo {

namespace {

template <class Field>
std::vector<Field> select_independent(const std::vector<Field>& fields, std::size_t dim,
                                      const RankOracle& oracle) {
  const auto keep = oracle.independent(rows_of(fields), dim);
  std::vector<Field> out;
  out.reserve(keep.size());
  for (std::size_t k : keep) out.push_back(fields[k]);
  return out;
}

template <class Field>
std::string render(const std::vector<Field>& basis) {
  std::string out = "span{";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i > 0) out += ", ";
    out += basis[i].to_string();
  }
  return out + "}";
}

std::vector<VectorField> all_brackets(const std::vector<VectorField>& basis, kernels::Policy policy) {
  std::vector<std::pair<const VectorField*, const VectorField*>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(&basis[i], &basis[j]);
  }
  return bracket_batch(pairs, policy);
}

}  // namespace

Distribution Distribution::empty(const Chart& chart) {
  Distribution d;
  d.chart_ = chart;
  return d;
}

Distribution Distribution::tangent(const Chart& chart) {
  Distribution d;
  d.chart_ = chart;
  for (std::size_t i = 0; i < chart.dim(); ++i) d.basis_.push_back(VectorField::coordinate(chart, i));
  return d;
}

Distribution Distribution::span(const Chart& chart, const std::vector<VectorField>& fields,
                                const RankOracle& oracle) {
  for (const auto& f : fields) require_same_chart(chart, f.chart());
  Distribution d;
  d.chart_ = chart;
  d.basis_ = select_independent(fields, chart.dim(), oracle);
  return d;
}

std::string Distribution::to_string() const { return render(basis_); }

Codistribution Codistribution::empty(const Chart& chart) {
  Codistribution q;
  q.chart_ = chart;
  return q;
}

Codistribution Codistribution::span(const Chart& chart, const std::vector<CovectorField>& forms,
                                    const RankOracle& oracle) {
  for (const auto& f : forms) require_same_chart(chart, f.chart());
  Codistribution q;
  q.chart_ = chart;
  q.basis_ = select_independent(forms, chart.dim(), oracle);
  return q;
}

std::string Codistribution::to_string() const { return render(basis_); }

std::size_t generic_rank(const std::vector<VectorField>& fields, const RankOracle& oracle) {
  if (fields.empty()) return 0;
  return oracle.rank(rows_of(fields), fields.front().dim());
}

std::size_t generic_rank(const std::vector<CovectorField>& forms, const RankOracle& oracle) {
  if (forms.empty()) return 0;
  return oracle.rank(rows_of(forms), forms.front().dim());
}

bool contains(const Distribution& d, const VectorField& v, const RankOracle& oracle) {
  require_same_chart(d.chart(), v.chart());
  if (v.is_zero()) return true;
  if (d.is_full()) return true;
  auto fields = d.basis();
  fields.push_back(v);
  return generic_rank(fields, oracle) == d.rank();
}

bool contains(const Distribution& d, const Distribution& sub, const RankOracle& oracle) {
  require_same_chart(d.chart(), sub.chart());
  if (sub.is_empty() || d.is_full()) return true;
  auto fields = d.basis();
  fields.insert(fields.end(), sub.basis().begin(), sub.basis().end());
  return generic_rank(fields, oracle) == d.rank();
}

bool contains(const Codistribution& q, const CovectorField& w, const RankOracle& oracle) {
  require_same_chart(q.chart(), w.chart());
  if (w.is_zero()) return true;
  auto forms = q.basis();
  forms.push_back(w);
  return generic_rank(forms, oracle) == q.rank();
}

bool contains(const Codistribution& q, const Codistribution& sub, const RankOracle& oracle) {
  require_same_chart(q.chart(), sub.chart());
  if (sub.is_empty()) return true;
  auto forms = q.basis();
  forms.insert(forms.end(), sub.basis().begin(), sub.basis().end());
  return generic_rank(forms, oracle) == q.rank();
}

bool span_equal(const Distribution& a, const Distribution& b, const RankOracle& oracle) {
  return a.rank() == b.rank() && contains(a, b, oracle);
}

bool span_equal(const Codistribution& a, const Codistribution& b, const RankOracle& oracle) {
  return a.rank() == b.rank() && contains(a, b, oracle);
}

Distribution sum(const Distribution& a, const Distribution& b, const RankOracle& oracle) {
  return add(a, b.basis(), oracle);
}

Distribution add(const Distribution& d, const std::vector<VectorField>& fields,
                 const RankOracle& oracle) {
  auto all = d.basis();
  all.insert(all.end(), fields.begin(), fields.end());
  return Distribution::span(d.chart(), all, oracle);
}

Codistribution sum(const Codistribution& a, const Codistribution& b, const RankOracle& oracle) {
  auto all = a.basis();
  all.insert(all.end(), b.basis().begin(), b.basis().end());
  return Codistribution::span(a.chart(), all, oracle);
}

Distribution add_drift_brackets(const Distribution& d, const VectorField& f,
                                const RankOracle& oracle) {
  require_same_chart(d.chart(), f.chart());
  std::vector<std::pair<const VectorField*, const VectorField*>> pairs;
  for (const auto& v : d.basis()) pairs.emplace_back(&f, &v);
  return add(d, bracket_batch(pairs, oracle.policy()), oracle);
}

Distribution derived(const Distribution& d, const RankOracle& oracle) {
  return add(d, all_brackets(d.basis(), oracle.policy()), oracle);
}

bool is_involutive(const Distribution& d, const RankOracle& oracle) {
  if (d.rank() <= 1 || d.is_full()) return true;
  return derived(d, oracle).rank() == d.rank();
}

std::vector<Distribution> derived_flag(const Distribution& d, const RankOracle& oracle) {
  std::vector<Distribution> flag{d};
  for (;;) {
    Distribution next = derived(flag.back(), oracle);
    if (next.rank() == flag.back().rank()) break;
    flag.push_back(std::move(next));
  }
  return flag;
}

Distribution involutive_closure(const Distribution& d, const RankOracle& oracle) {
  return derived_flag(d, oracle).back();
}

Distribution cauchy_characteristic(const Distribution& d, const RankOracle& oracle) {
  const std::size_t r = d.rank();
  if (r == 0 || d.is_full()) return d;
  const Codistribution ann = annihilator(d, oracle);
  const auto& basis = d.basis();
  std::vector<std::vector<VectorField>> br(r, std::vector<VectorField>(r));
  std::vector<std::pair<std::size_t, std::size_t>> index;
  std::vector<std::pair<const VectorField*, const VectorField*>> pairs;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      index.emplace_back(i, j);
      pairs.emplace_back(&basis[i], &basis[j]);
    }
  }
  const auto computed = bracket_batch(pairs, oracle.policy());
  for (std::size_t k = 0; k < index.size(); ++k) {
    const auto [i, j] = index[k];
    br[i][j] = computed[k];
    br[j][i] = computed[k] * RatFunc(-1);
  }
  // sum_i c_i * omega_k([X_i, X_j]) = 0 for every j and k.
  std::vector<Row> system;
  for (std::size_t j = 0; j < r; ++j) {
    for (const auto& w : ann.basis()) {
      Row row(r);
      for (std::size_t i = 0; i < r; ++i) {
        if (i != j) row[i] = w.apply(br[i][j]);
      }
      if (!is_zero_row(row)) system.push_back(std::move(row));
    }
  }
  if (system.empty()) return d;
  std::vector<VectorField> fields;
  for (const Row& c : null_space(system, r)) {
    VectorField v = VectorField::zero(d.chart());
    for (std::size_t i = 0; i < r; ++i) {
      if (!c[i].is_zero()) v = v + basis[i] * c[i];
    }
    fields.push_back(v);
  }
  return Distribution::span(d.chart(), fields, oracle);
}

Codistribution annihilator(const Distribution& d, const RankOracle& oracle) {
  const Chart& chart = d.chart();
  if (d.is_empty()) {
    std::vector<CovectorField> forms;
    for (std::size_t i = 0; i < chart.dim(); ++i) forms.push_back(CovectorField::coordinate(chart, i));
    return Codistribution::span(chart, forms, oracle);
  }
  std::vector<CovectorField> forms;
  for (Row& r : null_space(rows_of(d.basis()), chart.dim())) forms.emplace_back(chart, std::move(r));
  return Codistribution::span(chart, forms, oracle);
}

Distribution coannihilator(const Codistribution& q, const RankOracle& oracle) {
  const Chart& chart = q.chart();
  if (q.is_empty()) return Distribution::tangent(chart);
  std::vector<VectorField> fields;
  for (Row& r : null_space(rows_of(q.basis()), chart.dim())) fields.emplace_back(chart, std::move(r));
  return Distribution::span(chart, fields, oracle);
}

Distribution intersect(const Distribution& a, const Distribution& b, const RankOracle& oracle) {
  require_same_chart(a.chart(), b.chart());
  if (contains(b, a, oracle)) return a;
  if (contains(a, b, oracle)) return b;
  return coannihilator(sum(annihilator(a, oracle), annihilator(b, oracle), oracle), oracle);
}

bool is_integrable(const Codistribution& q, const RankOracle& oracle) {
  return is_involutive(coannihilator(q, oracle), oracle);
}

Codistribution intersect_with_coordinates(const Codistribution& q,
                                          const std::vector<std::string>& subset,
                                          const RankOracle& oracle) {
  const Chart& chart = q.chart();
  std::vector<bool> inside(chart.dim(), false);
  for (const auto& name : subset) {
    auto idx = chart.index_of(name);
    if (!idx) throw ValidationError("'" + name + "' is not a coordinate of the chart");
    inside[*idx] = true;
  }
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < chart.dim(); ++i) {
    if (!inside[i]) outside.push_back(i);
  }
  const auto rows = rows_of(q.basis());
  if (outside.empty() || rows.empty()) return q;
  std::vector<Row> block;
  for (const auto& r : rows) {
    Row b;
    for (std::size_t i : outside) b.push_back(r[i]);
    block.push_back(std::move(b));
  }
  std::vector<CovectorField> forms;
  for (const Row& c : left_null_space(block, outside.size())) {
    forms.emplace_back(chart, primitive(combine(rows, c, chart.dim())));
  }
  return Codistribution::span(chart, forms, oracle);
}

}  // namespace flatscan::diffgeo
