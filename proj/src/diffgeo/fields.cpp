#include "flatscan/diffgeo/fields.hpp"

#include "flatscan/errors.hpp"
#include "flatscan/symexpr/expr.hpp"

namespace flatscan::diffgeo {

void require_same_chart(const Chart& a, const Chart& b) {
  if (a != b) throw ChartMismatchError("fields live on different charts");
}

VectorField::VectorField(Chart chart, Row components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
  if (comps_.size() != chart_.dim()) {
    throw ValidationError("vector field has " + std::to_string(comps_.size()) +
                          " components on a chart of dimension " + std::to_string(chart_.dim()));
  }
}

VectorField VectorField::zero(const Chart& chart) { return VectorField(chart, Row(chart.dim())); }

VectorField VectorField::coordinate(const Chart& chart, std::size_t index) {
  Row r(chart.dim());
  r.at(index) = RatFunc(1);
  return VectorField(chart, std::move(r));
}

VectorField VectorField::parse(const Chart& chart, const std::vector<std::string>& components) {
  Row r;
  for (const auto& c : components) r.push_back(symexpr::parse_ratfunc(c, chart));
  return VectorField(chart, std::move(r));
}

RatFunc VectorField::apply(const RatFunc& h) const {
  RatFunc out;
  const auto& ids = chart_.coordinate_ids();
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    if (comps_[j].is_zero() || !h.depends_on(ids[j])) continue;
    out += comps_[j] * h.derivative(ids[j]);
  }
  return out;
}

VectorField VectorField::operator+(const VectorField& o) const {
  require_same_chart(chart_, o.chart_);
  Row r(comps_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = comps_[i] + o.comps_[i];
  return VectorField(chart_, std::move(r));
}

VectorField VectorField::operator-(const VectorField& o) const {
  require_same_chart(chart_, o.chart_);
  Row r(comps_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = comps_[i] - o.comps_[i];
  return VectorField(chart_, std::move(r));
}

VectorField VectorField::operator*(const RatFunc& s) const {
  Row r(comps_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = comps_[i] * s;
  return VectorField(chart_, std::move(r));
}

namespace {

std::string coefficient_prefix(const RatFunc& c) {
  if (c == RatFunc(1)) return "";
  if (c == RatFunc(-1)) return "-";
  std::string s = symexpr::format(c);
  const bool compound = c.numerator().size() > 1 || !c.denominator().is_one();
  return (compound ? "(" + s + ")" : s) + "*";
}

std::string render(const Row& r, const Chart& chart, const char* prefix) {
  std::string out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].is_zero()) continue;
    std::string term = coefficient_prefix(r[i]) + prefix + chart.coordinates()[i];
    if (out.empty()) {
      out = term;
    } else if (term.front() == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string VectorField::to_string() const { return render(comps_, chart_, "d_"); }

CovectorField::CovectorField(Chart chart, Row coefficients)
    : chart_(std::move(chart)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != chart_.dim()) {
    throw ValidationError("covector field has " + std::to_string(coeffs_.size()) +
                          " coefficients on a chart of dimension " + std::to_string(chart_.dim()));
  }
}

CovectorField CovectorField::differential(const Chart& chart, const RatFunc& h) {
  Row r(chart.dim());
  const auto& ids = chart.coordinate_ids();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (h.depends_on(ids[i])) r[i] = h.derivative(ids[i]);
  }
  return CovectorField(chart, std::move(r));
}

CovectorField CovectorField::coordinate(const Chart& chart, std::size_t index) {
  Row r(chart.dim());
  r.at(index) = RatFunc(1);
  return CovectorField(chart, std::move(r));
}

RatFunc CovectorField::apply(const VectorField& v) const {
  require_same_chart(chart_, v.chart());
  return dot(coeffs_, v.components());
}

std::string CovectorField::to_string() const { return render(coeffs_, chart_, "d"); }

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  require_same_chart(v.chart(), w.chart());
  Row r(v.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = v.apply(w[i]) - w.apply(v[i]);
  return VectorField(v.chart(), std::move(r));
}

RatFunc lie_derivative(const RatFunc& h, const VectorField& v, unsigned k) {
  RatFunc out = h;
  for (unsigned i = 0; i < k; ++i) out = v.apply(out);
  return out;
}

std::vector<VectorField> bracket_batch(
    const std::vector<std::pair<const VectorField*, const VectorField*>>& pairs,
    kernels::Policy policy) {
  std::vector<VectorField> out(pairs.size());
  kernels::for_each_index(pairs.size(), policy, [&](std::size_t i) {
    out[i] = lie_bracket(*pairs[i].first, *pairs[i].second);
  });
  return out;
}

std::vector<Row> rows_of(const std::vector<VectorField>& fields) {
  std::vector<Row> rows;
  rows.reserve(fields.size());
  for (const auto& f : fields) rows.push_back(f.components());
  return rows;
}

std::vector<Row> rows_of(const std::vector<CovectorField>& forms) {
  std::vector<Row> rows;
  rows.reserve(forms.size());
  for (const auto& f : forms) rows.push_back(f.coefficients());
  return rows;
}

}  // namespace flatscan::diffgeo
