#pragma once

#include <string>
#include <vector>

#include "flatscan/diffgeo/linalg.hpp"
#include "flatscan/kernels/kernels.hpp"
#include "flatscan/symexpr/chart.hpp"

namespace flatscan::diffgeo {

using symexpr::Chart;

// Components are stored in canonical rational form, one per coordinate.
class VectorField {
 public:
  VectorField() = default;
  VectorField(Chart chart, Row components);
  static VectorField zero(const Chart& chart);
  static VectorField coordinate(const Chart& chart, std::size_t index);
  // Components given as expression strings over the chart.
  static VectorField parse(const Chart& chart, const std::vector<std::string>& components);

  const Chart& chart() const { return chart_; }
  const Row& components() const { return comps_; }
  const RatFunc& operator[](std::size_t i) const { return comps_[i]; }
  std::size_t dim() const { return comps_.size(); }
  bool is_zero() const { return is_zero_row(comps_); }

  // Directional derivative of a scalar.
  RatFunc apply(const RatFunc& h) const;

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField operator*(const RatFunc& s) const;
  bool operator==(const VectorField& o) const { return chart_ == o.chart_ && comps_ == o.comps_; }

  std::string to_string() const;  // e.g. "x*d_y - d_z"

 private:
  Chart chart_;
  Row comps_;
};

class CovectorField {
 public:
  CovectorField() = default;
  CovectorField(Chart chart, Row coefficients);
  static CovectorField differential(const Chart& chart, const RatFunc& h);
  static CovectorField coordinate(const Chart& chart, std::size_t index);

  const Chart& chart() const { return chart_; }
  const Row& coefficients() const { return coeffs_; }
  const RatFunc& operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t dim() const { return coeffs_.size(); }
  bool is_zero() const { return is_zero_row(coeffs_); }

  RatFunc apply(const VectorField& v) const;
  bool operator==(const CovectorField& o) const { return chart_ == o.chart_ && coeffs_ == o.coeffs_; }

  std::string to_string() const;  // e.g. "dx - eps*cos(theta)*dtheta"

 private:
  Chart chart_;
  Row coeffs_;
};

void require_same_chart(const Chart& a, const Chart& b);

VectorField lie_bracket(const VectorField& v, const VectorField& w);
RatFunc lie_derivative(const RatFunc& h, const VectorField& v, unsigned k = 1);

// Brackets of the given pairs, evaluated under the policy.
std::vector<VectorField> bracket_batch(const std::vector<std::pair<const VectorField*, const VectorField*>>& pairs,
                                       kernels::Policy policy);

std::vector<Row> rows_of(const std::vector<VectorField>& fields);
std::vector<Row> rows_of(const std::vector<CovectorField>& forms);

}  // namespace flatscan::diffgeo
