#pragma once

#include <string>
#include <vector>

#include "flatscan/diffgeo/fields.hpp"
#include "flatscan/diffgeo/rank.hpp"

namespace flatscan::diffgeo {

// Span of vector fields. The stored basis is a generically independent
// subset of the generating fields, kept in generation order.
class Distribution {
 public:
  Distribution() = default;
  static Distribution empty(const Chart& chart);
  static Distribution tangent(const Chart& chart);
  static Distribution span(const Chart& chart, const std::vector<VectorField>& fields,
                           const RankOracle& oracle);

  const Chart& chart() const { return chart_; }
  const std::vector<VectorField>& basis() const { return basis_; }
  std::size_t rank() const { return basis_.size(); }
  std::size_t dim() const { return chart_.dim(); }
  bool is_empty() const { return basis_.empty(); }
  bool is_full() const { return rank() == dim(); }

  std::string to_string() const;

 private:
  Chart chart_;
  std::vector<VectorField> basis_;
};

class Codistribution {
 public:
  Codistribution() = default;
  static Codistribution empty(const Chart& chart);
  static Codistribution span(const Chart& chart, const std::vector<CovectorField>& forms,
                             const RankOracle& oracle);

  const Chart& chart() const { return chart_; }
  const std::vector<CovectorField>& basis() const { return basis_; }
  std::size_t rank() const { return basis_.size(); }
  std::size_t dim() const { return chart_.dim(); }
  bool is_empty() const { return basis_.empty(); }

  std::string to_string() const;

 private:
  Chart chart_;
  std::vector<CovectorField> basis_;
};

std::size_t generic_rank(const std::vector<VectorField>& fields, const RankOracle& oracle);
std::size_t generic_rank(const std::vector<CovectorField>& forms, const RankOracle& oracle);

bool contains(const Distribution& d, const VectorField& v, const RankOracle& oracle);
bool contains(const Distribution& d, const Distribution& sub, const RankOracle& oracle);
bool contains(const Codistribution& q, const CovectorField& w, const RankOracle& oracle);
bool contains(const Codistribution& q, const Codistribution& sub, const RankOracle& oracle);
bool span_equal(const Distribution& a, const Distribution& b, const RankOracle& oracle);
bool span_equal(const Codistribution& a, const Codistribution& b, const RankOracle& oracle);

Distribution sum(const Distribution& a, const Distribution& b, const RankOracle& oracle);
Distribution add(const Distribution& d, const std::vector<VectorField>& fields, const RankOracle& oracle);
Codistribution sum(const Codistribution& a, const Codistribution& b, const RankOracle& oracle);

// D + [f, D].
Distribution add_drift_brackets(const Distribution& d, const VectorField& f, const RankOracle& oracle);
// D + [D, D], one step of the derived flag.
Distribution derived(const Distribution& d, const RankOracle& oracle);

bool is_involutive(const Distribution& d, const RankOracle& oracle);
std::vector<Distribution> derived_flag(const Distribution& d, const RankOracle& oracle);
Distribution involutive_closure(const Distribution& d, const RankOracle& oracle);
Distribution cauchy_characteristic(const Distribution& d, const RankOracle& oracle);

Codistribution annihilator(const Distribution& d, const RankOracle& oracle);
Distribution coannihilator(const Codistribution& q, const RankOracle& oracle);
Distribution intersect(const Distribution& a, const Distribution& b, const RankOracle& oracle);

bool is_integrable(const Codistribution& q, const RankOracle& oracle);

// Combinations of Q whose coefficients outside `subset` vanish identically.
Codistribution intersect_with_coordinates(const Codistribution& q,
                                          const std::vector<std::string>& subset,
                                          const RankOracle& oracle);

}  // namespace flatscan::diffgeo
