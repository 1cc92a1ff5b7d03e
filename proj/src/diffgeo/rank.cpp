#include "flatscan/diffgeo/rank.hpp"

#include <string>

#include "flatscan/errors.hpp"

namespace flatscan::diffgeo {

RankOracle::RankOracle(symexpr::PointSource source, kernels::Policy policy, std::size_t points)
    : source_(std::move(source)), policy_(policy), points_(points) {}

RankOracle::RankOracle(const RankOracle& other)
    : source_(other.source_), policy_(other.policy_), points_(other.points_),
      checked_(other.checked_.load()) {}

std::vector<std::size_t> RankOracle::independent(const std::vector<Row>& rows,
                                                 std::size_t ncols) const {
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!is_zero_row(rows[i])) nonzero.push_back(i);
  }
  if (nonzero.empty() || ncols == 0) return {};
  std::vector<Row> live;
  std::vector<const RatFunc*> exprs;
  for (std::size_t i : nonzero) live.push_back(rows[i]);
  for (const auto& r : live) {
    for (const auto& e : r) {
      if (!e.is_polynomial()) exprs.push_back(&e);
    }
  }
  const auto pts = source_.admissible(exprs, points_);
  const auto evaluated = kernels::evaluate(live, ncols, pts, policy_);
  const auto kept = kernels::independent_rows(evaluated, policy_);
  std::vector<std::size_t> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(nonzero[k]);

  if (live.size() >= 2 && !checked_.load()) {
    bool expected = false;
    if (checked_.compare_exchange_strong(expected, true)) {
      const std::size_t exact = exact_rank(live, ncols);
      if (exact != out.size()) {
        throw InternalDiagnostic("generic rank mismatch: sampled " + std::to_string(out.size()) +
                                 ", exact " + std::to_string(exact));
      }
    }
  }
  return out;
}

std::size_t RankOracle::rank(const std::vector<Row>& rows, std::size_t ncols) const {
  return independent(rows, ncols).size();
}

}  // namespace flatscan::diffgeo
