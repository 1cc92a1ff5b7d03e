#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

#include "flatscan/diffgeo/linalg.hpp"
#include "flatscan/kernels/kernels.hpp"
#include "flatscan/symexpr/sample.hpp"

namespace flatscan::diffgeo {

// Generic rank by evaluation at seeded admissible sample points. The first
// nontrivial query is also solved by exact elimination; a disagreement
// raises InternalDiagnostic.
class RankOracle {
 public:
  explicit RankOracle(symexpr::PointSource source = symexpr::PointSource(),
                      kernels::Policy policy = kernels::Policy::Parallel, std::size_t points = 5);
  RankOracle(const RankOracle& other);
  RankOracle& operator=(const RankOracle&) = delete;

  // Indices of a greedily chosen generically independent subset, in order.
  std::vector<std::size_t> independent(const std::vector<Row>& rows, std::size_t ncols) const;
  std::size_t rank(const std::vector<Row>& rows, std::size_t ncols) const;

  const symexpr::PointSource& source() const { return source_; }
  kernels::Policy policy() const { return policy_; }
  std::size_t point_count() const { return points_; }
  bool cross_checked() const { return checked_.load(); }

 private:
  symexpr::PointSource source_;
  kernels::Policy policy_;
  std::size_t points_;
  mutable std::atomic<bool> checked_{false};
};

}  // namespace flatscan::diffgeo
