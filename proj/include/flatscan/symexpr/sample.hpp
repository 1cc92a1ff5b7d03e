#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flatscan/symexpr/ratfunc.hpp"
#include "flatscan/symexpr/symbol.hpp"

namespace flatscan::symexpr {


// Dense symbol -> value table used during evaluation. Read-only once built,
// so one valuation can be shared by concurrent evaluations.
class Valuation {
 public:
  void set(SymbolId id, mpq_class value);
  bool has(SymbolId id) const { return id < known_.size() && known_[id]; }
  const mpq_class& value(SymbolId id) const;

 private:
  std::vector<mpq_class> values_;
  std::vector<bool> known_;
};

// An assignment of exact rationals to symbols. A generated point derives
// every value from (seed, index, symbol name), so it is total over all
// symbols ever interned: plain symbols and opaque extension symbols get
// rationals with numerator and denominator in [-997, 997]; sin/cos pairs get
// a rational point (2t/(1+t^2), (1-t^2)/(1+t^2)) of the unit circle.
class SamplePoint {
 public:
  static SamplePoint generated(std::uint64_t seed, std::uint64_t index);
  // Explicit assignment keyed by symbol name; extension symbols may be
  // assigned through their printed name, e.g. "sin(theta)".
  static SamplePoint from_values(std::map<std::string, mpq_class> values);

  mpq_class value(SymbolId id) const;
  Valuation valuation_for(const std::vector<SymbolId>& symbols) const;

  bool is_generated() const { return generated_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }

 private:
  bool generated_ = false;
  std::uint64_t seed_ = 0;
  std::uint64_t index_ = 0;
  std::map<std::string, mpq_class> explicit_;
};

// Exact evaluation; throws PoleError when the denominator vanishes and
// Error when a symbol is not assigned by the point.
mpq_class eval_at(const RatFunc& e, const SamplePoint& p);

// Seeded source of generic points. Parameter constraints (expressions that
// must not vanish, e.g. eps) act as rejection predicates.
class PointSource {
 public:
  explicit PointSource(std::uint64_t seed = 1, std::vector<RatFunc> constraints = {});

  std::uint64_t seed() const { return seed_; }
  const std::vector<RatFunc>& constraints() const { return constraints_; }
  SamplePoint point(std::uint64_t index) const { return SamplePoint::generated(seed_, index); }

  // First `count` points at which every denominator of `exprs` and every
  // constraint is nonzero. Throws InternalDiagnostic if none can be found.
  std::vector<SamplePoint> admissible(const std::vector<const RatFunc*>& exprs,
                                      std::size_t count) const;

 private:
  std::uint64_t seed_;
  std::vector<RatFunc> constraints_;
};

// Symbols appearing in the numerator or denominator of the expressions.
std::vector<SymbolId> symbols_of(const std::vector<const RatFunc*>& exprs);

}  // namespace flatscan::symexpr
