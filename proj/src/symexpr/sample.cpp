#include "flatscan/symexpr/sample.hpp"

#include <algorithm>

#include "flatscan/errors.hpp"

namespace flatscan::symexpr {
namespace {

constexpr std::int64_t kRange = 997;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

mpq_class hashed_rational(std::uint64_t seed, std::uint64_t index, const std::string& key) {
  const std::uint64_t h =
      splitmix64(splitmix64(seed) ^ splitmix64(fnv1a(key)) ^ splitmix64(index * 0x2545f4914f6cdd1dULL + 7));
  const auto num = static_cast<std::int64_t>(h % (2 * kRange + 1)) - kRange;
  const auto den = static_cast<std::int64_t>((h >> 32U) % kRange) + 1;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

void Valuation::set(SymbolId id, mpq_class value) {
  if (id >= values_.size()) {
    values_.resize(id + 1);
    known_.resize(id + 1, false);
  }
  values_[id] = std::move(value);
  known_[id] = true;
}

const mpq_class& Valuation::value(SymbolId id) const {
  if (!has(id)) throw Error("symbol '" + symbol_name(id) + "' is not assigned by the sample point");
  return values_[id];
}

SamplePoint SamplePoint::generated(std::uint64_t seed, std::uint64_t index) {
  SamplePoint p;
  p.generated_ = true;
  p.seed_ = seed;
  p.index_ = index;
  return p;
}

SamplePoint SamplePoint::from_values(std::map<std::string, mpq_class> values) {
  SamplePoint p;
  p.explicit_ = std::move(values);
  return p;
}

mpq_class SamplePoint::value(SymbolId id) const {
  const SymbolInfo& info = symbol_info(id);
  if (auto it = explicit_.find(info.name); it != explicit_.end()) return it->second;
  if (!generated_) throw Error("symbol '" + info.name + "' is not assigned by the sample point");
  if (info.kind == SymbolKind::Sin || info.kind == SymbolKind::Cos) {
    const std::string& sin_name =
        info.kind == SymbolKind::Sin ? info.name : symbol_info(info.partner).name;
    const mpq_class t = hashed_rational(seed_, index_, "angle:" + sin_name);
    const mpq_class t2 = t * t;
    if (info.kind == SymbolKind::Sin) return mpq_class(2 * t / (1 + t2));
    return mpq_class((1 - t2) / (1 + t2));
  }
  return hashed_rational(seed_, index_, info.name);
}

Valuation SamplePoint::valuation_for(const std::vector<SymbolId>& symbols) const {
  Valuation v;
  for (SymbolId id : symbols) v.set(id, value(id));
  return v;
}

mpq_class eval_at(const RatFunc& e, const SamplePoint& p) {
  return e.evaluate(p.valuation_for(e.variables()));
}

std::vector<SymbolId> symbols_of(const std::vector<const RatFunc*>& exprs) {
  std::vector<SymbolId> out;
  for (const RatFunc* e : exprs) {
    auto v = e->variables();
    out.insert(out.end(), v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PointSource::PointSource(std::uint64_t seed, std::vector<RatFunc> constraints)
    : seed_(seed), constraints_(std::move(constraints)) {}

std::vector<SamplePoint> PointSource::admissible(const std::vector<const RatFunc*>& exprs,
                                                 std::size_t count) const {
  std::vector<const Poly*> dens;
  for (const RatFunc* e : exprs) {
    if (!e->denominator().is_constant()) dens.push_back(&e->denominator());
  }
  std::vector<const RatFunc*> all = exprs;
  for (const auto& c : constraints_) all.push_back(&c);
  const auto symbols = symbols_of(all);

  std::vector<SamplePoint> out;
  const std::uint64_t attempts = 64 * count + 64;
  for (std::uint64_t idx = 0; idx < attempts && out.size() < count; ++idx) {
    SamplePoint p = point(idx);
    const Valuation val = p.valuation_for(symbols);
    bool ok = std::none_of(dens.begin(), dens.end(),
                           [&](const Poly* d) { return sgn(d->evaluate(val)) == 0; });
    for (std::size_t k = 0; ok && k < constraints_.size(); ++k) {
      const RatFunc& c = constraints_[k];
      if (sgn(c.denominator().evaluate(val)) == 0 || sgn(c.numerator().evaluate(val)) == 0) ok = false;
    }
    if (ok) out.push_back(std::move(p));
  }
  if (out.size() < count) {
    throw InternalDiagnostic("could not find enough admissible sample points");
  }
  return out;
}

}  // namespace flatscan::symexpr
