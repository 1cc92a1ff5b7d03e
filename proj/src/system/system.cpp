#include "flatscan/system/system.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "flatscan/diffgeo/linalg.hpp"
#include "flatscan/errors.hpp"
#include "flatscan/symexpr/symbol.hpp"

namespace flatscan::system {

using diffgeo::Row;
using symexpr::intern;
using symexpr::SymbolId;

namespace {

void require_chart(const VectorField& v, const Chart& chart, const char* what) {
  if (v.chart() != chart) throw ValidationError(std::string(what) + " is not defined on the system chart");
}

std::vector<std::string> state_names(const ControlAffineSystem& sys) { return sys.chart().coordinates(); }

// Splits "u1_d3" into ("u1", 3); plain names get level 0.
std::pair<std::string, unsigned> split_jet(const std::string& name) {
  const auto pos = name.rfind("_d");
  if (pos == std::string::npos || pos + 2 >= name.size()) return {name, 0};
  for (std::size_t i = pos + 2; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return {name, 0};
  }
  if (name[pos + 2] == '0') return {name, 0};
  return {name.substr(0, pos), static_cast<unsigned>(std::stoul(name.substr(pos + 2)))};
}

}  // namespace

ControlAffineSystem::ControlAffineSystem(std::string name, Chart chart, std::array<std::string, 2> inputs,
                                         VectorField f, VectorField g1, VectorField g2,
                                         std::vector<RatFunc> constraints)
    : name_(std::move(name)),
      chart_(std::move(chart)),
      inputs_(std::move(inputs)),
      f_(std::move(f)),
      g1_(std::move(g1)),
      g2_(std::move(g2)),
      constraints_(std::move(constraints)) {
  if (chart_.dim() < 2) throw ValidationError("a two-input system needs at least two states");
  for (const auto& u : inputs_) {
    if (!symexpr::is_identifier(u) || symexpr::is_reserved_name(u))
      throw ValidationError("invalid input name '" + u + "'");
    if (chart_.contains(u)) throw ValidationError("input '" + u + "' clashes with a state or parameter");
  }
  if (inputs_[0] == inputs_[1]) throw ValidationError("input names must differ");
  require_chart(f_, chart_, "drift");
  require_chart(g1_, chart_, "g1");
  require_chart(g2_, chart_, "g2");
  for (const auto& u : inputs_) {
    const SymbolId id = intern(u);
    for (const VectorField* v : {&f_, &g1_, &g2_}) {
      for (const auto& c : v->components()) {
        if (c.depends_on(id)) throw ValidationError("vector field component depends on input '" + u + "'");
      }
    }
  }
  for (const auto& c : constraints_) {
    if (c.is_zero()) throw ValidationError("parameter constraint is identically zero");
  }
  if (diffgeo::generic_rank({g1_, g2_}, oracle()) != 2)
    throw ValidationError("input vector fields are not independent");
}

RankOracle ControlAffineSystem::oracle(std::uint64_t seed) const {
  return RankOracle(symexpr::PointSource(seed, constraints_));
}

std::string ControlAffineSystem::jet_name(int j, unsigned level) const {
  if (level == 0) return inputs_[j];
  auto [base, start] = split_jet(inputs_[j]);
  return base + "_d" + std::to_string(start + level);
}

Chart ControlAffineSystem::jet_chart(unsigned order) const {
  std::vector<std::string> extra;
  for (int j = 0; j < 2; ++j) {
    for (unsigned k = 0; k <= order; ++k) extra.push_back(jet_name(j, k));
  }
  return chart_.extended(extra);
}

ControlAffineSystem ControlAffineSystem::with_fields(VectorField f, VectorField g1, VectorField g2) const {
  return ControlAffineSystem(name_, chart_, inputs_, std::move(f), std::move(g1), std::move(g2), constraints_);
}

VectorField embed(const VectorField& v, const Chart& target) {
  Row comps(target.dim());
  const auto& names = v.chart().coordinates();
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto idx = target.index_of(names[i]);
    if (!idx) {
      if (v[i].is_zero()) continue;
      throw ChartMismatchError("coordinate '" + names[i] + "' missing from target chart");
    }
    comps[*idx] = v[i];
  }
  return VectorField(target, std::move(comps));
}

CovectorField embed(const CovectorField& w, const Chart& target) {
  Row coeffs(target.dim());
  const auto& names = w.chart().coordinates();
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto idx = target.index_of(names[i]);
    if (!idx) {
      if (w[i].is_zero()) continue;
      throw ChartMismatchError("coordinate '" + names[i] + "' missing from target chart");
    }
    coeffs[*idx] = w[i];
  }
  return CovectorField(target, std::move(coeffs));
}

VectorField f_u(const ControlAffineSystem& sys, unsigned jet_order) {
  const Chart jet = sys.jet_chart(jet_order);
  Row comps(jet.dim());
  const RatFunc u1 = RatFunc::symbol(sys.inputs()[0]);
  const RatFunc u2 = RatFunc::symbol(sys.inputs()[1]);
  for (std::size_t i = 0; i < sys.n(); ++i) comps[i] = sys.f()[i] + sys.g1()[i] * u1 + sys.g2()[i] * u2;
  for (int j = 0; j < 2; ++j) {
    for (unsigned k = 0; k < jet_order; ++k) {
      comps[*jet.index_of(sys.jet_name(j, k))] = RatFunc::symbol(sys.jet_name(j, k + 1));
    }
  }
  return VectorField(jet, std::move(comps));
}

std::vector<RatFunc> output_derivatives(const ControlAffineSystem& sys, const RatFunc& phi,
                                        unsigned count, unsigned jet_order) {
  const VectorField fu = f_u(sys, jet_order);
  std::vector<RatFunc> out;
  out.reserve(count);
  RatFunc h = phi;
  for (unsigned k = 0; k < count; ++k) {
    if (k > 0) h = fu.apply(h);
    out.push_back(h);
  }
  return out;
}

Indices relative_degree(const ControlAffineSystem& sys, const OutputPair& phi) {
  Indices K{};
  for (int j = 0; j < 2; ++j) {
    for (const auto& u : sys.inputs()) {
      if (phi[j].depends_on(intern(u))) throw ValidationError("flat output component depends on an input");
    }
    RatFunc h = phi[j];
    unsigned k = 0;
    for (unsigned step = 1; step <= sys.n(); ++step) {
      if (!sys.g1().apply(h).is_zero() || !sys.g2().apply(h).is_zero()) {
        k = step;
        break;
      }
      h = sys.f().apply(h);
    }
    if (k == 0) {
      throw UnboundedRelativeDegree("relative degree of '" + phi[j].to_string() + "' exceeds n = " +
                                    std::to_string(sys.n()));
    }
    K[j] = k;
  }
  return K;
}

FlatIndices flat_indices(std::size_t n, const Indices& K) {
  if (K[0] < 1 || K[1] < 1 || K[0] + K[1] > n) {
    throw InvalidIndicesError("relative degrees (" + std::to_string(K[0]) + "," + std::to_string(K[1]) +
                              ") are inconsistent with n = " + std::to_string(n));
  }
  FlatIndices out;
  out.R = {static_cast<unsigned>(n - K[1]), static_cast<unsigned>(n - K[0])};
  out.d = static_cast<unsigned>(n - K[0] - K[1]);
  return out;
}

InputNormalization normalize_input(const ControlAffineSystem& sys, const OutputPair& phi) {
  Indices K;
  try {
    K = relative_degree(sys, phi);
  } catch (const UnboundedRelativeDegree& e) {
    throw NonInvertibleTransform(std::string("no derivative of the output involves an input: ") + e.what());
  }
  RatFunc h = phi[0];
  for (unsigned k = 1; k < K[0]; ++k) h = sys.f().apply(h);
  const RatFunc a = sys.f().apply(h);
  const RatFunc b1 = sys.g1().apply(h);
  const RatFunc b2 = sys.g2().apply(h);
  const auto& f = sys.f();
  const auto& g1 = sys.g1();
  const auto& g2 = sys.g2();
  // identity order first, then swapped
  if (!b1.is_zero()) {
    const RatFunc inv = RatFunc(1) / b1;
    return {sys.with_fields(f - g1 * (a * inv), g1 * inv, g2 - g1 * (b2 * inv)), false, a, b1, b2};
  }
  if (!b2.is_zero()) {
    const RatFunc inv = RatFunc(1) / b2;
    return {sys.with_fields(f - g2 * (a * inv), g2 * inv, g1 - g2 * (b1 * inv)), true, a, b1, b2};
  }
  throw NonInvertibleTransform("derivative of order k1 of the first component does not involve either input");
}

namespace {

// Reduced echelon basis, so a Q that lies in span{dx} with x-dependent
// coefficients is also written that way; then moves Q onto the states plus
// the jet coordinates its covectors still use.
Codistribution restrict_to_support(const Codistribution& raw, const ControlAffineSystem& sys,
                                   const RankOracle& oracle) {
  const Chart& jet = raw.chart();
  std::vector<CovectorField> reduced;
  for (const auto& r : diffgeo::eliminate(diffgeo::rows_of(raw.basis()), jet.dim(), true).rows) {
    reduced.emplace_back(jet, diffgeo::primitive(r));
  }
  const Codistribution q = Codistribution::span(jet, reduced, oracle);
  std::vector<bool> used(jet.dim(), false);
  for (std::size_t i = 0; i < sys.n(); ++i) used[i] = true;
  for (const auto& w : q.basis()) {
    for (std::size_t i = 0; i < jet.dim(); ++i) {
      if (used[i]) continue;
      for (const auto& c : w.coefficients()) {
        if (c.depends_on(jet.coordinate_ids()[i])) {
          used[i] = true;
          break;
        }
      }
    }
  }
  std::vector<std::string> extra;
  for (std::size_t i = sys.n(); i < jet.dim(); ++i) {
    if (used[i]) extra.push_back(jet.coordinates()[i]);
  }
  const Chart small = sys.chart().extended(extra);
  std::vector<CovectorField> forms;
  for (const auto& w : q.basis()) forms.push_back(embed(w, small));
  return Codistribution::span(small, forms, oracle);
}

}  // namespace

std::vector<QEntry> q_sequence(const ControlAffineSystem& sys, const OutputPair& phi, const RankOracle& oracle) {
  const Indices K = relative_degree(sys, phi);
  const FlatIndices idx = flat_indices(sys.n(), K);
  const unsigned order = std::max(idx.R[0], idx.R[1]);
  const Chart jet = sys.jet_chart(order);
  std::array<std::vector<CovectorField>, 2> diffs;
  for (int j = 0; j < 2; ++j) {
    for (const auto& h : output_derivatives(sys, phi[j], idx.R[j], order)) {
      diffs[j].push_back(CovectorField::differential(jet, h));
    }
  }
  const auto states = state_names(sys);
  std::vector<QEntry> out;
  for (unsigned m = 0; m <= idx.d; ++m) {
    const Indices j{K[0] - 1 + m, K[1] - 1 + m};
    std::vector<CovectorField> forms(diffs[0].begin(), diffs[0].begin() + j[0] + 1);
    forms.insert(forms.end(), diffs[1].begin(), diffs[1].begin() + j[1] + 1);
    const Codistribution span = Codistribution::span(jet, forms, oracle);
    QEntry e;
    e.index = j;
    e.q = restrict_to_support(diffgeo::intersect_with_coordinates(span, states, oracle), sys, oracle);
    e.integrable = diffgeo::is_integrable(e.q, oracle);
    out.push_back(std::move(e));
  }
  return out;
}

SfeReport sfe_gtf_test(const ControlAffineSystem& sys, const OutputPair& phi, const RankOracle& oracle) {
  SfeReport rep;
  rep.K = relative_degree(sys, phi);
  rep.d = flat_indices(sys.n(), rep.K).d;
  rep.sequence = q_sequence(sys, phi, oracle);
  rep.passed = std::all_of(rep.sequence.begin(), rep.sequence.end(),
                           [](const QEntry& e) { return e.integrable; });
  return rep;
}

ProlongedSystem prolong(const ControlAffineSystem& sys, unsigned p1, unsigned p2) {
  const Indices p{p1, p2};
  std::vector<std::string> extra;
  for (int j = 0; j < 2; ++j) {
    for (unsigned k = 0; k < p[j]; ++k) extra.push_back(sys.jet_name(j, k));
  }
  const Chart chart = sys.chart().extended(extra);
  Row f(chart.dim()), g1(chart.dim()), g2(chart.dim());
  for (std::size_t i = 0; i < sys.n(); ++i) {
    f[i] = sys.f()[i];
    if (p1 > 0) f[i] += sys.g1()[i] * RatFunc::symbol(sys.inputs()[0]);
    else g1[i] = sys.g1()[i];
    if (p2 > 0) f[i] += sys.g2()[i] * RatFunc::symbol(sys.inputs()[1]);
    else g2[i] = sys.g2()[i];
  }
  std::array<std::string, 2> inputs;
  for (int j = 0; j < 2; ++j) {
    for (unsigned k = 0; k + 1 < p[j]; ++k) {
      f[*chart.index_of(sys.jet_name(j, k))] = RatFunc::symbol(sys.jet_name(j, k + 1));
    }
    inputs[j] = sys.jet_name(j, p[j]);
  }
  if (p1 > 0) g1[*chart.index_of(sys.jet_name(0, p1 - 1))] = RatFunc(1);
  if (p2 > 0) g2[*chart.index_of(sys.jet_name(1, p2 - 1))] = RatFunc(1);
  ControlAffineSystem out(sys.name(), chart, inputs, VectorField(chart, std::move(f)),
                          VectorField(chart, std::move(g1)), VectorField(chart, std::move(g2)),
                          sys.constraints());
  return ProlongedSystem{p, std::move(out)};
}

FlatVerdict verify_flat_output(const ControlAffineSystem& sys, const OutputPair& phi, const RankOracle& oracle) {
  const Chart& chart = sys.chart();
  if (diffgeo::generic_rank({CovectorField::differential(chart, phi[0]), CovectorField::differential(chart, phi[1])},
                            oracle) < 2) {
    throw DependentDifferentials("differentials of the two components are dependent");
  }
  FlatVerdict v;
  v.K = relative_degree(sys, phi);
  const FlatIndices idx = flat_indices(sys.n(), v.K);
  v.R = idx.R;
  v.d = idx.d;
  const unsigned order = std::max(v.R[0], v.R[1]);
  const Chart jet = sys.jet_chart(order);
  std::vector<CovectorField> forms;
  for (int j = 0; j < 2; ++j) {
    for (const auto& h : output_derivatives(sys, phi[j], v.R[j], order)) {
      forms.push_back(CovectorField::differential(jet, h));
    }
  }
  v.stacked_rank = diffgeo::generic_rank(forms, oracle);
  auto with_dx = forms;
  for (std::size_t i = 0; i < sys.n(); ++i) with_dx.push_back(CovectorField::coordinate(jet, i));
  v.reconstructs_state = diffgeo::generic_rank(with_dx, oracle) == v.stacked_rank;
  v.passed = v.reconstructs_state;
  if (v.passed && v.stacked_rank != sys.n() + v.d) {
    throw InternalDiagnostic("state is recoverable but the output derivatives have rank " +
                             std::to_string(v.stacked_rank) + " instead of n + d = " +
                             std::to_string(sys.n() + v.d));
  }
  return v;
}

GtfCheck gtf_structure_check(const ControlAffineSystem& sys, const std::vector<std::string>& order,
                             const Indices& K) {
  const std::size_t n = sys.n();
  GtfCheck out;
  auto fail = [&](std::string why) {
    out.matches = false;
    out.violation = std::move(why);
    return out;
  };
  if (order.size() != n) return fail("state order is not a permutation of the chart");
  std::vector<std::size_t> pos;  // pos[l] = chart index of z^{l+1}
  std::set<std::string> seen;
  for (const auto& name : order) {
    auto idx = sys.chart().index_of(name);
    if (!idx || !seen.insert(name).second) return fail("state order is not a permutation of the chart");
    pos.push_back(*idx);
  }
  if (K[0] < 1 || K[1] < 1 || K[0] + K[1] > n) return fail("relative degrees inconsistent with n");
  const std::size_t k1 = K[0], k2 = K[1];
  auto z = [&](std::size_t l) { return RatFunc::symbol(sys.chart().coordinate_ids()[pos[l - 1]]); };
  auto zid = [&](std::size_t l) { return sys.chart().coordinate_ids()[pos[l - 1]]; };
  auto F = [&](std::size_t l) -> const RatFunc& { return sys.f()[pos[l - 1]]; };
  auto G1 = [&](std::size_t l) -> const RatFunc& { return sys.g1()[pos[l - 1]]; };
  auto G2 = [&](std::size_t l) -> const RatFunc& { return sys.g2()[pos[l - 1]]; };
  auto label = [](std::size_t l) { return "z^" + std::to_string(l); };

  for (std::size_t l = 1; l < k1; ++l) {
    if (F(l) != z(l + 1) || !G1(l).is_zero() || !G2(l).is_zero())
      return fail("first chain: " + label(l) + "' is not " + label(l + 1));
  }
  if (!F(k1).is_zero() || G1(k1) != RatFunc(1) || !G2(k1).is_zero())
    return fail("first chain: " + label(k1) + "' is not v1");
  for (std::size_t l = k1 + 1; l < k1 + k2; ++l) {
    if (F(l) != z(l + 1) || !G1(l).is_zero() || !G2(l).is_zero())
      return fail("second chain: " + label(l) + "' is not " + label(l + 1));
  }
  bool all_a_zero = true, all_db = true;
  for (std::size_t l = k1 + k2; l < n; ++l) {
    if (!G2(l).is_zero()) return fail("triangular block: " + label(l) + "' depends on v2");
    for (const RatFunc* c : {&F(l), &G1(l)}) {
      for (SymbolId s : c->plain_dependencies()) {
        auto idx = sys.chart().index_of(s);
        if (!idx) continue;  // parameter
        const std::size_t at = std::find(pos.begin(), pos.end(), *idx) - pos.begin() + 1;
        if (at > l + 1) return fail("triangular block: " + label(l) + "' depends on " + label(at));
      }
    }
    if (l == k1 + k2 && G1(l).is_zero()) return fail("triangular block: b^" + std::to_string(l) + " vanishes");
    const bool da = !F(l).derivative(zid(l + 1)).is_zero();
    const bool db = !G1(l).derivative(zid(l + 1)).is_zero();
    if (!da && !db) return fail("triangular block: " + label(l) + "' does not depend on " + label(l + 1));
    all_a_zero = all_a_zero && F(l).is_zero();
    all_db = all_db && db;
  }
  if (!F(n).is_zero() || !G1(n).is_zero() || G2(n) != RatFunc(1)) return fail(label(n) + "' is not v2");
  out.matches = true;
  if (k1 + k2 == n) out.kind = "brunovsky";
  else if (k1 == 1 && k2 == 1 && all_db) out.kind = all_a_zero ? "chained" : "ecf";
  else out.kind = "gtf";
  return out;
}

}  // namespace flatscan::system
