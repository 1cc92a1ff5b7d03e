#include "flatscan/algorithms/algorithms.hpp"

#include <algorithm>

#include "flatscan/diffgeo/integrals.hpp"
#include "flatscan/diffgeo/linalg.hpp"
#include "flatscan/errors.hpp"

namespace flatscan::algorithms {

using diffgeo::contains;
using diffgeo::lie_bracket;
using diffgeo::span_equal;
using symexpr::Poly;

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::A: return "A";
    case Rule::B: return "B";
    case Rule::Ci: return "C-i";
    case Rule::Cii: return "C-ii";
    case Rule::D: return "D";
  }
  return "?";
}

const char* status_name(LeafStatus s) {
  switch (s) {
    case LeafStatus::ReachedTangent: return "reached-tangent-space";
    case LeafStatus::Stalled: return "stalled";
    case LeafStatus::DepthCapped: return "depth-capped";
  }
  return "?";
}

namespace {

// Polynomials in t over the rational-function field, low degree first.
using UPoly = std::vector<RatFunc>;

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly remainder(UPoly a, const UPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const RatFunc q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] = a[k + shift] - q * b[k];
    trim(a);
  }
  return a;
}

UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const RatFunc lead = a.back();
    for (auto& c : a) c = c / lead;
  }
  return a;
}

std::optional<RatFunc> sqrt_of(const RatFunc& r) {
  if (r.is_zero()) return RatFunc(0);
  // r = N/D with N, D coprime: sqrt(r) = sqrt(N D) / D
  auto s = symexpr::square_root(r.numerator() * r.denominator());
  if (!s) return std::nullopt;
  return RatFunc::fraction(*s, r.denominator());
}

VectorField primitive_field(const VectorField& v) {
  return VectorField(v.chart(), diffgeo::primitive(v.components()));
}

// Two fields of d1 completing d0 to d1, in basis order.
std::pair<VectorField, VectorField> complement_pair(const Distribution& d0, const Distribution& d1,
                                                    const RankOracle& oracle) {
  std::vector<VectorField> acc = d0.basis();
  std::vector<VectorField> picked;
  std::size_t r = acc.size();
  for (const auto& v : d1.basis()) {
    acc.push_back(v);
    const std::size_t next = diffgeo::generic_rank(acc, oracle);
    if (next > r) {
      picked.push_back(v);
      r = next;
      if (picked.size() == 2) break;
    } else {
      acc.pop_back();
    }
  }
  if (picked.size() != 2) throw AssumptionViolation("D1 does not add two directions to D0");
  return {picked[0], picked[1]};
}

}  // namespace

std::optional<std::string> lemma1_violation(const VectorField& f, const Distribution& d0, const Distribution& d1,
                                            const Distribution& d2, const RankOracle& oracle) {
  if (!contains(d1, d0, oracle) || d1.rank() != d0.rank() + 2) return "D0 is not a corank-2 subdistribution of D1";
  if (!contains(d2, d1, oracle) || d2.rank() != d1.rank() + 2) return "D1 is not a corank-2 subdistribution of D2";
  if (!diffgeo::is_involutive(d1, oracle)) return "D1 is not involutive";
  if (contains(diffgeo::cauchy_characteristic(d2, oracle), d1, oracle)) return "D1 lies in C(D2)";
  for (const auto& v : d0.basis()) {
    if (!contains(d1, lie_bracket(f, v), oracle)) return "[f, D0] is not contained in D1";
  }
  if (!span_equal(d2, diffgeo::add_drift_brackets(d1, f, oracle), oracle)) return "D2 differs from D1 + [f, D1]";
  return std::nullopt;
}

Lemma1Result lemma1_candidates(const VectorField& f, const Distribution& d0, const Distribution& d1,
                               const Distribution& d2, const VectorField& v1, const VectorField& v2,
                               const RankOracle& oracle) {
  if (auto why = lemma1_violation(f, d0, d1, d2, oracle)) throw AssumptionViolation(*why);
  if (!span_equal(diffgeo::add(d0, {v1, v2}, oracle), d1, oracle))
    throw AssumptionViolation("D1 is not D0 + span{v1, v2}");

  Lemma1Result out;
  out.v1 = v1;
  out.v2 = v2;
  const VectorField t11 = lie_bracket(v1, lie_bracket(v1, f));
  const VectorField t12 = lie_bracket(v1, lie_bracket(v2, f));
  const VectorField t22 = lie_bracket(v2, lie_bracket(v2, f));
  const Codistribution perp = diffgeo::annihilator(d2, oracle);
  bool all_c_zero = true, all_zero = true;
  for (const auto& w : perp.basis()) {
    out.a.push_back(w.apply(t11));
    out.b.push_back(w.apply(t12) * RatFunc(2));
    out.c.push_back(w.apply(t22));
    all_c_zero = all_c_zero && out.c.back().is_zero();
    all_zero = all_zero && out.a.back().is_zero() && out.b.back().is_zero() && out.c.back().is_zero();
  }
  if (all_zero) {
    out.degenerate = true;
    out.alphas = {{RatFunc(1), RatFunc(0)}, {RatFunc(0), RatFunc(1)}};
  } else {
    // alpha = (1, t): common roots of a_k + b_k t + c_k t^2
    UPoly g;
    for (std::size_t k = 0; k < out.a.size(); ++k) g = gcd(g, UPoly{out.a[k], out.b[k], out.c[k]});
    if (g.size() == 2) {
      out.alphas.push_back({RatFunc(1), -g[0] / g[1]});
    } else if (g.size() == 3) {
      const RatFunc disc = g[1] * g[1] - RatFunc(4) * g[0] * g[2];
      if (auto s = sqrt_of(disc)) {
        const RatFunc den = RatFunc(2) * g[2];
        out.alphas.push_back({RatFunc(1), (-g[1] + *s) / den});
        if (!s->is_zero()) out.alphas.push_back({RatFunc(1), (-g[1] - *s) / den});
      }
    }
    if (all_c_zero) out.alphas.push_back({RatFunc(0), RatFunc(1)});
  }
  for (const auto& al : out.alphas) out.candidates.push_back(primitive_field(v1 * al[0] + v2 * al[1]));
  return out;
}

namespace {

struct Runner {
  const ControlAffineSystem& sys;
  const RankOracle& oracle;
  int algorithm;
  Algorithm2Options options;
  std::size_t cap;
  std::vector<Branch> leaves;

  Distribution advance(const Distribution& d, bool involutive) const {
    return involutive ? diffgeo::add_drift_brackets(d, sys.f(), oracle) : diffgeo::derived(d, oracle);
  }

  static void patch_last(Branch& br, const Distribution& replacement) {
    if (br.steps.empty()) return;
    StepRecord& last = br.steps.back();
    last.output = replacement;
    last.corank = replacement.rank() - last.input.rank();
    br.sequence.back() = replacement;
  }

  void finish(Branch br, LeafStatus status) {
    br.status = status;
    for (const auto& other : leaves) {
      if (other.sequence.size() != br.sequence.size()) continue;
      bool same = true;
      for (std::size_t k = 0; k < br.sequence.size() && same; ++k) {
        same = span_equal(other.sequence[k], br.sequence[k], oracle);
      }
      if (same) return;  // duplicate branch
    }
    leaves.push_back(std::move(br));
  }

  // Appends the step, then keeps exploring; returns when the branch ends.
  void commit(Branch br, StepRecord rec) {
    rec.corank = rec.output.rank() - rec.input.rank();
    const bool stalled = rec.output.rank() == rec.input.rank();
    Distribution next = rec.output;
    br.steps.push_back(std::move(rec));
    if (stalled) {
      finish(std::move(br), LeafStatus::Stalled);
      return;
    }
    br.sequence.push_back(std::move(next));
    explore(std::move(br));
  }

  void explore(Branch br) {
    while (true) {
      const Distribution d = br.sequence.back();
      const std::size_t i = br.sequence.size();
      if (d.is_full()) return finish(std::move(br), LeafStatus::ReachedTangent);
      if (br.steps.size() >= cap) return finish(std::move(br), LeafStatus::DepthCapped);

      StepRecord rec;
      rec.index = i;
      rec.input = d;
      rec.involutive = diffgeo::is_involutive(d, oracle);
      if (rec.involutive) {
        rec.rule = Rule::A;
        rec.output = advance(d, true);
        return commit(std::move(br), std::move(rec));
      }
      const Distribution cauchy = diffgeo::cauchy_characteristic(d, oracle);
      rec.cauchy = cauchy;
      if (algorithm == 1) {
        rec.rule = Rule::B;
        rec.output = advance(d, false);
        return commit(std::move(br), std::move(rec));
      }

      const Distribution prev = i >= 2 ? br.sequence[i - 2] : Distribution::empty(d.chart());
      if (span_equal(cauchy, prev, oracle)) {
        rec.rule = Rule::B;
        rec.output = advance(d, false);
        return commit(std::move(br), std::move(rec));
      }

      std::optional<std::string> why;
      Distribution d0, d1;
      if (i < 2) {
        why = "no predecessor distribution";
      } else {
        d1 = br.sequence[i - 2];
        d0 = i > 2 ? diffgeo::intersect(cauchy, br.sequence[i - 3], oracle) : Distribution::empty(d.chart());
        why = lemma1_violation(sys.f(), d0, d1, d, oracle);
      }
      if (why) {
        rec.rule = Rule::D;
        rec.note = *why;
        rec.output = advance(d, false);
        return commit(std::move(br), std::move(rec));
      }

      auto [v1, v2] = complement_pair(d0, d1, oracle);
      Lemma1Result lem = lemma1_candidates(sys.f(), d0, d1, d, v1, v2, oracle);
      rec.lemma = lem;
      struct Child {
        std::size_t k;
        Distribution replacement;
      };
      std::vector<Child> children;
      for (std::size_t k = 0; k < lem.candidates.size(); ++k) {
        const VectorField bracket = lie_bracket(sys.f(), lem.candidates[k]);
        if (contains(d1, bracket, oracle)) continue;  // would not advance
        Distribution rep = diffgeo::add(d1, {bracket}, oracle);
        const bool dup = std::any_of(children.begin(), children.end(), [&](const Child& c) {
          return span_equal(c.replacement, rep, oracle);
        });
        if (!dup) children.push_back({k, std::move(rep)});
      }
      if (children.empty()) {
        rec.rule = Rule::Cii;
        rec.note = lem.candidates.empty() ? "no admissible v_c" : "every v_c adds nothing to D_{i-1}";
        rec.output = advance(d, false);
        return commit(std::move(br), std::move(rec));
      }
      const bool branching = children.size() > 1 || options.fork_closure;
      for (std::size_t c = 0; c < children.size(); ++c) {
        Branch child = br;
        if (branching) child.path += (child.path.empty() ? "" : ".") + std::to_string(c + 1);
        patch_last(child, children[c].replacement);
        StepRecord r = rec;
        r.rule = Rule::Ci;
        r.replaced = d;
        r.input = children[c].replacement;
        r.chosen = children[c].k;
        r.output = advance(r.input, diffgeo::is_involutive(r.input, oracle));
        commit(std::move(child), std::move(r));
      }
      if (options.fork_closure) {
        Branch child = br;
        child.path += (child.path.empty() ? "" : ".") + std::to_string(children.size() + 1);
        StepRecord r = rec;
        r.rule = Rule::D;
        r.note = "closure branch forked next to C-i";
        r.output = advance(d, false);
        commit(std::move(child), std::move(r));
      }
      return;
    }
  }
};

BranchTree run(const ControlAffineSystem& sys, const RankOracle& oracle, int algorithm,
               const Algorithm2Options& options) {
  const Distribution root = Distribution::span(sys.chart(), {sys.g1(), sys.g2()}, oracle);
  Runner runner{sys, oracle, algorithm, options, options.depth_cap ? options.depth_cap : 2 * sys.n(), {}};
  Branch trunk;
  trunk.sequence.push_back(root);
  runner.explore(std::move(trunk));
  BranchTree tree;
  tree.algorithm = algorithm;
  tree.root = root;
  tree.leaves = std::move(runner.leaves);
  return tree;
}

}  // namespace

BranchTree run_algorithm1(const ControlAffineSystem& sys, const RankOracle& oracle, std::size_t depth_cap) {
  Algorithm2Options opts;
  opts.depth_cap = depth_cap;
  return run(sys, oracle, 1, opts);
}

BranchTree run_algorithm2(const ControlAffineSystem& sys, const RankOracle& oracle,
                          const Algorithm2Options& options) {
  return run(sys, oracle, 2, options);
}

std::vector<LeafCandidates> extract_candidates(const BranchTree& tree, const ControlAffineSystem& sys,
                                               const RankOracle& oracle) {
  std::vector<LeafCandidates> out;
  for (const auto& leaf : tree.leaves) {
    if (leaf.status != LeafStatus::ReachedTangent) continue;
    LeafCandidates lc;
    lc.path = leaf.path;
    if (leaf.sequence.size() < 2) {
      lc.note = "D_1 is already the tangent space";
      out.push_back(std::move(lc));
      continue;
    }
    const Distribution& last = leaf.sequence[leaf.sequence.size() - 2];
    if (diffgeo::is_involutive(last, oracle)) {
      lc.F = last;
    } else {
      lc.F = diffgeo::cauchy_characteristic(last, oracle);
      lc.from_cauchy = true;
    }
    if (lc.F.is_empty()) {
      lc.note = "F is empty";
      out.push_back(std::move(lc));
      continue;
    }
    lc.F_perp = diffgeo::annihilator(lc.F, oracle);
    try {
      auto integrals = diffgeo::first_integrals(lc.F_perp, oracle);
      lc.functions = std::move(integrals.functions);
      lc.shortfall = integrals.shortfall;
    } catch (const NotIntegrableError& e) {
      lc.note = e.what();
    }
    const std::size_t c = lc.functions.size();
    if (lc.shortfall > 0) lc.note = "first integrals incomplete; raw annihilator basis reported";
    if (c >= 2 && c <= 4) {
      for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t b = a + 1; b < c; ++b) {
          CandidatePair pair;
          pair.phi = {lc.functions[a], lc.functions[b]};
          try {
            pair.verdict = system::verify_flat_output(sys, pair.phi, oracle);
          } catch (const Error& e) {
            pair.error = e.what();
          }
          lc.pairs.push_back(std::move(pair));
        }
      }
    } else if (c > 4) {
      lc.note = "more than four functions; pairing left to the caller";
    }
    out.push_back(std::move(lc));
  }
  return out;
}

}  // namespace flatscan::algorithms
