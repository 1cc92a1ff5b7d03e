#include <gtest/gtest.h>

#include <random>
#include <set>

#include "../support/systems.hpp"
#include "flatscan/algorithms/algorithms.hpp"
#include "flatscan/diffgeo/integrals.hpp"
#include "flatscan/errors.hpp"

using namespace flatscan;
using namespace flatscan::algorithms;
using diffgeo::CovectorField;
using symexpr::parse_ratfunc;
namespace sys_ = flatscan::testing;

namespace {

VectorField unit(const symexpr::Chart& chart, const std::string& name) {
  std::vector<std::string> comps(chart.dim(), "0");
  comps[*chart.index_of(name)] = "1";
  return VectorField::parse(chart, comps);
}

Codistribution forms(const symexpr::Chart& chart, const std::vector<std::vector<std::string>>& rows,
                     const RankOracle& o) {
  std::vector<CovectorField> out;
  for (const auto& r : rows) {
    diffgeo::Row c;
    for (const auto& e : r) c.push_back(parse_ratfunc(e, chart));
    out.emplace_back(chart, c);
  }
  return Codistribution::span(chart, out, o);
}

std::vector<std::size_t> ranks(const Branch& b) {
  std::vector<std::size_t> r;
  for (const auto& d : b.sequence) r.push_back(d.rank());
  return r;
}

std::vector<std::string> tags(const Branch& b) {
  std::vector<std::string> t;
  for (const auto& s : b.steps) t.emplace_back(rule_name(s.rule));
  return t;
}

std::vector<std::size_t> coranks(const Branch& b) {
  std::vector<std::size_t> c;
  for (const auto& s : b.steps) c.push_back(s.corank);
  return c;
}

void expect_records_consistent(const BranchTree& tree, const RankOracle& o) {
  for (const auto& leaf : tree.leaves) {
    ASSERT_EQ(leaf.steps.size() + 1, leaf.sequence.size() + (leaf.status == LeafStatus::Stalled ? 1 : 0));
    for (const auto& s : leaf.steps) {
      EXPECT_TRUE(diffgeo::contains(s.output, s.input, o));
      EXPECT_EQ(s.rule == Rule::A, s.involutive);
      if (leaf.status != LeafStatus::Stalled || &s != &leaf.steps.back()) EXPECT_GT(s.output.rank(), s.input.rank());
    }
    if (leaf.status == LeafStatus::ReachedTangent) EXPECT_TRUE(leaf.sequence.back().is_full());
  }
}

// Leaves of two runs match when every leaf has a partner with span-equal
// distributions at every step.
bool same_leaves(const BranchTree& a, const BranchTree& b, const RankOracle& o) {
  if (a.leaves.size() != b.leaves.size()) return false;
  for (const auto& la : a.leaves) {
    bool found = false;
    for (const auto& lb : b.leaves) {
      if (la.sequence.size() != lb.sequence.size() || la.status != lb.status) continue;
      bool same = true;
      for (std::size_t k = 0; k < la.sequence.size() && same; ++k) {
        same = diffgeo::span_equal(la.sequence[k], lb.sequence[k], o);
      }
      found = found || same;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST(Algorithm1, Vtol) {
  auto sys = sys_::vtol();
  auto o = sys.oracle();
  auto tree = run_algorithm1(sys, o);
  ASSERT_EQ(tree.leaves.size(), 1u);
  const auto& leaf = tree.leaves[0];
  EXPECT_EQ(ranks(leaf), (std::vector<std::size_t>{2, 4, 6}));
  EXPECT_EQ(tags(leaf), (std::vector<std::string>{"A", "B"}));
  EXPECT_FALSE(leaf.steps[1].involutive);
  ASSERT_TRUE(leaf.steps[1].cauchy);
  EXPECT_TRUE(leaf.steps[1].cauchy->is_empty());
  auto cands = extract_candidates(tree, sys, o);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_TRUE(cands[0].F.is_empty());
  EXPECT_TRUE(cands[0].pairs.empty());
  expect_records_consistent(tree, o);
}

TEST(Algorithm1, ChainedFormIsCorankOneNonInvolutive) {
  auto sys = sys_::chained5();
  auto o = sys.oracle();
  auto tree = run_algorithm1(sys, o);
  ASSERT_EQ(tree.leaves.size(), 1u);
  const auto& leaf = tree.leaves[0];
  EXPECT_EQ(ranks(leaf), (std::vector<std::size_t>{2, 3, 4, 5}));
  for (const auto& s : leaf.steps) {
    EXPECT_FALSE(s.involutive);
    EXPECT_EQ(s.corank, 1u);
  }
  auto cands = extract_candidates(tree, sys, o);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_TRUE(cands[0].from_cauchy);
  EXPECT_TRUE(diffgeo::span_equal(cands[0].F_perp, forms(sys.chart(), {{"1", "0", "0", "0", "0"},
                                                                          {"0", "1", "0", "0", "0"},
                                                                          {"0", "0", "1", "0", "0"}}, o),
                                  o));
  bool any = false;
  for (const auto& p : cands[0].pairs) any = any || p.passed();
  EXPECT_TRUE(any);
}

TEST(Algorithm1, BrunovskyAllInvolutive) {
  auto sys = sys_::brunovsky22();
  auto o = sys.oracle();
  auto tree = run_algorithm1(sys, o);
  ASSERT_EQ(tree.leaves.size(), 1u);
  EXPECT_EQ(tags(tree.leaves[0]), (std::vector<std::string>{"A"}));
  auto cands = extract_candidates(tree, sys, o);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_FALSE(cands[0].from_cauchy);
  EXPECT_TRUE(diffgeo::span_equal(cands[0].F, tree.leaves[0].sequence[0], o));
  ASSERT_EQ(cands[0].pairs.size(), 1u);
  EXPECT_TRUE(cands[0].pairs[0].passed());
}

TEST(Algorithm1, StallAndDepthCap) {
  // x3 never moves: the sequence stops at rank 2 of 3.
  auto stalled = sys_::make_system("stall", {"x1", "x2", "x3"}, {}, {"0", "0", "0"}, {"1", "0", "0"},
                                      {"0", "1", "0"});
  auto o = stalled.oracle();
  auto tree = run_algorithm1(stalled, o);
  ASSERT_EQ(tree.leaves.size(), 1u);
  EXPECT_EQ(tree.leaves[0].status, LeafStatus::Stalled);
  EXPECT_TRUE(extract_candidates(tree, stalled, o).empty());

  auto sys = sys_::chained5();
  auto o2 = sys.oracle();
  auto capped = run_algorithm1(sys, o2, 1);
  ASSERT_EQ(capped.leaves.size(), 1u);
  EXPECT_EQ(capped.leaves[0].status, LeafStatus::DepthCapped);
}

TEST(Lemma1, VtolCrossTermOnly) {
  auto sys = sys_::vtol();
  auto o = sys.oracle();
  auto d0 = Distribution::empty(sys.chart());
  auto d1 = Distribution::span(sys.chart(), {sys.g1(), sys.g2()}, o);
  auto d2 = diffgeo::add_drift_brackets(d1, sys.f(), o);
  EXPECT_FALSE(lemma1_violation(sys.f(), d0, d1, d2, o));
  auto lem = lemma1_candidates(sys.f(), d0, d1, d2, sys.g1(), sys.g2(), o);
  for (std::size_t k = 0; k < lem.a.size(); ++k) {
    EXPECT_TRUE(lem.a[k].is_zero());
    EXPECT_TRUE(lem.c[k].is_zero());
  }
  bool cross = false;
  for (const auto& b : lem.b) cross = cross || !b.is_zero();
  EXPECT_TRUE(cross);
  ASSERT_EQ(lem.candidates.size(), 2u);
  EXPECT_TRUE(diffgeo::span_equal(Distribution::span(sys.chart(), {lem.candidates[0]}, o),
                                  Distribution::span(sys.chart(), {sys.g1()}, o), o));
  EXPECT_TRUE(diffgeo::span_equal(Distribution::span(sys.chart(), {lem.candidates[1]}, o),
                                  Distribution::span(sys.chart(), {sys.g2()}, o), o));
}

TEST(Lemma1, ExampleThreeUniqueSolutions) {
  auto sys = sys_::example3();
  auto o = sys.oracle();
  const auto& c = sys.chart();
  auto d1 = Distribution::span(c, {sys.g1(), sys.g2()}, o);
  auto d2 = diffgeo::add_drift_brackets(d1, sys.f(), o);
  auto step2 = lemma1_candidates(sys.f(), Distribution::empty(c), d1, d2, sys.g1(), sys.g2(), o);
  ASSERT_EQ(step2.alphas.size(), 1u);
  EXPECT_TRUE(step2.alphas[0][0].is_zero());
  EXPECT_EQ(step2.candidates[0], unit(c, "z7"));

  auto e1 = Distribution::span(c, {unit(c, "z7")}, o);
  auto e2 = Distribution::span(c, {sys.g1(), unit(c, "z7"), unit(c, "z6")}, o);
  auto e3 = diffgeo::add_drift_brackets(e2, sys.f(), o);
  auto step3 = lemma1_candidates(sys.f(), e1, e2, e3, sys.g1(), unit(c, "z6"), o);
  ASSERT_EQ(step3.alphas.size(), 1u);
  EXPECT_TRUE(step3.alphas[0][0].is_zero());
  EXPECT_EQ(step3.candidates[0], unit(c, "z6"));
}

TEST(Lemma1, ViolationsAreNamed) {
  auto sys = sys_::chained5();
  auto o = sys.oracle();
  auto d1 = Distribution::span(sys.chart(), {sys.g1(), sys.g2()}, o);
  auto d2 = diffgeo::derived(d1, o);
  auto why = lemma1_violation(sys.f(), Distribution::empty(sys.chart()), d1, d2, o);
  ASSERT_TRUE(why);
  EXPECT_THROW(lemma1_candidates(sys.f(), Distribution::empty(sys.chart()), d1, d2, sys.g1(), sys.g2(), o),
               AssumptionViolation);

  auto ex = sys_::example3();
  auto o3 = ex.oracle();
  auto e1 = Distribution::span(ex.chart(), {ex.g1(), ex.g2()}, o3);
  auto e2 = diffgeo::add_drift_brackets(e1, ex.f(), o3);
  // v1, v2 must complete D0 to D1
  EXPECT_THROW(lemma1_candidates(ex.f(), Distribution::empty(ex.chart()), e1, e2, ex.g1(), ex.g1() * 2, o3),
               AssumptionViolation);
}

TEST(Algorithm2, VtolTwoBranches) {
  auto sys = sys_::vtol();
  auto o = sys.oracle();
  auto tree = run_algorithm2(sys, o);
  ASSERT_EQ(tree.leaves.size(), 2u);
  for (const auto& leaf : tree.leaves) {
    EXPECT_EQ(leaf.status, LeafStatus::ReachedTangent);
    EXPECT_EQ(ranks(leaf), (std::vector<std::size_t>{2, 3, 4, 6}));
    EXPECT_EQ(tags(leaf), (std::vector<std::string>{"A", "C-i", "A"}));
  }
  const auto& c = sys.chart();
  auto branch_a = forms(c, {{"0", "0", "0", "0", "1", "0"}, {"cos(theta)", "0", "sin(theta)", "0", "0", "0"}}, o);
  auto branch_b =
      forms(c, {{"1", "0", "0", "0", "-eps*cos(theta)", "0"}, {"0", "0", "1", "0", "-eps*sin(theta)", "0"}}, o);
  auto cands = extract_candidates(tree, sys, o);
  ASSERT_EQ(cands.size(), 2u);
  bool seen_a = false, seen_b = false;
  int passing = 0;
  for (const auto& lc : cands) {
    seen_a = seen_a || diffgeo::span_equal(lc.F_perp, branch_a, o);
    seen_b = seen_b || diffgeo::span_equal(lc.F_perp, branch_b, o);
    for (const auto& p : lc.pairs) passing += p.passed();
  }
  EXPECT_TRUE(seen_a);
  EXPECT_TRUE(seen_b);
  EXPECT_EQ(passing, 1);
  expect_records_consistent(tree, o);
}

TEST(Algorithm2, ExampleThreeTrace) {
  auto sys = sys_::example3();
  auto o = sys.oracle();
  auto tree = run_algorithm2(sys, o);
  ASSERT_EQ(tree.leaves.size(), 1u);
  const auto& leaf = tree.leaves[0];
  EXPECT_EQ(tags(leaf), (std::vector<std::string>{"A", "C-i", "C-i", "A"}));
  EXPECT_EQ(coranks(leaf), (std::vector<std::size_t>{1, 1, 1, 2}));
  ASSERT_TRUE(leaf.steps[1].cauchy);
  EXPECT_TRUE(diffgeo::span_equal(*leaf.steps[1].cauchy, Distribution::span(sys.chart(), {unit(sys.chart(), "z7")}, o),
                                  o));
  EXPECT_EQ(leaf.steps[1].lemma->candidates[*leaf.steps[1].chosen], unit(sys.chart(), "z7"));
  EXPECT_EQ(leaf.steps[2].lemma->candidates[*leaf.steps[2].chosen], unit(sys.chart(), "z6"));
  ASSERT_TRUE(leaf.steps[1].replaced);
  EXPECT_EQ(leaf.steps[1].replaced->rank(), 4u);
  auto cands = extract_candidates(tree, sys, o);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_TRUE(diffgeo::span_equal(cands[0].F_perp, forms(sys.chart(), {{"1", "0", "0", "0", "0", "0", "0"},
                                                                         {"0", "0", "1", "0", "0", "0", "0"}}, o),
                                  o));
  ASSERT_EQ(cands[0].pairs.size(), 1u);
  ASSERT_TRUE(cands[0].pairs[0].passed());
  EXPECT_EQ(cands[0].pairs[0].verdict->K, (system::Indices{2, 2}));
  EXPECT_EQ(cands[0].pairs[0].verdict->d, 3u);
  expect_records_consistent(tree, o);
}

TEST(Algorithm2, MatchesAlgorithm1WhenOnlyAFires) {
  auto sys = sys_::brunovsky22();
  auto o = sys.oracle();
  auto a1 = run_algorithm1(sys, o);
  auto a2 = run_algorithm2(sys, o);
  EXPECT_TRUE(same_leaves(a1, a2, o));
  EXPECT_EQ(tags(a2.leaves[0]), tags(a1.leaves[0]));
}

TEST(Algorithm2, ForkClosureAddsBranch) {
  auto sys = sys_::example3();
  auto o = sys.oracle();
  Algorithm2Options opts;
  opts.fork_closure = true;
  auto tree = run_algorithm2(sys, o, opts);
  EXPECT_GT(tree.leaves.size(), 1u);
  std::set<std::string> paths;
  for (const auto& l : tree.leaves) paths.insert(l.path);
  EXPECT_EQ(paths.size(), tree.leaves.size());
  expect_records_consistent(tree, o);
}

// Chained and extended chained forms: closure steps drive both algorithms to
// the same terminal codistribution.
TEST(Properties, EcfSameTerminalCodistribution) {
  std::vector<ControlAffineSystem> systems = {
      sys_::chained5(),
      sys_::make_system("ecf", {"z1", "z2", "z3", "z4", "z5"}, {}, {"0", "z1^2", "z2", "0", "0"},
                           {"1", "z3", "z4", "z5", "0"}, {"0", "0", "0", "0", "1"}),
  };
  for (const auto& sys : systems) {
    auto o = sys.oracle();
    auto c1 = extract_candidates(run_algorithm1(sys, o), sys, o);
    auto c2 = extract_candidates(run_algorithm2(sys, o), sys, o);
    ASSERT_EQ(c1.size(), 1u) << sys.name();
    ASSERT_EQ(c2.size(), 1u) << sys.name();
    EXPECT_TRUE(diffgeo::span_equal(c1[0].F_perp, c2[0].F_perp, o)) << sys.name();
  }
}

TEST(Properties, FeedbackInvariance) {
  const std::vector<ControlAffineSystem> systems = {sys_::vtol(), sys_::example3(), sys_::chained5(),
                                                    sys_::brunovsky22(), sys_::example1()};
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto& base = systems[seed % systems.size()];
    auto fb = sys_::random_feedback(base, 1000 + seed);
    auto o = base.oracle();
    for (int alg : {1, 2}) {
      auto ref = alg == 1 ? run_algorithm1(base, o) : run_algorithm2(base, o);
      auto moved = alg == 1 ? run_algorithm1(fb.system, o) : run_algorithm2(fb.system, o);
      EXPECT_TRUE(same_leaves(ref, moved, o)) << base.name() << " alg " << alg << " " << fb.description;
      ++compared;
    }
  }
  EXPECT_EQ(compared, 40);
}

TEST(Properties, Lemma1NeverMoreThanTwo) {
  std::mt19937_64 rng(99);
  auto coin = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto linear = [&]() {
    return "(" + std::to_string(coin(-2, 2)) + "*x5 + " + std::to_string(coin(-2, 2)) + "*x6)";
  };
  int checked = 0, pairs = 0;
  for (int trial = 0; trial < 40; ++trial) {
    // D0 = {}, D1 = span{d_x5, d_x6}; the quadratic coefficients are the
    // Hessians of x3' and x4' in (x5, x6)
    std::vector<std::string> f = {"x5", "x6", linear() + "*" + linear(), linear() + "*" + linear(), "0", "0"};
    auto sys = sys_::make_system("quad", {"x1", "x2", "x3", "x4", "x5", "x6"}, {}, f,
                                 {"0", "0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "0", "1"});
    auto o = sys.oracle();
    auto d0 = Distribution::empty(sys.chart());
    auto d1 = Distribution::span(sys.chart(), {sys.g1(), sys.g2()}, o);
    auto d2 = diffgeo::add_drift_brackets(d1, sys.f(), o);
    if (lemma1_violation(sys.f(), d0, d1, d2, o)) continue;
    auto lem = lemma1_candidates(sys.f(), d0, d1, d2, sys.g1(), sys.g2(), o);
    EXPECT_LE(lem.candidates.size(), 2u);
    if (lem.candidates.size() == 2) {
      EXPECT_EQ(diffgeo::generic_rank(lem.candidates, o), 2u);
      ++pairs;
    }
    ++checked;
  }
  EXPECT_GE(checked, 10);
  EXPECT_GE(pairs, 1);
}

namespace {

// Random system in the general triangular form: chains z1..z_k1 and
// z_{k1+1}..z_{k1+k2}, a tail of length m ending in z_n' = v2. Tail rows read
// z_l' = z_{l+1} + a_l + b_l v1 with a_l, b_l polynomial in z_1..z_l.
ControlAffineSystem random_gtf(std::mt19937_64& rng) {
  auto coin = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int k1 = coin(2, 3), k2 = coin(1, 2), m = coin(3, 4);
  const int n = k1 + k2 + m - 1;
  std::vector<std::string> names, f(n, "0"), g1(n, "0"), g2(n, "0");
  for (int i = 1; i <= n; ++i) names.push_back("z" + std::to_string(i));
  auto z = [&](int i) { return names[i - 1]; };
  for (int i = 1; i < k1; ++i) f[i - 1] = z(i + 1);
  g1[k1 - 1] = "1";
  for (int i = k1 + 1; i < k1 + k2; ++i) f[i - 1] = z(i + 1);
  auto term = [&](int upto) {
    const int c = coin(-2, 2);
    if (c == 0) return std::string("0");
    return std::to_string(c) + "*" + z(coin(1, upto)) + "*" + z(coin(1, upto));
  };
  for (int l = k1 + k2; l < n; ++l) {
    f[l - 1] = z(l + 1) + " + " + term(l);
    g1[l - 1] = l == k1 + k2 ? std::to_string(coin(1, 2)) + " + " + term(l) : term(l);
  }
  g2[n - 1] = "1";
  return sys_::make_system("gtf", names, {}, f, g1, g2, {"v1", "v2"});
}

}  // namespace

TEST(Properties, GtfOracleForCandidateDirection) {
  std::mt19937_64 rng(2024);
  int accepted = 0, tries = 0;
  while (accepted < 10 && tries < 400) {
    ++tries;
    auto sys = random_gtf(rng);
    auto o = sys.oracle();
    const auto& c = sys.chart();
    const std::size_t n = sys.n();
    std::vector<Distribution> d = {Distribution::span(c, {sys.g1(), sys.g2()}, o)};
    while (diffgeo::is_involutive(d.back(), o) && !d.back().is_full()) {
      d.push_back(diffgeo::add_drift_brackets(d.back(), sys.f(), o));
    }
    if (d.size() < 2 || d.back().is_full()) continue;
    const std::size_t p = d.size() - 1;  // D_1..D_p involutive, D_{p+1} not
    const Distribution d0 = p >= 2 ? d[p - 2] : Distribution::empty(c);
    if (lemma1_violation(sys.f(), d0, d[p - 1], d[p], o)) continue;
    const VectorField v = unit(c, "z" + std::to_string(n - (p - 1)));
    const VectorField second = lie_bracket(v, lie_bracket(v, sys.f()));
    EXPECT_TRUE(diffgeo::contains(d[p], second, o)) << "p=" << p;
    // the solver finds a candidate collinear with v modulo D0
    std::vector<VectorField> basis = d0.basis();
    VectorField v1 = sys.g1();
    for (const auto& w : d[p - 1].basis()) {
      if (diffgeo::generic_rank(std::vector<VectorField>{w, v}, o) == 2 &&
          !diffgeo::contains(diffgeo::add(d0, {v}, o), w, o)) {
        v1 = w;
        break;
      }
    }
    auto lem = lemma1_candidates(sys.f(), d0, d[p - 1], d[p], v1, v, o);
    bool found = false;
    for (const auto& cand : lem.candidates) {
      found = found || diffgeo::span_equal(diffgeo::add(d0, {cand}, o), diffgeo::add(d0, {v}, o), o);
    }
    EXPECT_TRUE(found || lem.degenerate) << "p=" << p;
    ++accepted;
  }
  EXPECT_EQ(accepted, 10) << "generated " << tries;
}
