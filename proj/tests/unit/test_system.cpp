#include <gtest/gtest.h>

#include "../support/systems.hpp"
#include "flatscan/errors.hpp"
#include "flatscan/kernels/kernels.hpp"

using namespace flatscan;
using namespace flatscan::system;
using flatscan::testing::parse_pair;
using symexpr::parse_ratfunc;

namespace {

Codistribution span_of(const Chart& chart, const std::vector<std::vector<std::string>>& rows,
                       const RankOracle& o) {
  std::vector<CovectorField> forms;
  for (const auto& r : rows) {
    diffgeo::Row coeffs;
    for (const auto& c : r) coeffs.push_back(parse_ratfunc(c, chart));
    forms.emplace_back(chart, coeffs);
  }
  return Codistribution::span(chart, forms, o);
}

// Span equality after moving both sides onto a shared chart.
bool same_span(const Codistribution& a, const Codistribution& b, const Chart& common, const RankOracle& o) {
  std::vector<CovectorField> fa, fb;
  for (const auto& w : a.basis()) fa.push_back(embed(w, common));
  for (const auto& w : b.basis()) fb.push_back(embed(w, common));
  return diffgeo::span_equal(Codistribution::span(common, fa, o), Codistribution::span(common, fb, o), o);
}

// Pointwise oracle for Q under u = alpha + beta w: the base Q evaluated at
// (x, u(x, w)) and the transformed Q evaluated at (x, w) have the same row
// space on the state columns. Both live inside span{dx}.
bool same_under_feedback(const Codistribution& base, const Codistribution& moved,
                         const flatscan::testing::Feedback& fb, const ControlAffineSystem& sys) {
  for (std::uint64_t idx = 0; idx < 3; ++idx) {
    const auto gen = symexpr::SamplePoint::generated(77, idx);
    std::map<std::string, mpq_class> xw;
    for (const auto& name : sys.chart().coordinates()) xw[name] = gen.value(symexpr::intern(name));
    for (const auto& name : sys.chart().parameters()) xw[name] = gen.value(symexpr::intern(name));
    const auto pw = symexpr::SamplePoint::from_values(xw);
    std::array<mpq_class, 2> w{gen.value(symexpr::intern(sys.inputs()[0])), gen.value(symexpr::intern(sys.inputs()[1]))};
    xw[sys.inputs()[0]] = w[0];
    xw[sys.inputs()[1]] = w[1];
    const auto pmoved = symexpr::SamplePoint::from_values(xw);
    auto xu = xw;
    for (int j = 0; j < 2; ++j) {
      xu[sys.inputs()[j]] = symexpr::eval_at(fb.alpha[j], pw) + symexpr::eval_at(fb.beta[j][0], pw) * w[0] +
                            symexpr::eval_at(fb.beta[j][1], pw) * w[1];
    }
    const auto pbase = symexpr::SamplePoint::from_values(xu);
    const std::size_t n = sys.n();
    auto rows = [&](const Codistribution& q, const symexpr::SamplePoint& p, kernels::QMatrix& m) {
      for (const auto& w : q.basis()) {
        for (std::size_t i = 0; i < n; ++i) m.data.push_back(symexpr::eval_at(w[i], p));
        for (std::size_t i = n; i < w.dim(); ++i) {
          if (!w[i].is_zero()) return false;
        }
        ++m.rows;
      }
      return true;
    };
    kernels::QMatrix a(0, n), b(0, n), both(0, n);
    if (!rows(base, pbase, a) || !rows(moved, pmoved, b)) return false;
    if (!rows(base, pbase, both) || !rows(moved, pmoved, both)) return false;
    const auto ra = kernels::rank(a, kernels::Policy::Serial);
    if (ra != kernels::rank(b, kernels::Policy::Serial) || ra != kernels::rank(both, kernels::Policy::Serial))
      return false;
  }
  return true;
}

}  // namespace

TEST(Jets, Naming) {
  auto sys = flatscan::testing::example1();
  EXPECT_EQ(sys.jet_name(0, 0), "u1");
  EXPECT_EQ(sys.jet_name(0, 2), "u1_d2");
  auto p = prolong(sys, 2, 1).system;
  EXPECT_EQ(p.inputs()[0], "u1_d2");
  EXPECT_EQ(p.inputs()[1], "u2_d1");
  EXPECT_EQ(p.jet_name(0, 1), "u1_d3");
  EXPECT_EQ(p.chart().coordinates(),
            (std::vector<std::string>{"x1", "x2", "x3", "x4", "x5", "u1", "u1_d1", "u2"}));
}

TEST(FU, Examples) {
  auto lin = flatscan::testing::brunovsky22();
  auto fu0 = f_u(lin, 0);
  EXPECT_EQ(fu0.chart().dim(), 6u);
  EXPECT_EQ(fu0.to_string(), "y2*d_y1 + u1*d_y2 + y4*d_y3 + u2*d_y4");

  auto v = flatscan::testing::vtol();
  auto fu = f_u(v, 2);
  const auto x = parse_ratfunc("x", v.chart());
  EXPECT_EQ(fu.apply(x), parse_ratfunc("vx", v.chart()));
  EXPECT_EQ(fu.apply(fu.apply(x)), parse_ratfunc("eps*cos(theta)*u2 - sin(theta)*u1", fu.chart()));

  auto e1 = flatscan::testing::example1();
  EXPECT_EQ(f_u(e1, 1).apply(parse_ratfunc("x2", e1.chart())), parse_ratfunc("x3 + x4*u1", e1.jet_chart(1)));
}

TEST(RelativeDegree, Examples) {
  auto e1 = flatscan::testing::example1();
  EXPECT_EQ(relative_degree(e1, parse_pair(e1, "x1", "x2")), (Indices{1, 1}));
  auto v = flatscan::testing::vtol();
  EXPECT_EQ(relative_degree(v, parse_pair(v, "theta", "x*cot(theta) + z")), (Indices{2, 2}));
  auto e3 = flatscan::testing::example3();
  EXPECT_EQ(relative_degree(e3, parse_pair(e3, "z1", "z3")), (Indices{2, 2}));
}

TEST(RelativeDegree, Unbounded) {
  // x3 is a conserved quantity of this system
  auto sys = flatscan::testing::make_system("c", {"x1", "x2", "x3"}, {}, {"0", "0", "0"}, {"1", "0", "0"},
                                            {"0", "1", "0"});
  EXPECT_THROW(relative_degree(sys, parse_pair(sys, "x1", "x3")), UnboundedRelativeDegree);
}

TEST(FlatIndices, Examples) {
  auto a = flat_indices(5, {1, 1});
  EXPECT_EQ(a.R, (Indices{4, 4}));
  EXPECT_EQ(a.d, 3u);
  auto b = flat_indices(6, {2, 2});
  EXPECT_EQ(b.R, (Indices{4, 4}));
  EXPECT_EQ(b.d, 2u);
  auto c = flat_indices(7, {3, 4});
  EXPECT_EQ(c.d, 0u);
  EXPECT_EQ(c.R, (Indices{3, 4}));
  EXPECT_THROW(flat_indices(4, {3, 2}), InvalidIndicesError);
  EXPECT_THROW(flat_indices(4, {0, 2}), InvalidIndicesError);
  for (unsigned n = 2; n < 9; ++n) {
    for (unsigned k1 = 1; k1 < n; ++k1) {
      for (unsigned k2 = 1; k1 + k2 <= n; ++k2) {
        auto r = flat_indices(n, {k1, k2});
        EXPECT_EQ(r.R[0] - k1, r.d);
        EXPECT_EQ(r.R[1] - k2, r.d);
        EXPECT_EQ(r.R[0] + k2, n);
        EXPECT_EQ(r.R[1] + k1, n);
        EXPECT_LE(r.d, n - 2);
      }
    }
  }
}

TEST(NormalizeInput, Examples) {
  auto e1 = flatscan::testing::example1();
  auto n1 = normalize_input(e1, parse_pair(e1, "x1", "x2"));
  EXPECT_FALSE(n1.permuted);
  EXPECT_EQ(n1.system.f(), e1.f());
  EXPECT_EQ(n1.system.g1(), e1.g1());
  EXPECT_EQ(n1.system.g2(), e1.g2());

  auto v = flatscan::testing::vtol();
  auto nv = normalize_input(v, parse_pair(v, "theta", "x*cot(theta) + z"));
  EXPECT_TRUE(nv.permuted);
  EXPECT_EQ(nv.system.g1(), v.g2());
  EXPECT_EQ(nv.system.g2(), v.g1());
  EXPECT_EQ(nv.system.f(), v.f());

  // x3 never sees an input
  auto sys = flatscan::testing::make_system("c", {"x1", "x2", "x3"}, {}, {"0", "0", "0"}, {"1", "0", "0"},
                                            {"0", "1", "0"});
  EXPECT_THROW(normalize_input(sys, parse_pair(sys, "x3", "x1")), NonInvertibleTransform);
}

TEST(NormalizeInput, DerivativeTableShape) {
  auto e3 = flatscan::testing::example3();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto fb = flatscan::testing::random_feedback(e3, seed);
    const auto phi = parse_pair(e3, "z1", "z3");
    auto norm = normalize_input(fb.system, phi).system;
    RatFunc h = phi[0];
    h = norm.f().apply(h);  // k1 = 2
    EXPECT_TRUE(norm.f().apply(h).is_zero()) << fb.description;
    EXPECT_EQ(norm.g1().apply(h), RatFunc(1)) << fb.description;
    EXPECT_TRUE(norm.g2().apply(h).is_zero()) << fb.description;
  }
}

TEST(QSequence, BrunovskySingleEntry) {
  auto sys = flatscan::testing::brunovsky22();
  auto o = sys.oracle();
  auto q = q_sequence(sys, parse_pair(sys, "y1", "y3"), o);
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0].index, (Indices{1, 1}));
  EXPECT_EQ(q[0].q.rank(), 4u);
  EXPECT_TRUE(q[0].integrable);
}

TEST(QSequence, ExampleOneProlonged) {
  auto p = prolong(flatscan::testing::example1(), 1, 1).system;
  auto o = p.oracle();
  auto q = q_sequence(p, parse_pair(p, "x1", "x2"), o);
  ASSERT_EQ(q.size(), 4u);
  const Chart& c = p.chart();  // x1..x5, u1, u2
  std::vector<Codistribution> expected = {
      span_of(c, {{"1", "0", "0", "0", "0", "0", "0"}, {"0", "1", "0", "0", "0", "0", "0"},
                  {"0", "0", "0", "0", "0", "1", "0"}, {"0", "0", "1", "u1", "0", "0", "0"}}, o),
      span_of(c, {{"1", "0", "0", "0", "0", "0", "0"}, {"0", "1", "0", "0", "0", "0", "0"},
                  {"0", "0", "1", "0", "0", "0", "0"}, {"0", "0", "0", "1", "0", "0", "0"},
                  {"0", "0", "0", "0", "0", "1", "0"}}, o),
      span_of(c, {{"1", "0", "0", "0", "0", "0", "0"}, {"0", "1", "0", "0", "0", "0", "0"},
                  {"0", "0", "1", "0", "0", "0", "0"}, {"0", "0", "0", "1", "0", "0", "0"},
                  {"0", "0", "0", "0", "1", "0", "0"}, {"0", "0", "0", "0", "0", "1", "0"}}, o),
      Codistribution::span(c, [&] {
        std::vector<CovectorField> all;
        for (std::size_t i = 0; i < c.dim(); ++i) all.push_back(CovectorField::coordinate(c, i));
        return all;
      }(), o)};
  const Chart common = p.jet_chart(5);
  for (std::size_t m = 0; m < 4; ++m) {
    EXPECT_EQ(q[m].index, (Indices{1 + unsigned(m), 1 + unsigned(m)}));
    EXPECT_TRUE(same_span(q[m].q, expected[m], common, o)) << "Q entry " << m << ": " << q[m].q.to_string();
    EXPECT_TRUE(q[m].integrable);
  }
}

TEST(QSequence, ExampleOneOriginalHasNonIntegrableMember) {
  auto e1 = flatscan::testing::example1();
  auto o = e1.oracle();
  auto q = q_sequence(e1, parse_pair(e1, "x1", "x2"), o);
  ASSERT_EQ(q.size(), 4u);
  EXPECT_TRUE(std::any_of(q.begin(), q.end(), [](const QEntry& e) { return !e.integrable; }));
  // Q_(1,1) = span{dx1, dx2, dx3 + u1 dx4}, hand elimination
  EXPECT_EQ(q[1].q.rank(), 3u);
  EXPECT_FALSE(q[1].integrable);
}

TEST(Sfe, Examples) {
  auto e1 = flatscan::testing::example1();
  EXPECT_FALSE(sfe_gtf_test(e1, parse_pair(e1, "x1", "x2"), e1.oracle()).passed);
  auto p = prolong(e1, 1, 1).system;
  auto rep = sfe_gtf_test(p, parse_pair(p, "x1", "x2"), p.oracle());
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.K, (Indices{2, 2}));
  EXPECT_EQ(rep.d, 3u);
  auto e3 = flatscan::testing::example3();
  EXPECT_TRUE(sfe_gtf_test(e3, parse_pair(e3, "z1", "z3"), e3.oracle()).passed);
}

TEST(Prolong, Examples) {
  auto e1 = flatscan::testing::example1();
  auto same = prolong(e1, 0, 0);
  EXPECT_EQ(same.system.chart(), e1.chart());
  EXPECT_EQ(same.system.f(), e1.f());
  EXPECT_EQ(same.system.g1(), e1.g1());
  EXPECT_EQ(same.system.inputs(), e1.inputs());

  auto p = prolong(e1, 1, 1);
  EXPECT_EQ(p.system.n(), 7u);
  EXPECT_EQ(p.system.chart().coordinates(),
            (std::vector<std::string>{"x1", "x2", "x3", "x4", "x5", "u1", "u2"}));
  EXPECT_TRUE(p.equal_orders());
  EXPECT_FALSE(prolong(e1, 1, 2).equal_orders());

  auto v = flatscan::testing::vtol();
  auto pv = prolong(v, 2, 2).system;
  EXPECT_EQ(pv.n(), 10u);
  auto K = relative_degree(v, parse_pair(v, "theta", "x*cot(theta) + z"));
  auto K2 = relative_degree(pv, parse_pair(pv, "theta", "x*cot(theta) + z"));
  EXPECT_EQ(K2[0], K[0] + 2);
  EXPECT_EQ(K2[1], K[1] + 2);
}

TEST(Verify, Examples) {
  auto v = flatscan::testing::vtol();
  auto o = v.oracle();
  auto bad = verify_flat_output(v, parse_pair(v, "theta", "x*cot(theta) + z"), o);
  EXPECT_EQ(bad.K, (Indices{2, 2}));
  EXPECT_EQ(bad.R, (Indices{4, 4}));
  EXPECT_FALSE(bad.passed);

  auto e3 = flatscan::testing::example3();
  auto good = verify_flat_output(e3, parse_pair(e3, "z1", "z3"), e3.oracle());
  EXPECT_TRUE(good.passed);
  EXPECT_EQ(good.K, (Indices{2, 2}));
  EXPECT_EQ(good.d, 3u);
  EXPECT_EQ(good.stacked_rank, 10u);
}

TEST(Verify, VtolSignVariants) {
  auto v = flatscan::testing::vtol();
  auto o = v.oracle();
  const bool a = verify_flat_output(v, parse_pair(v, "x - eps*sin(theta)", "z + eps*cos(theta)"), o).passed;
  const bool b = verify_flat_output(v, parse_pair(v, "x - eps*cos(theta)", "z + eps*sin(theta)"), o).passed;
  EXPECT_NE(a, b);
  EXPECT_TRUE(a);
}

TEST(Verify, DependentDifferentials) {
  auto e3 = flatscan::testing::example3();
  EXPECT_THROW(verify_flat_output(e3, parse_pair(e3, "z1", "2*z1 + 1"), e3.oracle()), DependentDifferentials);
}

TEST(Gtf, Examples) {
  auto e3 = flatscan::testing::example3();
  auto ok = gtf_structure_check(e3, e3.chart().coordinates(), {2, 2});
  EXPECT_TRUE(ok.matches) << ok.violation;
  EXPECT_EQ(ok.kind, "gtf");

  auto b = flatscan::testing::brunovsky22();
  auto bk = gtf_structure_check(b, b.chart().coordinates(), {2, 2});
  EXPECT_TRUE(bk.matches) << bk.violation;
  EXPECT_EQ(bk.kind, "brunovsky");

  auto swapped = gtf_structure_check(e3, {"z1", "z2", "z3", "z4", "z6", "z5", "z7"}, {2, 2});
  EXPECT_FALSE(swapped.matches);
  EXPECT_NE(swapped.violation.find("triangular"), std::string::npos) << swapped.violation;

  auto c = flatscan::testing::chained5();
  auto ck = gtf_structure_check(c, c.chart().coordinates(), {1, 1});
  EXPECT_TRUE(ck.matches) << ck.violation;
  EXPECT_EQ(ck.kind, "chained");

  auto ecf = flatscan::testing::make_system("ecf", {"z1", "z2", "z3", "z4"}, {}, {"0", "z1", "0", "0"},
                                            {"1", "z3", "z4", "0"}, {"0", "0", "0", "1"});
  auto ek = gtf_structure_check(ecf, ecf.chart().coordinates(), {1, 1});
  EXPECT_TRUE(ek.matches) << ek.violation;
  EXPECT_EQ(ek.kind, "ecf");

  EXPECT_FALSE(gtf_structure_check(e3, e3.chart().coordinates(), {3, 2}).matches);
  EXPECT_FALSE(gtf_structure_check(e3, {"z1", "z2"}, {2, 2}).matches);
}

// GTF structure implies (z^1, z^{k1+1}) is verified.
TEST(Properties, GtfImpliesFlatOutput) {
  struct Case {
    ControlAffineSystem sys;
    Indices K;
  };
  std::vector<Case> cases = {{flatscan::testing::example3(), {2, 2}},
                             {flatscan::testing::brunovsky22(), {2, 2}},
                             {flatscan::testing::chained5(), {1, 1}}};
  for (const auto& c : cases) {
    const auto& names = c.sys.chart().coordinates();
    ASSERT_TRUE(gtf_structure_check(c.sys, names, c.K).matches);
    auto v = verify_flat_output(c.sys, parse_pair(c.sys, names[0], names[c.K[0]]), c.sys.oracle());
    EXPECT_TRUE(v.passed) << c.sys.name();
    EXPECT_EQ(v.K, c.K);
    // index identities on accepted candidates
    EXPECT_EQ(v.R[0] - v.K[0], v.d);
    EXPECT_EQ(v.R[1] - v.K[1], v.d);
    EXPECT_EQ(c.sys.n() - v.K[0] - v.K[1], v.d);
  }
}

TEST(Properties, FeedbackInvariance) {
  struct Case {
    ControlAffineSystem sys;
    OutputPair phi;
  };
  auto e3 = flatscan::testing::example3();
  auto e1 = flatscan::testing::example1();
  std::vector<Case> cases = {{e3, parse_pair(e3, "z1", "z3")}, {e1, parse_pair(e1, "x1", "x2")}};
  for (const auto& c : cases) {
    auto o = c.sys.oracle();
    const auto base_verdict = verify_flat_output(c.sys, c.phi, o);
    const auto base_q = q_sequence(c.sys, c.phi, o);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto fb = flatscan::testing::random_feedback(c.sys, 100 * seed + c.sys.n());
      auto v = verify_flat_output(fb.system, c.phi, o);
      EXPECT_EQ(v.passed, base_verdict.passed) << fb.description;
      EXPECT_EQ(v.K, base_verdict.K) << fb.description;
      auto q = q_sequence(fb.system, c.phi, o);
      ASSERT_EQ(q.size(), base_q.size());
      for (std::size_t m = 0; m < q.size(); ++m) {
        EXPECT_EQ(q[m].integrable, base_q[m].integrable) << fb.description;
        EXPECT_TRUE(same_under_feedback(base_q[m].q, q[m].q, fb, c.sys)) << fb.description << " entry " << m;
      }
    }
  }
}

TEST(Properties, ProlongationConsistency) {
  auto e3 = flatscan::testing::example3();
  auto e1 = flatscan::testing::example1();
  auto v = flatscan::testing::vtol();
  std::vector<std::pair<ControlAffineSystem, std::array<std::string, 2>>> cases = {
      {e3, {"z1", "z3"}}, {e1, {"x1", "x2"}}, {v, {"x - eps*sin(theta)", "z + eps*cos(theta)"}}};
  for (const auto& [sys, text] : cases) {
    auto base = verify_flat_output(sys, parse_pair(sys, text[0], text[1]), sys.oracle());
    ASSERT_TRUE(base.passed) << sys.name();
    for (unsigned p : {1u, 2u}) {
      auto ext = prolong(sys, p, p).system;
      auto r = verify_flat_output(ext, parse_pair(ext, text[0], text[1]), ext.oracle());
      EXPECT_TRUE(r.passed) << sys.name() << " p=" << p;
      EXPECT_EQ(r.K, (Indices{base.K[0] + p, base.K[1] + p}));
      EXPECT_EQ(r.R, (Indices{base.R[0] + p, base.R[1] + p}));
      EXPECT_EQ(r.d, base.d);
    }
  }
}

// Prolonging each input d times makes every corpus system SFE to the GTF.
TEST(Properties, ProlongationByDifferenceReachesGtf) {
  auto e3 = flatscan::testing::example3();
  auto e1 = flatscan::testing::example1();
  auto v = flatscan::testing::vtol();
  std::vector<std::pair<ControlAffineSystem, std::array<std::string, 2>>> cases = {
      {e3, {"z1", "z3"}}, {e1, {"x1", "x2"}}, {v, {"x - eps*sin(theta)", "z + eps*cos(theta)"}}};
  for (const auto& [sys, text] : cases) {
    auto base = verify_flat_output(sys, parse_pair(sys, text[0], text[1]), sys.oracle());
    auto ext = prolong(sys, base.d, base.d).system;
    auto rep = sfe_gtf_test(ext, parse_pair(ext, text[0], text[1]), ext.oracle());
    EXPECT_TRUE(rep.passed) << sys.name();
  }
}
