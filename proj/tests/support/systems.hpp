#pragma once
// Reference control systems used across the system and algorithm tests.

#include <random>

#include "flatscan/symexpr/expr.hpp"
#include "flatscan/system/system.hpp"

namespace flatscan::testing {

using system::ControlAffineSystem;
using system::OutputPair;

inline ControlAffineSystem make_system(const std::string& name, const std::vector<std::string>& states,
                                       const std::vector<std::string>& params,
                                       const std::vector<std::string>& f, const std::vector<std::string>& g1,
                                       const std::vector<std::string>& g2,
                                       std::array<std::string, 2> inputs = {"u1", "u2"},
                                       const std::vector<std::string>& constraints = {}) {
  symexpr::Chart chart(states, params);
  std::vector<symexpr::RatFunc> cons;
  for (const auto& c : constraints) cons.push_back(symexpr::parse_ratfunc(c, chart));
  return ControlAffineSystem(name, chart, inputs, diffgeo::VectorField::parse(chart, f),
                             diffgeo::VectorField::parse(chart, g1), diffgeo::VectorField::parse(chart, g2), cons);
}

// alpha = x1*x2, beta = x2, gamma = x1
inline ControlAffineSystem example1() {
  return make_system("example1", {"x1", "x2", "x3", "x4", "x5"}, {}, {"0", "x3", "x1*x2", "x5", "0"},
                     {"1", "x4", "x2 - x5", "x1", "0"}, {"0", "0", "0", "0", "1"});
}

inline ControlAffineSystem vtol() {
  return make_system("vtol", {"x", "vx", "z", "vz", "theta", "omega"}, {"eps"},
                     {"vx", "0", "vz", "-1", "omega", "0"}, {"0", "-sin(theta)", "0", "cos(theta)", "0", "0"},
                     {"0", "eps*cos(theta)", "0", "eps*sin(theta)", "0", "1"}, {"u1", "u2"}, {"eps"});
}

inline ControlAffineSystem example3() {
  return make_system("example3", {"z1", "z2", "z3", "z4", "z5", "z6", "z7"}, {},
                     {"z2", "0", "z4", "z5", "z6", "z7", "0"}, {"0", "1", "0", "z5", "z2", "0", "0"},
                     {"0", "0", "0", "0", "0", "0", "1"}, {"v1", "v2"});
}

// Two double integrators.
inline ControlAffineSystem brunovsky22() {
  return make_system("brunovsky", {"y1", "y2", "y3", "y4"}, {}, {"y2", "0", "y4", "0"}, {"0", "1", "0", "0"},
                     {"0", "0", "0", "1"});
}

// Chained form on 5 states: z2' = z3 v1, z3' = z4 v1, z4' = z5 v1.
inline ControlAffineSystem chained5() {
  return make_system("chained", {"z1", "z2", "z3", "z4", "z5"}, {}, {"0", "0", "0", "0", "0"},
                     {"1", "z3", "z4", "z5", "0"}, {"0", "0", "0", "0", "1"}, {"v1", "v2"});
}

inline OutputPair parse_pair(const ControlAffineSystem& sys, const std::string& a, const std::string& b) {
  return {symexpr::parse_ratfunc(a, sys.chart()), symexpr::parse_ratfunc(b, sys.chart())};
}

// Random invertible static feedback u = alpha + beta * w with det beta a
// nonzero constant: beta = [[c1, p], [q, c2 + p q / c1]].
struct Feedback {
  ControlAffineSystem system;
  std::string description;
  std::array<symexpr::RatFunc, 2> alpha;
  std::array<std::array<symexpr::RatFunc, 2>, 2> beta;
};

inline Feedback random_feedback(const ControlAffineSystem& sys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& names = sys.chart().coordinates();
  auto coin = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto linear = [&]() {
    std::string s = std::to_string(coin(-3, 3));
    for (int t = 0; t < 2; ++t) {
      const auto& v = names[coin(0, static_cast<int>(names.size()) - 1)];
      s += " + " + std::to_string(coin(-2, 2)) + "*" + v;
    }
    return s;
  };
  auto nonzero = [&]() {
    int c = 0;
    while (c == 0) c = coin(-3, 3);
    return c;
  };
  using symexpr::RatFunc;
  const RatFunc c1(nonzero()), c2(nonzero());
  const RatFunc p = symexpr::parse_ratfunc(linear(), sys.chart());
  const RatFunc q = symexpr::parse_ratfunc(linear(), sys.chart());
  const RatFunc a1 = symexpr::parse_ratfunc(linear(), sys.chart());
  const RatFunc a2 = symexpr::parse_ratfunc(linear(), sys.chart());
  const RatFunc b11 = c1, b12 = p, b21 = q, b22 = c2 + p * q / c1;
  auto f = sys.f() + sys.g1() * a1 + sys.g2() * a2;
  auto g1 = sys.g1() * b11 + sys.g2() * b21;
  auto g2 = sys.g1() * b12 + sys.g2() * b22;
  return {sys.with_fields(f, g1, g2), "alpha=(" + a1.to_string() + ", " + a2.to_string() + ") beta=[[" +
                                          b11.to_string() + ", " + b12.to_string() + "], [" +
                                          b21.to_string() + ", " + b22.to_string() + "]]",
          {a1, a2},
          {{{b11, b12}, {b21, b22}}}};
}

}  // namespace flatscan::testing
