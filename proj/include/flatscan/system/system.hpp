#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flatscan/diffgeo/distribution.hpp"
#include "flatscan/diffgeo/fields.hpp"
#include "flatscan/diffgeo/rank.hpp"

namespace flatscan::system {

using diffgeo::Codistribution;
using diffgeo::CovectorField;
using diffgeo::Distribution;
using diffgeo::RankOracle;
using diffgeo::VectorField;
using symexpr::Chart;
using symexpr::RatFunc;

using Indices = std::array<unsigned, 2>;
using OutputPair = std::array<RatFunc, 2>;

// x' = f(x) + g1(x) u1 + g2(x) u2 with states and parameters in the chart.
class ControlAffineSystem {
 public:
  ControlAffineSystem(std::string name, Chart chart, std::array<std::string, 2> inputs,
                      VectorField f, VectorField g1, VectorField g2,
                      std::vector<RatFunc> constraints = {});

  const std::string& name() const { return name_; }
  const Chart& chart() const { return chart_; }
  std::size_t n() const { return chart_.dim(); }
  const std::array<std::string, 2>& inputs() const { return inputs_; }
  const VectorField& f() const { return f_; }
  const VectorField& g1() const { return g1_; }
  const VectorField& g2() const { return g2_; }
  const VectorField& g(int j) const { return j == 0 ? g1_ : g2_; }
  // Expressions that must not vanish at sample points (e.g. eps).
  const std::vector<RatFunc>& constraints() const { return constraints_; }

  RankOracle oracle(std::uint64_t seed = 1) const;

  // Name of the level-th time derivative of input j.
  std::string jet_name(int j, unsigned level) const;
  // States, then u1 jets 0..order, then u2 jets 0..order.
  Chart jet_chart(unsigned order) const;

  // Same system with a different drift/input frame (chart and inputs kept).
  ControlAffineSystem with_fields(VectorField f, VectorField g1, VectorField g2) const;

 private:
  std::string name_;
  Chart chart_;
  std::array<std::string, 2> inputs_;
  VectorField f_, g1_, g2_;
  std::vector<RatFunc> constraints_;
};

// Copies the components of v into a chart containing all of v's coordinates.
VectorField embed(const VectorField& v, const Chart& target);
CovectorField embed(const CovectorField& w, const Chart& target);

// Total-derivative field on the jet chart of the given order; the top jet
// level is treated as free (its derivative is dropped).
VectorField f_u(const ControlAffineSystem& sys, unsigned jet_order);

// phi, phi_[1], ..., phi_[count-1] as functions on the jet chart of the order.
std::vector<RatFunc> output_derivatives(const ControlAffineSystem& sys, const RatFunc& phi,
                                        unsigned count, unsigned jet_order);

Indices relative_degree(const ControlAffineSystem& sys, const OutputPair& phi);

struct FlatIndices {
  Indices R;
  unsigned d = 0;
};
FlatIndices flat_indices(std::size_t n, const Indices& K);

// Static feedback making L^{k1} phi1 the new first input.
struct InputNormalization {
  ControlAffineSystem system;
  bool permuted = false;
  // phi1_[k1] = a + b1 u1 + b2 u2 in the original inputs
  RatFunc a, b1, b2;
};
InputNormalization normalize_input(const ControlAffineSystem& sys, const OutputPair& phi);

struct QEntry {
  Indices index;  // j in Q_j
  Codistribution q;
  bool integrable = false;
};
// Q_{K-1}, ..., Q_{R-1}; each Q_j lives on the states plus the input jets
// its covectors involve. Integrability is filled in.
std::vector<QEntry> q_sequence(const ControlAffineSystem& sys, const OutputPair& phi,
                               const RankOracle& oracle);

struct SfeReport {
  bool passed = false;
  Indices K{};
  unsigned d = 0;
  std::vector<QEntry> sequence;
};
SfeReport sfe_gtf_test(const ControlAffineSystem& sys, const OutputPair& phi, const RankOracle& oracle);

struct ProlongedSystem {
  Indices orders{};
  ControlAffineSystem system;
  // Flatness results for prolongations assume equal orders.
  bool equal_orders() const { return orders[0] == orders[1]; }
};
ProlongedSystem prolong(const ControlAffineSystem& sys, unsigned p1, unsigned p2);

struct FlatVerdict {
  Indices K{};
  Indices R{};
  unsigned d = 0;
  bool reconstructs_state = false;  // span{dx} inside span{dphi_[0,R-1]}
  std::size_t stacked_rank = 0;     // rank of dphi_[0,R-1]
  bool passed = false;
};
FlatVerdict verify_flat_output(const ControlAffineSystem& sys, const OutputPair& phi,
                               const RankOracle& oracle);

struct GtfCheck {
  bool matches = false;
  std::string violation;  // first failed clause
  std::string kind;       // brunovsky, chained, ecf or gtf when matching
};
GtfCheck gtf_structure_check(const ControlAffineSystem& sys, const std::vector<std::string>& order,
                             const Indices& K);

}  // namespace flatscan::system
