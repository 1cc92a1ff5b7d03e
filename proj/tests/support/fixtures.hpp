#pragma once
// Hand-built vector fields for the reference systems.

#include "flatscan/diffgeo/distribution.hpp"
#include "flatscan/symexpr/expr.hpp"

namespace flatscan::testing {

using diffgeo::Chart;
using diffgeo::VectorField;

struct Vtol {
  Chart chart{{"x", "vx", "z", "vz", "theta", "omega"}, {"eps"}};
  VectorField f = VectorField::parse(chart, {"vx", "0", "vz", "-1", "omega", "0"});
  VectorField g1 = VectorField::parse(chart, {"0", "-sin(theta)", "0", "cos(theta)", "0", "0"});
  VectorField g2 =
      VectorField::parse(chart, {"0", "eps*cos(theta)", "0", "eps*sin(theta)", "0", "1"});
};

struct Example3 {
  Chart chart{{"z1", "z2", "z3", "z4", "z5", "z6", "z7"}, {}};
  VectorField a = VectorField::parse(chart, {"z2", "0", "z4", "z5", "z6", "z7", "0"});
  VectorField b1 = VectorField::parse(chart, {"0", "1", "0", "z5", "z2", "0", "0"});
  VectorField b2 = VectorField::coordinate(chart, 6);
  VectorField d(int k) const { return VectorField::coordinate(chart, k - 1); }
};

inline symexpr::PointSource vtol_points(std::uint64_t seed = 1) {
  return symexpr::PointSource(seed, {symexpr::parse_ratfunc("eps")});
}

}  // namespace flatscan::testing
