#pragma once

#include <optional>
#include <vector>

#include "flatscan/diffgeo/distribution.hpp"

namespace flatscan::diffgeo {

struct FirstIntegrals {
  std::vector<RatFunc> functions;  // differentials independent and inside Q
  std::size_t shortfall = 0;       // rank(Q) - functions.size()
};

// Functions whose differentials span an integrable codistribution, found
// heuristically: coordinate differentials, then closed forms integrated
// variable by variable modulo coordinates already found, trying each row of
// two reduced bases under every normalisation. Throws NotIntegrableError when
// Q is not integrable.
FirstIntegrals first_integrals(const Codistribution& q, const RankOracle& oracle);

// Antiderivative in one variable for the supported shapes (polynomials in
// the variable, sin^a cos^k of it, exp of it); nullopt otherwise.
std::optional<RatFunc> antiderivative(const RatFunc& r, symexpr::SymbolId var);

}  // namespace flatscan::diffgeo
