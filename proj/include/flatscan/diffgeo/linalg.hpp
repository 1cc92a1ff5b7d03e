#pragma once

#include <cstddef>
#include <vector>

#include "flatscan/symexpr/ratfunc.hpp"

namespace flatscan::diffgeo {

using symexpr::RatFunc;
using Row = std::vector<RatFunc>;

bool is_zero_row(const Row& r);

// Scales a nonzero row by a nonzero function so that every entry is a
// polynomial, the entries share no common factor and the first nonzero
// entry has leading coefficient one. The zero row is returned unchanged.
Row primitive(const Row& r);

struct Echelon {
  std::vector<Row> rows;             // nonzero rows
  std::vector<std::size_t> pivots;   // pivot column of each row
};

// Exact fraction-free elimination over the rational-function field.
// Columns are visited in `column_order` (all columns in index order when
// empty). Pivots are chosen by least total degree, lowest row index on ties.
// With reduced = true the result is the reduced row echelon form with unit
// pivots; otherwise rows are primitive and only entries below pivots vanish.
Echelon eliminate(std::vector<Row> rows, std::size_t ncols, bool reduced,
                  const std::vector<std::size_t>& column_order = {});

std::size_t exact_rank(const std::vector<Row>& rows, std::size_t ncols);

// Basis of {x : A x = 0}; vectors are primitive.
std::vector<Row> null_space(const std::vector<Row>& a, std::size_t ncols);

// Basis of {c : c^T A = 0}.
std::vector<Row> left_null_space(const std::vector<Row>& a, std::size_t ncols);

RatFunc dot(const Row& a, const Row& b);
Row combine(const std::vector<Row>& rows, const Row& coefficients, std::size_t ncols);

}  // namespace flatscan::diffgeo
