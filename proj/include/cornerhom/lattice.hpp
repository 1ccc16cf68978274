#pragma once

#include <optional>

#include "cornerhom/integer_matrix.hpp"

namespace cornerhom {

/// Columns form a Z-basis of {x : a x = 0}.
IntegerMatrix kernel_basis(const IntegerMatrix& a);

/// Integer solution X of a X = b (columnwise), if one exists.
std::optional<IntegerMatrix> solve(const IntegerMatrix& a, const IntegerMatrix& b);
std::optional<IntegerVector> solve(const IntegerMatrix& a, const IntegerVector& b);

/// True when every column of b lies in the Z-span of the columns of a.
bool in_column_span(const IntegerMatrix& a, const IntegerMatrix& b);

/// Same column lattice.
bool same_column_span(const IntegerMatrix& a, const IntegerMatrix& b);

}  // namespace cornerhom
