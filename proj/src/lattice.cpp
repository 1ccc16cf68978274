#include "cornerhom/lattice.hpp"

#include <stdexcept>

#include "cornerhom/smith.hpp"

namespace cornerhom {

IntegerMatrix kernel_basis(const IntegerMatrix& a) {
    const auto s = smith_normal_form(a);
    const std::size_t r = s.rank();
    return s.right.block(0, r, a.cols(), a.cols() - r);
}

std::optional<IntegerMatrix> solve(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
    // a x = b  <=>  D (V^{-1} x) = U b
    const auto s = smith_normal_form(a);
    const std::size_t r = s.rank();
    const IntegerMatrix ub = s.left * b;
    IntegerMatrix y(a.cols(), b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i < r) {
                if (!mpz_divisible_p(ub(i, c).get_mpz_t(), s.diagonal(i, i).get_mpz_t())) return std::nullopt;
                mpz_divexact(y(i, c).get_mpz_t(), ub(i, c).get_mpz_t(), s.diagonal(i, i).get_mpz_t());
            } else if (ub(i, c) != 0) {
                return std::nullopt;
            }
        }
    }
    return s.right * y;
}

std::optional<IntegerVector> solve(const IntegerMatrix& a, const IntegerVector& b) {
    auto x = solve(a, IntegerMatrix::column(b));
    if (!x) return std::nullopt;
    return x->column_vector(0);
}

bool in_column_span(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (b.cols() == 0) return true;
    return solve(a, b).has_value();
}

bool same_column_span(const IntegerMatrix& a, const IntegerMatrix& b) {
    return in_column_span(a, b) && in_column_span(b, a);
}

}  // namespace cornerhom
