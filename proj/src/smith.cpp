#include "cornerhom/smith.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace cornerhom {

namespace {

// Running state of the reduction; every row operation on D is mirrored on U
// (and inversely on U^{-1}), every column operation on V.
struct Reducer {
    IntegerMatrix d, u, u_inv, v;

    void swap_rows(std::size_t a, std::size_t b) {
        d.swap_rows(a, b);
        u.swap_rows(a, b);
        u_inv.swap_cols(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        d.swap_cols(a, b);
        v.swap_cols(a, b);
    }
    // row[target] += q * row[source]
    void add_row(std::size_t target, std::size_t source, const Integer& q) {
        d.add_row_multiple(target, source, q);
        u.add_row_multiple(target, source, q);
        u_inv.add_col_multiple(source, target, -q);
    }
    // col[target] += q * col[source]
    void add_col(std::size_t target, std::size_t source, const Integer& q) {
        d.add_col_multiple(target, source, q);
        v.add_col_multiple(target, source, q);
    }
    void negate_row(std::size_t r) {
        d.negate_row(r);
        u.negate_row(r);
        u_inv.negate_col(r);
    }
};

bool find_min_pivot(const IntegerMatrix& d, std::size_t t, std::size_t& pr, std::size_t& pc) {
    bool found = false;
    Integer best;
    for (std::size_t r = t; r < d.rows(); ++r)
        for (std::size_t c = t; c < d.cols(); ++c) {
            const Integer& x = d(r, c);
            if (x == 0) continue;
            Integer ax = abs(x);
            if (!found || ax < best) {
                best = ax;
                pr = r;
                pc = c;
                found = true;
                if (best == 1) return true;
            }
        }
    return found;
}

}  // namespace

std::size_t SmithDecomposition::rank() const {
    std::size_t r = 0;
    const std::size_t n = std::min(diagonal.rows(), diagonal.cols());
    while (r < n && diagonal(r, r) != 0) ++r;
    return r;
}

IntegerVector SmithDecomposition::invariant_factors() const {
    IntegerVector out;
    for (std::size_t i = 0; i < rank(); ++i) out.push_back(diagonal(i, i));
    return out;
}

SmithDecomposition smith_normal_form(const IntegerMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Reducer st{a, IntegerMatrix::identity(m), IntegerMatrix::identity(m), IntegerMatrix::identity(n)};
    IntegerMatrix& d = st.d;

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        std::size_t pr = 0, pc = 0;
        if (!find_min_pivot(d, t, pr, pc)) break;
        st.swap_rows(t, pr);
        st.swap_cols(t, pc);

        for (;;) {
            bool clean = true;
            // Euclid down column t
            for (std::size_t i = t + 1; i < m; ++i) {
                while (d(i, t) != 0) {
                    Integer q;
                    mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
                    st.add_row(i, t, -q);
                    if (d(i, t) != 0) st.swap_rows(i, t);
                }
            }
            // Euclid along row t; a swap can refill column t
            for (std::size_t j = t + 1; j < n; ++j) {
                while (d(t, j) != 0) {
                    Integer q;
                    mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
                    st.add_col(j, t, -q);
                    if (d(t, j) != 0) {
                        st.swap_cols(j, t);
                        clean = false;
                    }
                }
            }
            if (!clean) continue;
            bool col_clean = true;
            for (std::size_t i = t + 1; i < m && col_clean; ++i) col_clean = d(i, t) == 0;
            if (!col_clean) continue;

            // divisibility: pivot must divide the whole trailing block
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
                        st.add_row(t, i, 1);
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (d(t, t) < 0) st.negate_row(t);
    }

    return {std::move(st.u), std::move(st.d), std::move(st.v), std::move(st.u_inv), a};
}

Integer determinant(const IntegerMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    IntegerMatrix m(a);
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m(swap, k) == 0) ++swap;
            if (swap == n) return 0;
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

std::size_t rank(const IntegerMatrix& a) { return smith_normal_form(a).rank(); }

bool satisfies_smith_invariants(const SmithDecomposition& s) {
    const auto& a = s.source;
    if (s.left.rows() != a.rows() || s.right.rows() != a.cols()) return false;
    if (!(s.left * a * s.right == s.diagonal)) return false;
    if (!(s.left * s.left_inverse == IntegerMatrix::identity(a.rows()))) return false;
    if (abs(determinant(s.left)) != 1 || abs(determinant(s.right)) != 1) return false;
    const auto& d = s.diagonal;
    for (std::size_t r = 0; r < d.rows(); ++r)
        for (std::size_t c = 0; c < d.cols(); ++c)
            if (r != c && d(r, c) != 0) return false;
    const std::size_t r = s.rank();
    for (std::size_t i = r; i < std::min(d.rows(), d.cols()); ++i)
        if (d(i, i) != 0) return false;
    for (std::size_t i = 0; i < r; ++i) {
        if (d(i, i) < 1) return false;
        if (i + 1 < r && !mpz_divisible_p(d(i + 1, i + 1).get_mpz_t(), d(i, i).get_mpz_t())) return false;
    }
    return true;
}

}  // namespace cornerhom
