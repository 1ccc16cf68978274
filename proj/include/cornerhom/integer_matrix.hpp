#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace cornerhom {

using Integer = mpz_class;
using IntegerVector = std::vector<Integer>;

/**
 * Dense integer matrix with arbitrary-precision entries, stored row-major.
 * All arithmetic is exact.
 */
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols);
    IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntegerMatrix identity(std::size_t n);
    static IntegerMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static IntegerMatrix diagonal(const IntegerVector& d, std::size_t rows, std::size_t cols);
    static IntegerMatrix column(const IntegerVector& v);
    static IntegerMatrix from_columns(std::size_t rows, const std::vector<IntegerVector>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Integer>& data() const { return data_; }

    IntegerVector column_vector(std::size_t c) const;
    IntegerVector row_vector(std::size_t r) const;
    IntegerMatrix transpose() const;
    IntegerMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

    bool is_zero() const;
    /// Reduces every entry into [0, m).
    IntegerMatrix mod(const Integer& m) const;

    // elementary operations used by normal-form routines
    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);
    void add_row_multiple(std::size_t target, std::size_t source, const Integer& q);
    void add_col_multiple(std::size_t target, std::size_t source, const Integer& q);
    void negate_row(std::size_t r);
    void negate_col(std::size_t c);

    friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b);
    friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
    friend IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b);
    friend IntegerMatrix operator-(const IntegerMatrix& a, const IntegerMatrix& b);
    friend IntegerMatrix operator-(const IntegerMatrix& a);
    friend IntegerVector operator*(const IntegerMatrix& a, const IntegerVector& v);

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// Horizontal concatenation [a | b]; row counts must agree.
IntegerMatrix hconcat(const IntegerMatrix& a, const IntegerMatrix& b);
/// Vertical concatenation; column counts must agree.
IntegerMatrix vconcat(const IntegerMatrix& a, const IntegerMatrix& b);
/// Block diagonal sum.
IntegerMatrix direct_sum(const IntegerMatrix& a, const IntegerMatrix& b);

bool is_zero(const IntegerVector& v);

}  // namespace cornerhom
