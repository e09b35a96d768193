#ifndef QECAD_RESULTANT_HPP
#define QECAD_RESULTANT_HPP

#include <vector>

#include "qecad/polygcd.hpp"
#include "qecad/polynomial.hpp"

namespace qecad {

// Dense rectangular grid of polynomial entries sharing one variable order.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Polynomial> entries;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, const VarOrderPtr& order)
        : rows(r), cols(c), entries(r * c, Polynomial(order)) {}

    Polynomial& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    const Polynomial& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

// Fraction-free Bareiss elimination with row pivoting. All intermediate
// divisions are exact, so everything stays in Q[x1..xn].
inline Polynomial determinant(Matrix m, const VarOrderPtr& order) {
    if (m.rows != m.cols) throw usage_error("determinant of non-square matrix");
    std::size_t n = m.rows;
    if (n == 0) return Polynomial::constant(order, Rational(1));
    int sign = 1;
    Polynomial prev = Polynomial::constant(order, Rational(1));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m.at(pivot, k).is_zero()) ++pivot;
        if (pivot == n) return Polynomial::zero(order);
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(pivot, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m.at(i, j) =
                    (m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j)).exact_divide(prev);
            m.at(i, k) = Polynomial::zero(order);
        }
        prev = m.at(k, k);
    }
    Polynomial d = m.at(n - 1, n - 1);
    return sign < 0 ? -d : d;
}

// Sylvester matrix of A (degree m in v) and B (degree n in v), with the
// last `drop` rows of each coefficient block and the last 2*drop columns
// removed. drop = 0 gives the classical (m+n) x (m+n) matrix.
inline Matrix sylvester_matrix(const Polynomial& A, const Polynomial& B, int v,
                               unsigned drop = 0) {
    if (A.is_zero() || B.is_zero())
        throw usage_error("sylvester matrix of zero polynomial");
    int m = A.degree_in(v);
    int n = B.degree_in(v);
    auto ca = A.coefficients_in(v);  // index = power of v
    auto cb = B.coefficients_in(v);
    std::size_t dim = static_cast<std::size_t>(m + n) - 2 * drop;
    Matrix s(dim, dim, A.order());
    std::size_t a_rows = static_cast<std::size_t>(n) - drop;
    std::size_t b_rows = static_cast<std::size_t>(m) - drop;
    for (std::size_t i = 0; i < a_rows; ++i)
        for (int k = 0; k <= m; ++k) {
            std::size_t col = i + static_cast<std::size_t>(m - k);
            if (col < dim) s.at(i, col) = ca[static_cast<std::size_t>(k)];
        }
    for (std::size_t i = 0; i < b_rows; ++i)
        for (int k = 0; k <= n; ++k) {
            std::size_t col = i + static_cast<std::size_t>(n - k);
            if (col < dim) s.at(a_rows + i, col) = cb[static_cast<std::size_t>(k)];
        }
    return s;
}

// det(Sylvester(A,B,v)); free of v, zero iff A and B share a factor of
// positive degree in v over the fraction field of the other variables.
inline Polynomial sylvester_resultant(const Polynomial& A, const Polynomial& B, int v) {
    if (A.is_zero() || B.is_zero()) throw usage_error("resultant of zero polynomial");
    if (A.degree_in(v) < 1 && B.degree_in(v) < 1)
        throw usage_error("resultant needs positive degree in the chosen variable");
    return determinant(sylvester_matrix(A, B, v), A.order());
}

// l-th principal subresultant coefficient. psc(A,B,v,0) is the resultant;
// the smallest l with a nonzero psc equals deg_v(gcd(A,B)).
inline Polynomial psc(const Polynomial& A, const Polynomial& B, int v, int l) {
    if (A.is_zero() || B.is_zero()) throw usage_error("psc of zero polynomial");
    int m = A.degree_in(v);
    int n = B.degree_in(v);
    if (l < 0 || l > std::min(m, n)) throw usage_error("psc index out of range");
    return determinant(sylvester_matrix(A, B, v, static_cast<unsigned>(l)), A.order());
}

}  // namespace qecad

#endif  // QECAD_RESULTANT_HPP
