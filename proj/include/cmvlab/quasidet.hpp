#ifndef CMVLAB_QUASIDET_HPP
#define CMVLAB_QUASIDET_HPP

#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace cmvlab {

// [[A, B], [C, D]] with A p x p, B a column, C a row, D a scalar
template <class T>
struct BlockMatrix {
    Matrix<T> A;
    std::vector<T> B;
    std::vector<T> C;
    T D{};

    int order() const { return A.rows(); }
};

enum class QuasidetMode { schur, det_quotient };

template <class T>
struct QuasidetResult {
    T value;        // reported value (Schur route unless asked otherwise)
    T schur;
    T det_quotient;
    T det_leading;  // det A, the pivot of the bordered determinant
    double discrepancy = 0.0;
    double min_pivot = 0.0;
};

constexpr double default_singularity_floor = 1e-12;

// D - C A^{-1} B together with det([A B; C D]) / det A
template <class T>
QuasidetResult<T> theta_star(const BlockMatrix<T>& bm, QuasidetMode mode = QuasidetMode::schur,
                             double floor = default_singularity_floor)
{
    const int p = bm.order();
    if (static_cast<int>(bm.B.size()) != p || static_cast<int>(bm.C.size()) != p || bm.A.cols() != p)
        throw IncompatibleTruncations("bordered block dimensions do not match");
    QuasidetResult<T> r;
    if (p == 0) {
        r.value = r.schur = r.det_quotient = bm.D;
        r.det_leading = from_int<T>(1);
        r.min_pivot = 1.0;
        return r;
    }
    PivotedLU<T> lu(bm.A);
    const double scale = bm.A.max_abs();
    bool singular = lu.exactly_singular();
    if constexpr (!is_exact_v<T>)
        singular = singular || lu.min_pivot() < floor * scale;
    if (singular)
        throw SingularLeadingBlock("leading block of order " + std::to_string(p) + " is singular (min pivot " +
                                   std::to_string(lu.min_pivot()) + ")");
    r.min_pivot = lu.min_pivot();
    r.det_leading = lu.determinant();
    const auto x = lu.solve(bm.B);
    T s = bm.D;
    for (int i = 0; i < p; ++i)
        s -= bm.C[i] * x[i];
    r.schur = s;

    Matrix<T> full(p + 1, p + 1);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j)
            full(i, j) = bm.A(i, j);
        full(i, p) = bm.B[i];
        full(p, i) = bm.C[i];
    }
    full(p, p) = bm.D;
    r.det_quotient = determinant(full) / r.det_leading;
    const double mag = std::max({1.0, magnitude(r.schur), magnitude(r.det_quotient)});
    r.discrepancy = magnitude(r.schur - r.det_quotient) / mag;
    r.value = mode == QuasidetMode::schur ? r.schur : r.det_quotient;
    return r;
}

// A given as a list of rows
template <class T>
Matrix<T> stack_rows(const std::vector<std::vector<T>>& rows)
{
    const int p = static_cast<int>(rows.size());
    const int q = p == 0 ? 0 : static_cast<int>(rows.front().size());
    Matrix<T> m(p, q);
    for (int i = 0; i < p; ++i) {
        if (static_cast<int>(rows[i].size()) != q)
            throw IncompatibleTruncations("ragged row stack");
        for (int j = 0; j < q; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

template <class T>
std::vector<T> unit_vector(int p, int k)
{
    std::vector<T> e(p, from_int<T>(0));
    if (k >= 0 && k < p)
        e[k] = from_int<T>(1);
    return e;
}

} // namespace cmvlab

#endif
