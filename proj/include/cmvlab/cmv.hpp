#ifndef CMVLAB_CMV_HPP
#define CMVLAB_CMV_HPP

#include <vector>

#include "errors.hpp"
#include "laurent.hpp"
#include "matrix.hpp"

namespace cmvlab {

// e(2k) = k, e(2k+1) = -k-1
inline int cmv_exponent(int l)
{
    if (l < 0)
        throw IndexOutOfRange("negative CMV index");
    return (l % 2 == 0) ? l / 2 : -(l + 1) / 2;
}

inline int cmv_index(int e) { return e >= 0 ? 2 * e : -2 * e - 1; }

// largest |exponent| among the first M basis elements
inline int cmv_max_abs_exponent(int M) { return M <= 0 ? 0 : (M + 1) / 2; }

// entry l = d^order/dz^order z^{e(l)}
template <class T>
std::vector<T> chi(const T& z, int M, int order = 0)
{
    if (is_zero(z))
        throw ZeroArgument("chi evaluated at z = 0");
    std::vector<T> v(M, from_int<T>(0));
    for (int l = 0; l < M; ++l) {
        const int e = cmv_exponent(l);
        const long f = falling(e, order);
        if (f != 0)
            v[l] = from_int<T>(f) * ipow(z, e - order);
    }
    return v;
}

template <class T>
struct BandedTruncation {
    Matrix<T> data;
    int bandwidth = 0;
    int exact_leading = 0;
};

// column holding the single unit entry of row l of the shift, or -1
inline int upsilon_target(int l) { return l == 1 ? 0 : (l % 2 == 0 ? l + 2 : l - 2); }

template <class T>
BandedTruncation<T> upsilon(int M)
{
    BandedTruncation<T> u{Matrix<T>(M, M), 2, M};
    for (int l = 0; l < M; ++l) {
        const int c = upsilon_target(l);
        if (c < M)
            u.data(l, c) = from_int<T>(1);
    }
    // trailing rows whose unit entry falls outside the block
    int exact = M;
    for (int l = 0; l < M; ++l)
        if (upsilon_target(l) >= M) {
            exact = l;
            break;
        }
    u.exact_leading = exact;
    return u;
}

// leading M x M block of L(Upsilon), built from powers of the truncated
// shift at inflated size and cut back
template <class T>
BandedTruncation<T> laurent_of_upsilon(const LaurentPoly<T>& L, int M)
{
    const int deg = std::max(L.upper_degree(), L.lower_degree());
    const int big = M + 2 * deg;
    const Matrix<T> up = upsilon<T>(big).data;
    const Matrix<T> down = up.transpose();

    Matrix<T> acc(big, big);
    auto accumulate = [&](const Matrix<T>& power, const T& c) {
        for (int i = 0; i < big; ++i)
            for (int j = 0; j < big; ++j)
                if (!is_zero(power(i, j)))
                    acc(i, j) += c * power(i, j);
    };
    accumulate(Matrix<T>::identity(big), L.coeff(0));
    Matrix<T> pos = Matrix<T>::identity(big);
    Matrix<T> neg = Matrix<T>::identity(big);
    for (int k = 1; k <= deg; ++k) {
        pos = up * pos;
        neg = down * neg;
        if (!is_zero(L.coeff(k)))
            accumulate(pos, L.coeff(k));
        if (!is_zero(L.coeff(-k)))
            accumulate(neg, L.coeff(-k));
    }
    return BandedTruncation<T>{acc.leading(M), 2 * deg, M};
}

// rows [0, rows) and columns [0, cols) of L(Upsilon); needs cols >= rows + 2 deg
// for the block to be free of truncation error
template <class T>
Matrix<T> laurent_of_upsilon_rect(const LaurentPoly<T>& L, int rows, int cols)
{
    const int deg = std::max(L.upper_degree(), L.lower_degree());
    if (cols < rows + 2 * deg)
        throw IncompatibleTruncations("rectangular block of L(Upsilon) would be contaminated");
    return laurent_of_upsilon(L, cols).data.block(0, 0, rows, cols);
}

} // namespace cmvlab

#endif
