#ifndef CMVLAB_GAUSSBOREL_HPP
#define CMVLAB_GAUSSBOREL_HPP

#include <string>
#include <vector>

#include "cmv.hpp"
#include "errors.hpp"
#include "functional.hpp"
#include "laurent.hpp"
#include "matrix.hpp"

namespace cmvlab {

// G = S1^{-1} diag(H) S2^{-dagger}, S1 and S2 unit lower triangular.
template <class T>
struct BiorthSystem {
    Matrix<T> S1;
    Matrix<T> S2;
    std::vector<T> H;
    int size = 0;
    std::string source;

    const Matrix<T>& factor(int family) const
    {
        if (family != 1 && family != 2)
            throw IndexOutOfRange("family must be 1 or 2");
        return family == 1 ? S1 : S2;
    }

    // system of the adjoint form: families swap, norms conjugate
    BiorthSystem adjoint() const
    {
        BiorthSystem a;
        a.S1 = S2;
        a.S2 = S1;
        a.H.resize(H.size());
        for (std::size_t k = 0; k < H.size(); ++k)
            a.H[k] = conj_of(H[k]);
        a.size = size;
        a.source = source + "^adj";
        return a;
    }

    BiorthSystem leading(int m) const
    {
        if (m > size)
            throw IndexOutOfRange("leading block larger than the system");
        BiorthSystem b;
        b.S1 = S1.leading(m);
        b.S2 = S2.leading(m);
        b.H.assign(H.begin(), H.begin() + m);
        b.size = m;
        b.source = source;
        return b;
    }
};

constexpr double default_pivot_floor = 1e-12;

// Doolittle LDU without any pivoting.
template <class T>
BiorthSystem<T> factorize(const Matrix<T>& G, double pivot_floor = default_pivot_floor, const std::string& source = "")
{
    const int M = G.rows();
    if (G.cols() != M)
        throw IncompatibleTruncations("Gram truncation must be square");
    const double threshold = pivot_floor * G.max_abs();
    Matrix<T> a = G;
    Matrix<T> lower = Matrix<T>::identity(M);
    Matrix<T> upper = Matrix<T>::identity(M);
    std::vector<T> d(M);
    for (int k = 0; k < M; ++k) {
        const T piv = a(k, k);
        bool vanishing = is_zero(piv);
        if constexpr (!is_exact_v<T>)
            vanishing = vanishing || magnitude(piv) < threshold;
        if (vanishing)
            throw QuasidefiniteViolation(k, "leading principal minor " + std::to_string(k + 1) + " vanishes (pivot " +
                                                std::to_string(magnitude(piv)) + ")");
        d[k] = piv;
        for (int i = k + 1; i < M; ++i)
            lower(i, k) = a(i, k) / piv;
        for (int j = k + 1; j < M; ++j)
            upper(k, j) = a(k, j) / piv;
        for (int i = k + 1; i < M; ++i) {
            if (is_zero(lower(i, k)))
                continue;
            for (int j = k + 1; j < M; ++j)
                a(i, j) -= lower(i, k) * a(k, j);
        }
    }
    BiorthSystem<T> sys;
    sys.S1 = unit_lower_inverse(lower);
    // U^{-1} is unit upper; its adjoint is unit lower
    sys.S2 = unit_lower_inverse(upper.adjoint());
    sys.H = d;
    sys.size = M;
    sys.source = source;
    return sys;
}

template <class T>
BiorthSystem<T> factorize(const GramTruncation<T>& G, double pivot_floor = default_pivot_floor)
{
    return factorize(G.data, pivot_floor, G.source);
}

template <class T>
LaurentPoly<T> phi_poly(const BiorthSystem<T>& sys, int family, int l)
{
    if (l < 0 || l >= sys.size)
        throw IndexOutOfRange("index " + std::to_string(l) + " outside system of size " + std::to_string(sys.size));
    const Matrix<T>& S = sys.factor(family);
    LaurentPoly<T> p;
    for (int j = 0; j <= l; ++j)
        p.set(cmv_exponent(j), S(l, j));
    return p;
}

// all d^order phi_{family,k}(z), k < count
template <class T>
std::vector<T> phi_all(const BiorthSystem<T>& sys, int family, const T& z, int order, int count)
{
    if (count > sys.size)
        throw IndexOutOfRange("requested " + std::to_string(count) + " polynomials from a system of size " +
                              std::to_string(sys.size));
    const Matrix<T>& S = sys.factor(family);
    const auto basis = chi(z, count, order);
    std::vector<T> out(count, from_int<T>(0));
    for (int k = 0; k < count; ++k)
        for (int j = 0; j <= k; ++j)
            if (!is_zero(S(k, j)))
                out[k] += S(k, j) * basis[j];
    return out;
}

template <class T>
T phi(const BiorthSystem<T>& sys, int family, int l, const T& z, int order = 0)
{
    if (l < 0 || l >= sys.size)
        throw IndexOutOfRange("index " + std::to_string(l) + " outside system of size " + std::to_string(sys.size));
    const Matrix<T>& S = sys.factor(family);
    const auto basis = chi(z, l + 1, order);
    T s = from_int<T>(0);
    for (int j = 0; j <= l; ++j)
        s += S(l, j) * basis[j];
    return s;
}

// sum_{k<l} conj(d^{d1} phi_{2,k}(z1)) H_k^{-1} d^{d2} phi_{1,k}(z2)
template <class T>
T cd_kernel(const BiorthSystem<T>& sys, int l, const T& z1, const T& z2, int d1 = 0, int d2 = 0)
{
    if (l < 0 || l > sys.size)
        throw IndexOutOfRange("kernel order " + std::to_string(l) + " exceeds system size " + std::to_string(sys.size));
    if (l == 0)
        return from_int<T>(0);
    const auto a = phi_all(sys, 2, z1, d1, l);
    const auto b = phi_all(sys, 1, z2, d2, l);
    T s = from_int<T>(0);
    for (int k = 0; k < l; ++k)
        s += conj_of(a[k]) * b[k] / sys.H[k];
    return s;
}

// chi(z1)^dagger (G^{[l]})^{-1} chi(z2) through an independent pivoted solve
template <class T>
T abc_kernel(const Matrix<T>& G, int l, const T& z1, const T& z2, int d1 = 0, int d2 = 0)
{
    if (l < 0 || l > G.rows())
        throw IndexOutOfRange("kernel order exceeds Gram size");
    if (l == 0)
        return from_int<T>(0);
    PivotedLU<T> lu(G.leading(l));
    if (lu.exactly_singular())
        throw QuasidefiniteViolation(l - 1, "leading block of order " + std::to_string(l) + " is singular");
    const auto x = lu.solve(chi(z2, l, d2));
    const auto c1 = chi(z1, l, d1);
    T s = from_int<T>(0);
    for (int k = 0; k < l; ++k)
        s += conj_of(c1[k]) * x[k];
    return s;
}

// max_{n,m} |<phi_{1,n}, phi_{2,m}> - delta_{nm} H_n| / |H_n|, pairings through the Gram matrix
template <class T>
double biorthogonality_residual(const BiorthSystem<T>& sys, const Matrix<T>& G)
{
    const Matrix<T> P = sys.S1 * G * sys.S2.adjoint();
    double worst = 0.0;
    for (int n = 0; n < sys.size; ++n)
        for (int m = 0; m < sys.size; ++m) {
            T r = P(n, m);
            if (n == m)
                r -= sys.H[n];
            worst = std::max(worst, magnitude(r) / magnitude(sys.H[n]));
        }
    return worst;
}

// the same residual with every pairing evaluated from the functional itself
template <class T>
double biorthogonality_residual(const BiorthSystem<T>& sys, const FunctionalSpec& spec)
{
    std::vector<LaurentPoly<T>> p1, p2;
    for (int k = 0; k < sys.size; ++k) {
        p1.push_back(phi_poly(sys, 1, k));
        p2.push_back(phi_poly(sys, 2, k));
    }
    detail::MonomialPairing<T> mono(spec, cmv_max_abs_exponent(sys.size));
    auto pairing = [&](const LaurentPoly<T>& p, const LaurentPoly<T>& q) {
        T s = from_int<T>(0);
        for (const auto& [a, pa] : p.coeffs())
            for (const auto& [b, qb] : q.coeffs())
                s += pa * conj_of(qb) * mono(a, b);
        return s;
    };
    double worst = 0.0;
    for (int n = 0; n < sys.size; ++n)
        for (int m = 0; m < sys.size; ++m) {
            T r = pairing(p1[n], p2[m]);
            if (n == m)
                r -= sys.H[n];
            worst = std::max(worst, magnitude(r) / magnitude(sys.H[n]));
        }
    return worst;
}

} // namespace cmvlab

#endif
