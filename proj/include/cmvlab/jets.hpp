#ifndef CMVLAB_JETS_HPP
#define CMVLAB_JETS_HPP

#include <functional>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "functional.hpp"
#include "laurent.hpp"
#include "matrix.hpp"

namespace cmvlab {

// Row [f(z_1), f'(z_1)/1!, ..., f^{(m_1-1)}(z_1)/(m_1-1)!, f(z_2), ...] at the
// zeros of L, or at their conjugates (the zeros of Lbar) when conjugated.
template <class T, class F>
std::vector<T> jet(F&& f, const SpectralData<T>& spectral, bool conjugated = false)
{
    std::vector<T> row;
    row.reserve(spectral.total_multiplicity());
    for (const auto& z : spectral.zeros) {
        const T pt = conjugated ? conj_of(z.point) : z.point;
        for (int r = 0; r < z.multiplicity; ++r)
            row.push_back(f(pt, r) / factorial_t<T>(r));
    }
    return row;
}

template <class T>
std::vector<T> jet_of_poly(const LaurentPoly<T>& p, const SpectralData<T>& spectral, bool conjugated = false)
{
    return jet<T>([&](const T& z, int r) { return p.eval_deriv(z, r); }, spectral, conjugated);
}

// L_{[j]}(z) = L(z) / (z - zeta_j)^{m_j}
template <class T>
LaurentPoly<T> deflated(const PreparedLaurent<T>& L, int j)
{
    LaurentPoly<T> p = LaurentPoly<T>::monomial(-L.n, L.leading);
    for (int i = 0; i < static_cast<int>(L.spectral.zeros.size()); ++i) {
        if (i == j)
            continue;
        const auto& z = L.spectral.zeros[i];
        const LaurentPoly<T> factor = LaurentPoly<T>::monomial(1, from_int<T>(1)) + LaurentPoly<T>::constant(-z.point);
        for (int r = 0; r < z.multiplicity; ++r)
            p = p * factor;
    }
    return p;
}

// block diagonal; block j has entry (a, b) = ell_{a+b+1-m_j} (zero when negative),
// ell_k = (1/k!) d^k conj(L_{[j]}) at conj(zeta_j)
template <class T>
Matrix<T> ell_matrix(const PreparedLaurent<T>& L)
{
    const int total = L.spectral.total_multiplicity();
    Matrix<T> out(total, total);
    int offset = 0;
    for (int j = 0; j < static_cast<int>(L.spectral.zeros.size()); ++j) {
        const int m = L.spectral.zeros[j].multiplicity;
        const LaurentPoly<T> lj = deflated(L, j).conj_coeffs();
        const T at = conj_of(L.spectral.zeros[j].point);
        std::vector<T> ell(m);
        for (int k = 0; k < m; ++k)
            ell[k] = lj.eval_deriv(at, k) / factorial_t<T>(k);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const int k = a + b + 1 - m;
                if (k >= 0)
                    out(offset + a, offset + b) = ell[k];
            }
        offset += m;
    }
    return out;
}

// unsigned Lah number C(k-1, j-1) k!/j!
inline double lah_number(int k, int j)
{
    if (k == 0 && j == 0)
        return 1.0;
    if (j < 1 || j > k)
        return 0.0;
    return static_cast<double>(binomial(k - 1, j - 1)) * factorial(k) / factorial(j);
}

// chain rule for M_*(z) = Mbar(1/z): (M_*)^{(k)}(zeta) = sum_j Mbar^{(j)}(1/zeta) B_{k,j}
template <class T>
Matrix<T> bell_matrix(const T& zeta, int m)
{
    if (is_zero(zeta))
        throw ZeroRoot("Bell matrix at the origin");
    Matrix<T> B(m, m);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j <= k; ++j) {
            const double lah = lah_number(k, j);
            if (lah == 0.0)
                continue;
            const T sign = from_int<T>(k % 2 == 0 ? 1 : -1);
            B(k, j) = sign * from_int<T>(static_cast<long>(lah)) * ipow(zeta, -k - j);
        }
    return B;
}

// ---- mass functionals ----

// weight * f^{(order)}(point)
struct MassTerm {
    cplx point;
    int order = 0;
    cplx weight;
};

// one functional per jet slot (i, l), stored in jet order
struct GeneralMass {
    std::vector<std::vector<MassTerm>> xi;
};

// Xi_{(i,k),(j,l)}: rows follow the zeros of the circle polynomial L, columns those of L_*
struct CircleMatrixMass {
    Matrix<cplx> Xi;
};

// per zero i of the circle polynomial, the values Xi^i_l, l < m_i
struct DiagonalCircleMass {
    std::vector<std::vector<cplx>> values;
};

struct MassSpec {
    std::variant<std::monostate, GeneralMass, CircleMatrixMass, DiagonalCircleMass> v;

    bool is_zero() const;
    std::string kind() const;
};

// Xi = diag(Xi_i) built blockwise from diagonal values and Bell matrices
CircleMatrixMass expand_diagonal(const DiagonalCircleMass& d, const PreparedLaurent<cplx>& circle_L);

// the polynomial whose zeros index the circle mass rows for a request on
// the given side: L itself for side 1, its reciprocal for side 2
PreparedLaurent<cplx> circle_polynomial(const PreparedLaurent<cplx>& L_request, Side side);

// mass functionals of the request polynomial in jet order
GeneralMass to_general(const MassSpec& mass, const PreparedLaurent<cplx>& L_request, Side side);

// <xi, f> as a row in jet order; f(z, order) returns the order-th derivative
std::vector<cplx> mass_pair(const GeneralMass& mass, const std::function<cplx(cplx, int)>& f);
std::vector<cplx> mass_pair(const GeneralMass& mass, const LaurentPoly<cplx>& p);

// point atoms realizing the mass part of the perturbed functional
PointMasses mass_atoms(const GeneralMass& mass, const PreparedLaurent<cplx>& L_request, Side side);

} // namespace cmvlab

#endif
