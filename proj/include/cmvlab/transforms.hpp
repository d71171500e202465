#ifndef CMVLAB_TRANSFORMS_HPP
#define CMVLAB_TRANSFORMS_HPP

#include <string>
#include <vector>

#include "cmv.hpp"
#include "functional.hpp"
#include "gaussborel.hpp"
#include "jets.hpp"
#include "laurent.hpp"
#include "quasidet.hpp"
#include "secondkind.hpp"

namespace cmvlab {

enum class TransformKind { christoffel, geronimus };

struct TransformRequest {
    TransformKind kind = TransformKind::christoffel;
    Side side = Side::first;
    PreparedLaurent<cplx> L;
    MassSpec mass;
    int lmin = -1; // defaults to 2n
    int lmax = 16;

    int first_degree() const { return lmin < 0 ? 2 * L.n : std::max(lmin, 2 * L.n); }
};

// base truncation needed to deliver degrees up to N after a transform of degree n
inline int base_budget(int N, int n) { return N + 2 * n + 4; }

// ---------------------------------------------------------------- Christoffel

// leading M x M block of L(Upsilon) G (side 1) or G L(Upsilon)^dagger (side 2);
// G must hold at least M + 2 deg(L) rows and columns
template <class T>
Matrix<T> christoffel_gram(const Matrix<T>& G, const LaurentPoly<T>& L, Side side, int M)
{
    const int deg = std::max(L.upper_degree(), L.lower_degree());
    const int wide = M + 2 * deg;
    if (G.rows() < wide || G.cols() < wide)
        throw IncompatibleTruncations("Gram of size " + std::to_string(G.rows()) + " cannot give an exact block of " +
                                      std::to_string(M) + " after multiplying by a degree " + std::to_string(deg) +
                                      " polynomial");
    const Matrix<T> LU = laurent_of_upsilon_rect(L, M, wide);
    if (side == Side::first)
        return LU * G.block(0, 0, wide, M);
    return G.block(0, 0, M, wide) * LU.adjoint();
}

template <class T>
BiorthSystem<T> christoffel_direct(const Matrix<T>& G, const PreparedLaurent<T>& L, Side side, int M,
                                   double pivot_floor = default_pivot_floor)
{
    return factorize(christoffel_gram(G, L.poly, side, M), pivot_floor, "christoffel");
}

// Quasideterminant formulas for the Christoffel transform. Everything is
// computed on a canonical system where the polynomial multiplies the first
// variable; the second side is the same computation on the adjoint system.
template <class T>
class ChristoffelFormula {
public:
    ChristoffelFormula(const BiorthSystem<T>& base, const PreparedLaurent<T>& L, Side side, int lmax)
        : L_(L), side_(side), lmax_(lmax), sys_(side == Side::first ? base : base.adjoint())
    {
        p_ = 2 * L.n;
        if (sys_.size < lmax + p_ + 1)
            throw IncompatibleTruncations("base system of size " + std::to_string(sys_.size) + " too small for degree " +
                                          std::to_string(lmax));
        const int count = lmax + p_ + 1;
        jets_.assign(count, std::vector<T>(p_, from_int<T>(0)));
        int col = 0;
        for (const auto& z : L.spectral.zeros)
            for (int r = 0; r < z.multiplicity; ++r, ++col) {
                const auto vals = phi_all(sys_, 1, z.point, r, count);
                for (int j = 0; j < count; ++j)
                    jets_[j][col] = vals[j] / factorial_t<T>(r);
            }
    }

    int degree() const { return L_.n; }

    T phi1(int l, const T& z) const { return side_ == Side::first ? core_a(l, z).value : conj_of(core_b(l, z).value); }
    T phi2(int l, const T& z) const { return side_ == Side::first ? conj_of(core_b(l, z).value) : core_a(l, z).value; }
    T norm(int l) const { return orient(core_norm(l).value); }
    // ratio of consecutive jet determinants
    T norm_det(int l) const
    {
        if (p_ == 0)
            return norm(l);
        return orient(L_.corner_coeff(l) * sys_.H[l] * tau(l + 1) / tau(l));
    }
    // the family given by the kernel jets, in its determinant form
    T kernel_family_det(int l, const T& z) const { return conj_of(core_b_det(l, z)); }
    int kernel_family() const { return side_ == Side::first ? 2 : 1; }

    T tau(int l) const { return determinant(stack_rows(slice(l, p_))); }

    // largest Schur vs determinant-quotient mismatch seen in the last evaluations
    double quasidet_discrepancy(int l, const T& z) const
    {
        if (p_ == 0)
            return 0.0;
        return std::max({core_a(l, z).discrepancy, core_norm(l).discrepancy, core_b(l, z).discrepancy});
    }

private:
    PreparedLaurent<T> L_;
    Side side_;
    int lmax_;
    BiorthSystem<T> sys_;
    int p_ = 0;
    std::vector<std::vector<T>> jets_;

    T orient(const T& v) const { return side_ == Side::first ? v : conj_of(v); }

    void check(int l) const
    {
        if (l < p_ || l > lmax_)
            throw IndexOutOfRange("degree " + std::to_string(l) + " outside [" + std::to_string(p_) + ", " +
                                  std::to_string(lmax_) + "]");
    }

    std::vector<std::vector<T>> slice(int from, int count) const
    {
        return std::vector<std::vector<T>>(jets_.begin() + from, jets_.begin() + from + count);
    }

    QuasidetResult<T> passthrough(const T& v) const
    {
        QuasidetResult<T> r;
        r.value = r.schur = r.det_quotient = v;
        r.det_leading = from_int<T>(1);
        return r;
    }

    // perturbed polynomial of the multiplied family
    QuasidetResult<T> core_a(int l, const T& z) const
    {
        check(l);
        if (p_ == 0)
            return passthrough(phi(sys_, 1, l, z));
        const auto vals = phi_all(sys_, 1, z, 0, l + p_ + 1);
        BlockMatrix<T> bm;
        bm.A = stack_rows(slice(l, p_));
        bm.B.assign(vals.begin() + l, vals.begin() + l + p_);
        bm.C = jets_[l + p_];
        bm.D = vals[l + p_];
        auto r = theta_star(bm);
        const T factor = L_.corner_coeff(l) / L_.poly.eval(z);
        r.value *= factor;
        r.schur *= factor;
        r.det_quotient *= factor;
        return r;
    }

    QuasidetResult<T> core_norm(int l) const
    {
        check(l);
        if (p_ == 0)
            return passthrough(L_.corner_coeff(l) * sys_.H[l]);
        BlockMatrix<T> bm;
        bm.A = stack_rows(slice(l, p_));
        bm.B = unit_vector<T>(p_, 0);
        bm.C = jets_[l + p_];
        bm.D = from_int<T>(0);
        auto r = theta_star(bm);
        const T factor = L_.corner_coeff(l) * sys_.H[l];
        r.value *= factor;
        r.schur *= factor;
        r.det_quotient *= factor;
        return r;
    }

    std::vector<T> kernel_jet(int l, const T& z) const
    {
        std::vector<T> row;
        for (const auto& zero : L_.spectral.zeros)
            for (int r = 0; r < zero.multiplicity; ++r)
                row.push_back(cd_kernel(sys_, l + 1, z, zero.point, 0, r) / factorial_t<T>(r));
        return row;
    }

    // conjugate of the other perturbed family
    QuasidetResult<T> core_b(int l, const T& z) const
    {
        check(l);
        if (p_ == 0)
            return passthrough(conj_of(phi(sys_, 2, l, z)));
        BlockMatrix<T> bm;
        bm.A = stack_rows(slice(l + 1, p_));
        bm.B = unit_vector<T>(p_, p_ - 1);
        bm.C = kernel_jet(l, z);
        bm.D = from_int<T>(0);
        auto r = theta_star(bm);
        const T factor = core_norm(l).value / L_.corner_coeff(l);
        r.value *= factor;
        r.schur *= factor;
        r.det_quotient *= factor;
        return r;
    }

    T core_b_det(int l, const T& z) const
    {
        check(l);
        if (p_ == 0)
            return conj_of(phi(sys_, 2, l, z));
        auto rows = slice(l + 1, p_ - 1);
        rows.push_back(kernel_jet(l, z));
        return -sys_.H[l] * determinant(stack_rows(rows)) / tau(l);
    }
};

// ---------------------------------------------------------------- Geronimus

// u / L(z1) (side 1) or u / conj(L(z2)) (side 2) plus the mass atoms
FunctionalSpec geronimus_functional(const FunctionalSpec& base, const PreparedLaurent<cplx>& L, Side side,
                                    const GeneralMass& xi, double eps_support = 1e-6);

// zeros of L must stay off the support projection the transform divides on
void check_geronimus_support(const FunctionalSpec& base, const PreparedLaurent<cplx>& L, Side side, double eps);

struct GeronimusDirect {
    FunctionalSpec spec;
    GramTruncation<cplx> gram;
    BiorthSystem<cplx> sys;
};

GeronimusDirect geronimus_direct(const FunctionalSpec& base, const PreparedLaurent<cplx>& L, Side side,
                                 const GeneralMass& xi, int M, double pivot_floor = default_pivot_floor);

// Quasideterminant formulas for the Geronimus transform with masses. The
// canonical computation divides by conj(L(z2)); the first side runs it on
// the adjoint functional and system.
class GeronimusFormula {
public:
    GeronimusFormula(const FunctionalSpec& base, const BiorthSystem<cplx>& sys, const PreparedLaurent<cplx>& L, Side side,
                     const GeneralMass& xi, int lmax, const CauchyOptions& opt = {});

    cplx phi1(int l, cplx z) const;
    cplx phi2(int l, cplx z) const;
    cplx norm(int l) const;
    cplx norm_det(int l) const;
    cplx tau(int l) const;
    double quasidet_discrepancy(int l, cplx z) const;

    // rows R_j = jet of C along Lbar minus <xi, phi> times the ell matrix, canonical orientation
    const std::vector<std::vector<cplx>>& rows() const { return rows_; }
    const Matrix<cplx>& ell() const { return ell_; }

private:
    FunctionalSpec spec_;
    BiorthSystem<cplx> sys_;
    PreparedLaurent<cplx> L_;
    Side side_;
    GeneralMass xi_;
    int lmax_;
    CauchyOptions opt_;
    int p_ = 0;
    Matrix<cplx> ell_;
    std::vector<std::vector<cplx>> rows_;

    void check(int l) const;
    QuasidetResult<cplx> core_a(int l, cplx z) const;
    QuasidetResult<cplx> core_norm(int l) const;
    QuasidetResult<cplx> core_b(int l, cplx z) const;
    std::vector<cplx> kernel_row(int l, cplx z) const;
};

// ---------------------------------------------------------------- connectors

struct BandReport {
    double off_band = 0.0;       // largest entry outside the band, relative to the largest entry
    int nonzero_diagonals = 0;   // diagonals inside the band carrying a nonzero entry
    bool unit_diagonal = false;
};

BandReport band_profile(const Matrix<cplx>& m, int lower, int upper, double zero_tol = 1e-10);

struct Connectors {
    Matrix<cplx> first;  // omega_1 / Omega_1
    Matrix<cplx> second; // omega_2 / Omega_2
};

// base and perturbed systems; the factor standing to the right of L(Upsilon)
// must have at least M + 2n rows
Connectors christoffel_connectors(const BiorthSystem<cplx>& base, const BiorthSystem<cplx>& hat,
                                  const PreparedLaurent<cplx>& L, Side side, int M);
Connectors geronimus_connectors(const BiorthSystem<cplx>& base, const BiorthSystem<cplx>& check,
                                const PreparedLaurent<cplx>& L, Side side, int M);

} // namespace cmvlab

#endif
