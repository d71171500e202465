#include "cmvlab/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace cmvlab {

namespace {

std::vector<cplx> row_times(const std::vector<cplx>& row, const Matrix<cplx>& m)
{
    std::vector<cplx> out(m.cols(), 0.0);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out[j] += row[i] * m(i, j);
    return out;
}

QuasidetResult<cplx> scaled(QuasidetResult<cplx> r, cplx f)
{
    r.value *= f;
    r.schur *= f;
    r.det_quotient *= f;
    return r;
}

QuasidetResult<cplx> passthrough(cplx v)
{
    QuasidetResult<cplx> r;
    r.value = r.schur = r.det_quotient = v;
    r.det_leading = 1.0;
    return r;
}

// columns [0, M) of the inverse of a unit lower triangular block of size `wide`
Matrix<cplx> inverse_columns(const Matrix<cplx>& S, int wide, int M)
{
    if (S.rows() < wide)
        throw IncompatibleTruncations("factor of size " + std::to_string(S.rows()) + " cannot supply " +
                                      std::to_string(wide) + " rows to a connector");
    return unit_lower_inverse(S.leading(wide)).block(0, 0, wide, M);
}

} // namespace

void check_geronimus_support(const FunctionalSpec& base, const PreparedLaurent<cplx>& L, Side side, double eps)
{
    const SupportSet s = support(base, side);
    for (const auto& z : L.spectral.zeros) {
        const double d = s.distance(z.point);
        if (d < eps * std::max(1.0, std::abs(z.point)))
            throw SupportCollision("zero (" + std::to_string(z.point.real()) + ", " + std::to_string(z.point.imag()) +
                                   ") of the perturbing polynomial lies on the support");
    }
}

FunctionalSpec geronimus_functional(const FunctionalSpec& base, const PreparedLaurent<cplx>& L, Side side,
                                    const GeneralMass& xi, double eps_support)
{
    check_geronimus_support(base, L, side, eps_support);
    FunctionalSpec divided = divide_by(base, L.poly, side);
    PointMasses atoms = mass_atoms(xi, L, side);
    if (atoms.atoms.empty())
        return divided;
    FunctionalSpec masses{atoms, "mass"};
    return sum_of({divided, masses}, divided.label + "+mass");
}

GeronimusDirect geronimus_direct(const FunctionalSpec& base, const PreparedLaurent<cplx>& L, Side side,
                                 const GeneralMass& xi, int M, double pivot_floor)
{
    GeronimusDirect out;
    out.spec = geronimus_functional(base, L, side, xi);
    out.gram = gram<cplx>(out.spec, M);
    out.gram.source = "geronimus";
    out.sys = factorize(out.gram.data, pivot_floor, "geronimus");
    return out;
}

GeronimusFormula::GeronimusFormula(const FunctionalSpec& base, const BiorthSystem<cplx>& sys,
                                   const PreparedLaurent<cplx>& L, Side side, const GeneralMass& xi, int lmax,
                                   const CauchyOptions& opt)
    : spec_(side == Side::second ? base : adjoint(base)), sys_(side == Side::second ? sys : sys.adjoint()), L_(L),
      side_(side), xi_(xi), lmax_(lmax), opt_(opt)
{
    p_ = 2 * L.n;
    check_geronimus_support(base, L, side, opt.eps_support);
    if (sys_.size < lmax + 1)
        throw IncompatibleTruncations("base system of size " + std::to_string(sys_.size) + " too small for degree " +
                                      std::to_string(lmax));
    if (p_ == 0)
        return;
    ell_ = ell_matrix(L);
    const int count = lmax + 1;

    std::vector<std::vector<cplx>> jets(count, std::vector<cplx>(p_, 0.0));
    int col = 0;
    for (const auto& z : L.spectral.zeros)
        for (int r = 0; r < z.multiplicity; ++r, ++col) {
            const auto vals = c_pairing_all(spec_, sys_, 1, std::conj(z.point), r, count, opt_);
            for (int j = 0; j < count; ++j)
                jets[j][col] = vals[j] / factorial(r);
        }

    std::vector<std::vector<cplx>> masses(count, std::vector<cplx>(p_, 0.0));
    for (std::size_t s = 0; s < xi_.xi.size() && static_cast<int>(s) < p_; ++s)
        for (const auto& t : xi_.xi[s]) {
            const auto vals = phi_all(sys_, 1, t.point, t.order, count);
            for (int j = 0; j < count; ++j)
                masses[j][s] += t.weight * vals[j];
        }

    rows_.resize(count);
    for (int j = 0; j < count; ++j) {
        const auto m = row_times(masses[j], ell_);
        rows_[j].resize(p_);
        for (int c = 0; c < p_; ++c)
            rows_[j][c] = jets[j][c] - m[c];
    }
}

void GeronimusFormula::check(int l) const
{
    if (l < p_ || l > lmax_)
        throw IndexOutOfRange("degree " + std::to_string(l) + " outside [" + std::to_string(p_) + ", " +
                              std::to_string(lmax_) + "]");
}

QuasidetResult<cplx> GeronimusFormula::core_a(int l, cplx z) const
{
    check(l);
    if (p_ == 0)
        return passthrough(phi(sys_, 1, l, z));
    const auto vals = phi_all(sys_, 1, z, 0, l + 1);
    BlockMatrix<cplx> bm;
    bm.A = stack_rows(std::vector<std::vector<cplx>>(rows_.begin() + (l - p_), rows_.begin() + l));
    bm.B.assign(vals.begin() + (l - p_), vals.begin() + l);
    bm.C = rows_[l];
    bm.D = vals[l];
    return theta_star(bm);
}

QuasidetResult<cplx> GeronimusFormula::core_norm(int l) const
{
    check(l);
    const cplx prefactor = sys_.H[l - p_] / std::conj(L_.corner_coeff(l));
    if (p_ == 0)
        return passthrough(prefactor);
    BlockMatrix<cplx> bm;
    bm.A = stack_rows(std::vector<std::vector<cplx>>(rows_.begin() + (l - p_), rows_.begin() + l));
    bm.B = unit_vector<cplx>(p_, 0);
    bm.C = rows_[l];
    bm.D = 0.0;
    return scaled(theta_star(bm), prefactor);
}

std::vector<cplx> GeronimusFormula::kernel_row(int l, cplx z) const
{
    const cplx Lbar_at = std::conj(L_.poly.eval(z));
    const LaurentPoly<cplx> dd = divided_difference_in_second(L_.poly.conj_coeffs(), std::conj(z));

    std::vector<cplx> kmass(p_, 0.0);
    for (std::size_t s = 0; s < xi_.xi.size() && static_cast<int>(s) < p_; ++s)
        for (const auto& t : xi_.xi[s])
            kmass[s] += t.weight * cd_kernel(sys_, l, z, t.point, 0, t.order);
    const auto kl = row_times(kmass, ell_);

    std::vector<cplx> row;
    int col = 0;
    for (const auto& zero : L_.spectral.zeros) {
        const cplx at = std::conj(zero.point);
        for (int r = 0; r < zero.multiplicity; ++r, ++col) {
            const cplx mixed = mixed_kernel(sys_, spec_, MixedKind::phi_c, l, z, at, 0, r, opt_) / factorial(r);
            row.push_back(Lbar_at * (mixed - kl[col]) + dd.eval_deriv(at, r) / factorial(r));
        }
    }
    return row;
}

QuasidetResult<cplx> GeronimusFormula::core_b(int l, cplx z) const
{
    check(l);
    if (p_ == 0)
        return passthrough(std::conj(phi(sys_, 2, l, z)));
    BlockMatrix<cplx> bm;
    bm.A = stack_rows(std::vector<std::vector<cplx>>(rows_.begin() + (l - p_), rows_.begin() + l));
    bm.B = unit_vector<cplx>(p_, 0);
    bm.C = kernel_row(l, z);
    bm.D = 0.0;
    return scaled(theta_star(bm), -sys_.H[l - p_] / std::conj(L_.corner_coeff(l)));
}

cplx GeronimusFormula::phi1(int l, cplx z) const
{
    return side_ == Side::second ? core_a(l, z).value : std::conj(core_b(l, z).value);
}

cplx GeronimusFormula::phi2(int l, cplx z) const
{
    return side_ == Side::second ? std::conj(core_b(l, z).value) : core_a(l, z).value;
}

cplx GeronimusFormula::norm(int l) const
{
    const cplx v = core_norm(l).value;
    return side_ == Side::second ? v : std::conj(v);
}

cplx GeronimusFormula::tau(int l) const
{
    if (l < p_ || l > lmax_ + 1 || l > static_cast<int>(rows_.size()))
        throw IndexOutOfRange("pivot index outside the computed rows");
    return determinant(stack_rows(std::vector<std::vector<cplx>>(rows_.begin() + (l - p_), rows_.begin() + l)));
}

cplx GeronimusFormula::norm_det(int l) const
{
    check(l);
    if (p_ == 0)
        return norm(l);
    const cplx v = sys_.H[l - p_] / std::conj(L_.corner_coeff(l)) * tau(l + 1) / tau(l);
    return side_ == Side::second ? v : std::conj(v);
}

double GeronimusFormula::quasidet_discrepancy(int l, cplx z) const
{
    if (p_ == 0)
        return 0.0;
    return std::max({core_a(l, z).discrepancy, core_norm(l).discrepancy, core_b(l, z).discrepancy});
}

BandReport band_profile(const Matrix<cplx>& m, int lower, int upper, double zero_tol)
{
    BandReport r;
    const double scale = std::max(m.max_abs(), 1e-300);
    const int n = std::min(m.rows(), m.cols());
    r.unit_diagonal = true;
    for (int i = 0; i < n; ++i)
        if (std::abs(m(i, i) - 1.0) > zero_tol * std::max(1.0, scale))
            r.unit_diagonal = false;
    for (int d = -lower; d <= upper; ++d) {
        double worst = 0.0;
        for (int i = 0; i < m.rows(); ++i) {
            const int j = i + d;
            if (j >= 0 && j < m.cols())
                worst = std::max(worst, std::abs(m(i, j)));
        }
        if (worst > zero_tol * scale)
            ++r.nonzero_diagonals;
    }
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (j - i < -lower || j - i > upper)
                r.off_band = std::max(r.off_band, std::abs(m(i, j)) / scale);
    return r;
}

Connectors christoffel_connectors(const BiorthSystem<cplx>& base, const BiorthSystem<cplx>& hat,
                                  const PreparedLaurent<cplx>& L, Side side, int M)
{
    const int wide = M + 2 * L.n;
    const Matrix<cplx> LU = laurent_of_upsilon_rect(L.poly, M, wide);
    Connectors c;
    if (side == Side::first) {
        c.first = hat.S1.leading(M) * LU * inverse_columns(base.S1, wide, M);
        c.second = base.S2.leading(M) * unit_lower_inverse(hat.S2.leading(M));
    } else {
        c.first = base.S1.leading(M) * unit_lower_inverse(hat.S1.leading(M));
        c.second = hat.S2.leading(M) * LU * inverse_columns(base.S2, wide, M);
    }
    return c;
}

Connectors geronimus_connectors(const BiorthSystem<cplx>& base, const BiorthSystem<cplx>& check,
                                const PreparedLaurent<cplx>& L, Side side, int M)
{
    const int wide = M + 2 * L.n;
    const Matrix<cplx> LU = laurent_of_upsilon_rect(L.poly, M, wide);
    Connectors c;
    if (side == Side::first) {
        c.first = base.S1.leading(M) * LU * inverse_columns(check.S1, wide, M);
        c.second = check.S2.leading(M) * unit_lower_inverse(base.S2.leading(M));
    } else {
        c.first = check.S1.leading(M) * unit_lower_inverse(base.S1.leading(M));
        c.second = base.S2.leading(M) * LU * inverse_columns(check.S2, wide, M);
    }
    return c;
}

} // namespace cmvlab
