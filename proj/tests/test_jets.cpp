#include "helpers.hpp"

using namespace cmvlab;
using testing::rel_err;

namespace {

std::vector<cplx> poly_jet(const LaurentPoly<cplx>& p, const PreparedLaurent<cplx>& L, bool conjugated = false)
{
    return jet_of_poly(p, L.spectral, conjugated);
}

// pairing of the point atoms alone
cplx atom_pairing(const PointMasses& pm, const LaurentPoly<cplx>& f, const LaurentPoly<cplx>& g)
{
    cplx s = 0.0;
    for (const auto& a : pm.atoms)
        s += a.weight * f.eval_deriv(a.p1, a.k) * std::conj(g.eval_deriv(a.p2, a.l));
    return s;
}

} // namespace

TEST_CASE("jets of simple functions")
{
    const auto z = LaurentPoly<cplx>::monomial(1, 1.0);
    const auto j1 = poly_jet(z, testing::simple_pair());
    REQUIRE(j1.size() == 2);
    CHECK(std::abs(j1[0] - 2.0) < 1e-15);
    CHECK(std::abs(j1[1] - 0.5) < 1e-15);

    const auto j2 = poly_jet(LaurentPoly<cplx>::monomial(2, 1.0), testing::double_zero());
    CHECK(std::abs(j2[0] - 4.0) < 1e-15);
    CHECK(std::abs(j2[1] - 4.0) < 1e-15);

    const auto L = prepared_from_zeros<cplx>(cplx(1, 2), {{{cplx(0, 3), 2}, {cplx(1, 1), 1}, {cplx(-2, 0.5), 3}}});
    for (const auto& v : poly_jet(L.poly, L))
        CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("conjugated jets evaluate at the conjugate points")
{
    const auto L = prepared_from_zeros<cplx>(1.0, {{{cplx(1, 2), 2}, {cplx(0.5, -1), 2}}});
    std::mt19937_64 rng(1);
    const auto p = testing::random_poly(rng, -2, 3);
    const auto a = poly_jet(p, L, true);
    const auto b = jet<cplx>([&](cplx z, int r) { return p.eval_deriv(z, r); },
                             SpectralData<cplx>{{{cplx(1, -2), 2}, {cplx(0.5, 1), 2}}});
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(rel_err(a[i], b[i]) < 1e-15);
}

TEST_CASE("jets are linear and vanish on multiples of the factors")
{
    const auto L = prepared_from_zeros<cplx>(cplx(0.4, 0.1), {{{cplx(2, 1), 3}, {cplx(-0.5, 0.5), 1}}});
    std::mt19937_64 rng(3);
    const auto f = testing::random_poly(rng, -2, 2), g = testing::random_poly(rng, -1, 4);
    const cplx a(1.5, -0.2), b(-0.3, 0.8);
    const auto lhs = poly_jet(a * f + b * g, L);
    const auto jf = poly_jet(f, L), jg = poly_jet(g, L);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        CHECK(rel_err(lhs[i], a * jf[i] + b * jg[i]) < 1e-13);

    // (z - zeta_0)^3 h(z) has a vanishing jet in the first block
    const auto factor = LaurentPoly<cplx>({{1, 1.0}, {0, -cplx(2, 1)}});
    const auto prod = factor * factor * factor * f;
    const auto jp = poly_jet(prod, L);
    for (int r = 0; r < 3; ++r)
        CHECK(std::abs(jp[r]) < 1e-11);
}

TEST_CASE("ell matrices")
{
    const auto E1 = ell_matrix(testing::simple_pair());
    CHECK(std::abs(E1(0, 0) - 0.75) < 1e-15);
    CHECK(std::abs(E1(1, 1) + 3.0) < 1e-15);
    CHECK(std::abs(E1(0, 1)) == 0.0);
    CHECK(std::abs(E1(1, 0)) == 0.0);

    const auto E2 = ell_matrix(testing::double_zero());
    CHECK(std::abs(E2(0, 0)) == 0.0);
    CHECK(std::abs(E2(0, 1) - 0.5) < 1e-15);
    CHECK(std::abs(E2(1, 0) - 0.5) < 1e-15);
    CHECK(std::abs(E2(1, 1) + 0.25) < 1e-15);
}

TEST_CASE("Bell matrices follow the chain rule of the reciprocal")
{
    CHECK(bell_matrix<cplx>(cplx(0.3, 2), 1)(0, 0) == cplx(1.0));
    const auto B = bell_matrix<cplx>(1.0, 2);
    CHECK(std::abs(B(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(B(0, 1)) == 0.0);
    CHECK(std::abs(B(1, 1) + 1.0) < 1e-15);
    CHECK_THROWS_AS(bell_matrix<cplx>(0.0, 2), ZeroRoot);

    std::mt19937_64 rng(4);
    std::vector<LaurentPoly<cplx>> tests{LaurentPoly<cplx>::monomial(2, 1.0), testing::random_poly(rng, -2, 3)};
    for (const auto& M : tests)
        for (const auto& zeta : testing::random_points(9, 4)) {
            const int m = 4;
            const auto Bz = bell_matrix(zeta, m);
            const auto Mstar = M.reciprocal_star();
            const auto Mbar = M.conj_coeffs();
            for (int k = 0; k < m; ++k) {
                cplx s = 0.0;
                for (int j = 0; j <= k; ++j)
                    s += Mbar.eval_deriv(1.0 / zeta, j) * Bz(k, j);
                CHECK(rel_err(Mstar.eval_deriv(zeta, k), s) < 1e-12);
            }
        }
}

TEST_CASE("mass pairings")
{
    const auto L = testing::simple_pair();
    std::mt19937_64 rng(5);
    const auto p = testing::random_poly(rng, -2, 2);
    for (Side side : {Side::first, Side::second})
        for (const auto& v : mass_pair(to_general(MassSpec{}, L, side), p))
            CHECK(v == cplx(0.0));

    // identity matrix mass on the second side pairs into the jet along the circle polynomial
    MassSpec id;
    id.v = CircleMatrixMass{Matrix<cplx>::identity(2)};
    const auto row = mass_pair(to_general(id, L, Side::second), p);
    const auto j = poly_jet(p, circle_polynomial(L, Side::second));
    for (int i = 0; i < 2; ++i)
        CHECK(rel_err(row[i], j[i]) < 1e-14);
}

TEST_CASE("diagonal masses with simple zeros expand to a diagonal matrix")
{
    const auto L = prepared_from_zeros<cplx>(1.0, {{{cplx(2, 1), 1}, {cplx(0.5, -0.3), 1}}});
    const auto X = expand_diagonal(DiagonalCircleMass{{{0.3}, {cplx(0.1, 0.2)}}}, L).Xi;
    CHECK(std::abs(X(0, 0) - 0.3) < 1e-15);
    CHECK(std::abs(X(1, 1) - cplx(0.1, 0.2)) < 1e-15);
    CHECK(X(0, 1) == cplx(0.0));
    CHECK(X(1, 0) == cplx(0.0));
}

TEST_CASE("diagonal mass expansion reproduces the derivative distribution")
{
    // sum_i sum_l Xi^i_l / l! (M1 M2_*)^{(l)}(zeta_i) against the atoms of the expanded matrix
    const auto L = prepared_from_zeros<cplx>(cplx(1, -0.5), {{{cplx(2, 0.5), 3}, {cplx(0.4, -0.2), 1}}});
    const DiagonalCircleMass d{{{cplx(0.3, 0.1), cplx(-0.2, 0.05), cplx(0.07, 0.4)}, {cplx(0.25, -0.1)}}};
    MassSpec m;
    m.v = d;
    const auto atoms = mass_atoms(to_general(m, L, Side::first), L, Side::first);
    std::mt19937_64 rng(6);
    for (int t = 0; t < 6; ++t) {
        const auto M1 = testing::random_poly(rng, -2, 3), M2 = testing::random_poly(rng, -3, 2);
        const auto f = M1 * M2.reciprocal_star();
        cplx want = 0.0;
        for (std::size_t i = 0; i < d.values.size(); ++i)
            for (std::size_t l = 0; l < d.values[i].size(); ++l)
                want += d.values[i][l] / factorial(static_cast<int>(l)) *
                        f.eval_deriv(L.spectral.zeros[i].point, static_cast<int>(l));
        CHECK(rel_err(atom_pairing(atoms, M1, M2), want) < 1e-12);
    }
}

TEST_CASE("mass shape errors")
{
    MassSpec m;
    m.v = CircleMatrixMass{Matrix<cplx>::identity(3)};
    CHECK_THROWS_AS(to_general(m, testing::simple_pair(), Side::first), ConfigError);
    MassSpec d;
    d.v = DiagonalCircleMass{{{0.1, 0.2}}};
    CHECK_THROWS_AS(to_general(d, testing::simple_pair(), Side::first), ConfigError);
}
