#include "helpers.hpp"

using namespace cmvlab;
using testing::rel_err;

namespace {

LaurentPoly<cplx> z_plus_inverse() { return LaurentPoly<cplx>({{1, 1.0}, {-1, 1.0}}); }

} // namespace

TEST_CASE("eval_deriv on small polynomials")
{
    const auto p = z_plus_inverse();
    CHECK(std::abs(p.eval_deriv(2.0, 0) - 2.5) < 1e-15);
    CHECK(std::abs(p.eval_deriv(1.0, 1)) < 1e-15);

    // (z - 2)^2 / z
    const LaurentPoly<cplx> q({{1, 1.0}, {0, -4.0}, {-1, 4.0}});
    CHECK(std::abs(q.eval_deriv(2.0, 1)) < 1e-15);
    CHECK_THROWS_AS(q.eval(0.0), ZeroArgument);
}

TEST_CASE("reciprocal_star")
{
    const auto L = testing::simple_pair().poly;
    CHECK(L.reciprocal_star() == L);

    const auto iz = LaurentPoly<cplx>::monomial(1, cplx(0, 1));
    CHECK(iz.reciprocal_star() == LaurentPoly<cplx>::monomial(-1, cplx(0, -1)));

    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        const auto p = testing::random_poly(rng, -3, 4);
        CHECK(p.reciprocal_star().reciprocal_star() == p);
        for (const auto& z : testing::random_points(t, 5))
            CHECK(rel_err(p.reciprocal_star().eval(z), std::conj(p.eval(1.0 / std::conj(z)))) < 1e-12);
    }
}

TEST_CASE("prepared_from_zeros expands the factored form")
{
    const auto a = prepared_from_zeros<cplx>(1.0, {{{2.0, 1}, {0.5, 1}}});
    CHECK(a.n == 1);
    CHECK(std::abs(a.poly.coeff(1) - 1.0) < 1e-15);
    CHECK(std::abs(a.poly.coeff(0) + 2.5) < 1e-15);
    CHECK(std::abs(a.poly.coeff(-1) - 1.0) < 1e-15);

    const auto b = prepared_from_zeros<cplx>(1.0, {{{2.0, 2}}});
    CHECK(std::abs(b.poly.coeff(0) + 4.0) < 1e-15);
    CHECK(std::abs(b.poly.coeff(-1) - 4.0) < 1e-15);

    const auto c = prepared_from_zeros<cplx>(1.0, {{{1.0, 2}}});
    CHECK(std::abs(c.poly.coeff(0) + 2.0) < 1e-15);
    CHECK(std::abs(c.poly.coeff(-1) - 1.0) < 1e-15);

    // L_{-n} = L_n prod zeta_i^{m_i}
    const auto d = prepared_from_zeros<cplx>(cplx(0.5, 1), {{{cplx(0, 3), 1}, {cplx(1, 1), 2}, {cplx(-2, 0.5), 1}}});
    CHECK(d.n == 2);
    CHECK(rel_err(d.poly.coeff(-2), d.poly.coeff(2) * cplx(0, 3) * cplx(1, 1) * cplx(1, 1) * cplx(-2, 0.5)) < 1e-14);
}

TEST_CASE("prepared_from_zeros validates its input")
{
    CHECK_THROWS_AS(prepared_from_zeros<cplx>(1.0, {{{2.0, 1}}}), OddDegree);
    CHECK_THROWS_AS(prepared_from_zeros<cplx>(1.0, {{{0.0, 2}}}), ZeroRoot);
}

TEST_CASE("prepared polynomials vanish to the declared order at their zeros")
{
    const std::vector<PreparedLaurent<cplx>> polys{
        testing::double_zero(), testing::simple_pair(),
        prepared_from_zeros<cplx>(cplx(0.3, -0.2), {{{cplx(0, 3), 3}, {cplx(1, -1), 1}}})};
    for (const auto& L : polys) {
        double scale = 0.0;
        for (const auto& [k, c] : L.poly.coeffs())
            scale = std::max(scale, std::abs(c));
        for (const auto& z : L.spectral.zeros)
            for (int r = 0; r < z.multiplicity; ++r)
                CHECK(std::abs(L.poly.eval_deriv(z.point, r)) / (scale * std::pow(std::abs(z.point) + 1, 4)) < 1e-12);
    }
}

TEST_CASE("exact arithmetic reproduces the zeros exactly")
{
    const auto L = prepared_from_zeros<GaussRational>(GaussRational(1), {{{GaussRational(2), 2}, {GaussRational(mpq_class(1, 3), 1), 2}}});
    for (const auto& z : L.spectral.zeros)
        for (int r = 0; r < z.multiplicity; ++r)
            CHECK(L.poly.eval_deriv(z.point, r).is_zero());
}

TEST_CASE("product consistency")
{
    std::mt19937_64 rng(9);
    const auto p = testing::random_poly(rng, -2, 3);
    const auto q = testing::random_poly(rng, -4, 1);
    const auto pq = p * q;
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    for (double r : {0.5, 1.0, 2.0})
        for (int i = 0; i < 20; ++i) {
            const cplx z = std::polar(r, angle(rng));
            CHECK(rel_err(pq.eval(z), p.eval(z) * q.eval(z)) < 1e-12);
        }
}

TEST_CASE("divided difference")
{
    const auto dd = divided_difference(z_plus_inverse());
    for (const auto& z : testing::random_points(3, 6)) {
        const cplx w = z * cplx(0.7, 0.4);
        CHECK(rel_err(dd(z, w), 1.0 - 1.0 / (z * w)) < 1e-13);
    }

    std::mt19937_64 rng(12);
    for (int t = 0; t < 8; ++t) {
        const auto p = testing::random_poly(rng, -3, 3);
        const auto d = divided_difference(p);
        const auto pts = testing::random_points(100 + t, 10);
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
            const cplx a = pts[i], b = pts[i + 1];
            CHECK(rel_err((a - b) * d(a, b), p.eval(a) - p.eval(b)) < 1e-12);
            CHECK(rel_err(d(a, b), d(b, a)) < 1e-12);
            CHECK(rel_err(d(a, a), p.eval_deriv(a, 1)) < 1e-12);
        }
    }
}
