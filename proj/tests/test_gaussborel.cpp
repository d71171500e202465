#include "helpers.hpp"

using namespace cmvlab;
using testing::rel_err;

namespace {

LaurentPoly<cplx> basis_poly(int j) { return LaurentPoly<cplx>::monomial(cmv_exponent(j), 1.0); }

std::vector<FunctionalSpec> measures()
{
    return {lebesgue(), one_plus_cos(), bernstein_szego(0.5), lebesgue_plus_sobolev_mass()};
}

} // namespace

TEST_CASE("factorization of the small examples")
{
    const auto I = factorize(gram<cplx>(lebesgue(), 5));
    CHECK((I.S1 - Matrix<cplx>::identity(5)).max_abs() < 1e-15);
    CHECK((I.S2 - Matrix<cplx>::identity(5)).max_abs() < 1e-15);
    for (const auto& h : I.H)
        CHECK(std::abs(h - 1.0) < 1e-15);

    const auto s = factorize(gram<GaussRational>(one_plus_cos(), 2));
    CHECK(s.S1(1, 0).re == mpq_class(-1, 2));
    CHECK(s.S1(1, 1).re == 1);
    CHECK(s.S2(1, 0).re == mpq_class(-1, 2));
    CHECK(s.H[0].re == 1);
    CHECK(s.H[1].re == mpq_class(3, 4));
    CHECK(s.H[1].im == 0);
}

TEST_CASE("vanishing leading entry is not quasidefinite")
{
    Matrix<cplx> G(2, 2);
    G(0, 1) = G(1, 0) = 1.0;
    G(1, 1) = 2.0;
    try {
        factorize(G);
        FAIL("expected a quasidefiniteness failure");
    } catch (const QuasidefiniteViolation& e) {
        CHECK(e.index() == 0);
    }
}

TEST_CASE("biorthogonal families")
{
    const auto leb = factorize(gram<cplx>(lebesgue(), 6));
    for (const auto& z : testing::random_points(2, 5))
        CHECK(rel_err(phi(leb, 1, 3, z), 1.0 / (z * z)) < 1e-14);

    const auto s = factorize(gram<cplx>(one_plus_cos(), 4));
    for (const auto& z : testing::random_points(3, 5))
        CHECK(rel_err(phi(s, 1, 1, z), 1.0 / z - 0.5) < 1e-14);
}

TEST_CASE("biorthogonality on every built-in measure")
{
    for (const auto& spec : measures()) {
        const auto sys = factorize(gram<cplx>(spec, 24));
        CHECK(biorthogonality_residual(sys, spec) < 1e-9);
    }
    const auto exact = factorize(gram<GaussRational>(one_plus_cos(), 10));
    CHECK(biorthogonality_residual(exact, one_plus_cos()) == 0.0);
}

TEST_CASE("orthogonality against lower basis elements through the functional")
{
    for (const auto& spec : measures()) {
        const auto sys = factorize(gram<cplx>(spec, 12));
        for (int n = 0; n < 12; ++n) {
            const auto p1 = phi_poly(sys, 1, n), p2 = phi_poly(sys, 2, n);
            double scale = 0.0;
            for (const auto& [k, c] : p1.coeffs())
                scale = std::max(scale, std::abs(c));
            for (int j = 0; j < n; ++j) {
                CHECK(std::abs(pair(spec, p1, basis_poly(j))) < 1e-10 * scale);
                CHECK(std::abs(pair(spec, basis_poly(j), p2)) < 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("factorizations nest")
{
    for (const auto& spec : measures()) {
        const auto big = factorize(gram<cplx>(spec, 16));
        for (int L : {3, 8, 13}) {
            const auto small = factorize(gram<cplx>(spec, L));
            CHECK((small.S1 - big.S1.leading(L)).max_abs() < 1e-13);
            CHECK((small.S2 - big.S2.leading(L)).max_abs() < 1e-13);
            for (int k = 0; k < L; ++k)
                CHECK(std::abs(small.H[k] - big.H[k]) < 1e-13);
        }
    }
}

TEST_CASE("kernels")
{
    const auto G = gram<cplx>(lebesgue(), 6);
    const auto sys = factorize(G);
    for (const auto& z : testing::random_points(4, 6)) {
        const cplx w = z * cplx(0.3, 1.1);
        CHECK(std::abs(cd_kernel(sys, 1, z, w) - 1.0) < 1e-14);
        CHECK(rel_err(abc_kernel(G.data, 2, z, w), 1.0 + std::conj(1.0 / z) / w) < 1e-14);
    }
    CHECK(std::abs(cd_kernel(sys, 3, cplx(1.0), cplx(1.0)) - 3.0) < 1e-14);
}

TEST_CASE("kernel sum matches the bordered form on every built-in measure")
{
    CheckLog log;
    for (const auto& spec : measures())
        check_abc(log, spec.label, spec, 16, 10, 77, 1e-10);
    CHECK(log.all_pass());
}

TEST_CASE("reproducing property of the kernel")
{
    CheckLog log;
    for (const auto& spec : measures())
        check_projection(log, spec.label, spec, 10, 5, 31, 1e-10);
    for (const auto& r : log.records())
        INFO(r.suite << " " << r.name << " " << r.residual);
    CHECK(log.all_pass());
}

TEST_CASE("adjoint system belongs to the adjoint functional")
{
    const auto spec = lebesgue_plus_sobolev_mass();
    const auto a = factorize(gram<cplx>(spec, 10)).adjoint();
    const auto b = factorize(gram<cplx>(adjoint(spec), 10));
    CHECK((a.S1 - b.S1).max_abs() < 1e-12);
    CHECK((a.S2 - b.S2).max_abs() < 1e-12);
    for (int k = 0; k < 10; ++k)
        CHECK(std::abs(a.H[k] - b.H[k]) < 1e-12);
}
