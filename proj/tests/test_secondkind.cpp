#include "helpers.hpp"

using namespace cmvlab;
using testing::rel_err;

namespace {

std::vector<FunctionalSpec> measures() { return {lebesgue(), one_plus_cos(), bernstein_szego(0.5)}; }

} // namespace

TEST_CASE("second kind functions of Lebesgue measure")
{
    const auto G = gram<cplx>(lebesgue(), 40);
    const auto sys = factorize(G.data.leading(8));
    CHECK(std::abs(c_series(sys, G, 1, 0, 2.0).value - 0.5) < 1e-12);
    // phi_{1,2} = z, and <w, 1/(2 - conj w)> = 1/4
    CHECK(std::abs(c_series(sys, G, 1, 2, 2.0).value - 0.25) < 1e-12);
    CHECK(std::abs(c_pairing(lebesgue(), sys, 1, 0, 0.5)) < 1e-13);
    CHECK(std::abs(c_pairing(lebesgue(), sys, 2, 0, 2.0) - 0.5) < 1e-13);
}

TEST_CASE("series route refuses the forbidden region")
{
    const auto G = gram<cplx>(one_plus_cos(), 40);
    const auto sys = factorize(G.data.leading(8));
    CHECK_THROWS_AS(c_series(sys, G, 1, 3, cplx(0.6, 0.8)), DomainViolation);
    CHECK_THROWS_AS(c_series(sys, G, 2, 3, cplx(1.0, 0.0)), DomainViolation);
    // atoms on the circle keep the moments from decaying, so just outside it forty moments leave a visible tail
    const auto Gb = gram<cplx>(lebesgue_plus_sobolev_mass(), 40);
    const auto sb = factorize(Gb.data.leading(8));
    CHECK_THROWS_AS(c_series(sb, Gb, 1, 3, cplx(1.05, 0.0)), TailTooLarge);
    CHECK_NOTHROW(c_series(sb, Gb, 1, 3, cplx(10.0, 0.0)));
    CHECK_THROWS_AS(c_pairing(one_plus_cos(), sys, 1, 2, cplx(0.0, 1.0)), SupportCollision);
}

TEST_CASE("series and pairing routes agree")
{
    CheckLog log;
    for (const auto& spec : measures())
        check_second_kind_routes(log, spec.label, spec, 12, 10, 3, 1e-8);
    for (const auto& r : log.records())
        INFO(r.name << " " << r.residual << " " << r.detail);
    CHECK(log.all_pass());
}

TEST_CASE("derivatives of the second kind functions")
{
    const auto spec = bernstein_szego(cplx(0.4, 0.2));
    const auto sys = factorize(gram<cplx>(spec, 10));
    const double h = 1e-4;
    for (cplx z : {cplx(1.8, 0.9), cplx(0.2, -0.35)})
        for (int fam = 1; fam <= 2; ++fam)
            for (int k : {0, 3, 6}) {
                const cplx fd = (c_pairing(spec, sys, fam, k, z + h) - c_pairing(spec, sys, fam, k, z - h)) / (2 * h);
                CHECK(std::abs(c_pairing(spec, sys, fam, k, z, 1) - fd) < 1e-6 * (1.0 + std::abs(fd)));
            }
}

TEST_CASE("mixed kernels")
{
    const auto sys = factorize(gram<cplx>(lebesgue(), 6));
    CHECK(std::abs(mixed_kernel(sys, lebesgue(), MixedKind::phi_c, 1, cplx(0.3, 0.2), 2.0) - 0.5) < 1e-13);
    CHECK(mixed_kernel(sys, lebesgue(), MixedKind::c_phi, 0, cplx(0.3, 0.2), 2.0) == cplx(0.0));

    for (const auto& spec : measures()) {
        const auto s = factorize(gram<cplx>(spec, 10));
        const auto pts = admissible_points({&spec}, {}, 20, 41);
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
            const cplx x1 = pts[i], x2 = pts[i + 1];
            const int l = 7;
            // phi_c is the Cauchy transform of the kernel in its second argument
            LaurentPoly<cplx> K;
            for (int k = 0; k < l; ++k)
                K += (std::conj(phi(s, 2, k, x1)) / s.H[k]) * phi_poly(s, 1, k);
            const cplx want = cauchy_pair(spec, K, x2, Side::second, 0);
            CHECK(rel_err(mixed_kernel(s, spec, MixedKind::phi_c, l, x1, x2), want) < 1e-10);

            // c_phi through the first-side Cauchy pairing of the other family
            cplx c_phi = 0.0;
            for (int k = 0; k < l; ++k)
                c_phi += std::conj(c_pairing(spec, s, 2, k, x1)) / s.H[k] * phi(s, 1, k, x2);
            CHECK(rel_err(mixed_kernel(s, spec, MixedKind::c_phi, l, x1, x2), c_phi) < 1e-10);
        }
    }
}
