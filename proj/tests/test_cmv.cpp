#include "helpers.hpp"

#include <set>

using namespace cmvlab;
using testing::rel_err;

TEST_CASE("exponent map and its inverse")
{
    CHECK(cmv_exponent(0) == 0);
    CHECK(cmv_exponent(1) == -1);
    CHECK(cmv_exponent(4) == 2);
    std::set<int> seen;
    for (int l = 0; l < 200; ++l) {
        CHECK(cmv_index(cmv_exponent(l)) == l);
        seen.insert(cmv_exponent(l));
    }
    CHECK(seen.size() == 200);
    CHECK(*seen.begin() == -100);
    CHECK(*seen.rbegin() == 99);
}

TEST_CASE("chi vectors")
{
    const auto a = chi<cplx>(2.0, 3);
    CHECK(std::abs(a[0] - 1.0) < 1e-15);
    CHECK(std::abs(a[1] - 0.5) < 1e-15);
    CHECK(std::abs(a[2] - 2.0) < 1e-15);
    for (const auto& v : chi<cplx>(1.0, 4))
        CHECK(std::abs(v - 1.0) < 1e-15);
    const auto d = chi<cplx>(2.0, 2, 1);
    CHECK(std::abs(d[0]) < 1e-15);
    CHECK(std::abs(d[1] + 0.25) < 1e-15);
}

TEST_CASE("shift truncation")
{
    const auto U = upsilon<cplx>(3).data;
    const double rows[3][3] = {{0, 0, 1}, {1, 0, 0}, {0, 0, 0}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(U(i, j) == cplx(rows[i][j]));

    const int M = 12;
    const auto up = upsilon<cplx>(M);
    for (const auto& z : testing::random_points(1, 10)) {
        const auto v = up.data.apply(chi<cplx>(z, M));
        const auto c = chi<cplx>(z, M);
        for (int i = 0; i < M - 2; ++i)
            CHECK(rel_err(v[i], z * c[i]) < 1e-14);
    }
    const auto P = up.data.transpose() * up.data;
    for (int i = 0; i < M - 2; ++i)
        for (int j = 0; j < M - 2; ++j)
            CHECK(std::abs(P(i, j) - (i == j ? 1.0 : 0.0)) < 1e-15);
}

TEST_CASE("polynomials of the shift")
{
    const int M = 10;
    const auto one = laurent_of_upsilon(LaurentPoly<cplx>::constant(1.0), M);
    CHECK((one.data - Matrix<cplx>::identity(M)).max_abs() == 0.0);

    const auto zz = laurent_of_upsilon(LaurentPoly<cplx>::monomial(1, 1.0), M);
    CHECK((zz.data.leading(zz.exact_leading) - upsilon<cplx>(M).data.leading(zz.exact_leading)).max_abs() == 0.0);

    std::mt19937_64 rng(3);
    for (int deg : {1, 2, 3}) {
        const auto L = testing::random_poly(rng, -deg, deg);
        const auto A = laurent_of_upsilon(L, M);
        CHECK(A.bandwidth == 2 * deg);
        // inflate then truncate is stable
        const auto B = laurent_of_upsilon(L, M + 10);
        CHECK((B.data.leading(M) - A.data).max_abs() == 0.0);
        // nothing outside the band
        double off = 0.0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                if (std::abs(i - j) > 2 * deg)
                    off = std::max(off, std::abs(A.data(i, j)));
        CHECK(off < 1e-14);
        // spectral property on the exact rows of a rectangular block
        const auto R = laurent_of_upsilon_rect(L, M, M + 2 * deg);
        for (const auto& z : testing::random_points(20 + deg, 20)) {
            const auto v = R.apply(chi<cplx>(z, M + 2 * deg));
            const auto c = chi<cplx>(z, M);
            for (int i = 0; i < M; ++i)
                CHECK(std::abs(v[i] - L.eval(z) * c[i]) < 1e-12 * (1.0 + std::abs(L.eval(z) * c[i])));
        }
    }
}
