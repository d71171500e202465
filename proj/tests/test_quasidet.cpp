#include "helpers.hpp"

using namespace cmvlab;
using testing::rel_err;

namespace {

BlockMatrix<cplx> random_block(std::mt19937_64& rng, int p)
{
    std::normal_distribution<double> g;
    BlockMatrix<cplx> bm;
    bm.A = Matrix<cplx>(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j)
            bm.A(i, j) = cplx(g(rng), g(rng));
        bm.A(i, i) += 3.0; // keep it well conditioned
        bm.B.push_back(cplx(g(rng), g(rng)));
        bm.C.push_back(cplx(g(rng), g(rng)));
    }
    bm.D = cplx(g(rng), g(rng));
    return bm;
}

} // namespace

TEST_CASE("small quasideterminants")
{
    BlockMatrix<cplx> a;
    a.A = Matrix<cplx>(1, 1);
    a.A(0, 0) = 2.0;
    a.B = {1.0};
    a.C = {4.0};
    a.D = 3.0;
    CHECK(std::abs(theta_star(a).value - 1.0) < 1e-15);
    CHECK(std::abs(theta_star(a, QuasidetMode::det_quotient).value - 1.0) < 1e-15);

    BlockMatrix<cplx> b;
    b.A = Matrix<cplx>::identity(2);
    b.B = {1.0, 1.0};
    b.C = {1.0, 1.0};
    b.D = 5.0;
    CHECK(std::abs(theta_star(b).value - 3.0) < 1e-15);

    BlockMatrix<GaussRational> e;
    e.A = Matrix<GaussRational>(1, 1);
    e.A(0, 0) = GaussRational(2);
    e.B = {GaussRational(1)};
    e.C = {GaussRational(4)};
    e.D = GaussRational(3);
    const auto r = theta_star(e);
    CHECK(r.schur.re == 1);
    CHECK(r.det_quotient.re == 1);
}

TEST_CASE("empty leading block passes the corner through")
{
    BlockMatrix<cplx> bm;
    bm.D = cplx(2, -1);
    CHECK(theta_star(bm).value == cplx(2, -1));
}

TEST_CASE("singular leading block is reported")
{
    BlockMatrix<cplx> bm;
    bm.A = Matrix<cplx>(2, 2);
    bm.A(0, 0) = 1.0;
    bm.A(0, 1) = 2.0;
    bm.A(1, 0) = 2.0;
    bm.A(1, 1) = 4.0;
    bm.B = {1.0, 1.0};
    bm.C = {1.0, 1.0};
    CHECK_THROWS_AS(theta_star(bm), SingularLeadingBlock);
}

TEST_CASE("Schur and determinant routes agree")
{
    std::mt19937_64 rng(15);
    for (int p : {1, 2, 5, 5, 5, 12, 24}) {
        const auto r = theta_star(random_block(rng, p));
        CHECK(r.discrepancy < 1e-10);
    }
}

TEST_CASE("homogeneity in the rows")
{
    std::mt19937_64 rng(16);
    const auto bm = random_block(rng, 4);
    const cplx base = theta_star(bm).value;
    const cplx s(0.7, -1.3);

    auto last = bm;
    for (auto& c : last.C)
        c *= s;
    last.D *= s;
    CHECK(rel_err(theta_star(last).value, s * base) < 1e-12);

    for (int i = 0; i < 4; ++i) {
        auto lead = bm;
        for (int j = 0; j < 4; ++j)
            lead.A(i, j) *= s;
        lead.B[i] *= s;
        CHECK(rel_err(theta_star(lead).value, base) < 1e-12);
    }
}

TEST_CASE("mismatched borders are rejected")
{
    BlockMatrix<cplx> bm;
    bm.A = Matrix<cplx>::identity(2);
    bm.B = {1.0};
    bm.C = {1.0, 1.0};
    CHECK_THROWS_AS(theta_star(bm), IncompatibleTruncations);
}
