#include "helpers.hpp"

#include <numbers>

using namespace cmvlab;
using testing::rel_err;

namespace {

// trapezoid oracle for int f(e^{it}) w(t) dt
template <class F>
cplx circle_integral(const FunctionalSpec& spec, F&& f, int grid = 8192)
{
    const auto& d = std::get<CircleDensity>(spec.v);
    cplx s = 0.0;
    const double h = 2.0 * std::numbers::pi / grid;
    for (int i = 0; i < grid; ++i) {
        const double t = i * h;
        s += f(std::polar(1.0, t)) * d.w(t);
    }
    return s * h;
}

double max_gap(const Matrix<cplx>& a, const Matrix<cplx>& b) { return (a - b).max_abs(); }

} // namespace

TEST_CASE("pairings of monomials")
{
    const auto z = [](int k) { return LaurentPoly<cplx>::monomial(k, 1.0); };
    CHECK(std::abs(pair(lebesgue(), z(3), z(3)) - 1.0) < 1e-14);
    CHECK(std::abs(pair(lebesgue(), z(2), z(3))) < 1e-14);
    CHECK(std::abs(pair(one_plus_cos(), z(0), z(1)) - 0.5) < 1e-14);
}

TEST_CASE("pairing is sesquilinear")
{
    std::mt19937_64 rng(2);
    const auto spec = bernstein_szego(cplx(0.3, 0.2));
    const auto p = testing::random_poly(rng, -2, 2), q = testing::random_poly(rng, -3, 1), r = testing::random_poly(rng, 0, 2);
    const cplx a(0.4, -1.2), b(2.0, 0.5);
    CHECK(rel_err(pair(spec, a * p + b * r, q), a * pair(spec, p, q) + b * pair(spec, r, q)) < 1e-12);
    CHECK(rel_err(pair(spec, q, a * p + b * r), std::conj(a) * pair(spec, q, p) + std::conj(b) * pair(spec, q, r)) < 1e-12);
}

TEST_CASE("Gram truncations of the small examples")
{
    CHECK(max_gap(gram<cplx>(lebesgue(), 4).data, Matrix<cplx>::identity(4)) < 1e-14);

    const auto G = gram<cplx>(one_plus_cos(), 2).data;
    CHECK(std::abs(G(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(G(0, 1) - 0.5) < 1e-14);
    CHECK(std::abs(G(1, 0) - 0.5) < 1e-14);
    CHECK(std::abs(G(1, 1) - 1.0) < 1e-14);

    FunctionalSpec point;
    point.v = PointMasses{{{2.0, 2.0, 0, 0, 1.0}}};
    point.label = "point";
    const auto P = gram<cplx>(point, 2).data;
    CHECK(std::abs(P(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(P(0, 1) - 0.5) < 1e-15);
    CHECK(std::abs(P(1, 0) - 0.5) < 1e-15);
    CHECK(std::abs(P(1, 1) - 0.25) < 1e-15);
}

TEST_CASE("exact Gram of rational moments")
{
    const auto G = gram<GaussRational>(one_plus_cos(), 3).data;
    CHECK(G(0, 1).re == mpq_class(1, 2));
    CHECK(G(1, 2).is_zero()); // <z^-1, z> = c_{-2} = 0
    CHECK(G(2, 2).re == 1);
}

TEST_CASE("Gram truncations nest")
{
    for (const auto& spec : {one_plus_cos(), bernstein_szego(0.5), lebesgue_plus_sobolev_mass()}) {
        const auto big = gram<cplx>(spec, 14).data;
        for (int L : {1, 5, 9, 14})
            CHECK(max_gap(gram<cplx>(spec, L).data, big.leading(L)) == 0.0);
    }
}

TEST_CASE("Gram is additive over sums")
{
    const auto a = one_plus_cos(), b = bernstein_szego(cplx(0.2, -0.4));
    const auto s = sum_of({a, b});
    CHECK(max_gap(gram<cplx>(s, 10).data, gram<cplx>(a, 10).data + gram<cplx>(b, 10).data) < 1e-14);
}

TEST_CASE("Toeplitz and density paths agree")
{
    const auto spec = bernstein_szego(cplx(0.5, 0.1));
    const auto& d = std::get<CircleDensity>(spec.v);
    const auto moments = density_moments(d, 40, 4096);
    const auto t = toeplitz_from_moments(moments);
    CHECK(max_gap(gram<cplx>(t, 32).data, gram<cplx>(spec, 32).data) < 1e-10);
}

TEST_CASE("Hermitian Toeplitz gives a Hermitian Gram")
{
    const auto t = toeplitz_from_moments({{0, 2.0}, {1, cplx(0.3, 0.4)}, {2, cplx(-0.1, 0.2)}, {3, 0.05}}, true);
    const auto G = gram<cplx>(t, 12).data;
    CHECK(max_gap(G, G.adjoint()) < 1e-14);
}

TEST_CASE("truncated Toeplitz moments refuse larger Grams")
{
    ToeplitzMoments t;
    t.c = {{0, 1.0}, {1, 0.5}, {-1, 0.5}};
    t.max_moment = 1;
    FunctionalSpec spec;
    spec.v = t;
    CHECK_NOTHROW(gram<cplx>(spec, 2));
    CHECK_THROWS_AS(gram<cplx>(spec, 4), ResolutionExceeded);
}

TEST_CASE("Cauchy pairing of the constant against Lebesgue")
{
    const auto one = LaurentPoly<cplx>::constant(1.0);
    CHECK(std::abs(cauchy_pair(lebesgue(), one, 2.0, Side::second, 0) - 0.5) < 1e-13);
    CHECK(std::abs(cauchy_pair(lebesgue(), one, 0.5, Side::second, 0)) < 1e-13);
    CHECK_THROWS_AS(cauchy_pair(lebesgue(), one, cplx(0, 1), Side::second, 0), SupportCollision);
}

TEST_CASE("Cauchy pairing against a quadrature oracle")
{
    std::mt19937_64 rng(8);
    const auto spec = one_plus_cos();
    const auto p = testing::random_poly(rng, -2, 3);
    for (cplx z : {cplx(2.0, 0.7), cplx(0.3, -0.4), cplx(-1.6, -0.9)}) {
        // second side: <p(z1), 1/(conj z - z2)> = int p(w) / (z - conj w) dmu
        const cplx second = circle_integral(spec, [&](cplx w) { return p.eval(w) / (z - std::conj(w)); });
        CHECK(rel_err(cauchy_pair(spec, p, z, Side::second, 0), second) < 1e-12);
        const cplx second_d = circle_integral(spec, [&](cplx w) { return -p.eval(w) / std::pow(z - std::conj(w), 2); });
        CHECK(rel_err(cauchy_pair(spec, p, z, Side::second, 1), second_d) < 1e-12);
        // first side: <1/(conj z - z1), p(z2)> = int conj(p(w)) / (conj z - w) dmu
        const cplx first = circle_integral(spec, [&](cplx w) { return std::conj(p.eval(w)) / (std::conj(z) - w); });
        CHECK(rel_err(cauchy_pair(spec, p, z, Side::first, 0), first) < 1e-12);
    }
}

TEST_CASE("adjoint swaps the arguments")
{
    std::mt19937_64 rng(5);
    const auto spec = lebesgue_plus_sobolev_mass();
    const auto adj = adjoint(spec);
    for (int t = 0; t < 5; ++t) {
        const auto p = testing::random_poly(rng, -2, 2), q = testing::random_poly(rng, -1, 3);
        CHECK(rel_err(pair(adj, p, q), std::conj(pair(spec, q, p))) < 1e-12);
    }
}

TEST_CASE("division by a polynomial undoes multiplication")
{
    const auto L = testing::simple_pair().poly;
    std::mt19937_64 rng(6);
    for (const auto& spec : {one_plus_cos(), bernstein_szego(0.5)}) {
        const auto u1 = divide_by(spec, L, Side::first);
        const auto u2 = divide_by(spec, L, Side::second);
        for (int t = 0; t < 4; ++t) {
            const auto p = testing::random_poly(rng, -2, 2), q = testing::random_poly(rng, -2, 2);
            CHECK(rel_err(pair(u1, L * p, q), pair(spec, p, q)) < 1e-12);
            CHECK(rel_err(pair(u2, p, L * q), pair(spec, p, q)) < 1e-12);
        }
    }
}

TEST_CASE("built-in measures by name")
{
    for (const auto& name : builtin_measure_names())
        CHECK_NOTHROW(builtin_measure(name, {0.5}));
    CHECK_THROWS_AS(builtin_measure("no_such_measure", {}), ConfigError);
    CHECK_THROWS_AS(bernstein_szego(1.5), ConfigError);
}
