#ifndef CMVLAB_TEST_HELPERS_HPP
#define CMVLAB_TEST_HELPERS_HPP

#include <complex>
#include <random>
#include <vector>

#include <doctest.h>

#include "cmvlab/checks.hpp"

namespace testing {

using cmvlab::cplx;

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline std::vector<cplx> random_points(std::uint64_t seed, int count, double rmin = 0.5, double rmax = 2.0)
{
    return cmvlab::sample_points(seed, count, rmin, rmax);
}

inline cmvlab::LaurentPoly<cplx> random_poly(std::mt19937_64& rng, int lo, int hi)
{
    std::normal_distribution<double> g;
    std::map<int, cplx> c;
    for (int k = lo; k <= hi; ++k)
        c[k] = cplx(g(rng), g(rng));
    return cmvlab::LaurentPoly<cplx>(c);
}

inline cmvlab::PreparedLaurent<cplx> simple_pair()
{
    return cmvlab::prepared_from_zeros<cplx>(1.0, {{{2.0, 1}, {0.5, 1}}});
}

inline cmvlab::PreparedLaurent<cplx> double_zero() { return cmvlab::prepared_from_zeros<cplx>(1.0, {{{2.0, 2}}}); }

inline cmvlab::MassSpec diagonal_mass(const cmvlab::PreparedLaurent<cplx>& L, cmvlab::Side side, double value)
{
    cmvlab::DiagonalCircleMass d;
    for (const auto& z : cmvlab::circle_polynomial(L, side).spectral.zeros) {
        std::vector<cplx> v(z.multiplicity, 0.0);
        v[0] = value;
        d.values.push_back(v);
    }
    cmvlab::MassSpec m;
    m.v = d;
    return m;
}

} // namespace testing

#endif
