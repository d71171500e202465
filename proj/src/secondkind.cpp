#include "cmvlab/secondkind.hpp"

#include <algorithm>
#include <cmath>

namespace cmvlab {

namespace {

cplx dpow(cplx z, int s, int order)
{
    const long f = falling(s, order);
    if (f == 0)
        return 0.0;
    return static_cast<double>(f) * std::pow(z, s - order);
}

} // namespace

std::vector<cplx> c_pairing_all(const FunctionalSpec& spec, const BiorthSystem<cplx>& sys, int family, cplx z, int order,
                                int count, const CauchyOptions& opt)
{
    if (count > sys.size || count < 0)
        throw IndexOutOfRange("second kind index outside the system");
    std::vector<cplx> out(count, 0.0);
    if (count == 0)
        return out;
    int lo = 0, hi = 0;
    for (int j = 0; j < count; ++j) {
        lo = std::min(lo, cmv_exponent(j));
        hi = std::max(hi, cmv_exponent(j));
    }
    const Side side = family == 1 ? Side::second : Side::first;
    auto m = cauchy_monomials(spec, lo, hi, z, side, order, opt);
    if (family == 2)
        for (auto& v : m)
            v = std::conj(v);
    const Matrix<cplx>& S = sys.factor(family);
    for (int k = 0; k < count; ++k)
        for (int j = 0; j <= k; ++j)
            out[k] += S(k, j) * m[cmv_exponent(j) - lo];
    return out;
}

cplx c_pairing(const FunctionalSpec& spec, const BiorthSystem<cplx>& sys, int family, int k, cplx z, int order,
               const CauchyOptions& opt)
{
    return c_pairing_all(spec, sys, family, z, order, k + 1, opt)[k];
}

SeriesValue c_series(const BiorthSystem<cplx>& sys, const GramTruncation<cplx>& G, int family, int k, cplx z, int order,
                     double tail_tol)
{
    if (k < 0 || k >= sys.size || k >= G.size)
        throw IndexOutOfRange("second kind index outside the truncation");
    const double r = std::abs(z);
    SeriesValue out;
    double ratio = 0.0;
    if (r > G.support_outer) {
        out.outside = true;
        ratio = G.support_outer / r;
    } else if (r < G.support_inner) {
        out.outside = false;
        ratio = r / G.support_inner;
    } else {
        throw DomainViolation("|z| = " + std::to_string(r) + " lies in the support annulus [" +
                              std::to_string(G.support_inner) + ", " + std::to_string(G.support_outer) + "]");
    }
    const Matrix<cplx>& S = sys.factor(family);
    auto gram = [&](int a, int b) { return family == 1 ? G.data(a, b) : std::conj(G.data(b, a)); };
    // row k of S times G, as a function of the Gram column
    auto weight = [&](int col) {
        cplx s = 0.0;
        for (int j = 0; j <= k; ++j)
            s += S(k, j) * gram(j, col);
        return s;
    };
    cplx sum = 0.0;
    double last = 0.0, before = 0.0;
    int q = 0;
    for (;; ++q) {
        const int col = out.outside ? 2 * q : 2 * q + 1;
        if (col >= G.size)
            break;
        cplx term = out.outside ? weight(col) * dpow(z, -q - 1, order) : -weight(col) * dpow(z, q, order);
        sum += term;
        before = last;
        last = std::abs(term);
    }
    out.value = sum;
    out.terms = q;
    // derivative terms grow polynomially in q; bound the next ratio of falling factorials
    const double grow = std::pow((q + order + 1.0) / (q + 1.0), order);
    out.tail_bound = std::max(last, before * ratio) * grow * ratio / (1.0 - ratio);
    if (out.tail_bound > tail_tol * std::max(1.0, std::abs(sum)))
        throw TailTooLarge("series tail bound " + std::to_string(out.tail_bound) + " after " + std::to_string(q) +
                           " terms");
    return out;
}

cplx mixed_kernel(const BiorthSystem<cplx>& sys, const FunctionalSpec& spec, MixedKind which, int l, cplx x1, cplx x2,
                  int d1, int d2, const CauchyOptions& opt)
{
    if (l < 0 || l > sys.size)
        throw IndexOutOfRange("mixed kernel order exceeds the system");
    if (l == 0)
        return 0.0;
    std::vector<cplx> a, b;
    if (which == MixedKind::c_phi) {
        a = c_pairing_all(spec, sys, 2, x1, d1, l, opt);
        b = phi_all(sys, 1, x2, d2, l);
    } else {
        a = phi_all(sys, 2, x1, d1, l);
        b = c_pairing_all(spec, sys, 1, x2, d2, l, opt);
    }
    cplx s = 0.0;
    for (int k = 0; k < l; ++k)
        s += std::conj(a[k]) * b[k] / sys.H[k];
    return s;
}

} // namespace cmvlab
