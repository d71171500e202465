#ifndef CMVLAB_FUNCTIONAL_HPP
#define CMVLAB_FUNCTIONAL_HPP

#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "cmv.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "matrix.hpp"

namespace cmvlab {

struct FunctionalSpec;
using SpecPtr = std::shared_ptr<const FunctionalSpec>;

// <z^a, z^b> = c_{a-b}; moments not listed are zero unless max_moment is set,
// in which case |k| > max_moment is unknown
struct ToeplitzMoments {
    std::map<int, cplx> c;
    bool hermitian = false;
    std::optional<int> max_moment;
};

// <f, g> = int f(e^{it}) conj(g(e^{it})) w(t) dt over [0, 2 pi)
struct CircleDensity {
    std::function<cplx(double)> w;
    int grid = 4096;
    bool fixed_grid = false; // sampled densities only know their nodes
    std::string name;
    std::vector<double> params;
    std::optional<std::map<int, cplx>> exact_moments;
};

// <z^a, z^b> = s_{a+b} for a measure on the real segment [lo, hi]
struct RealLineLaurentMoments {
    std::map<int, cplx> s;
    double lo = 0.0;
    double hi = 0.0;
};

struct SobolevTerm {
    int n = 0;
    int m = 0;
    SpecPtr base;
};

// sum over terms of <u_base, f^{(n)} conj(g^{(m)})>
struct SobolevDiagonal {
    std::vector<SobolevTerm> terms;
};

// weight * f^{(k)}(p1) * conj(g^{(l)}(p2))
struct MassAtom {
    cplx p1;
    cplx p2;
    int k = 0;
    int l = 0;
    cplx weight;
};

struct PointMasses {
    std::vector<MassAtom> atoms;
};

struct SumSpec {
    std::vector<SpecPtr> parts;
};

struct FunctionalSpec {
    std::variant<ToeplitzMoments, CircleDensity, RealLineLaurentMoments, SobolevDiagonal, PointMasses, SumSpec> v;
    std::string label;
};

enum class Side { first = 1, second = 2 };

struct SupportSet {
    bool circle = false;
    std::vector<std::pair<double, double>> segments;
    std::vector<cplx> points;

    double distance(const cplx& z) const;
    void merge(const SupportSet& o);
    bool empty() const { return !circle && segments.empty() && points.empty(); }
};

// ---- built-in measures ----
FunctionalSpec lebesgue();
FunctionalSpec one_plus_cos();
FunctionalSpec bernstein_szego(cplx a);
FunctionalSpec lebesgue_plus_sobolev_mass();
FunctionalSpec sampled_density(const std::vector<cplx>& samples);
FunctionalSpec builtin_measure(const std::string& name, const std::vector<double>& params);
FunctionalSpec toeplitz_from_moments(const std::map<int, cplx>& c, bool hermitian = false);
std::vector<std::string> builtin_measure_names();

// trapezoid moments c_k = <u, z^k> of a circle density, |k| <= kmax
std::map<int, cplx> density_moments(const CircleDensity& d, int kmax, int grid);

SupportSet support(const FunctionalSpec& spec, Side side);
// (inf |x|, sup |x|) over both support projections
std::pair<double, double> support_radii(const FunctionalSpec& spec);
bool is_univariate_circle(const FunctionalSpec& spec);
bool has_exact_moments(const FunctionalSpec& spec);

// <L, M>' = conj(<M, L>)
FunctionalSpec adjoint(const FunctionalSpec& spec);
// u / L(z1) for side 1, u / conj(L(z2)) for side 2
FunctionalSpec divide_by(const FunctionalSpec& spec, const LaurentPoly<cplx>& L, Side side);
FunctionalSpec sum_of(const std::vector<FunctionalSpec>& parts, const std::string& label = "sum");

struct CauchyOptions {
    double eps_support = 1e-6;
    int max_grid = 1 << 20;
};

// order-th z-derivative of <p(z1), 1/(conj z - z2)> (side second) or the
// order-th conj(z)-derivative of <1/(conj z - z1), p(z2)> (side first)
cplx cauchy_pair(const FunctionalSpec& spec, const LaurentPoly<cplx>& p, cplx z, Side side, int order,
                 const CauchyOptions& opt = {});
// same pairing applied to the monomials z^a, a in [amin, amax]
std::vector<cplx> cauchy_monomials(const FunctionalSpec& spec, int amin, int amax, cplx z, Side side, int order,
                                   const CauchyOptions& opt = {});
void check_cauchy_admissible(const FunctionalSpec& spec, cplx z, Side side, double eps);

// ---- monomial pairing and Gram truncations ----

template <class T>
struct GramTruncation {
    Matrix<T> data;
    int size = 0;
    int exact_rows = 0;
    int exact_cols = 0;
    std::string source;
    double support_inner = 1.0;
    double support_outer = 1.0;
};

namespace detail {

template <class T>
T convert_value(const cplx& v)
{
    return from_cplx<T>(v);
}

template <class T>
class MonomialPairing {
public:
    MonomialPairing(const FunctionalSpec& spec, int max_abs_exp) { build(spec, max_abs_exp); }

    // <z^a, z^b>
    T operator()(int a, int b) const { return eval_(a, b); }

private:
    std::function<T(int, int)> eval_;

    void build(const FunctionalSpec& spec, int K)
    {
        std::visit([&](const auto& s) { this->build_variant(s, K); }, spec.v);
    }

    static std::function<T(int, int)> make_shift_table(std::map<int, T> c, std::optional<int> limit, bool difference)
    {
        return [c = std::move(c), limit, difference](int a, int b) -> T {
            const int k = difference ? a - b : a + b;
            if (limit && std::abs(k) > *limit)
                throw ResolutionExceeded("moment index " + std::to_string(k) + " exceeds declared range");
            auto it = c.find(k);
            return it == c.end() ? from_int<T>(0) : it->second;
        };
    }

    void build_variant(const ToeplitzMoments& t, int K)
    {
        (void)K;
        std::map<int, T> c;
        for (const auto& [k, v] : t.c)
            c[k] = convert_value<T>(v);
        if (t.hermitian)
            for (const auto& [k, v] : t.c)
                if (k > 0 && !t.c.count(-k))
                    c[-k] = conj_of(convert_value<T>(v));
        eval_ = make_shift_table(std::move(c), t.max_moment, true);
    }

    void build_variant(const CircleDensity& d, int K)
    {
        std::map<int, T> c;
        if constexpr (is_exact_v<T>) {
            if (!d.exact_moments)
                throw ResolutionExceeded("density '" + d.name + "' has no closed-form moments for exact arithmetic");
            for (const auto& [k, v] : *d.exact_moments)
                c[k] = convert_value<T>(v);
            eval_ = make_shift_table(std::move(c), std::nullopt, true);
        } else {
            if (d.grid < 4 * K)
                throw ResolutionExceeded("grid of " + std::to_string(d.grid) + " nodes cannot resolve exponent " +
                                         std::to_string(K));
            for (const auto& [k, v] : density_moments(d, 2 * K, d.grid))
                c[k] = v;
            eval_ = make_shift_table(std::move(c), 2 * K, true);
        }
    }

    void build_variant(const RealLineLaurentMoments& r, int K)
    {
        (void)K;
        std::map<int, T> s;
        for (const auto& [k, v] : r.s)
            s[k] = convert_value<T>(v);
        auto table = std::move(s);
        eval_ = [table = std::move(table)](int a, int b) -> T {
            auto it = table.find(a + b);
            if (it == table.end())
                throw ResolutionExceeded("strong moment s_" + std::to_string(a + b) + " not declared");
            return it->second;
        };
    }

    void build_variant(const SobolevDiagonal& sd, int K)
    {
        std::vector<std::tuple<int, int, std::shared_ptr<MonomialPairing>>> parts;
        for (const auto& t : sd.terms)
            parts.emplace_back(t.n, t.m, std::make_shared<MonomialPairing>(*t.base, K + std::max(t.n, t.m)));
        eval_ = [parts = std::move(parts)](int a, int b) -> T {
            T s = from_int<T>(0);
            for (const auto& [n, m, base] : parts) {
                const long fa = falling(a, n);
                const long fb = falling(b, m);
                if (fa == 0 || fb == 0)
                    continue;
                s += from_int<T>(fa * fb) * (*base)(a - n, b - m);
            }
            return s;
        };
    }

    void build_variant(const PointMasses& pm, int K)
    {
        (void)K;
        struct Atom {
            T p1, p2, w;
            int k, l;
        };
        std::vector<Atom> atoms;
        for (const auto& a : pm.atoms)
            atoms.push_back({convert_value<T>(a.p1), convert_value<T>(a.p2), convert_value<T>(a.weight), a.k, a.l});
        eval_ = [atoms = std::move(atoms)](int a, int b) -> T {
            T s = from_int<T>(0);
            for (const auto& at : atoms) {
                const long fa = falling(a, at.k);
                const long fb = falling(b, at.l);
                if (fa == 0 || fb == 0)
                    continue;
                s += at.w * from_int<T>(fa * fb) * ipow(at.p1, a - at.k) * conj_of(ipow(at.p2, b - at.l));
            }
            return s;
        };
    }

    void build_variant(const SumSpec& sum, int K)
    {
        std::vector<std::shared_ptr<MonomialPairing>> parts;
        for (const auto& p : sum.parts)
            parts.push_back(std::make_shared<MonomialPairing>(*p, K));
        eval_ = [parts = std::move(parts)](int a, int b) -> T {
            T s = from_int<T>(0);
            for (const auto& p : parts)
                s += (*p)(a, b);
            return s;
        };
    }
};

} // namespace detail

template <class T>
T pair(const FunctionalSpec& spec, const LaurentPoly<T>& p, const LaurentPoly<T>& q)
{
    if (p.is_zero_poly() || q.is_zero_poly())
        return from_int<T>(0);
    const int K = std::max({std::abs(p.max_exp()), std::abs(p.min_exp()), std::abs(q.max_exp()), std::abs(q.min_exp())});
    detail::MonomialPairing<T> mono(spec, K);
    T s = from_int<T>(0);
    for (const auto& [a, pa] : p.coeffs())
        for (const auto& [b, qb] : q.coeffs())
            s += pa * conj_of(qb) * mono(a, b);
    return s;
}

template <class T>
GramTruncation<T> gram(const FunctionalSpec& spec, int M)
{
    if (M < 1)
        throw IndexOutOfRange("Gram size must be positive");
    detail::MonomialPairing<T> mono(spec, cmv_max_abs_exponent(M));
    GramTruncation<T> g;
    g.data = Matrix<T>(M, M);
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k)
            g.data(j, k) = mono(cmv_exponent(j), cmv_exponent(k));
    g.size = M;
    g.exact_rows = M;
    g.exact_cols = M;
    g.source = spec.label.empty() ? "functional" : spec.label;
    const auto radii = support_radii(spec);
    g.support_inner = radii.first;
    g.support_outer = radii.second;
    return g;
}

} // namespace cmvlab

#endif
