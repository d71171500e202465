#include "cmvlab/functional.hpp"

#include <algorithm>
#include <cmath>

namespace cmvlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

FunctionalSpec make(std::variant<ToeplitzMoments, CircleDensity, RealLineLaurentMoments, SobolevDiagonal, PointMasses, SumSpec> v,
                    std::string label)
{
    FunctionalSpec s;
    s.v = std::move(v);
    s.label = std::move(label);
    return s;
}

// d^order/dz^order z^s
cplx dpow(cplx z, int s, int order)
{
    const long f = falling(s, order);
    if (f == 0)
        return 0.0;
    return static_cast<double>(f) * std::pow(z, s - order);
}

// Taylor data of 1/L at p: derivatives r = 0..R
std::vector<cplx> reciprocal_derivatives(const LaurentPoly<cplx>& L, cplx p, int R)
{
    std::vector<cplx> a(R + 1), b(R + 1), d(R + 1);
    for (int r = 0; r <= R; ++r)
        a[r] = L.eval_deriv(p, r) / factorial(r);
    if (std::abs(a[0]) == 0.0)
        throw SupportCollision("perturbing polynomial vanishes at a mass point");
    b[0] = 1.0 / a[0];
    for (int r = 1; r <= R; ++r) {
        cplx s = 0.0;
        for (int q = 1; q <= r; ++q)
            s += a[q] * b[r - q];
        b[r] = -s / a[0];
    }
    for (int r = 0; r <= R; ++r)
        d[r] = b[r] * factorial(r);
    return d;
}

int choose_grid(int base, bool fixed, double radius_ratio_log, int max_grid)
{
    if (fixed)
        return base;
    int g = base;
    const double need = 40.0 / std::max(std::abs(radius_ratio_log), 1e-300);
    while (g < need && g < max_grid)
        g *= 2;
    return g;
}

std::vector<cplx> cauchy_second(const FunctionalSpec& spec, int amin, int amax, cplx z, int order, const CauchyOptions& opt);

std::vector<cplx> cauchy_second_variant(const ToeplitzMoments& t, int amin, int amax, cplx z, int order, const CauchyOptions&)
{
    std::map<int, cplx> c = t.c;
    if (t.hermitian)
        for (const auto& [k, v] : t.c)
            if (k > 0 && !t.c.count(-k))
                c[-k] = std::conj(v);
    if (t.max_moment)
        throw ResolutionExceeded("Cauchy pairing needs every moment of a Toeplitz functional");
    std::vector<cplx> out(amax - amin + 1, 0.0);
    if (c.empty())
        return out;
    const int cmin = c.begin()->first;
    const int cmax = c.rbegin()->first;
    const double r = std::abs(z);
    for (int a = amin; a <= amax; ++a) {
        cplx s = 0.0;
        if (r > 1.0) {
            for (int k = std::max(0, a - cmax); k <= a - cmin; ++k) {
                auto it = c.find(a - k);
                if (it != c.end())
                    s += it->second * dpow(z, -k - 1, order);
            }
        } else {
            for (int k = std::max(0, cmin - a - 1); k <= cmax - a - 1; ++k) {
                auto it = c.find(a + k + 1);
                if (it != c.end())
                    s -= it->second * dpow(z, k, order);
            }
        }
        out[a - amin] = s;
    }
    return out;
}

std::vector<cplx> cauchy_second_variant(const CircleDensity& d, int amin, int amax, cplx z, int order, const CauchyOptions& opt)
{
    const int G = choose_grid(d.grid, d.fixed_grid, std::log(std::abs(z)), opt.max_grid);
    std::vector<cplx> out(amax - amin + 1, 0.0);
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    const double fact = factorial(order);
    const double h = two_pi / G;
    for (int j = 0; j < G; ++j) {
        const double th = h * j;
        const cplx e = std::polar(1.0, th);
        const cplx kern = sign * fact * std::pow(z - std::conj(e), -order - 1);
        const cplx weight = h * kern * d.w(th);
        cplx ea = std::pow(e, amin);
        for (int a = amin; a <= amax; ++a) {
            out[a - amin] += ea * weight;
            ea *= e;
        }
    }
    return out;
}

std::vector<cplx> cauchy_second_variant(const RealLineLaurentMoments& rl, int amin, int amax, cplx z, int order, const CauchyOptions&)
{
    const double lo = std::min(std::abs(rl.lo), std::abs(rl.hi));
    const double hi = std::max(std::abs(rl.lo), std::abs(rl.hi));
    const double r = std::abs(z);
    const bool straddles = rl.lo <= 0.0 && rl.hi >= 0.0;
    std::vector<cplx> out(amax - amin + 1, 0.0);
    auto moment = [&](int k) -> cplx {
        auto it = rl.s.find(k);
        if (it == rl.s.end())
            throw ResolutionExceeded("strong moment s_" + std::to_string(k) + " needed by the Cauchy series");
        return it->second;
    };
    for (int a = amin; a <= amax; ++a) {
        cplx s = 0.0;
        if (r > hi) {
            const double q = hi / r;
            for (int k = 0;; ++k) {
                const cplx term = moment(a + k) * dpow(z, -k - 1, order);
                s += term;
                if (k > order + 2 && std::pow(q, k) * std::pow(k + 1.0, order) < 1e-17)
                    break;
            }
        } else if (r < lo && !straddles) {
            const double q = r / lo;
            for (int k = 0;; ++k) {
                s -= moment(a - k - 1) * dpow(z, k, order);
                if (k > order + 2 && std::pow(q, k) * std::pow(k + 1.0, order) < 1e-17)
                    break;
            }
        } else {
            throw ResolutionExceeded("real-line Cauchy pairing needs |z| outside the support annulus");
        }
        out[a - amin] = s;
    }
    return out;
}

std::vector<cplx> cauchy_second_variant(const SobolevDiagonal& sd, int amin, int amax, cplx z, int order, const CauchyOptions& opt)
{
    std::vector<cplx> out(amax - amin + 1, 0.0);
    for (const auto& t : sd.terms) {
        const auto base = cauchy_second(*t.base, amin - t.n, amax - t.n, z, order + t.m, opt);
        const double sign = (t.m % 2 == 0) ? 1.0 : -1.0;
        for (int a = amin; a <= amax; ++a)
            out[a - amin] += sign * static_cast<double>(falling(a, t.n)) * base[a - amin];
    }
    return out;
}

std::vector<cplx> cauchy_second_variant(const PointMasses& pm, int amin, int amax, cplx z, int order, const CauchyOptions&)
{
    std::vector<cplx> out(amax - amin + 1, 0.0);
    for (const auto& at : pm.atoms) {
        const int s = order + at.l;
        const double sign = (order % 2 == 0) ? 1.0 : -1.0;
        const cplx kern = sign * factorial(s) * std::pow(z - std::conj(at.p2), -s - 1);
        for (int a = amin; a <= amax; ++a)
            out[a - amin] += at.weight * dpow(at.p1, a, at.k) * kern;
    }
    return out;
}

std::vector<cplx> cauchy_second_variant(const SumSpec& sum, int amin, int amax, cplx z, int order, const CauchyOptions& opt)
{
    std::vector<cplx> out(amax - amin + 1, 0.0);
    for (const auto& p : sum.parts) {
        const auto part = cauchy_second(*p, amin, amax, z, order, opt);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += part[i];
    }
    return out;
}

std::vector<cplx> cauchy_second(const FunctionalSpec& spec, int amin, int amax, cplx z, int order, const CauchyOptions& opt)
{
    return std::visit([&](const auto& s) { return cauchy_second_variant(s, amin, amax, z, order, opt); }, spec.v);
}

} // namespace

double SupportSet::distance(const cplx& z) const
{
    double d = std::numeric_limits<double>::infinity();
    if (circle)
        d = std::min(d, std::abs(std::abs(z) - 1.0));
    for (const auto& [lo, hi] : segments) {
        const double x = std::clamp(z.real(), lo, hi);
        d = std::min(d, std::abs(z - cplx(x, 0.0)));
    }
    for (const auto& p : points)
        d = std::min(d, std::abs(z - p));
    return d;
}

void SupportSet::merge(const SupportSet& o)
{
    circle = circle || o.circle;
    segments.insert(segments.end(), o.segments.begin(), o.segments.end());
    points.insert(points.end(), o.points.begin(), o.points.end());
}

std::map<int, cplx> density_moments(const CircleDensity& d, int kmax, int grid)
{
    const int G = d.fixed_grid ? d.grid : grid;
    std::vector<cplx> acc(2 * kmax + 1, 0.0);
    const double h = two_pi / G;
    for (int j = 0; j < G; ++j) {
        const double th = h * j;
        const cplx e = std::polar(1.0, th);
        const cplx w = h * d.w(th);
        // both recurrences start at z^0 so a moment does not depend on kmax
        acc[kmax] += w;
        cplx up = 1.0, down = 1.0;
        for (int k = 1; k <= kmax; ++k) {
            up *= e;
            down *= std::conj(e);
            acc[kmax + k] += up * w;
            acc[kmax - k] += down * w;
        }
    }
    std::map<int, cplx> c;
    for (int k = -kmax; k <= kmax; ++k)
        c[k] = acc[k + kmax];
    return c;
}

FunctionalSpec lebesgue()
{
    CircleDensity d;
    d.w = [](double) { return cplx(1.0 / two_pi, 0.0); };
    d.name = "lebesgue";
    d.exact_moments = std::map<int, cplx>{{0, 1.0}};
    return make(d, "lebesgue");
}

FunctionalSpec one_plus_cos()
{
    CircleDensity d;
    d.w = [](double t) { return cplx((1.0 + std::cos(t)) / two_pi, 0.0); };
    d.name = "one_plus_cos";
    d.exact_moments = std::map<int, cplx>{{-1, 0.5}, {0, 1.0}, {1, 0.5}};
    return make(d, "one_plus_cos");
}

FunctionalSpec bernstein_szego(cplx a)
{
    if (std::abs(a) >= 1.0)
        throw ConfigError("bernstein_szego parameter must lie inside the unit disk");
    CircleDensity d;
    d.w = [a](double t) {
        const double den = std::norm(1.0 - a * std::polar(1.0, t));
        return cplx((1.0 - std::norm(a)) / (two_pi * den), 0.0);
    };
    d.name = "bernstein_szego";
    d.params = {a.real(), a.imag()};
    return make(d, "bernstein_szego");
}

FunctionalSpec lebesgue_plus_sobolev_mass()
{
    PointMasses pm;
    pm.atoms.push_back({cplx(1.0, 0.0), cplx(1.0, 0.0), 1, 1, cplx(0.5, 0.0)});
    pm.atoms.push_back({cplx(0.0, 1.0), cplx(0.0, -1.0), 0, 0, cplx(0.25, 0.0)});
    pm.atoms.push_back({cplx(0.0, -1.0), cplx(0.0, 1.0), 0, 0, cplx(0.25, 0.0)});
    auto base = std::make_shared<FunctionalSpec>(lebesgue());
    auto masses = std::make_shared<FunctionalSpec>(make(pm, "sobolev_mass"));
    SumSpec s;
    s.parts = {base, masses};
    return make(s, "lebesgue_plus_sobolev_mass");
}

FunctionalSpec sampled_density(const std::vector<cplx>& samples)
{
    if (samples.empty())
        throw ConfigError("sampled density needs at least one sample");
    CircleDensity d;
    const int n = static_cast<int>(samples.size());
    d.w = [samples, n](double t) {
        long idx = std::lround(t * n / two_pi);
        idx %= n;
        if (idx < 0)
            idx += n;
        return samples[static_cast<std::size_t>(idx)];
    };
    d.grid = n;
    d.fixed_grid = true;
    d.name = "sampled";
    return make(d, "sampled_density");
}

FunctionalSpec toeplitz_from_moments(const std::map<int, cplx>& c, bool hermitian)
{
    ToeplitzMoments t;
    t.c = c;
    t.hermitian = hermitian;
    return make(t, "toeplitz");
}

std::vector<std::string> builtin_measure_names()
{
    return {"lebesgue", "one_plus_cos", "bernstein_szego", "lebesgue_plus_sobolev_mass"};
}

FunctionalSpec builtin_measure(const std::string& name, const std::vector<double>& params)
{
    if (name == "lebesgue")
        return lebesgue();
    if (name == "one_plus_cos")
        return one_plus_cos();
    if (name == "bernstein_szego") {
        if (params.empty())
            throw ConfigError("bernstein_szego needs a parameter");
        return bernstein_szego(cplx(params[0], params.size() > 1 ? params[1] : 0.0));
    }
    if (name == "lebesgue_plus_sobolev_mass")
        return lebesgue_plus_sobolev_mass();
    throw ConfigError("unknown built-in measure '" + name + "'");
}

namespace {

SupportSet support_variant(const ToeplitzMoments&, Side)
{
    SupportSet s;
    s.circle = true;
    return s;
}
SupportSet support_variant(const CircleDensity&, Side)
{
    SupportSet s;
    s.circle = true;
    return s;
}
SupportSet support_variant(const RealLineLaurentMoments& r, Side)
{
    SupportSet s;
    s.segments.push_back({std::min(r.lo, r.hi), std::max(r.lo, r.hi)});
    return s;
}
SupportSet support_variant(const SobolevDiagonal& sd, Side side)
{
    SupportSet s;
    for (const auto& t : sd.terms)
        s.merge(support(*t.base, side));
    return s;
}
SupportSet support_variant(const PointMasses& pm, Side side)
{
    SupportSet s;
    for (const auto& a : pm.atoms)
        s.points.push_back(side == Side::first ? a.p1 : a.p2);
    return s;
}
SupportSet support_variant(const SumSpec& sum, Side side)
{
    SupportSet s;
    for (const auto& p : sum.parts)
        s.merge(support(*p, side));
    return s;
}

} // namespace

SupportSet support(const FunctionalSpec& spec, Side side)
{
    return std::visit([&](const auto& s) { return support_variant(s, side); }, spec.v);
}

std::pair<double, double> support_radii(const FunctionalSpec& spec)
{
    SupportSet s = support(spec, Side::first);
    s.merge(support(spec, Side::second));
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    if (s.circle) {
        lo = std::min(lo, 1.0);
        hi = std::max(hi, 1.0);
    }
    for (const auto& [a, b] : s.segments) {
        const double m1 = std::abs(a), m2 = std::abs(b);
        lo = std::min(lo, (a <= 0.0 && b >= 0.0) ? 0.0 : std::min(m1, m2));
        hi = std::max({hi, m1, m2});
    }
    for (const auto& p : s.points) {
        lo = std::min(lo, std::abs(p));
        hi = std::max(hi, std::abs(p));
    }
    if (s.empty())
        return {1.0, 1.0};
    return {lo, hi};
}

bool is_univariate_circle(const FunctionalSpec& spec)
{
    if (std::holds_alternative<ToeplitzMoments>(spec.v) || std::holds_alternative<CircleDensity>(spec.v))
        return true;
    if (const auto* s = std::get_if<SumSpec>(&spec.v)) {
        for (const auto& p : s->parts)
            if (!is_univariate_circle(*p))
                return false;
        return true;
    }
    return false;
}

bool has_exact_moments(const FunctionalSpec& spec)
{
    return std::visit(
        [](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, CircleDensity>)
                return s.exact_moments.has_value();
            else if constexpr (std::is_same_v<S, SobolevDiagonal>) {
                for (const auto& t : s.terms)
                    if (!has_exact_moments(*t.base))
                        return false;
                return true;
            } else if constexpr (std::is_same_v<S, SumSpec>) {
                for (const auto& p : s.parts)
                    if (!has_exact_moments(*p))
                        return false;
                return true;
            } else
                return true;
        },
        spec.v);
}

FunctionalSpec sum_of(const std::vector<FunctionalSpec>& parts, const std::string& label)
{
    SumSpec s;
    for (const auto& p : parts)
        s.parts.push_back(std::make_shared<FunctionalSpec>(p));
    return make(s, label);
}

FunctionalSpec adjoint(const FunctionalSpec& spec)
{
    return std::visit(
        [&](const auto& s) -> FunctionalSpec {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ToeplitzMoments>) {
                ToeplitzMoments t = s;
                std::map<int, cplx> c = s.c;
                if (s.hermitian)
                    for (const auto& [k, v] : s.c)
                        if (k > 0 && !s.c.count(-k))
                            c[-k] = std::conj(v);
                t.c.clear();
                for (const auto& [k, v] : c)
                    t.c[-k] = std::conj(v);
                t.hermitian = false;
                return make(t, spec.label + "^adj");
            } else if constexpr (std::is_same_v<S, CircleDensity>) {
                CircleDensity d = s;
                auto w = s.w;
                d.w = [w](double t) { return std::conj(w(t)); };
                if (s.exact_moments) {
                    std::map<int, cplx> c;
                    for (const auto& [k, v] : *s.exact_moments)
                        c[-k] = std::conj(v);
                    // conj of density moments: conj(c_{-k})
                    d.exact_moments = c;
                }
                return make(d, spec.label + "^adj");
            } else if constexpr (std::is_same_v<S, RealLineLaurentMoments>) {
                RealLineLaurentMoments r = s;
                for (auto& [k, v] : r.s)
                    v = std::conj(v);
                return make(r, spec.label + "^adj");
            } else if constexpr (std::is_same_v<S, SobolevDiagonal>) {
                SobolevDiagonal sd;
                for (const auto& t : s.terms)
                    sd.terms.push_back({t.m, t.n, std::make_shared<FunctionalSpec>(adjoint(*t.base))});
                return make(sd, spec.label + "^adj");
            } else if constexpr (std::is_same_v<S, PointMasses>) {
                PointMasses pm;
                for (const auto& a : s.atoms)
                    pm.atoms.push_back({a.p2, a.p1, a.l, a.k, std::conj(a.weight)});
                return make(pm, spec.label + "^adj");
            } else {
                SumSpec sum;
                for (const auto& p : s.parts)
                    sum.parts.push_back(std::make_shared<FunctionalSpec>(adjoint(*p)));
                return make(sum, spec.label + "^adj");
            }
        },
        spec.v);
}

FunctionalSpec divide_by(const FunctionalSpec& spec, const LaurentPoly<cplx>& L, Side side)
{
    return std::visit(
        [&](const auto& s) -> FunctionalSpec {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, CircleDensity>) {
                CircleDensity d = s;
                auto w = s.w;
                const bool first = side == Side::first;
                d.w = [w, L, first](double t) {
                    const cplx v = L.eval(std::polar(1.0, t));
                    return w(t) / (first ? v : std::conj(v));
                };
                d.exact_moments.reset();
                d.name = s.name + "/L";
                return make(d, spec.label + "/L");
            } else if constexpr (std::is_same_v<S, PointMasses>) {
                PointMasses pm;
                for (const auto& a : s.atoms) {
                    if (side == Side::first) {
                        const auto inv = reciprocal_derivatives(L, a.p1, a.k);
                        for (int r = 0; r <= a.k; ++r)
                            pm.atoms.push_back({a.p1, a.p2, r, a.l, a.weight * static_cast<double>(binomial(a.k, r)) * inv[a.k - r]});
                    } else {
                        const auto inv = reciprocal_derivatives(L, a.p2, a.l);
                        for (int r = 0; r <= a.l; ++r)
                            pm.atoms.push_back({a.p1, a.p2, a.k, r,
                                                a.weight * static_cast<double>(binomial(a.l, r)) * std::conj(inv[a.l - r])});
                    }
                }
                return make(pm, spec.label + "/L");
            } else if constexpr (std::is_same_v<S, SumSpec>) {
                SumSpec sum;
                for (const auto& p : s.parts)
                    sum.parts.push_back(std::make_shared<FunctionalSpec>(divide_by(*p, L, side)));
                return make(sum, spec.label + "/L");
            } else {
                throw UnsupportedOperation("division by a Laurent polynomial needs a density or point-mass functional");
            }
        },
        spec.v);
}

void check_cauchy_admissible(const FunctionalSpec& spec, cplx z, Side side, double eps)
{
    // second side pairs against 1/(conj z - z2): singular when conj z hits supp_2
    const SupportSet s = support(spec, side == Side::second ? Side::second : Side::first);
    const double d = s.distance(std::conj(z));
    if (d < eps * std::max(1.0, std::abs(z)))
        throw SupportCollision("Cauchy kernel pole at distance " + std::to_string(d) + " from the support");
}

std::vector<cplx> cauchy_monomials(const FunctionalSpec& spec, int amin, int amax, cplx z, Side side, int order,
                                   const CauchyOptions& opt)
{
    check_cauchy_admissible(spec, z, side, opt.eps_support);
    if (side == Side::second)
        return cauchy_second(spec, amin, amax, z, order, opt);
    auto v = cauchy_second(adjoint(spec), amin, amax, z, order, opt);
    for (auto& x : v)
        x = std::conj(x);
    return v;
}

cplx cauchy_pair(const FunctionalSpec& spec, const LaurentPoly<cplx>& p, cplx z, Side side, int order, const CauchyOptions& opt)
{
    if (p.is_zero_poly()) {
        check_cauchy_admissible(spec, z, side, opt.eps_support);
        return 0.0;
    }
    const int amin = p.min_exp();
    const int amax = p.max_exp();
    const auto m = cauchy_monomials(spec, amin, amax, z, side, order, opt);
    cplx s = 0.0;
    for (const auto& [a, c] : p.coeffs())
        s += (side == Side::second ? c : std::conj(c)) * m[a - amin];
    return s;
}

} // namespace cmvlab
