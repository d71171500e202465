#include "cmvlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace cmvlab {

// ---------------------------------------------------------------- log

void CheckLog::add(std::string suite, std::string name, double residual, double tolerance, std::string detail)
{
    if (std::isnan(residual))
        residual = std::numeric_limits<double>::infinity();
    records_.push_back({std::move(suite), std::move(name), residual, tolerance, std::move(detail)});
}

void CheckLog::fail(std::string suite, std::string name, std::string detail)
{
    records_.push_back(
        {std::move(suite), std::move(name), std::numeric_limits<double>::infinity(), 0.0, std::move(detail)});
}

void CheckLog::merge(const CheckLog& other)
{
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

bool CheckLog::all_pass() const
{
    return std::all_of(records_.begin(), records_.end(), [](const CheckRecord& r) { return r.pass(); });
}

int CheckLog::failures() const
{
    return static_cast<int>(std::count_if(records_.begin(), records_.end(), [](const CheckRecord& r) { return !r.pass(); }));
}

double CheckLog::worst_ratio(const std::string& prefix) const
{
    double worst = 0.0;
    for (const auto& r : records_)
        if (r.suite.compare(0, prefix.size(), prefix) == 0) {
            if (!r.pass() && r.tolerance == 0.0)
                return std::numeric_limits<double>::infinity();
            worst = std::max(worst, r.residual / r.tolerance);
        }
    return worst;
}

double relative_gap(cplx a, cplx b, double scale)
{
    return std::abs(a - b) / std::max(scale, 1e-300);
}

// ---------------------------------------------------------------- sampling

std::vector<cplx> sample_points(std::uint64_t seed, int count, double rmin, double rmax)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(rmin, rmax);
    std::vector<cplx> pts;
    for (int i = 0; i < count; ++i) {
        const double r = radius(rng);
        pts.push_back(std::polar(r, angle(rng)));
    }
    return pts;
}

std::vector<cplx> admissible_points(const std::vector<const FunctionalSpec*>& specs, const std::vector<cplx>& avoid,
                                    int count, std::uint64_t seed, double collar)
{
    SupportSet supp;
    for (const auto* s : specs) {
        supp.merge(support(*s, Side::first));
        supp.merge(support(*s, Side::second));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> inner(0.3, 0.8);
    std::uniform_real_distribution<double> outer(1.3, 3.0);
    std::vector<cplx> pts;
    for (int tries = 0; static_cast<int>(pts.size()) < count && tries < 100000; ++tries) {
        const double r = pts.size() % 2 == 0 ? inner(rng) : outer(rng);
        const cplx z = std::polar(r, angle(rng));
        const double gap = collar * std::max(1.0, r);
        if (!supp.empty() && (supp.distance(z) < gap || supp.distance(std::conj(z)) < gap))
            continue;
        bool near = false;
        for (const auto& a : avoid)
            near = near || std::abs(z - a) < gap;
        if (!near)
            pts.push_back(z);
    }
    return pts;
}

std::vector<cplx> spectral_avoid_list(const PreparedLaurent<cplx>& L)
{
    std::vector<cplx> out;
    for (const auto& z : L.spectral.zeros) {
        out.push_back(z.point);
        out.push_back(std::conj(z.point));
        out.push_back(1.0 / std::conj(z.point));
        out.push_back(1.0 / z.point);
    }
    return out;
}

namespace {

std::string side_tag(Side s) { return s == Side::first ? "side1" : "side2"; }

// max_z |a(z) - b(z)| / max_z |b(z)|
template <class A, class B>
double sampled_error(const std::vector<cplx>& pts, A&& a, B&& b)
{
    double scale = 0.0, worst = 0.0;
    std::vector<cplx> av, bv;
    for (const auto& z : pts) {
        av.push_back(a(z));
        bv.push_back(b(z));
        scale = std::max(scale, std::abs(bv.back()));
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        worst = std::max(worst, relative_gap(av[i], bv[i], scale));
    return worst;
}

double rel(cplx a, cplx b) { return relative_gap(a, b, std::max(std::abs(a), std::abs(b))); }

// |lhs - rhs| measured against the largest term magnitude seen in the same
// group (one evaluation point, all degrees); exact zeros of either side make
// a per-entry ratio meaningless
struct Residual {
    double worst = 0.0;
    double gap = 0.0;
    double scale = 0.0;
    void add(cplx lhs, cplx rhs, double terms)
    {
        gap = std::max(gap, std::abs(lhs - rhs));
        scale = std::max({scale, terms, std::abs(lhs), std::abs(rhs)});
    }
    void close()
    {
        if (gap > 0.0)
            worst = std::max(worst, gap / std::max(scale, 1e-300));
        gap = scale = 0.0;
    }
    double value()
    {
        close();
        return worst;
    }
};

cplx gram_pair(const Matrix<cplx>& G, const std::vector<cplx>& row_a, const LaurentPoly<cplx>& b)
{
    cplx s = 0.0;
    for (std::size_t a = 0; a < row_a.size(); ++a) {
        if (row_a[a] == 0.0)
            continue;
        for (const auto& [e, c] : b.coeffs())
            s += row_a[a] * G(static_cast<int>(a), cmv_index(e)) * std::conj(c);
    }
    return s;
}

} // namespace

// ---------------------------------------------------------------- reports

ConnectorReport assess_connectors(const Connectors& c, const BiorthSystem<cplx>& base, const BiorthSystem<cplx>& pert,
                                  const PreparedLaurent<cplx>& L, TransformKind kind, Side side, int M)
{
    const int p = 2 * L.n;
    ConnectorReport r;
    r.bandwidth = p;
    // which connector is the banded upper one
    const bool first_banded = side == Side::first;
    const Matrix<cplx>& up = first_banded ? c.first : c.second;
    const Matrix<cplx>& low = first_banded ? c.second : c.first;
    r.banded = band_profile(up, 0, p);
    r.triangular = band_profile(low, p, 0);

    // ligatures, written as X(i,j) = Y(i,j)
    double lig = 0.0, scale = 0.0;
    std::vector<std::pair<cplx, cplx>> pairs;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            cplx lhs, rhs;
            if (kind == TransformKind::christoffel && side == Side::first) {
                lhs = pert.H[i] * std::conj(c.second(j, i)); // Hhat omega2^dagger
                rhs = c.first(i, j) * base.H[j];             // omega1 H
            } else if (kind == TransformKind::christoffel) {
                lhs = c.first(i, j) * pert.H[j];             // omega1 Hhat
                rhs = base.H[i] * std::conj(c.second(j, i)); // H omega2^dagger
            } else if (side == Side::first) {
                lhs = c.first(i, j) * pert.H[j];             // Omega1 Hcheck
                rhs = base.H[i] * std::conj(c.second(j, i)); // H Omega2^dagger
            } else {
                lhs = pert.H[i] * std::conj(c.second(j, i)); // Hcheck Omega2^dagger
                rhs = c.first(i, j) * base.H[j];             // Omega1 H
            }
            pairs.push_back({lhs, rhs});
            scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        }
    for (const auto& [a, b] : pairs)
        lig = std::max(lig, relative_gap(a, b, scale));
    r.ligature = lig;

    double corner = 0.0;
    for (int k = 0; k < M; ++k) {
        if (kind == TransformKind::christoffel) {
            if (k + p >= M)
                continue;
            corner = std::max(corner, rel(up(k, k + p), L.corner_coeff(k)));
        } else {
            if (k < p)
                continue;
            const cplx Lc = std::conj(L.corner_coeff(k));
            if (side == Side::first)
                corner = std::max(corner, rel(c.second(k, k - p), Lc * std::conj(pert.H[k]) / std::conj(base.H[k - p])));
            else
                corner = std::max(corner, rel(c.first(k, k - p), Lc * pert.H[k] / base.H[k - p]));
        }
    }
    r.corner = corner;
    return r;
}


double TransformReport::max_discrepancy() const
{
    double m = 0.0;
    for (const auto& lv : levels) {
        if (!lv.error.empty())
            return std::numeric_limits<double>::infinity();
        m = std::max({m, lv.norm_error, lv.norm_det_error, lv.phi1_error, lv.phi2_error, lv.phi_det_error});
    }
    return m;
}

bool TransformReport::has_level_errors() const
{
    return std::any_of(levels.begin(), levels.end(), [](const TransformLevel& lv) { return !lv.error.empty(); });
}

TransformReport run_christoffel(const FunctionalSpec& spec, const PreparedLaurent<cplx>& L, Side side, int lmax,
                                const std::vector<cplx>& samples)
{
    TransformReport rep;
    rep.kind = TransformKind::christoffel;
    rep.side = side;
    rep.functional = spec.label;
    rep.L = L;
    rep.lmin = 2 * L.n;
    rep.lmax = lmax;
    const int M = lmax + 1;
    const int Mb = base_budget(lmax, L.n);
    rep.base_size = Mb;
    const auto G = gram<cplx>(spec, Mb);
    const auto base = factorize(G.data);
    const auto hat = christoffel_direct(G.data, L, side, M);
    const ChristoffelFormula<cplx> F(base, L, side, lmax);
    for (int l = rep.lmin; l <= lmax; ++l) {
        TransformLevel lv;
        lv.l = l;
        lv.norm_direct = hat.H[l];
        try {
            lv.norm_formula = F.norm(l);
            lv.norm_formula_det = F.norm_det(l);
            lv.tau = F.tau(l);
            lv.norm_error = rel(lv.norm_formula, lv.norm_direct);
            lv.norm_det_error = rel(lv.norm_formula_det, lv.norm_direct);
            lv.phi1_error = sampled_error(samples, [&](cplx z) { return F.phi1(l, z); },
                                          [&](cplx z) { return phi(hat, 1, l, z); });
            lv.phi2_error = sampled_error(samples, [&](cplx z) { return F.phi2(l, z); },
                                          [&](cplx z) { return phi(hat, 2, l, z); });
            const int fam = F.kernel_family();
            lv.phi_det_error = sampled_error(samples, [&](cplx z) { return F.kernel_family_det(l, z); },
                                             [&](cplx z) { return phi(hat, fam, l, z); });
            for (const auto& z : samples)
                lv.quasidet_discrepancy = std::max(lv.quasidet_discrepancy, F.quasidet_discrepancy(l, z));
        } catch (const SingularLeadingBlock& e) {
            lv.error = e.what();
        }
        rep.levels.push_back(lv);
    }
    rep.connectors = assess_connectors(christoffel_connectors(base, hat, L, side, M), base, hat, L,
                                      TransformKind::christoffel, side, M);
    return rep;
}

TransformReport run_geronimus(const FunctionalSpec& spec, const PreparedLaurent<cplx>& L, Side side,
                              const MassSpec& mass, int lmax, const std::vector<cplx>& samples)
{
    TransformReport rep;
    rep.kind = TransformKind::geronimus;
    rep.side = side;
    rep.functional = spec.label;
    rep.L = L;
    rep.mass_kind = mass.kind();
    rep.xi = to_general(mass, L, side);
    rep.lmin = 2 * L.n;
    rep.lmax = lmax;
    const int M = lmax + 1;
    const int Mb = base_budget(lmax, L.n);
    rep.base_size = Mb;
    const auto base = factorize(gram<cplx>(spec, Mb).data);
    const auto direct = geronimus_direct(spec, L, side, rep.xi, M + 2 * L.n);
    const GeronimusFormula F(spec, base, L, side, rep.xi, lmax);
    for (int l = rep.lmin; l <= lmax; ++l) {
        TransformLevel lv;
        lv.l = l;
        lv.norm_direct = direct.sys.H[l];
        try {
            lv.norm_formula = F.norm(l);
            lv.norm_formula_det = F.norm_det(l);
            lv.tau = F.tau(l);
            lv.norm_error = rel(lv.norm_formula, lv.norm_direct);
            lv.norm_det_error = rel(lv.norm_formula_det, lv.norm_direct);
            lv.phi1_error = sampled_error(samples, [&](cplx z) { return F.phi1(l, z); },
                                          [&](cplx z) { return phi(direct.sys, 1, l, z); });
            lv.phi2_error = sampled_error(samples, [&](cplx z) { return F.phi2(l, z); },
                                          [&](cplx z) { return phi(direct.sys, 2, l, z); });
            for (const auto& z : samples)
                lv.quasidet_discrepancy = std::max(lv.quasidet_discrepancy, F.quasidet_discrepancy(l, z));
        } catch (const SingularLeadingBlock& e) {
            lv.error = e.what();
        }
        rep.levels.push_back(lv);
    }
    rep.connectors = assess_connectors(geronimus_connectors(base, direct.sys, L, side, M), base, direct.sys, L,
                                      TransformKind::geronimus, side, M);
    return rep;
}

void check_transform_report(CheckLog& log, const std::string& suite, const TransformReport& r, double tol)
{
    double norm = 0.0, norm_det = 0.0, p1 = 0.0, p2 = 0.0, pdet = 0.0;
    std::string errors;
    for (const auto& lv : r.levels) {
        if (!lv.error.empty())
            errors += "l=" + std::to_string(lv.l) + ": " + lv.error + "; ";
        norm = std::max(norm, lv.norm_error);
        norm_det = std::max(norm_det, lv.norm_det_error);
        p1 = std::max(p1, lv.phi1_error);
        p2 = std::max(p2, lv.phi2_error);
        pdet = std::max(pdet, lv.phi_det_error);
    }
    if (!errors.empty()) {
        log.fail(suite, "levels", errors);
        return;
    }
    const std::string range = "l in [" + std::to_string(r.lmin) + ", " + std::to_string(r.lmax) + "]";
    log.add(suite, "norm_quasidet", norm, tol, range);
    log.add(suite, "norm_det_ratio", norm_det, tol, range);
    log.add(suite, "phi1", p1, tol, range);
    log.add(suite, "phi2", p2, tol, range);
    if (r.kind == TransformKind::christoffel)
        log.add(suite, "kernel_family_det_form", pdet, tol, range);
}

void check_connector_report(CheckLog& log, const std::string& suite, const TransformReport& r, double band_tol,
                            double ligature_tol)
{
    const auto& c = r.connectors;
    const int want = c.bandwidth + 1;
    log.add(suite, "banded_off_band", c.banded.off_band, band_tol);
    log.add(suite, "banded_diagonal_count", std::abs(c.banded.nonzero_diagonals - want), 0.5,
            std::to_string(c.banded.nonzero_diagonals) + " nonzero diagonals, expected " + std::to_string(want));
    log.add(suite, "triangular_off_band", c.triangular.off_band, band_tol);
    log.add(suite, "triangular_unit_diagonal", c.triangular.unit_diagonal ? 0.0 : 1.0, 0.5);
    log.add(suite, "ligature", c.ligature, ligature_tol);
    log.add(suite, "corner", c.corner, ligature_tol);
}

// ---------------------------------------------------------------- basic suites

void check_biorthogonality(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int N, double tol)
{
    try {
        const auto G = gram<cplx>(spec, N);
        const auto sys = factorize(G);
        log.add("biorthogonality", label + "/N=" + std::to_string(N), biorthogonality_residual(sys, spec), tol);
    } catch (const Error& e) {
        log.fail("biorthogonality", label, e.what());
    }
}

void check_biorthogonality_exact(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int N)
{
    try {
        const auto G = gram<GaussRational>(spec, N);
        const auto sys = factorize(G);
        const auto P = sys.S1 * G.data * sys.S2.adjoint();
        int bad = 0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                GaussRational v = P(i, j);
                if (i == j)
                    v -= sys.H[i];
                if (!v.is_zero())
                    ++bad;
            }
        log.add("biorthogonality_exact", label + "/N=" + std::to_string(N), bad, 0.5,
                std::to_string(bad) + " nonzero residual entries");
    } catch (const Error& e) {
        log.fail("biorthogonality_exact", label, e.what());
    }
}

void check_abc(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int lmax, int samples,
               std::uint64_t seed, double tol)
{
    try {
        const auto G = gram<cplx>(spec, lmax);
        const auto sys = factorize(G);
        const auto pts = sample_points(seed, 2 * samples, 0.5, 2.0);
        double worst = 0.0;
        for (int s = 0; s < samples; ++s)
            for (int l = 1; l <= lmax; ++l) {
                const cplx K = cd_kernel(sys, l, pts[2 * s], pts[2 * s + 1]);
                const cplx A = abc_kernel(G.data, l, pts[2 * s], pts[2 * s + 1]);
                worst = std::max(worst, std::abs(K - A) / (1.0 + std::abs(K)));
            }
        log.add("abc", label, worst, tol, std::to_string(samples) + " pairs, l <= " + std::to_string(lmax));
    } catch (const Error& e) {
        log.fail("abc", label, e.what());
    }
}

void check_projection(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int lmax, int samples,
                      std::uint64_t seed, double tol)
{
    try {
        const auto G = gram<cplx>(spec, lmax);
        const auto sys = factorize(G);
        const auto pts = sample_points(seed, samples, 0.5, 2.0);
        std::mt19937_64 rng(seed + 1);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        Residual res;
        for (const auto& x : pts)
            for (int l = 1; l <= lmax; ++l) {
                LaurentPoly<cplx> m;
                for (int j = 0; j < l; ++j)
                    m.set(cmv_exponent(j), cplx(U(rng), U(rng)));
                // coefficients of K^{[l]}(conj x, z1) in z1
                std::vector<cplx> krow(l, 0.0);
                const auto p2 = phi_all(sys, 2, x, 0, l);
                for (int k = 0; k < l; ++k) {
                    const cplx w = std::conj(p2[k]) / sys.H[k];
                    for (int j = 0; j <= k; ++j)
                        krow[j] += w * sys.S1(k, j);
                }
                res.add(gram_pair(G.data, krow, m), std::conj(m.eval(x)), 0.0);
                res.close();
            }
        log.add("projection", label, res.value(), tol);
    } catch (const Error& e) {
        log.fail("projection", label, e.what());
    }
}

void check_christoffel_exact(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                             const PreparedLaurent<cplx>& L, Side side, int lmax)
{
    using Q = GaussRational;
    const std::string suite = "christoffel_exact";
    try {
        const auto Lx = L.convert<Q>();
        const int M = lmax + 1;
        const auto G = gram<Q>(spec, base_budget(lmax, L.n));
        const auto base = factorize(G);
        const auto hat = christoffel_direct(G.data, Lx, side, M);
        const ChristoffelFormula<Q> F(base, Lx, side, lmax);
        const std::vector<Q> pts = {Q(mpq_class(3, 2), mpq_class(1, 3)), Q(mpq_class(-1, 2), mpq_class(2, 5)),
                                    Q(mpq_class(1, 4), mpq_class(-7, 4))};
        int compared = 0, bad = 0;
        auto cmp = [&](const Q& a, const Q& b) {
            ++compared;
            if (a != b)
                ++bad;
        };
        for (int l = 2 * L.n; l <= lmax; ++l) {
            cmp(F.norm(l), hat.H[l]);
            cmp(F.norm_det(l), hat.H[l]);
            for (const auto& z : pts) {
                cmp(F.phi1(l, z), phi(hat, 1, l, z));
                cmp(F.phi2(l, z), phi(hat, 2, l, z));
                cmp(F.kernel_family_det(l, z), phi(hat, F.kernel_family(), l, z));
            }
        }
        log.add(suite, label + "/" + side_tag(side), bad, 0.5,
                std::to_string(bad) + " of " + std::to_string(compared) + " exact values differ");
    } catch (const Error& e) {
        log.fail(suite, label + "/" + side_tag(side), e.what());
    }
}

// ---------------------------------------------------------------- circle duals

void check_circle_dual_christoffel(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                                   const PreparedLaurent<cplx>& L, int lmax, const std::vector<cplx>& samples,
                                   double tol)
{
    const std::string suite = "circle_dual_christoffel";
    try {
        if (!is_univariate_circle(spec))
            throw UnsupportedOperation("dual formulas need a univariate circle functional");
        const auto base = factorize(gram<cplx>(spec, base_budget(lmax, L.n) + 1));
        const auto Lstar = L.reciprocal();
        const ChristoffelFormula<cplx> F1(base, L, Side::first, lmax);
        const ChristoffelFormula<cplx> F2(base, Lstar, Side::second, lmax);
        double norm = 0.0, p1 = 0.0, p2 = 0.0, tau = 0.0;
        bool self_reciprocal = true;
        for (const auto& [k, c] : L.poly.coeffs())
            self_reciprocal = self_reciprocal && std::abs(c - Lstar.poly.coeff(k)) <= 1e-14 * std::abs(c);
        self_reciprocal = self_reciprocal && L.poly.coeffs().size() == Lstar.poly.coeffs().size();
        for (int l = 2 * L.n; l <= lmax; ++l) {
            norm = std::max(norm, rel(F1.norm(l), F2.norm(l)));
            p1 = std::max(p1, sampled_error(samples, [&](cplx z) { return F2.phi1(l, z); },
                                            [&](cplx z) { return F1.phi1(l, z); }));
            p2 = std::max(p2, sampled_error(samples, [&](cplx z) { return F2.phi2(l, z); },
                                            [&](cplx z) { return F1.phi2(l, z); }));
            if (self_reciprocal && L.n > 0) {
                const cplx t0 = F1.tau(l), t1 = F1.tau(l + 1);
                tau = std::max(tau, rel(L.corner_coeff(l) * t1 * std::conj(t0),
                                        L.corner_coeff(l + 1) * std::conj(t1) * t0));
            }
        }
        log.add(suite, label + "/norm", norm, tol);
        log.add(suite, label + "/phi1", p1, tol);
        log.add(suite, label + "/phi2", p2, tol);
        if (self_reciprocal && L.n > 0)
            log.add(suite, label + "/self_reciprocal_pivots", tau, tol);
    } catch (const Error& e) {
        log.fail(suite, label, e.what());
    }
}

void check_circle_dual_geronimus(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                                 const PreparedLaurent<cplx>& L, const MassSpec& mass, int lmax,
                                 const std::vector<cplx>& samples, double tol)
{
    const std::string suite = "circle_dual_geronimus";
    try {
        if (!is_univariate_circle(spec))
            throw UnsupportedOperation("dual formulas need a univariate circle functional");
        const auto base = factorize(gram<cplx>(spec, base_budget(lmax, L.n)));
        const auto Lstar = L.reciprocal();
        const auto xi1 = to_general(mass, L, Side::first);
        const auto xi2 = to_general(mass, Lstar, Side::second);
        const GeronimusFormula F1(spec, base, L, Side::first, xi1, lmax);
        const GeronimusFormula F2(spec, base, Lstar, Side::second, xi2, lmax);
        const auto d1 = geronimus_direct(spec, L, Side::first, xi1, lmax + 1);
        const auto g2 = gram<cplx>(geronimus_functional(spec, Lstar, Side::second, xi2), lmax + 1);
        log.add(suite, label + "/same_functional", (d1.gram.data - g2.data).max_abs() / d1.gram.data.max_abs(), tol);
        double norm = 0.0, p1 = 0.0, p2 = 0.0, direct = 0.0;
        for (int l = 2 * L.n; l <= lmax; ++l) {
            norm = std::max(norm, rel(F1.norm(l), F2.norm(l)));
            p1 = std::max(p1, sampled_error(samples, [&](cplx z) { return F2.phi1(l, z); },
                                            [&](cplx z) { return F1.phi1(l, z); }));
            p2 = std::max(p2, sampled_error(samples, [&](cplx z) { return F2.phi2(l, z); },
                                            [&](cplx z) { return F1.phi2(l, z); }));
            direct = std::max(direct, rel(F2.norm(l), d1.sys.H[l]));
            direct = std::max(direct, sampled_error(samples, [&](cplx z) { return F2.phi1(l, z); },
                                                    [&](cplx z) { return phi(d1.sys, 1, l, z); }));
            direct = std::max(direct, sampled_error(samples, [&](cplx z) { return F2.phi2(l, z); },
                                                    [&](cplx z) { return phi(d1.sys, 2, l, z); }));
        }
        log.add(suite, label + "/norm", norm, tol);
        log.add(suite, label + "/phi1", p1, tol);
        log.add(suite, label + "/phi2", p2, tol);
        log.add(suite, label + "/dual_vs_direct", direct, tol);
    } catch (const Error& e) {
        log.fail(suite, label, e.what());
    }
}

// ---------------------------------------------------------------- connection identities

void check_christoffel_connections(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                                   const PreparedLaurent<cplx>& L, Side side, int lmax,
                                   const std::vector<cplx>& samples, double tol)
{
    const std::string suite = "connection_christoffel";
    const std::string tag = label + "/" + side_tag(side);
    try {
        const int p = 2 * L.n;
        const int M = lmax + p + 1;
        const auto G = gram<cplx>(spec, M + p);
        const auto base = factorize(G);
        const auto hat = christoffel_direct(G.data, L, side, M);
        const auto conn = christoffel_connectors(base, hat, L, side, M);
        // canonical orientation: L multiplies the first variable
        const bool first = side == Side::first;
        const auto P = first ? base : base.adjoint();
        const auto Q = first ? hat : hat.adjoint();
        const Matrix<cplx>& w1 = first ? conn.first : conn.second;
        const Matrix<cplx>& w2 = first ? conn.second : conn.first;

        Residual mult, plain, kernel;
        for (const auto& z : samples) {
            const auto f1 = phi_all(P, 1, z, 0, M);
            const auto f2 = phi_all(P, 2, z, 0, M);
            const auto h1 = phi_all(Q, 1, z, 0, M);
            const auto h2 = phi_all(Q, 2, z, 0, M);
            const cplx Lz = L.poly.eval(z);
            for (int k = 0; k + p < M; ++k) {
                cplx s = 0.0;
                double sc = 0.0;
                for (int j = k; j <= k + p; ++j) {
                    s += w1(k, j) * f1[j];
                    sc += std::abs(w1(k, j) * f1[j]);
                }
                mult.add(s, Lz * h1[k], sc);
            }
            for (int k = 0; k < M; ++k) {
                cplx s = 0.0;
                double sc = 0.0;
                for (int j = 0; j <= k; ++j) {
                    s += w2(k, j) * h2[j];
                    sc += std::abs(w2(k, j) * h2[j]);
                }
                plain.add(s, f2[k], sc);
            }
            mult.close();
            plain.close();
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const cplx z1 = samples[i], z2 = samples[(i + 1) % samples.size()];
            const auto h2 = phi_all(Q, 2, z1, 0, M);
            const auto f1 = phi_all(P, 1, z2, 0, M);
            for (int l = p; l <= lmax; ++l) {
                const cplx K = cd_kernel(P, l, z1, z2);
                const cplx LKhat = L.poly.eval(z2) * cd_kernel(Q, l, z1, z2);
                cplx tail = 0.0;
                double sc = std::abs(K) + std::abs(LKhat);
                for (int a = 0; a < p; ++a)
                    for (int b = 0; b <= a; ++b) {
                        const int k = l - p + a, j = l + b;
                        const cplx t = std::conj(h2[k]) / Q.H[k] * w1(k, j) * f1[j];
                        tail += t;
                        sc += std::abs(t);
                    }
                kernel.add(K, LKhat - tail, sc);
            }
            kernel.close();
        }
        // names follow the caller's side
        log.add(suite, tag + (first ? "/laurent_phi1" : "/laurent_phi2"), mult.value(), tol);
        log.add(suite, tag + (first ? "/laurent_phi2" : "/laurent_phi1"), plain.value(), tol);
        log.add(suite, tag + "/cd_kernel", kernel.value(), tol);
    } catch (const Error& e) {
        log.fail(suite, tag, e.what());
    }
}

void check_geronimus_connections(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                                 const PreparedLaurent<cplx>& L, Side side, const MassSpec& mass, int lmax,
                                 const std::vector<cplx>& samples, double tol)
{
    const std::string suite = "connection_geronimus";
    const std::string tag = label + "/" + side_tag(side);
    try {
        const int p = 2 * L.n;
        const int M = lmax + p + 1;
        const int Mb = M + p;
        const auto xi = to_general(mass, L, side);
        const auto base = factorize(gram<cplx>(spec, Mb));
        const auto direct = geronimus_direct(spec, L, side, xi, Mb);
        const auto conn = geronimus_connectors(base, direct.sys, L, side, M);
        // canonical orientation: the division acts on the second variable
        const bool second = side == Side::second;
        const FunctionalSpec u = second ? spec : adjoint(spec);
        const FunctionalSpec uc = second ? direct.spec : adjoint(direct.spec);
        const auto P = second ? base : base.adjoint();
        const auto Q = second ? direct.sys : direct.sys.adjoint();
        const Matrix<cplx> Gc = second ? direct.gram.data : direct.gram.data.adjoint();
        const Matrix<cplx>& O1 = second ? conn.first : conn.second;
        const Matrix<cplx>& O2 = second ? conn.second : conn.first;
        const LaurentPoly<cplx> Lbar = L.poly.conj_coeffs();

        Residual lau_a, lau_b, cc_delta, cc_tail, cc_plain, kern, cf, fc;
        struct Values {
            std::vector<cplx> f1, f2, h1, h2, C1, C2, Ch1, Ch2;
        };
        auto values = [&](cplx z) {
            Values v;
            v.f1 = phi_all(P, 1, z, 0, Mb);
            v.f2 = phi_all(P, 2, z, 0, M);
            v.h1 = phi_all(Q, 1, z, 0, M);
            v.h2 = phi_all(Q, 2, z, 0, Mb);
            v.C1 = c_pairing_all(u, P, 1, z, 0, Mb);
            v.C2 = c_pairing_all(u, P, 2, z, 0, M);
            v.Ch1 = c_pairing_all(uc, Q, 1, z, 0, M);
            v.Ch2 = c_pairing_all(uc, Q, 2, z, 0, Mb);
            return v;
        };
        std::vector<Values> vals;
        for (const auto& z : samples)
            vals.push_back(values(z));

        for (std::size_t s = 0; s < samples.size(); ++s) {
            const cplx z = samples[s];
            const Values& v = vals[s];
            const cplx Lz = L.poly.eval(z);
            const cplx Lbz = Lbar.eval(z);
            const LaurentPoly<cplx> dL = divided_difference_in_second(L.poly, std::conj(z));
            for (int k = 0; k < M; ++k) {
                cplx a = 0.0, c = 0.0;
                double sa = 0.0, sc = 0.0;
                for (int j = std::max(0, k - p); j <= k; ++j) {
                    a += O1(k, j) * v.f1[j];
                    sa += std::abs(O1(k, j) * v.f1[j]);
                    c += O1(k, j) * v.C1[j];
                    sc += std::abs(O1(k, j) * v.C1[j]);
                }
                lau_a.add(a, v.h1[k], sa);
                const cplx delta = -gram_pair(Gc, Q.S1.row(k), dL);
                cc_delta.add(c - Lbz * v.Ch1[k], delta, sc + std::abs(Lbz * v.Ch1[k]));
                if (k >= p)
                    cc_tail.add(c, Lbz * v.Ch1[k], sc);
            }
            for (int k = 0; k + p < M; ++k) {
                cplx b = 0.0, c = 0.0;
                double sb = 0.0, sc = 0.0;
                for (int j = k; j <= k + p; ++j) {
                    b += O2(k, j) * v.h2[j];
                    sb += std::abs(O2(k, j) * v.h2[j]);
                    c += O2(k, j) * v.Ch2[j];
                    sc += std::abs(O2(k, j) * v.Ch2[j]);
                }
                lau_b.add(b, Lz * v.f2[k], sb);
                cc_plain.add(c, v.C2[k], sc);
            }
            for (auto* r : {&lau_a, &lau_b, &cc_delta, &cc_tail, &cc_plain})
                r->close();
        }

        for (std::size_t s = 0; s < samples.size(); ++s) {
            const cplx x1 = samples[s], x2 = samples[(s + 1) % samples.size()];
            const Values& v1 = vals[s];
            const Values& v2 = vals[(s + 1) % samples.size()];
            const cplx L1bar = std::conj(L.poly.eval(x1));
            const cplx Lbar2 = Lbar.eval(x2);
            const cplx dLbar = divided_difference_in_second(Lbar, std::conj(x1)).eval(x2);
            for (int l = p; l <= lmax; ++l) {
                // shared tail: sum_{k in [l, l+2n)} sum_{j in [k-2n, l)} left_k / Hcheck_k * O1(k,j) * right_j
                auto tail = [&](const std::vector<cplx>& left, const std::vector<cplx>& right, double& scale) {
                    cplx t = 0.0;
                    for (int k = l; k < l + p; ++k)
                        for (int j = k - p; j < l; ++j) {
                            const cplx term = std::conj(left[k]) / Q.H[k] * O1(k, j) * right[j];
                            t += term;
                            scale += std::abs(term);
                        }
                    return t;
                };
                auto partial = [&](const std::vector<cplx>& left, const std::vector<cplx>& right, const auto& S) {
                    cplx t = 0.0;
                    for (int k = 0; k < l; ++k)
                        t += std::conj(left[k]) / S.H[k] * right[k];
                    return t;
                };
                {
                    const cplx Kc = partial(v1.h2, v2.h1, Q);
                    const cplx K = L1bar * partial(v1.f2, v2.f1, P);
                    double sc = std::abs(Kc) + std::abs(K);
                    const cplx t = tail(v1.h2, v2.f1, sc);
                    kern.add(Kc - K, -t, sc);
                }
                {
                    const cplx Kc = partial(v1.Ch2, v2.h1, Q);
                    const cplx K = partial(v1.C2, v2.f1, P);
                    double sc = std::abs(Kc) + std::abs(K);
                    const cplx t = tail(v1.Ch2, v2.f1, sc);
                    cf.add(Kc - K, -t, sc);
                }
                {
                    const cplx Kc = Lbar2 * partial(v1.h2, v2.Ch1, Q);
                    const cplx K = L1bar * partial(v1.f2, v2.C1, P);
                    double sc = std::abs(Kc) + std::abs(K) + std::abs(dLbar);
                    const cplx t = tail(v1.h2, v2.C1, sc);
                    fc.add(Kc - K - dLbar, -t, sc);
                }
            }
            kern.close();
            cf.close();
            fc.close();
        }
        // canonical identities carry the second-side names; the first side reads them through the adjoint
        log.add(suite, tag + (second ? "/laurent_phi1" : "/laurent_phi2"), lau_a.value(), tol);
        log.add(suite, tag + (second ? "/laurent_phi2" : "/laurent_phi1"), lau_b.value(), tol);
        log.add(suite, tag + (second ? "/cauchy_C1_deltaL" : "/cauchy_C2_deltaL"), cc_delta.value(), tol);
        log.add(suite, tag + (second ? "/cauchy_C1_high_degree" : "/cauchy_C2_high_degree"), cc_tail.value(), tol);
        log.add(suite, tag + (second ? "/cauchy_C2" : "/cauchy_C1"), cc_plain.value(), tol);
        log.add(suite, tag + "/cd_kernel", kern.value(), tol);
        log.add(suite, tag + (second ? "/mixed_C_phi" : "/mixed_phi_C"), cf.value(), tol);
        log.add(suite, tag + (second ? "/mixed_phi_C" : "/mixed_C_phi"), fc.value(), tol);
    } catch (const Error& e) {
        log.fail(suite, tag, e.what());
    }
}

// ---------------------------------------------------------------- jets, Gram identities, round trip

void check_jet_identities(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                          const PreparedLaurent<cplx>& L, Side side, const MassSpec& mass, int lmax, double tol)
{
    const std::string suite = "jets";
    const std::string tag = label + "/" + side_tag(side) + (side == Side::second ? "/C1" : "/C2");
    try {
        if (L.n == 0) {
            log.add(suite, tag, 0.0, tol, "constant polynomial: empty jets");
            return;
        }
        const int M = lmax + 1;
        const auto xi = to_general(mass, L, side);
        const auto direct = geronimus_direct(spec, L, side, xi, M);
        const bool second = side == Side::second;
        const FunctionalSpec uc = second ? direct.spec : adjoint(direct.spec);
        const auto Q = second ? direct.sys : direct.sys.adjoint();
        const FunctionalSpec u = second ? spec : adjoint(spec);
        const Matrix<cplx> ell = ell_matrix(L);
        const LaurentPoly<cplx> Lbar = L.poly.conj_coeffs();
        const SupportSet supp = support(u, Side::second);
        const int p = 2 * L.n;
        const int nodes = 64;

        // contour jets of Lbar(w) Ccheck_{1,k}(w) at the zeros of Lbar
        std::vector<std::vector<cplx>> lhs(M, std::vector<cplx>(p, 0.0));
        std::vector<std::vector<double>> scale(M, std::vector<double>(p, 0.0));
        const auto& zeros = L.spectral.zeros;
        int col = 0;
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            const cplx a = std::conj(zeros[i].point);
            double rho = 0.4 * std::abs(a);
            for (std::size_t j = 0; j < zeros.size(); ++j)
                if (j != i)
                    rho = std::min(rho, 0.4 * std::abs(zeros[i].point - zeros[j].point));
            if (!supp.empty())
                rho = std::min(rho, 0.4 * supp.distance(zeros[i].point));
            const int m = zeros[i].multiplicity;
            for (int t = 0; t < nodes; ++t) {
                const cplx step = std::polar(rho, 2.0 * std::numbers::pi * (t + 0.5) / nodes);
                const cplx w = a + step;
                const auto C = c_pairing_all(uc, Q, 1, w, 0, M);
                const cplx lw = Lbar.eval(w);
                for (int k = 0; k < M; ++k)
                    for (int r = 0; r < m; ++r) {
                        const cplx f = lw * C[k] * std::pow(step, -r) / static_cast<double>(nodes);
                        lhs[k][col + r] += f;
                        scale[k][col + r] = std::max(scale[k][col + r], std::abs(lw * C[k]) * std::pow(rho, -r));
                    }
            }
            col += m;
        }
        Residual res;
        for (int k = 0; k < M; ++k) {
            const auto pairing = mass_pair(xi, [&](cplx z, int o) { return phi(Q, 1, k, z, o); });
            std::vector<cplx> rhs(p, 0.0);
            for (int a = 0; a < p; ++a)
                for (int b = 0; b < p; ++b)
                    rhs[b] += pairing[a] * ell(a, b);
            double sc = 0.0;
            for (int c = 0; c < p; ++c)
                sc = std::max({sc, scale[k][c], std::abs(rhs[c])});
            for (int c = 0; c < p; ++c)
                res.add(lhs[k][c], rhs[c], sc);
        }
        // one group across degrees: some degrees have identically vanishing jets
        log.add(suite, tag, res.value(), tol, "k < " + std::to_string(M) + ", mass " + mass.kind());
    } catch (const Error& e) {
        log.fail(suite, tag, e.what());
    }
}

void check_geronimus_gram(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                          const PreparedLaurent<cplx>& L, Side side, const MassSpec& mass, int M, double tol)
{
    const std::string suite = "geronimus_gram";
    const std::string tag = label + "/" + side_tag(side) + "/" + mass.kind();
    try {
        const int wide = M + 2 * L.n;
        const auto xi = to_general(mass, L, side);
        const auto Gc = gram<cplx>(geronimus_functional(spec, L, side, xi), wide);
        const auto G = gram<cplx>(spec, M);
        const auto back = christoffel_gram(Gc.data, L.poly, side, M);
        log.add(suite, tag, (back - G.data).max_abs() / G.data.max_abs(), tol);
    } catch (const Error& e) {
        log.fail(suite, tag, e.what());
    }
}

void check_round_trip(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                      const PreparedLaurent<cplx>& L, Side side, int lmax, const std::vector<cplx>& samples,
                      double tol)
{
    const std::string suite = "round_trip";
    const std::string tag = label + "/" + side_tag(side);
    try {
        const int M = lmax + 1;
        GeneralMass none;
        const auto Gc = gram<cplx>(geronimus_functional(spec, L, side, none), M + 2 * L.n);
        const auto restored = factorize(christoffel_gram(Gc.data, L.poly, side, M));
        const auto base = factorize(gram<cplx>(spec, M));
        double norm = 0.0, values = 0.0;
        for (int l = 0; l < M; ++l) {
            norm = std::max(norm, rel(restored.H[l], base.H[l]));
            for (int fam = 1; fam <= 2; ++fam)
                values = std::max(values, sampled_error(samples, [&](cplx z) { return phi(restored, fam, l, z); },
                                                        [&](cplx z) { return phi(base, fam, l, z); }));
        }
        log.add(suite, tag + "/norm", norm, tol);
        log.add(suite, tag + "/phi", values, tol);
    } catch (const Error& e) {
        log.fail(suite, tag, e.what());
    }
}

void check_second_kind_routes(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int kmax,
                              int samples, std::uint64_t seed, double tol)
{
    const std::string suite = "second_kind";
    try {
        const auto G = gram<cplx>(spec, 160);
        const auto sys = factorize(G.data.leading(kmax + 1), default_pivot_floor, "base");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::uniform_real_distribution<double> out_r(2.5, 3.5), in_r(0.25, 0.4);
        double worst = 0.0;
        for (int s = 0; s < samples; ++s) {
            const bool outside = s % 2 == 0;
            const double r = outside ? out_r(rng) * G.support_outer : in_r(rng) * G.support_inner;
            const cplx z = std::polar(r, angle(rng));
            for (int fam = 1; fam <= 2; ++fam) {
                const auto pairing = c_pairing_all(spec, sys, fam, z, 0, kmax + 1);
                for (int k = 0; k <= kmax; ++k) {
                    const auto series = c_series(sys, G, fam, k, z);
                    worst = std::max(worst, relative_gap(series.value, pairing[k], 1.0 + std::abs(pairing[k])));
                }
            }
        }
        log.add(suite, label, worst, tol, std::to_string(samples) + " points, k <= " + std::to_string(kmax));
    } catch (const Error& e) {
        log.fail(suite, label, e.what());
    }
}

void check_negative_controls(CheckLog& log)
{
    const std::string suite = "negative_controls";
    {
        const auto L = prepared_from_zeros<cplx>(1.0, {{{1.0, 1}, {2.0, 1}}});
        std::string what = "no exception";
        bool ok = false;
        try {
            geronimus_direct(lebesgue(), L, Side::first, GeneralMass{}, 6);
        } catch (const SupportCollision& e) {
            ok = true;
            what = e.what();
        } catch (const std::exception& e) {
            what = e.what();
        }
        log.add(suite, "zero_on_support", ok ? 0.0 : 1.0, 0.5, what);
    }
    {
        std::string what = "no exception";
        bool ok = false;
        try {
            factorize(gram<cplx>(toeplitz_from_moments({{0, 0.0}, {1, 1.0}, {-1, 1.0}}), 4));
        } catch (const QuasidefiniteViolation& e) {
            ok = e.index() == 0;
            what = e.what();
        } catch (const std::exception& e) {
            what = e.what();
        }
        log.add(suite, "vanishing_leading_minor", ok ? 0.0 : 1.0, 0.5, what);
    }
}

} // namespace cmvlab
