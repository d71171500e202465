#include "cmvlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cmvlab {

namespace {

using io::json;

template <class T>
BasisResult basis_for(const io::RunConfig& cfg)
{
    const int N = cfg.degree;
    const auto G = gram<T>(cfg.functional, N);
    const auto sys = factorize(G);
    const Matrix<T> P = sys.S1 * G.data * sys.S2.adjoint();
    Matrix<T> R(N, N);
    double worst = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            T r = P(i, j);
            if (i == j)
                r -= sys.H[i];
            R(i, j) = r;
            worst = std::max(worst, magnitude(r) / magnitude(sys.H[i]));
        }
    BasisResult out;
    out.max_residual = worst;
    out.report["functional"] = cfg.functional_echo;
    out.report["arithmetic"] = cfg.arithmetic == io::Arithmetic::exact ? "exact" : "double";
    out.report["degree"] = N;
    out.report["max_relative_residual"] = worst;
    const json body = io::basis_json(sys, R);
    for (const auto& [k, v] : body.items())
        out.report[k] = v;

    auto value = [](const T& v) {
        std::ostringstream os;
        if constexpr (is_exact_v<T>)
            os << v.re.get_str() << "," << v.im.get_str();
        else
            os << io::format_double(v.real()) << "," << io::format_double(v.imag());
        return os.str();
    };
    std::ostringstream h;
    h << "k,re,im\n";
    for (int k = 0; k < N; ++k)
        h << k << "," << value(sys.H[k]) << "\n";
    out.h_csv = h.str();
    for (int fam = 1; fam <= 2; ++fam) {
        std::ostringstream os;
        os << "k,j,exponent,re,im\n";
        const auto& S = sys.factor(fam);
        for (int k = 0; k < N; ++k)
            for (int j = 0; j <= k; ++j)
                os << k << "," << j << "," << cmv_exponent(j) << "," << value(S(k, j)) << "\n";
        (fam == 1 ? out.phi1_csv : out.phi2_csv) = os.str();
    }
    std::ostringstream r;
    r << "n,m,re,im\n";
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            r << i << "," << j << "," << value(R(i, j)) << "\n";
    out.residual_csv = r.str();
    return out;
}

std::vector<cplx> samples_for(const io::RunConfig& cfg, const PreparedLaurent<cplx>& L)
{
    return admissible_points({&cfg.functional}, spectral_avoid_list(L), cfg.samples, cfg.seed);
}

std::string request_label(const TransformRequest& r, std::size_t index)
{
    return std::string(r.kind == TransformKind::christoffel ? "christoffel" : "geronimus") + "#" +
           std::to_string(index);
}

void require_double_or_christoffel(const io::RunConfig& cfg)
{
    if (cfg.arithmetic != io::Arithmetic::exact)
        return;
    for (const auto& t : cfg.transforms)
        if (t.kind == TransformKind::geronimus)
            throw ConfigError("exact arithmetic covers Christoffel transforms only; Geronimus needs Cauchy pairings");
}

} // namespace

BasisResult run_basis(const io::RunConfig& cfg)
{
    if (cfg.arithmetic == io::Arithmetic::exact)
        return basis_for<GaussRational>(cfg);
    return basis_for<cplx>(cfg);
}

TransformRun run_transforms(const io::RunConfig& cfg)
{
    require_double_or_christoffel(cfg);
    if (cfg.transforms.empty())
        throw ConfigError("config lists no transforms");
    TransformRun run;
    run.report["functional"] = cfg.functional_echo;
    run.report["arithmetic"] = cfg.arithmetic == io::Arithmetic::exact ? "exact" : "double";
    run.report["budget"] = cfg.budget();
    run.report["tolerance"] = cfg.tolerance;
    json list = json::array();
    for (std::size_t i = 0; i < cfg.transforms.size(); ++i) {
        const auto& t = cfg.transforms[i];
        if (cfg.arithmetic == io::Arithmetic::exact) {
            check_christoffel_exact(run.log, request_label(t, i), cfg.functional, t.L, t.side, t.lmax);
            continue;
        }
        const auto pts = samples_for(cfg, t.L);
        TransformReport r = t.kind == TransformKind::christoffel
                                ? run_christoffel(cfg.functional, t.L, t.side, t.lmax, pts)
                                : run_geronimus(cfg.functional, t.L, t.side, t.mass, t.lmax, pts);
        // a request may start above 2n; drop the levels it did not ask for
        const int lmin = t.first_degree();
        r.levels.erase(std::remove_if(r.levels.begin(), r.levels.end(), [&](const auto& lv) { return lv.l < lmin; }),
                       r.levels.end());
        r.lmin = lmin;
        const std::string label = request_label(t, i);
        check_transform_report(run.log, label, r, cfg.tolerance);
        check_connector_report(run.log, label + "/connectors", r, 1e-10, cfg.tolerance);
        json rj = io::to_json(r);
        if (t.kind == TransformKind::geronimus)
            rj["mass_request"] = io::to_json(t.mass);
        list.push_back(rj);
        run.reports.push_back(std::move(r));
    }
    run.report["transforms"] = list;
    run.report["checks"] = io::to_json(run.log);
    return run;
}

std::vector<TransformRequest> default_requests(int lmax)
{
    const auto L = prepared_from_zeros<cplx>(1.0, {{{2.0, 1}, {0.5, 1}}});
    std::vector<TransformRequest> out;
    for (TransformKind kind : {TransformKind::christoffel, TransformKind::geronimus})
        for (Side side : {Side::first, Side::second}) {
            TransformRequest r;
            r.kind = kind;
            r.side = side;
            r.L = L;
            r.lmax = std::max(lmax, 2 * L.n);
            out.push_back(r);
        }
    return out;
}

CheckLog run_verify(const io::RunConfig& cfg)
{
    require_double_or_christoffel(cfg);
    const auto& spec = cfg.functional;
    const auto& names = cfg.checks.empty() ? io::known_checks() : cfg.checks;
    auto wants = [&](const char* s) { return std::find(names.begin(), names.end(), s) != names.end(); };
    const auto requests = cfg.transforms.empty() ? default_requests(cfg.degree) : cfg.transforms;
    const double tol = cfg.tolerance;
    const std::string label = spec.label;
    CheckLog log;

    if (cfg.arithmetic == io::Arithmetic::exact) {
        if (wants("biorthogonality"))
            check_biorthogonality_exact(log, label, spec, cfg.degree);
        if (wants("transforms"))
            for (std::size_t i = 0; i < requests.size(); ++i)
                if (requests[i].kind == TransformKind::christoffel)
                    check_christoffel_exact(log, request_label(requests[i], i), spec, requests[i].L, requests[i].side,
                                            requests[i].lmax);
        return log;
    }

    if (wants("biorthogonality"))
        check_biorthogonality(log, label, spec, cfg.degree, tol);
    if (wants("abc"))
        check_abc(log, label, spec, cfg.degree, cfg.samples, cfg.seed, tol);
    if (wants("projection"))
        check_projection(log, label, spec, cfg.degree, cfg.samples, cfg.seed, tol);
    if (wants("second_kind"))
        check_second_kind_routes(log, label, spec, std::min(cfg.degree, 12), cfg.samples, cfg.seed, tol);

    const bool circle = is_univariate_circle(spec);
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto& t = requests[i];
        const std::string tag = request_label(t, i);
        const auto pts = samples_for(cfg, t.L);
        const bool chr = t.kind == TransformKind::christoffel;
        try {
            if (wants("transforms") || wants("connectors")) {
                const auto r = chr ? run_christoffel(spec, t.L, t.side, t.lmax, pts)
                                   : run_geronimus(spec, t.L, t.side, t.mass, t.lmax, pts);
                if (wants("transforms"))
                    check_transform_report(log, "transform/" + tag, r, tol);
                if (wants("connectors"))
                    check_connector_report(log, "connectors/" + tag, r, 1e-10, tol);
            }
        } catch (const Error& e) {
            log.fail("transform/" + tag, "run", e.what());
        }
        if (wants("connections")) {
            if (chr)
                check_christoffel_connections(log, tag, spec, t.L, t.side, t.lmax, pts, tol);
            else
                check_geronimus_connections(log, tag, spec, t.L, t.side, t.mass, t.lmax, pts, tol);
        }
        if (wants("circle_dual") && circle) {
            // the dual forms compare side 1 against side 2, so one request per kind suffices
            if (t.side == Side::first) {
                if (chr)
                    check_circle_dual_christoffel(log, tag, spec, t.L, t.lmax, pts, tol);
                else
                    check_circle_dual_geronimus(log, tag, spec, t.L, t.mass, t.lmax, pts, tol);
            }
        }
        if (!chr) {
            if (wants("jets"))
                check_jet_identities(log, tag, spec, t.L, t.side, t.mass, t.lmax, tol);
            if (wants("geronimus_gram"))
                check_geronimus_gram(log, tag, spec, t.L, t.side, t.mass, t.lmax + 1, tol);
            if (wants("round_trip") && t.mass.is_zero())
                check_round_trip(log, tag, spec, t.L, t.side, t.lmax, pts, tol);
        }
    }
    return log;
}

} // namespace cmvlab
