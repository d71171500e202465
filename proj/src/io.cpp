#include "cmvlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cmvlab::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what)
{
    throw ConfigError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        bad(where, std::string("missing field '") + key + "'");
    return j.at(key);
}

int as_int(const json& j, const std::string& where)
{
    if (!j.is_number_integer())
        bad(where, "expected an integer");
    return j.get<int>();
}

double as_double(const json& j, const std::string& where)
{
    if (!j.is_number())
        bad(where, "expected a number");
    return j.get<double>();
}

std::map<int, cplx> parse_moments(const json& j, const std::string& where)
{
    if (!j.is_array())
        bad(where, "moments must be an array of [k, re, im]");
    std::map<int, cplx> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() < 2 || e.size() > 3)
            bad(where, "moment entries are [k, re, im]");
        out[as_int(e[0], where)] = cplx(as_double(e[1], where), e.size() == 3 ? as_double(e[2], where) : 0.0);
    }
    return out;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object())
        bad(where, "expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            bad(where, "unknown field '" + key + "'");
    }
}

} // namespace

cplx parse_complex(const json& j)
{
    if (j.is_number())
        return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    bad("complex", "expected [re, im] or a number");
}

LaurentPoly<cplx> parse_laurent(const json& j)
{
    const json& c = need(j, "coeffs", "laurent");
    LaurentPoly<cplx> p;
    for (const auto& [k, v] : parse_moments(c, "laurent.coeffs"))
        p.set(k, v);
    return p;
}

PreparedLaurent<cplx> parse_prepared(const json& j)
{
    const std::string where = "prepared polynomial";
    check_keys(j, {"zeros", "leading", "coeffs"}, where);
    SpectralData<cplx> spec;
    const json& zs = need(j, "zeros", where);
    if (!zs.is_array())
        bad(where, "zeros must be an array of [re, im, mult]");
    for (const auto& z : zs) {
        if (!z.is_array() || z.size() != 3)
            bad(where, "zero entries are [re, im, mult]");
        const int m = as_int(z[2], where);
        if (m < 1)
            bad(where, "multiplicities must be positive");
        spec.zeros.push_back({cplx(as_double(z[0], where), as_double(z[1], where)), m});
    }
    const cplx leading = j.contains("leading") ? parse_complex(j.at("leading")) : cplx(1.0, 0.0);
    auto L = prepared_from_zeros<cplx>(leading, spec);
    if (j.contains("coeffs")) {
        // optional redundant coefficients must agree with the factored form
        const auto given = parse_laurent(j);
        double scale = 0.0, gap = 0.0;
        for (int k = -L.n; k <= L.n; ++k) {
            scale = std::max(scale, std::abs(L.poly.coeff(k)));
            gap = std::max(gap, std::abs(L.poly.coeff(k) - given.coeff(k)));
        }
        for (const auto& [k, c] : given.coeffs())
            if (k < -L.n || k > L.n)
                gap = std::max(gap, std::abs(c));
        if (gap > 1e-12 * scale)
            bad(where, "coeffs disagree with zeros and leading coefficient");
    }
    return L;
}

FunctionalSpec parse_functional(const json& j)
{
    const std::string where = "functional";
    const std::string kind = need(j, "kind", where).get<std::string>();
    if (kind == "toeplitz") {
        check_keys(j, {"kind", "moments", "hermitian", "max_moment", "label"}, where);
        ToeplitzMoments t;
        t.c = parse_moments(need(j, "moments", where), where + ".moments");
        t.hermitian = j.value("hermitian", false);
        if (j.contains("max_moment"))
            t.max_moment = as_int(j.at("max_moment"), where);
        return FunctionalSpec{t, j.value("label", std::string("toeplitz"))};
    }
    if (kind == "density") {
        check_keys(j, {"kind", "name", "params", "samples", "grid", "label"}, where);
        FunctionalSpec spec;
        if (j.contains("samples")) {
            std::vector<cplx> s;
            for (const auto& v : j.at("samples"))
                s.push_back(parse_complex(v));
            spec = sampled_density(s);
        } else {
            std::vector<double> params;
            if (j.contains("params"))
                for (const auto& v : j.at("params"))
                    params.push_back(as_double(v, where + ".params"));
            spec = builtin_measure(need(j, "name", where).get<std::string>(), params);
        }
        if (j.contains("grid")) {
            auto* d = std::get_if<CircleDensity>(&spec.v);
            if (!d || d->fixed_grid)
                bad(where, "grid applies to named densities only");
            d->grid = as_int(j.at("grid"), where);
        }
        if (j.contains("label"))
            spec.label = j.at("label").get<std::string>();
        return spec;
    }
    if (kind == "realline") {
        check_keys(j, {"kind", "moments", "lo", "hi", "label"}, where);
        RealLineLaurentMoments r;
        r.s = parse_moments(need(j, "moments", where), where + ".moments");
        r.lo = as_double(need(j, "lo", where), where);
        r.hi = as_double(need(j, "hi", where), where);
        if (r.lo > r.hi)
            bad(where, "realline needs lo <= hi");
        return FunctionalSpec{r, j.value("label", std::string("realline"))};
    }
    if (kind == "sobolev") {
        check_keys(j, {"kind", "terms", "label"}, where);
        SobolevDiagonal sd;
        for (const auto& t : need(j, "terms", where)) {
            SobolevTerm term;
            term.n = as_int(need(t, "n", where), where);
            term.m = as_int(need(t, "m", where), where);
            term.base = std::make_shared<FunctionalSpec>(parse_functional(need(t, "base", where)));
            sd.terms.push_back(term);
        }
        return FunctionalSpec{sd, j.value("label", std::string("sobolev"))};
    }
    if (kind == "masses") {
        check_keys(j, {"kind", "atoms", "label"}, where);
        PointMasses pm;
        for (const auto& a : need(j, "atoms", where)) {
            MassAtom atom;
            atom.p1 = parse_complex(need(a, "p1", where));
            atom.p2 = a.contains("p2") ? parse_complex(a.at("p2")) : atom.p1;
            atom.k = a.contains("k") ? as_int(a.at("k"), where) : 0;
            atom.l = a.contains("l") ? as_int(a.at("l"), where) : 0;
            atom.weight = parse_complex(need(a, "weight", where));
            pm.atoms.push_back(atom);
        }
        return FunctionalSpec{pm, j.value("label", std::string("masses"))};
    }
    if (kind == "sum") {
        check_keys(j, {"kind", "parts", "label"}, where);
        std::vector<FunctionalSpec> parts;
        for (const auto& p : need(j, "parts", where))
            parts.push_back(parse_functional(p));
        if (parts.empty())
            bad(where, "sum needs at least one part");
        return sum_of(parts, j.value("label", std::string("sum")));
    }
    bad(where, "unknown kind '" + kind + "'");
}

MassSpec parse_mass(const json& j)
{
    const std::string where = "mass";
    MassSpec m;
    if (j.is_null())
        return m;
    const std::string kind = need(j, "kind", where).get<std::string>();
    if (kind == "none")
        return m;
    if (kind == "circle_matrix") {
        const json& X = need(j, "Xi", where);
        const int n = static_cast<int>(X.size());
        CircleMatrixMass c{Matrix<cplx>(n, n)};
        for (int a = 0; a < n; ++a) {
            if (static_cast<int>(X[a].size()) != n)
                bad(where, "Xi must be square");
            for (int b = 0; b < n; ++b)
                c.Xi(a, b) = parse_complex(X[a][b]);
        }
        m.v = c;
        return m;
    }
    if (kind == "diagonal") {
        DiagonalCircleMass d;
        for (const auto& e : need(j, "xi", where)) {
            if (!e.is_array() || e.size() != 4)
                bad(where, "diagonal entries are [i, l, re, im]");
            const int i = as_int(e[0], where), l = as_int(e[1], where);
            if (i < 0 || l < 0)
                bad(where, "diagonal indices must be nonnegative");
            if (static_cast<int>(d.values.size()) <= i)
                d.values.resize(i + 1);
            if (static_cast<int>(d.values[i].size()) <= l)
                d.values[i].resize(l + 1, 0.0);
            d.values[i][l] = cplx(as_double(e[2], where), as_double(e[3], where));
        }
        m.v = d;
        return m;
    }
    if (kind == "general") {
        GeneralMass g;
        for (const auto& a : need(j, "atoms", where)) {
            const int slot = as_int(need(a, "slot", where), where);
            if (slot < 0)
                bad(where, "slot must be nonnegative");
            if (static_cast<int>(g.xi.size()) <= slot)
                g.xi.resize(slot + 1);
            g.xi[slot].push_back({parse_complex(need(a, "point", where)),
                                  a.contains("order") ? as_int(a.at("order"), where) : 0,
                                  parse_complex(need(a, "weight", where))});
        }
        m.v = g;
        return m;
    }
    bad(where, "unknown kind '" + kind + "'");
}

TransformRequest parse_transform(const json& j)
{
    const std::string where = "transform";
    check_keys(j, {"kind", "side", "L", "mass", "lmin", "lmax"}, where);
    TransformRequest r;
    const std::string kind = need(j, "kind", where).get<std::string>();
    if (kind == "christoffel")
        r.kind = TransformKind::christoffel;
    else if (kind == "geronimus")
        r.kind = TransformKind::geronimus;
    else
        bad(where, "kind must be christoffel or geronimus");
    const int side = as_int(need(j, "side", where), where);
    if (side != 1 && side != 2)
        bad(where, "side must be 1 or 2");
    r.side = side == 1 ? Side::first : Side::second;
    r.L = parse_prepared(need(j, "L", where));
    if (j.contains("mass")) {
        if (r.kind != TransformKind::geronimus)
            bad(where, "masses only apply to geronimus transforms");
        r.mass = parse_mass(j.at("mass"));
    }
    if (j.contains("lmin"))
        r.lmin = as_int(j.at("lmin"), where);
    if (j.contains("lmax"))
        r.lmax = as_int(j.at("lmax"), where);
    if (r.lmax < r.first_degree())
        bad(where, "lmax below the first admissible degree 2n");
    return r;
}

std::vector<std::string> known_checks()
{
    return {"biorthogonality", "abc",       "projection", "second_kind", "transforms", "connectors",
            "connections",     "circle_dual", "jets",     "geronimus_gram", "round_trip"};
}

int RunConfig::budget() const
{
    int n = 0;
    int top = degree;
    for (const auto& t : transforms) {
        n = std::max(n, t.L.n);
        top = std::max(top, t.lmax);
    }
    return base_budget(top, n);
}

RunConfig parse_config(const json& j)
{
    const std::string where = "config";
    check_keys(j, {"functional", "arithmetic", "degree", "transforms", "checks", "output", "tolerance", "samples",
                   "seed"},
               where);
    RunConfig c;
    c.functional_echo = need(j, "functional", where);
    c.functional = parse_functional(c.functional_echo);
    const std::string arith = j.value("arithmetic", std::string("double"));
    if (arith == "double")
        c.arithmetic = Arithmetic::real_double;
    else if (arith == "exact")
        c.arithmetic = Arithmetic::exact;
    else
        bad(where, "arithmetic must be double or exact");
    if (j.contains("degree")) {
        c.degree = as_int(j.at("degree"), where + ".degree");
        if (c.degree < 1)
            bad(where, "degree must be positive");
    }
    if (j.contains("transforms"))
        for (const auto& t : j.at("transforms"))
            c.transforms.push_back(parse_transform(t));
    if (j.contains("checks")) {
        const auto known = known_checks();
        for (const auto& name : j.at("checks")) {
            const std::string s = name.get<std::string>();
            if (std::find(known.begin(), known.end(), s) == known.end())
                bad(where, "unknown check '" + s + "'");
            c.checks.push_back(s);
        }
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, {"formats"}, where + ".output");
        if (o.contains("formats")) {
            c.formats.clear();
            for (const auto& f : o.at("formats")) {
                const std::string s = f.get<std::string>();
                if (s != "json" && s != "csv")
                    bad(where, "output formats are json and csv");
                c.formats.push_back(s);
            }
        }
    }
    if (j.contains("tolerance")) {
        c.tolerance = as_double(j.at("tolerance"), where + ".tolerance");
        if (!(c.tolerance > 0.0))
            bad(where, "tolerance must be positive");
    }
    if (j.contains("samples")) {
        c.samples = as_int(j.at("samples"), where + ".samples");
        if (c.samples < 1)
            bad(where, "samples must be positive");
    }
    if (j.contains("seed"))
        c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    try {
        return parse_config(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("schema: ") + e.what());
    }
}

// ---------------------------------------------------------------- output

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const GaussRational& q) { return json::array({q.re.get_str(), q.im.get_str()}); }

json to_json(const LaurentPoly<cplx>& p)
{
    json c = json::array();
    for (const auto& [k, v] : p.coeffs())
        c.push_back(json::array({k, v.real(), v.imag()}));
    return json{{"coeffs", c}};
}

json to_json(const PreparedLaurent<cplx>& L)
{
    json out = to_json(L.poly);
    json z = json::array();
    for (const auto& s : L.spectral.zeros)
        z.push_back(json::array({s.point.real(), s.point.imag(), s.multiplicity}));
    out["zeros"] = z;
    out["leading"] = to_json(L.leading);
    return out;
}

json to_json(const GeneralMass& m)
{
    json atoms = json::array();
    for (std::size_t s = 0; s < m.xi.size(); ++s)
        for (const auto& t : m.xi[s])
            atoms.push_back(json{{"slot", s}, {"point", to_json(t.point)}, {"order", t.order}, {"weight", to_json(t.weight)}});
    return json{{"kind", "general"}, {"atoms", atoms}};
}

json to_json(const MassSpec& m)
{
    if (const auto* c = std::get_if<CircleMatrixMass>(&m.v)) {
        json X = json::array();
        for (int a = 0; a < c->Xi.rows(); ++a) {
            json row = json::array();
            for (int b = 0; b < c->Xi.cols(); ++b)
                row.push_back(to_json(c->Xi(a, b)));
            X.push_back(row);
        }
        return json{{"kind", "circle_matrix"}, {"Xi", X}};
    }
    if (const auto* d = std::get_if<DiagonalCircleMass>(&m.v)) {
        json xi = json::array();
        for (std::size_t i = 0; i < d->values.size(); ++i)
            for (std::size_t l = 0; l < d->values[i].size(); ++l)
                xi.push_back(json::array({i, l, d->values[i][l].real(), d->values[i][l].imag()}));
        return json{{"kind", "diagonal"}, {"xi", xi}};
    }
    if (const auto* g = std::get_if<GeneralMass>(&m.v))
        return to_json(*g);
    return json{{"kind", "none"}};
}

json to_json(const TransformReport& r)
{
    json out;
    out["kind"] = r.kind == TransformKind::christoffel ? "christoffel" : "geronimus";
    out["side"] = r.side == Side::first ? 1 : 2;
    out["functional"] = r.functional;
    out["L"] = to_json(r.L);
    if (r.kind == TransformKind::geronimus) {
        out["mass_kind"] = r.mass_kind;
        out["mass"] = to_json(r.xi);
    }
    out["lmin"] = r.lmin;
    out["lmax"] = r.lmax;
    out["base_size"] = r.base_size;
    json levels = json::array();
    for (const auto& lv : r.levels) {
        json e;
        e["l"] = lv.l;
        e["norm_direct"] = to_json(lv.norm_direct);
        e["norm_formula"] = to_json(lv.norm_formula);
        e["norm_formula_det"] = to_json(lv.norm_formula_det);
        e["tau"] = to_json(lv.tau);
        e["norm_error"] = lv.norm_error;
        e["norm_det_error"] = lv.norm_det_error;
        e["phi1_error"] = lv.phi1_error;
        e["phi2_error"] = lv.phi2_error;
        if (r.kind == TransformKind::christoffel)
            e["phi_det_error"] = lv.phi_det_error;
        e["quasidet_discrepancy"] = lv.quasidet_discrepancy;
        if (!lv.error.empty())
            e["error"] = lv.error;
        levels.push_back(e);
    }
    out["levels"] = levels;
    const auto& c = r.connectors;
    out["connectors"] = json{{"bandwidth", c.bandwidth},
                             {"banded_off_band", c.banded.off_band},
                             {"banded_nonzero_diagonals", c.banded.nonzero_diagonals},
                             {"triangular_off_band", c.triangular.off_band},
                             {"triangular_unit_diagonal", c.triangular.unit_diagonal},
                             {"ligature", c.ligature},
                             {"corner", c.corner}};
    out["max_discrepancy"] = r.max_discrepancy();
    return out;
}

json to_json(const CheckLog& log)
{
    json recs = json::array();
    for (const auto& r : log.records())
        recs.push_back(json{{"suite", r.suite},
                            {"name", r.name},
                            {"residual", r.residual},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass()},
                            {"detail", r.detail}});
    return json{{"passed", log.all_pass()},
                {"failures", log.failures()},
                {"total", log.records().size()},
                {"records", recs}};
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "\"nan\"";
    if (std::isinf(v))
        return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

void emit(std::ostringstream& os, const json& j, int indent, int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    if (j.is_object()) {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{" << nl;
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first)
                os << "," << nl;
            first = false;
            os << pad << json(k).dump() << (indent > 0 ? ": " : ":");
            emit(os, v, indent, depth + 1);
        }
        os << nl << close << "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // arrays of scalars stay on one line
        bool flat = true;
        for (const auto& v : j)
            flat = flat && !v.is_structured();
        if (flat || indent == 0) {
            os << "[";
            bool first = true;
            for (const auto& v : j) {
                if (!first)
                    os << (flat && indent > 0 ? ", " : ",");
                first = false;
                emit(os, v, indent, depth + 1);
            }
            os << "]";
            return;
        }
        os << "[" << nl;
        bool first = true;
        for (const auto& v : j) {
            if (!first)
                os << "," << nl;
            first = false;
            os << pad;
            emit(os, v, indent, depth + 1);
        }
        os << nl << close << "]";
    } else if (j.is_number_float()) {
        os << format_double(j.get<double>());
    } else {
        os << j.dump();
    }
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string dump(const json& j, int indent)
{
    std::ostringstream os;
    emit(os, j, indent, 0);
    os << "\n";
    return os.str();
}

std::string transform_csv(const std::vector<TransformReport>& reports)
{
    std::ostringstream os;
    os << "transform,kind,side,functional,l,identity,residual\n";
    for (std::size_t t = 0; t < reports.size(); ++t) {
        const auto& r = reports[t];
        const std::string head = std::to_string(t) + "," +
                                 (r.kind == TransformKind::christoffel ? "christoffel" : "geronimus") + "," +
                                 std::to_string(r.side == Side::first ? 1 : 2) + "," + csv_field(r.functional) + ",";
        for (const auto& lv : r.levels) {
            const std::string row = head + std::to_string(lv.l) + ",";
            if (!lv.error.empty()) {
                os << row << "error," << csv_field(lv.error) << "\n";
                continue;
            }
            os << row << "norm_quasidet," << format_double(lv.norm_error) << "\n";
            os << row << "norm_det_ratio," << format_double(lv.norm_det_error) << "\n";
            os << row << "phi1," << format_double(lv.phi1_error) << "\n";
            os << row << "phi2," << format_double(lv.phi2_error) << "\n";
            if (r.kind == TransformKind::christoffel)
                os << row << "kernel_family_det_form," << format_double(lv.phi_det_error) << "\n";
            os << row << "schur_vs_det_quotient," << format_double(lv.quasidet_discrepancy) << "\n";
        }
    }
    return os.str();
}

std::string checks_csv(const CheckLog& log)
{
    std::ostringstream os;
    os << "suite,name,residual,tolerance,pass,detail\n";
    for (const auto& r : log.records())
        os << csv_field(r.suite) << "," << csv_field(r.name) << "," << format_double(r.residual) << ","
           << format_double(r.tolerance) << "," << (r.pass() ? "pass" : "fail") << "," << csv_field(r.detail) << "\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    out << text;
}

} // namespace cmvlab::io
