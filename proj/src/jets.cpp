#include "cmvlab/jets.hpp"

namespace cmvlab {

bool MassSpec::is_zero() const
{
    if (std::holds_alternative<std::monostate>(v))
        return true;
    if (const auto* g = std::get_if<GeneralMass>(&v)) {
        for (const auto& f : g->xi)
            for (const auto& t : f)
                if (t.weight != 0.0)
                    return false;
        return true;
    }
    if (const auto* c = std::get_if<CircleMatrixMass>(&v))
        return c->Xi.max_abs() == 0.0;
    const auto& d = std::get<DiagonalCircleMass>(v);
    for (const auto& row : d.values)
        for (const auto& x : row)
            if (x != 0.0)
                return false;
    return true;
}

std::string MassSpec::kind() const
{
    switch (v.index()) {
    case 0:
        return "none";
    case 1:
        return "general";
    case 2:
        return "circle_matrix";
    default:
        return "diagonal";
    }
}

CircleMatrixMass expand_diagonal(const DiagonalCircleMass& d, const PreparedLaurent<cplx>& circle_L)
{
    const auto& zeros = circle_L.spectral.zeros;
    if (d.values.size() > zeros.size())
        throw ConfigError("diagonal mass lists more zeros than the polynomial has");
    const int total = circle_L.spectral.total_multiplicity();
    CircleMatrixMass out{Matrix<cplx>(total, total)};
    int offset = 0;
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        const int m = zeros[i].multiplicity;
        std::vector<cplx> vals(m, 0.0);
        if (i < d.values.size()) {
            if (static_cast<int>(d.values[i].size()) > m)
                throw ConfigError("diagonal mass order exceeds the multiplicity of zero " + std::to_string(i));
            for (std::size_t l = 0; l < d.values[i].size(); ++l)
                vals[l] = d.values[i][l];
        }
        const Matrix<cplx> B = bell_matrix(zeros[i].point, m);
        for (int a = 0; a < m; ++a)
            for (int c = 0; c < m; ++c) {
                cplx s = 0.0;
                for (int b = 0; a + b < m; ++b)
                    s += vals[a + b] / factorial(b) * B(b, c);
                out.Xi(offset + a, offset + c) = factorial(c) * s;
            }
        offset += m;
    }
    return out;
}

PreparedLaurent<cplx> circle_polynomial(const PreparedLaurent<cplx>& L_request, Side side)
{
    return side == Side::first ? L_request : L_request.reciprocal();
}

GeneralMass to_general(const MassSpec& mass, const PreparedLaurent<cplx>& L_request, Side side)
{
    const int total = L_request.spectral.total_multiplicity();
    GeneralMass out;
    out.xi.assign(total, {});
    if (std::holds_alternative<std::monostate>(mass.v))
        return out;
    if (const auto* g = std::get_if<GeneralMass>(&mass.v)) {
        if (static_cast<int>(g->xi.size()) > total)
            throw ConfigError("general mass has more functionals than jet slots");
        for (std::size_t s = 0; s < g->xi.size(); ++s)
            out.xi[s] = g->xi[s];
        return out;
    }
    const PreparedLaurent<cplx> L = circle_polynomial(L_request, side);
    const PreparedLaurent<cplx> Lstar = L.reciprocal();
    Matrix<cplx> Xi;
    if (const auto* c = std::get_if<CircleMatrixMass>(&mass.v))
        Xi = c->Xi;
    else
        Xi = expand_diagonal(std::get<DiagonalCircleMass>(mass.v), L).Xi;
    if (Xi.rows() != total || Xi.cols() != total)
        throw ConfigError("mass matrix must be " + std::to_string(total) + " x " + std::to_string(total));

    // slot bookkeeping: (point, derivative order) per jet position
    auto slots = [](const PreparedLaurent<cplx>& P) {
        std::vector<std::pair<cplx, int>> s;
        for (const auto& z : P.spectral.zeros)
            for (int r = 0; r < z.multiplicity; ++r)
                s.push_back({z.point, r});
        return s;
    };
    const auto rows = slots(L);
    const auto cols = slots(Lstar);
    if (side == Side::first) {
        // xi^{(1)}_{i,k} = sum_{j,l} conj(Xi_{ik|jl}) / l! delta^{(l)} at 1/conj(zeta_j)
        for (int a = 0; a < total; ++a)
            for (int b = 0; b < total; ++b)
                if (Xi(a, b) != 0.0)
                    out.xi[a].push_back({cols[b].first, cols[b].second, std::conj(Xi(a, b)) / factorial(cols[b].second)});
    } else {
        // xi^{(2)}_{j,l} = sum_{i,k} Xi_{ik|jl} / k! delta^{(k)} at zeta_i
        for (int b = 0; b < total; ++b)
            for (int a = 0; a < total; ++a)
                if (Xi(a, b) != 0.0)
                    out.xi[b].push_back({rows[a].first, rows[a].second, Xi(a, b) / factorial(rows[a].second)});
    }
    return out;
}

std::vector<cplx> mass_pair(const GeneralMass& mass, const std::function<cplx(cplx, int)>& f)
{
    std::vector<cplx> row(mass.xi.size(), 0.0);
    for (std::size_t s = 0; s < mass.xi.size(); ++s)
        for (const auto& t : mass.xi[s])
            row[s] += t.weight * f(t.point, t.order);
    return row;
}

std::vector<cplx> mass_pair(const GeneralMass& mass, const LaurentPoly<cplx>& p)
{
    return mass_pair(mass, [&](cplx z, int r) { return p.eval_deriv(z, r); });
}

PointMasses mass_atoms(const GeneralMass& mass, const PreparedLaurent<cplx>& L_request, Side side)
{
    PointMasses pm;
    std::size_t s = 0;
    for (const auto& z : L_request.spectral.zeros)
        for (int l = 0; l < z.multiplicity; ++l, ++s) {
            if (s >= mass.xi.size())
                continue;
            for (const auto& t : mass.xi[s]) {
                if (side == Side::first)
                    pm.atoms.push_back({z.point, t.point, l, t.order, std::conj(t.weight) / factorial(l)});
                else
                    pm.atoms.push_back({t.point, z.point, t.order, l, t.weight / factorial(l)});
            }
        }
    return pm;
}

} // namespace cmvlab
