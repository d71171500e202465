#ifndef CMVLAB_IO_HPP
#define CMVLAB_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "checks.hpp"
#include "functional.hpp"
#include "gaussborel.hpp"
#include "jets.hpp"
#include "laurent.hpp"
#include "transforms.hpp"

namespace cmvlab::io {

using json = nlohmann::ordered_json;

cplx parse_complex(const json& j); // [re, im] or a bare number
LaurentPoly<cplx> parse_laurent(const json& j);
PreparedLaurent<cplx> parse_prepared(const json& j);
FunctionalSpec parse_functional(const json& j);
MassSpec parse_mass(const json& j);
TransformRequest parse_transform(const json& j);

enum class Arithmetic { real_double, exact };

struct RunConfig {
    FunctionalSpec functional;
    json functional_echo;
    Arithmetic arithmetic = Arithmetic::real_double;
    int degree = 8;
    std::vector<TransformRequest> transforms;
    std::vector<std::string> checks;
    std::vector<std::string> formats{"json", "csv"};
    double tolerance = 1e-8;
    int samples = 10;
    std::uint64_t seed = 1;

    int budget() const;
};

// validates the whole document before anything runs; throws ConfigError
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

std::vector<std::string> known_checks();

// ---- output

json to_json(cplx z);
json to_json(const GaussRational& q);
json to_json(const LaurentPoly<cplx>& p);
json to_json(const PreparedLaurent<cplx>& L);
json to_json(const MassSpec& m);
json to_json(const GeneralMass& m);
json to_json(const TransformReport& r);
json to_json(const CheckLog& log);

template <class T>
json basis_json(const BiorthSystem<T>& sys, const Matrix<T>& residual)
{
    json out;
    json H = json::array();
    for (const auto& h : sys.H)
        H.push_back(to_json(h));
    out["H"] = H;
    for (int fam = 1; fam <= 2; ++fam) {
        json rows = json::array();
        const auto& S = sys.factor(fam);
        for (int k = 0; k < sys.size; ++k) {
            json row = json::array();
            for (int j = 0; j <= k; ++j)
                row.push_back(to_json(S(k, j)));
            rows.push_back(row);
        }
        out[fam == 1 ? "phi1" : "phi2"] = rows;
    }
    json res = json::array();
    for (int i = 0; i < residual.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < residual.cols(); ++j)
            row.push_back(to_json(residual(i, j)));
        res.push_back(row);
    }
    out["biorthogonality_residual"] = res;
    return out;
}

// fixed field order and "%.16e" floats, so equal inputs give equal bytes
std::string dump(const json& j, int indent = 2);
std::string format_double(double v);

// one row per level and identity
std::string transform_csv(const std::vector<TransformReport>& reports);
std::string checks_csv(const CheckLog& log);

void write_file(const std::string& path, const std::string& text);

} // namespace cmvlab::io

#endif
