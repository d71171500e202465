#include "helpers.hpp"

#include "cmvlab/io.hpp"
#include "cmvlab/runner.hpp"

using namespace cmvlab;
using io::json;

namespace {

json base_config()
{
    return json::parse(R"({
        "functional": {"kind": "density", "name": "one_plus_cos"},
        "degree": 2
    })");
}

} // namespace

TEST_CASE("minimal config takes defaults")
{
    const auto cfg = io::parse_config(base_config());
    CHECK(cfg.degree == 2);
    CHECK(cfg.arithmetic == io::Arithmetic::real_double);
    CHECK(cfg.tolerance == 1e-8);
    CHECK(cfg.transforms.empty());
    CHECK(cfg.budget() == 2 + 0 + 4);
}

TEST_CASE("schema errors are reported before anything runs")
{
    auto bad_degree = base_config();
    bad_degree["degree"] = "eight";
    CHECK_THROWS_AS(io::parse_config(bad_degree), ConfigError);

    auto unknown = base_config();
    unknown["degre"] = 3;
    CHECK_THROWS_AS(io::parse_config(unknown), ConfigError);

    auto no_functional = base_config();
    no_functional.erase("functional");
    CHECK_THROWS_AS(io::parse_config(no_functional), ConfigError);

    auto bad_check = base_config();
    bad_check["checks"] = json::array({"biorthogonality", "no_such_check"});
    CHECK_THROWS_AS(io::parse_config(bad_check), ConfigError);

    auto bad_side = base_config();
    bad_side["transforms"] = json::parse(R"([{"kind": "christoffel", "side": 3, "L": {"zeros": [[2, 0, 2]]}}])");
    CHECK_THROWS_AS(io::parse_config(bad_side), ConfigError);

    auto odd = base_config();
    odd["transforms"] = json::parse(R"([{"kind": "christoffel", "side": 1, "L": {"zeros": [[2, 0, 1]]}}])");
    CHECK_THROWS(io::parse_config(odd));

    CHECK_THROWS_AS(io::load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("prepared polynomials parse from zeros and check listed coefficients")
{
    const auto L = io::parse_prepared(json::parse(R"({"zeros": [[2, 0, 1], [0.5, 0, 1]], "leading": [1, 0]})"));
    CHECK(L.n == 1);
    CHECK(std::abs(L.poly.coeff(0) + 2.5) < 1e-15);

    const auto same = io::parse_prepared(
        json::parse(R"({"zeros": [[2, 0, 2]], "coeffs": [[1, 1, 0], [0, -4, 0], [-1, 4, 0]]})"));
    CHECK(std::abs(same.poly.coeff(-1) - 4.0) < 1e-15);

    CHECK_THROWS_AS(io::parse_prepared(json::parse(R"({"zeros": [[2, 0, 2]], "coeffs": [[1, 1, 0], [0, -3, 0]]})")),
                    ConfigError);

    const auto p = io::parse_laurent(json::parse(R"({"coeffs": [[1, 0, 1], [-2, 3, 0]]})"));
    CHECK(p.coeff(1) == cplx(0, 1));
    CHECK(p.coeff(-2) == cplx(3, 0));
}

TEST_CASE("functional kinds")
{
    const auto t = io::parse_functional(json::parse(R"({"kind": "toeplitz", "moments": [[0, 1, 0], [1, 0.5, 0]], "hermitian": true})"));
    const auto G = gram<cplx>(t, 2).data;
    CHECK(std::abs(G(0, 1) - 0.5) < 1e-15);

    const auto s = io::parse_functional(json::parse(R"({"kind": "sum", "parts": [
        {"kind": "density", "name": "lebesgue"},
        {"kind": "masses", "atoms": [{"p1": [2, 0], "p2": [2, 0], "weight": [1, 0]}]}]})"));
    CHECK(std::abs(gram<cplx>(s, 2).data(1, 1) - 1.25) < 1e-14);

    const auto b = io::parse_functional(json::parse(R"({"kind": "density", "name": "bernstein_szego", "params": [0.5]})"));
    CHECK(is_univariate_circle(b));

    CHECK_THROWS_AS(io::parse_functional(json::parse(R"({"kind": "nonsense"})")), ConfigError);
}

TEST_CASE("masses parse in all three shapes")
{
    CHECK(io::parse_mass(json::parse(R"({"kind": "none"})")).is_zero());
    const auto c = io::parse_mass(json::parse(R"({"kind": "circle_matrix", "Xi": [[[0.2, 0], [0, 0]], [[0, 0], [0, 0.1]]]})"));
    CHECK(c.kind() == "circle_matrix");
    const auto d = io::parse_mass(json::parse(R"({"kind": "diagonal", "xi": [[0, 0, 0.3, 0]]})"));
    CHECK(d.kind() == "diagonal");
    const auto g = io::parse_mass(json::parse(R"({"kind": "general", "atoms": [{"slot": 0, "point": [0.5, 0], "weight": [0.1, 0]}]})"));
    CHECK(g.kind() == "general");
    CHECK_FALSE(g.is_zero());
}

TEST_CASE("float output is fixed width and reproducible")
{
    CHECK(io::format_double(0.75) == "7.5000000000000000e-01");
    CHECK(io::format_double(-1.0) == "-1.0000000000000000e+00");
    json j;
    j["b"] = 0.1;
    j["a"] = json::array({1, 2.5});
    const auto text = io::dump(j);
    CHECK(text.find("\"b\"") < text.find("\"a\""));
    CHECK(text.find("1.0000000000000001e-01") != std::string::npos);
    CHECK(io::dump(j) == text);
}

TEST_CASE("basis run on the small example")
{
    const auto res = run_basis(io::parse_config(base_config()));
    CHECK(res.max_residual < 1e-14);
    CHECK(res.h_csv.find("1,7.4999999999999") != std::string::npos);

    auto exact = base_config();
    exact["arithmetic"] = "exact";
    const auto ex = run_basis(io::parse_config(exact));
    CHECK(ex.max_residual == 0.0);
    CHECK(ex.h_csv == "k,re,im\n0,1,0\n1,3/4,0\n");
}

TEST_CASE("transform run echoes the request and the budget")
{
    auto j = base_config();
    j["degree"] = 8;
    j["transforms"] = json::parse(R"([{"kind": "geronimus", "side": 2, "L": {"zeros": [[2, 0, 1], [0.5, 0, 1]]},
                                      "mass": {"kind": "circle_matrix", "Xi": [[[0.3, 0], [0, 0]], [[0, 0], [0, 0]]]},
                                      "lmax": 8}])");
    const auto cfg = io::parse_config(j);
    CHECK(cfg.budget() == 8 + 2 + 4);
    const auto run = run_transforms(cfg);
    CHECK(run.log.all_pass());
    CHECK(run.report["budget"] == 14);
    CHECK(run.report["transforms"][0].contains("mass_request"));
}
