#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cmvlab/runner.hpp"

namespace {

using namespace cmvlab;

enum Exit { ok = 0, config_error = 1, not_quasidefinite = 2, tolerance_breach = 3 };

struct Options {
    std::string config;
    std::string out;
    std::string arith;
    double tol = 0.0;
};

io::RunConfig prepare(const Options& opt)
{
    auto cfg = io::load_config(opt.config);
    if (opt.arith == "exact")
        cfg.arithmetic = io::Arithmetic::exact;
    else if (opt.arith == "double")
        cfg.arithmetic = io::Arithmetic::real_double;
    if (opt.tol > 0.0)
        cfg.tolerance = opt.tol;
    std::filesystem::create_directories(opt.out);
    return cfg;
}

bool wants(const io::RunConfig& cfg, const char* format)
{
    return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

std::string in_dir(const Options& opt, const char* name) { return (std::filesystem::path(opt.out) / name).string(); }

int summarize(const CheckLog& log, const char* what)
{
    std::cout << what << ": " << log.records().size() - log.failures() << "/" << log.records().size() << " passed";
    if (!log.records().empty())
        std::cout << ", worst residual/tolerance " << io::format_double(log.worst_ratio());
    std::cout << "\n";
    for (const auto& r : log.records())
        if (!r.pass())
            std::cout << "  FAIL " << r.suite << " " << r.name << " residual " << io::format_double(r.residual)
                      << " tolerance " << io::format_double(r.tolerance) << " " << r.detail << "\n";
    return log.all_pass() ? ok : tolerance_breach;
}

int cmd_basis(const Options& opt)
{
    const auto cfg = prepare(opt);
    const auto res = run_basis(cfg);
    if (wants(cfg, "json"))
        io::write_file(in_dir(opt, "basis.json"), io::dump(res.report));
    if (wants(cfg, "csv")) {
        io::write_file(in_dir(opt, "H.csv"), res.h_csv);
        io::write_file(in_dir(opt, "phi1.csv"), res.phi1_csv);
        io::write_file(in_dir(opt, "phi2.csv"), res.phi2_csv);
        io::write_file(in_dir(opt, "biorthogonality_residual.csv"), res.residual_csv);
    }
    std::cout << "basis: N = " << cfg.degree << ", max relative biorthogonality residual "
              << io::format_double(res.max_residual) << "\n";
    if (cfg.arithmetic == io::Arithmetic::exact)
        return res.max_residual == 0.0 ? ok : tolerance_breach;
    return res.max_residual < cfg.tolerance ? ok : tolerance_breach;
}

int cmd_transform(const Options& opt)
{
    const auto cfg = prepare(opt);
    std::cout << "degree budget " << cfg.budget() << "\n";
    const auto run = run_transforms(cfg);
    if (wants(cfg, "json"))
        io::write_file(in_dir(opt, "transforms.json"), io::dump(run.report));
    if (wants(cfg, "csv")) {
        io::write_file(in_dir(opt, "transforms.csv"), io::transform_csv(run.reports));
        io::write_file(in_dir(opt, "transform_checks.csv"), io::checks_csv(run.log));
    }
    for (const auto& r : run.reports)
        if (r.has_level_errors()) {
            for (const auto& lv : r.levels)
                if (!lv.error.empty())
                    std::cerr << "l = " << lv.l << ": " << lv.error << "\n";
            return not_quasidefinite;
        }
    return summarize(run.log, "transform");
}

int cmd_verify(const Options& opt)
{
    const auto cfg = prepare(opt);
    const auto log = run_verify(cfg);
    if (wants(cfg, "json")) {
        io::json doc;
        doc["functional"] = cfg.functional_echo;
        doc["arithmetic"] = cfg.arithmetic == io::Arithmetic::exact ? "exact" : "double";
        doc["degree"] = cfg.degree;
        doc["tolerance"] = cfg.tolerance;
        doc["result"] = io::to_json(log);
        io::write_file(in_dir(opt, "verify.json"), io::dump(doc));
    }
    if (wants(cfg, "csv"))
        io::write_file(in_dir(opt, "verify.csv"), io::checks_csv(log));
    return summarize(log, "verify");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"biorthogonal CMV Laurent polynomials and their Christoffel and Geronimus transforms"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory")->required();
        sub->add_option("--arith", opt.arith, "double or exact")->check(CLI::IsMember({"double", "exact"}));
        sub->add_option("--tol", opt.tol, "tolerance override")->check(CLI::PositiveNumber);
    };
    auto* basis = app.add_subcommand("basis", "factorize the Gram truncation and write the biorthogonal families");
    auto* transform = app.add_subcommand("transform", "run the configured transforms on both paths");
    auto* verify = app.add_subcommand("verify", "run the identity suite and write a pass/fail matrix");
    for (auto* s : {basis, transform, verify})
        add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (basis->parsed())
            return cmd_basis(opt);
        if (transform->parsed())
            return cmd_transform(opt);
        return cmd_verify(opt);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return config_error;
    } catch (const QuasidefiniteViolation& e) {
        std::cerr << e.what() << "\n";
        return not_quasidefinite;
    } catch (const SupportCollision& e) {
        std::cerr << e.what() << "\n";
        return not_quasidefinite;
    } catch (const SingularLeadingBlock& e) {
        std::cerr << e.what() << "\n";
        return not_quasidefinite;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return config_error;
    }
}
