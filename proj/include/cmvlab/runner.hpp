#ifndef CMVLAB_RUNNER_HPP
#define CMVLAB_RUNNER_HPP

#include <string>
#include <vector>

#include "checks.hpp"
#include "io.hpp"

namespace cmvlab {

struct BasisResult {
    io::json report;
    std::string h_csv;
    std::string phi1_csv;
    std::string phi2_csv;
    std::string residual_csv;
    double max_residual = 0.0;
};

BasisResult run_basis(const io::RunConfig& cfg);

struct TransformRun {
    std::vector<TransformReport> reports;
    CheckLog log;          // double arithmetic: report records; exact: mismatch counts
    io::json report;
};

TransformRun run_transforms(const io::RunConfig& cfg);

// requests used by verify when the config lists none
std::vector<TransformRequest> default_requests(int lmax);

CheckLog run_verify(const io::RunConfig& cfg);

} // namespace cmvlab

#endif
