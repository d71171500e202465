#ifndef CMVLAB_CHECKS_HPP
#define CMVLAB_CHECKS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "functional.hpp"
#include "gaussborel.hpp"
#include "jets.hpp"
#include "transforms.hpp"

namespace cmvlab {

struct CheckRecord {
    std::string suite;
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string detail;

    bool pass() const { return residual < tolerance; }
};

class CheckLog {
public:
    void add(std::string suite, std::string name, double residual, double tolerance, std::string detail = "");
    // a check that could not be evaluated counts as failed
    void fail(std::string suite, std::string name, std::string detail);
    void merge(const CheckLog& other);

    const std::vector<CheckRecord>& records() const { return records_; }
    bool all_pass() const;
    int failures() const;
    // largest residual / tolerance ratio among records whose suite starts with prefix
    double worst_ratio(const std::string& prefix = "") const;

private:
    std::vector<CheckRecord> records_;
};

// |a - b| / scale, with scale floored away from zero
double relative_gap(cplx a, cplx b, double scale);

// deterministic points with |z| in [rmin, rmax]
std::vector<cplx> sample_points(std::uint64_t seed, int count, double rmin, double rmax);

// points off every support (and conjugated support) of the given functionals
// and at least `collar` away from each listed point
std::vector<cplx> admissible_points(const std::vector<const FunctionalSpec*>& specs, const std::vector<cplx>& avoid,
                                    int count, std::uint64_t seed, double collar = 0.15);

// zeros of L together with their conjugates and reflections 1/conj
std::vector<cplx> spectral_avoid_list(const PreparedLaurent<cplx>& L);

// ---------------------------------------------------------------- reports

struct TransformLevel {
    int l = 0;
    cplx norm_direct;
    cplx norm_formula;
    cplx norm_formula_det;
    cplx tau;
    double norm_error = 0.0;
    double norm_det_error = 0.0;
    double phi1_error = 0.0;
    double phi2_error = 0.0;
    double phi_det_error = 0.0; // Christoffel only: determinant form of the kernel family
    double quasidet_discrepancy = 0.0;
    std::string error;          // singular pivot or similar, per level
};

struct ConnectorReport {
    BandReport banded;     // the connector carrying L(Upsilon)
    BandReport triangular; // the unit triangular one
    double ligature = 0.0;
    double corner = 0.0;
    int bandwidth = 0;
};

struct TransformReport {
    TransformKind kind = TransformKind::christoffel;
    Side side = Side::first;
    std::string functional;
    PreparedLaurent<cplx> L;
    std::string mass_kind = "none";
    GeneralMass xi;
    int lmin = 0;
    int lmax = 0;
    int base_size = 0;
    std::vector<TransformLevel> levels;
    ConnectorReport connectors;

    double max_discrepancy() const;
    bool has_level_errors() const;
};

// band shape, ligature and corner entries of a pair of connectors
ConnectorReport assess_connectors(const Connectors& c, const BiorthSystem<cplx>& base, const BiorthSystem<cplx>& pert,
                                  const PreparedLaurent<cplx>& L, TransformKind kind, Side side, int M);

TransformReport run_christoffel(const FunctionalSpec& spec, const PreparedLaurent<cplx>& L, Side side, int lmax,
                                const std::vector<cplx>& samples);
TransformReport run_geronimus(const FunctionalSpec& spec, const PreparedLaurent<cplx>& L, Side side,
                              const MassSpec& mass, int lmax, const std::vector<cplx>& samples);

// connector band, ligature and corner records from a report
void check_transform_report(CheckLog& log, const std::string& suite, const TransformReport& r, double tol);
void check_connector_report(CheckLog& log, const std::string& suite, const TransformReport& r, double band_tol,
                            double ligature_tol);

// ---------------------------------------------------------------- suites

void check_biorthogonality(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int N, double tol);
// exact arithmetic: residual is 0 when every pairing vanishes exactly, 1 otherwise
void check_biorthogonality_exact(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int N);
void check_abc(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int lmax, int samples,
               std::uint64_t seed, double tol);
// <K^{[l]}(conj x, .), M>_u = conj(M(x)) for M spanned by the first l second-family polynomials
void check_projection(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int lmax, int samples,
                      std::uint64_t seed, double tol);

// formula vs direct in exact arithmetic; residual counts mismatching values
void check_christoffel_exact(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                             const PreparedLaurent<cplx>& L, Side side, int lmax);

// side-1 formulas with L against side-2 formulas with L_* on a circle functional
void check_circle_dual_christoffel(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                                   const PreparedLaurent<cplx>& L, int lmax, const std::vector<cplx>& samples,
                                   double tol);
void check_circle_dual_geronimus(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                                 const PreparedLaurent<cplx>& L, const MassSpec& mass, int lmax,
                                 const std::vector<cplx>& samples, double tol);

void check_christoffel_connections(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                                   const PreparedLaurent<cplx>& L, Side side, int lmax,
                                   const std::vector<cplx>& samples, double tol);
void check_geronimus_connections(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                                 const PreparedLaurent<cplx>& L, Side side, const MassSpec& mass, int lmax,
                                 const std::vector<cplx>& samples, double tol);

// jets of Lbar times the perturbed second kind functions against the mass pairings
void check_jet_identities(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                          const PreparedLaurent<cplx>& L, Side side, const MassSpec& mass, int lmax, double tol);

// Gram identities after a Geronimus transform and the Christoffel round trip
void check_geronimus_gram(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                          const PreparedLaurent<cplx>& L, Side side, const MassSpec& mass, int M, double tol);
void check_round_trip(CheckLog& log, const std::string& label, const FunctionalSpec& spec,
                      const PreparedLaurent<cplx>& L, Side side, int lmax, const std::vector<cplx>& samples,
                      double tol);

void check_second_kind_routes(CheckLog& log, const std::string& label, const FunctionalSpec& spec, int kmax,
                              int samples, std::uint64_t seed, double tol);

// expected failures: a zero on the support, a vanishing leading minor
void check_negative_controls(CheckLog& log);

} // namespace cmvlab

#endif
