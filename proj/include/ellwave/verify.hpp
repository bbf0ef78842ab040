#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ellwave/catalog.hpp"

namespace ellwave::verify {

using catalog::Branch;
using catalog::ClosedSolution;
using catalog::ParamMap;

enum class Method { Analytic, Spectral, FiniteDifference };

const char* method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

// Continuum: N points over period_multiples fundamental periods.
// Lattice: sites 0..N-1; period_multiples is ignored.
struct GridSpec {
    int points = 256;
    int period_multiples = 1;
};

struct EquationResidual {
    int index = 0;
    double max_abs = 0.0;
    double max_relative = 0.0;
};

struct ResidualReport {
    Method method = Method::Analytic;
    double max_abs = 0.0;
    double rms = 0.0;
    // |residual| over the largest single term at the same point (floored at 1e-6 of the global largest term)
    double max_relative = 0.0;
    double term_scale = 0.0;
    std::vector<EquationResidual> per_equation;
    std::vector<double> times;
    int points = 0;
};

ResidualReport verify_solution(const ClosedSolution& sol, const GridSpec& grid, Method method = Method::Analytic);

// Residual of an arbitrary ansatz under a model; times default to {0, 0.37/(|v|+1)}.
ResidualReport residual_report(const catalog::Ansatz& a, const models::ModelSpec& model, const GridSpec& grid,
                               Method method, std::vector<double> times = {});

struct LedgerEntry {
    std::string model;
    std::string family;
    std::string branch;
    std::vector<std::string> relations;  // printed relation labels at fault
    std::string repair;                  // named repair whose closure passes; empty when none does
    std::string repair_description;
    std::string evaluated_model;         // model the re-derived closure solves
    ParamMap free;                       // first failing panel point
    ParamMap printed;                    // printed values of the solved unknowns
    ParamMap rederived;                  // Newton values of the same unknowns
    double residual_before = 0.0;        // worst relative residual of the printed closure over the panel
    double residual_after = 0.0;         // worst relative residual of the re-derived closure
    int panel_points = 0;
    int failing_points = 0;
    bool newton_converged = false;
    bool resolved = false;
    std::string note;
};

struct AuditOptions {
    int panel = 5;
    unsigned long long seed = 1;
    double tolerance = 1e-9;
    std::vector<ParamMap> extra_points;  // audited before the random panel
};

// Re-solves the dependent parameters by damped Newton iteration at Chebyshev collocation points.
// Returns one entry per branch whose printed closure fails; empty when the printed closure holds.
std::vector<LedgerEntry> audit_constraints(std::string_view model, std::string_view family, const Branch& branch,
                                           const AuditOptions& options = {});
std::vector<LedgerEntry> audit_constraints(std::string_view model, std::string_view family,
                                           const AuditOptions& options = {});

struct NewtonResult {
    ParamMap params;
    std::vector<std::string> solved;
    double residual = 0.0;  // relative residual at the collocation points
    int iterations = 0;
    bool converged = false;
    bool collapsed = false;  // some unknown fell below 1e-6 of its starting magnitude (trivial solution)
};

// Damped Newton on the named unknowns starting from `start`; parameters without influence on the residual
// are left untouched.
NewtonResult newton_rederive(const ClosedSolution& start, const std::vector<std::string>& unknowns,
                             double tolerance = 1e-9, int collocation = 0);

// Identities: "A1".."A8" as printed, "A8-corrected" with the factor m restored.
std::vector<std::string> identity_ids();

struct IdentitySides {
    double lhs;
    double rhs;
};

// Raises PoleError when a sits on a zero of sn.
IdentitySides evaluate_identity(std::string_view id, double x, double a, double m);

struct IdentityReport {
    std::string id;
    int samples = 0;
    int resampled = 0;
    double max_error = 0.0;
};

IdentityReport verify_identity(std::string_view id, int samples, unsigned long long seed = 1);

struct PointResult {
    ParamMap free;
    ParamMap params;
    ResidualReport residual;
    std::string error;
};

struct FamilyResult {
    std::string model;
    std::string family;
    std::string branch;
    std::vector<std::string> relations;
    std::vector<PointResult> points;
    double worst = 0.0;  // worst relative residual of the printed closure
    std::string status;  // "pass", "repaired", "fail"
    std::vector<LedgerEntry> ledger;
};

struct VerifyAllOptions {
    double tolerance = 1e-9;
    unsigned long long seed = 1;
    int panel = 3;
    int audit_panel = 5;
    int identity_samples = 1000;
    GridSpec grid{};
    Method method = Method::Analytic;
    unsigned threads = 0;  // 0: hardware concurrency
    std::string model;     // optional filter
    std::string family;    // optional filter; matches ids containing the text
};

struct Summary {
    VerifyAllOptions options;
    std::vector<FamilyResult> results;
    std::vector<IdentityReport> identities;
    int passed = 0;
    int repaired = 0;
    int failed = 0;
};

Summary verify_all(const VerifyAllOptions& options = {});

// One family and branch over the given free-parameter points, followed by the constraint audit
// (the points are audited first, then options.audit_panel random ones).
FamilyResult verify_family(std::string_view model, std::string_view family, const Branch& branch,
                           const std::vector<ParamMap>& points, const VerifyAllOptions& options = {});

// Runs f(i) for i in [0, n) on a pool of worker threads.
void parallel_for(int n, unsigned threads, const std::function<void(int)>& f);

}  // namespace ellwave::verify
