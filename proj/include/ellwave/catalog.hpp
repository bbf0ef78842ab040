#pragma once

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ellwave/models.hpp"

namespace ellwave::catalog {

using ParamMap = std::map<std::string, double>;
using cplx = std::complex<double>;

// Profile building blocks; Cn and CnDn carry the sqrt(m) factor.
enum class Basis { Dn, Cn, DnSq, CnDn };

enum class FamilyKind { Dn, Cn, DnPlusCn, DnMinusCn, DnSq, DnSqPlusCnDn, DnSqMinusCnDn, Mixed };

const char* family_kind_name(FamilyKind k);

struct Selector {
    std::string name;         // e.g. "root", "offset"
    std::vector<int> values;  // admissible choices, usually {+1, -1}
    std::string relation;     // relation label that carries the choice
};

struct Branch {
    std::map<std::string, int> choice;
    std::string label() const;  // "root=+1,offset=-1"; "default" when empty
    bool operator==(const Branch&) const = default;
};

struct FamilySpec {
    std::string model;
    std::string id;
    FamilyKind kind = FamilyKind::Dn;
    std::string profile;                 // human readable ansatz
    std::vector<std::string> relations;  // printed relation labels used by the closure
    std::vector<std::string> free;       // parameters the caller supplies
    std::vector<std::string> unknowns;   // ansatz parameters fixed by the closure
    std::vector<Selector> selectors;
    int sign = 0;  // superposition sign, 0 when the profile has a single term
    bool degenerate = false;
};

struct ClosedSolution {
    std::string model;
    std::string family;
    Branch branch;
    ParamMap params;
};

struct FieldShape {
    double offset = 0.0;
    std::vector<std::pair<Basis, double>> terms;
    bool complex = false;
    double omega = 0.0;
    double k = 0.0;
    double phase = 0.0;
};

// Every field is envelope(beta (x - velocity t + shift)) * exp(-i(omega t - k x + phase)).
struct Ansatz {
    double beta = 1.0;
    double m = 0.0;
    double velocity = 0.0;
    double shift = 0.0;
    bool lattice = false;
    std::vector<FieldShape> fields;
};

struct Repair {
    std::string name;
    std::vector<std::string> relations;
    std::string description;
    std::string model_override;  // evaluate under another reading of the model
};

const std::vector<FamilySpec>& all_families();
std::vector<FamilySpec> list_families(std::string_view model);
const FamilySpec& find_family(std::string_view model, std::string_view family);
std::vector<Branch> branches(const FamilySpec& family);
Branch parse_branch(const FamilySpec& family, std::string_view label);

// Applies the printed closure relations. Missing free parameters raise UsageError,
// violated existence conditions raise ExistenceError.
ClosedSolution close_family(std::string_view model, std::string_view family, const ParamMap& free,
                            const Branch& branch = {});

// Same, with a named repair hypothesis in place of the printed relations.
ClosedSolution close_with_repair(std::string_view model, std::string_view family, std::string_view repair,
                                 const ParamMap& free, const Branch& branch = {});
std::vector<Repair> repairs(std::string_view model, std::string_view family);

Ansatz ansatz(const ClosedSolution& sol);
models::ModelSpec model_of(const ClosedSolution& sol);

std::vector<cplx> evaluate_profile(const ClosedSolution& sol, double x, double t);
std::vector<cplx> evaluate_profile(const Ansatz& a, double x, double t);

// Analytic jets (derivatives or lattice neighbours) for residual evaluation.
models::FieldSample analytic_sample(const Ansatz& a, double x, double t);

// Envelope and its first three derivatives with respect to the scaled argument.
struct EnvelopeJet {
    double p0, p1, p2, p3;
};
EnvelopeJet envelope_jet(const FieldShape& f, double xi, double m);

// Spatial period of the envelope (2K/beta or 4K/beta); lattice periods in sites.
double fundamental_period(const ClosedSolution& sol);
double fundamental_period(const Ansatz& a);

// Free parameters of deterministic and random admissible panels.
std::vector<ParamMap> default_panel(const FamilySpec& family, int count, const Branch& branch = {});
std::vector<ParamMap> random_panel(const FamilySpec& family, int count, unsigned long long seed,
                                   const Branch& branch = {});
// Defaults with sign-selected parameters flipped to match the branch.
ParamMap default_free(const FamilySpec& family, const Branch& branch = {});

std::string to_key_values(const ClosedSolution& sol);
ClosedSolution from_key_values(std::string_view text);

}  // namespace ellwave::catalog
