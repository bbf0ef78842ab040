#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ellwave::models {

using cplx = std::complex<double>;

enum class Kind { ContinuumReal, ContinuumComplex, LatticeComplex, LatticeRealStatic, Coupled };

// How a single field enters its equation; decides which sample slots are read
// and which integrator applies.
enum class FieldKind {
    Schrodinger,   // i u_t + u_xx + ...
    Kdv,           // u_t + u_xxx + ... (real)
    Static,        // phi_xx = ... (real, time independent)
    Lattice,       // i u_t or u_t with nearest neighbours
    LatticeStatic  // time independent lattice
};

const char* kind_name(Kind k);

struct ModelTemplate {
    std::string id;
    std::string display;
    std::vector<std::string> aliases;
    Kind kind;
    std::vector<FieldKind> fields;
    std::vector<std::string> coefficients;
    std::string equation;  // equation label(s) as printed
    std::string form;      // residual form, LHS = 0
    std::string note;
};

struct ModelSpec {
    std::string id;
    Kind kind{};
    int field_count = 1;
    std::map<std::string, double> coefficients;
    std::vector<double> coef;  // same values in template order
    const ModelTemplate* tmpl = nullptr;

    double operator[](std::string_view name) const;
    bool is_lattice() const;
    bool time_dependent() const;
};

struct FieldJet {
    cplx u{};
    std::optional<cplx> ux, uxx, uxxx, ut;
    std::optional<cplx> next, prev;
};

struct FieldSample {
    std::vector<FieldJet> fields;
};

// Individual additive terms of each equation; the residual is their sum.
struct EquationTerms {
    std::vector<cplx> terms;
    cplx sum() const;
    double scale() const;
};

const std::vector<ModelTemplate>& registry();

// Lookup by id or alias, case-insensitive.
const ModelTemplate& find_model(std::string_view query);

// Builds a spec from a template; every coefficient the residual form needs
// must be present in `values` (extra keys are ignored).
ModelSpec make_model(std::string_view id, const std::map<std::string, double>& values);

std::vector<EquationTerms> residual_terms(const ModelSpec& model, const FieldSample& sample);
std::vector<cplx> residual_at(const ModelSpec& model, const FieldSample& sample);

// Markdown table of model id, equation label and coefficient symbols.
std::string documentation_table();

}  // namespace ellwave::models
