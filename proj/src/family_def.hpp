#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ellwave/catalog.hpp"
#include "ellwave/elliptic.hpp"
#include "ellwave/errors.hpp"

namespace ellwave::catalog::detail {

class Params {
public:
    explicit Params(ParamMap in) : p_(std::move(in)) {}

    double operator()(const std::string& key) const
    {
        auto it = p_.find(key);
        if (it == p_.end()) throw UsageError("missing parameter '" + key + "'");
        return it->second;
    }
    double get_or(const std::string& key, double fallback) const
    {
        auto it = p_.find(key);
        return it == p_.end() ? fallback : it->second;
    }
    bool has(const std::string& key) const { return p_.count(key) != 0; }
    void set(const std::string& key, double v) { p_[key] = v; }
    const ParamMap& map() const { return p_; }

private:
    ParamMap p_;
};

using CloseFn = std::function<void(Params&, const Branch&)>;

struct TermSpec {
    Basis basis;
    std::string amp;
    double factor = 1.0;
};

struct FieldLayout {
    std::vector<TermSpec> terms;
    std::string offset;  // empty: no offset
    bool complex = false;
    std::string omega;   // empty: 0
    std::string k;       // empty: 0
    std::string phase;   // empty: 0
};

struct Layout {
    std::vector<FieldLayout> fields;
    std::string velocity;  // empty: static
    std::string shift = "delta1";
    bool lattice = false;
};

struct RepairDef {
    Repair info;
    CloseFn close;
};

struct Range {
    Range(std::string n, double l, double h, bool k = false, std::string s = "")
        : name(std::move(n)), lo(l), hi(h), times_K(k), sign_by(std::move(s))
    {
    }
    std::string name;
    double lo;
    double hi;
    bool times_K;         // value is a fraction of K(m)
    std::string sign_by;  // selector whose choice multiplies the drawn value
};

struct FamilyDef {
    FamilySpec spec;
    Layout layout;
    CloseFn printed;
    std::vector<RepairDef> repairs;
    ParamMap defaults;
    std::vector<Range> ranges;
};

void add_single_families(std::vector<FamilyDef>& out);
void add_lattice_families(std::vector<FamilyDef>& out);
void add_coupled_families(std::vector<FamilyDef>& out);
void add_mixed_families(std::vector<FamilyDef>& out);

const std::vector<FamilyDef>& definitions();
const FamilyDef& definition(std::string_view model, std::string_view family);

// sqrt of a quantity that must be non-negative for the relation to have a real solution
inline double root_of(double value, const std::string& relation, const std::string& what)
{
    if (!(value >= 0.0)) throw ExistenceError(relation, what + " must be non-negative (got " + std::to_string(value) + ")");
    return std::sqrt(value);
}

inline void require(bool ok, const std::string& relation, const std::string& what)
{
    if (!ok) throw ExistenceError(relation, what);
}

inline int choice(const Branch& b, const std::string& name)
{
    auto it = b.choice.find(name);
    return it == b.choice.end() ? 1 : it->second;
}

inline FamilyDef new_family(std::string model, std::string id, FamilyKind kind, std::string profile,
                            std::vector<std::string> relations, std::vector<std::string> free,
                            std::vector<std::string> unknowns, int sign = 0)
{
    FamilyDef d;
    d.spec.model = std::move(model);
    d.spec.id = std::move(id);
    d.spec.kind = kind;
    d.spec.profile = std::move(profile);
    d.spec.relations = std::move(relations);
    d.spec.free = std::move(free);
    d.spec.unknowns = std::move(unknowns);
    d.spec.sign = sign;
    return d;
}

inline const char* plus_minus(int s) { return s > 0 ? "plus" : "minus"; }

// common fields
inline FieldLayout complex_field(std::vector<TermSpec> terms, std::string offset = "", std::string omega = "omega",
                                 std::string k = "k", std::string phase = "delta")
{
    return {std::move(terms), std::move(offset), true, std::move(omega), std::move(k), std::move(phase)};
}

inline FieldLayout real_field(std::vector<TermSpec> terms, std::string offset = "")
{
    return {std::move(terms), std::move(offset), false, "", "", ""};
}

inline const Range kBeta{"beta", 0.6, 1.8};
inline const Range kM{"m", 0.1, 0.95};
inline const Range kK{"k", 0.1, 0.6};

}  // namespace ellwave::catalog::detail
