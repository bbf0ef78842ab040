#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>

#include "family_def.hpp"

namespace ellwave::catalog {

using detail::FamilyDef;
using detail::Params;

namespace {

const cplx I{0.0, 1.0};

std::vector<FamilyDef> build_definitions()
{
    std::vector<FamilyDef> defs;
    detail::add_single_families(defs);
    detail::add_lattice_families(defs);
    detail::add_coupled_families(defs);
    detail::add_mixed_families(defs);
    return defs;
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Branch complete_branch(const FamilySpec& f, const Branch& b)
{
    Branch out;
    for (const auto& sel : f.selectors) {
        auto it = b.choice.find(sel.name);
        if (it == b.choice.end()) {
            out.choice[sel.name] = sel.values.front();
            continue;
        }
        if (std::find(sel.values.begin(), sel.values.end(), it->second) == sel.values.end()) {
            throw UsageError("branch value " + std::to_string(it->second) + " not allowed for selector " + sel.name);
        }
        out.choice[sel.name] = it->second;
    }
    for (const auto& [name, v] : b.choice) {
        if (!out.choice.count(name)) throw UsageError("family " + f.id + " has no branch selector '" + name + "'");
    }
    return out;
}

ParamMap gather_free(const FamilyDef& d, const ParamMap& free)
{
    ParamMap in;
    for (const auto& name : d.spec.free) {
        auto it = free.find(name);
        if (it == free.end()) {
            throw UsageError("family " + d.spec.model + "/" + d.spec.id + " needs free parameter '" + name + "'");
        }
        in[name] = it->second;
    }
    std::vector<std::string> optional = {d.layout.shift};
    for (const auto& f : d.layout.fields) {
        if (!f.phase.empty()) optional.push_back(f.phase);
    }
    for (const auto& key : optional) {
        auto it = free.find(key);
        if (it != free.end()) in[key] = it->second;
    }
    if (in.count("m")) {
        const double m = in["m"];
        if (!(m >= 0.0 && m <= 1.0)) throw DomainError("modulus m must lie in [0, 1]");
    }
    if (in.count("beta") && !(in["beta"] > 0.0)) throw DomainError("width beta must be positive");
    return in;
}

ClosedSolution run_close(const FamilyDef& d, const detail::CloseFn& fn, const ParamMap& free, const Branch& branch)
{
    const Branch br = complete_branch(d.spec, branch);
    Params p(gather_free(d, free));
    fn(p, br);
    for (const auto& [k, v] : p.map()) {
        if (!std::isfinite(v)) {
            throw ExistenceError(d.spec.relations.empty() ? std::string("closure") : d.spec.relations.front(),
                                 "closure produced a non-finite value for " + k);
        }
    }
    return {d.spec.model, d.spec.id, br, p.map()};
}

double fraction(int range_index, int i)
{
    static const double alpha[] = {0.6180339887498949, 0.7548776662466927, 0.5698402909980532,
                                   0.4301597090019468, 0.8191725133961645, 0.6710436067037893};
    const double a = alpha[range_index % 6];
    const double v = 0.5 + (i + 1) * a;
    return v - std::floor(v);
}

ParamMap draw(const FamilyDef& d, const Branch& b, const std::function<double(int)>& frac)
{
    ParamMap f = d.defaults;
    auto value = [&](const detail::Range& range, int r) {
        const double sign = range.sign_by.empty() ? 1.0 : detail::choice(b, range.sign_by);
        return sign * (range.lo + frac(r) * (range.hi - range.lo));
    };
    int r = 0;
    for (const auto& range : d.ranges) {
        if (!range.times_K) f[range.name] = value(range, r);
        ++r;
    }
    r = 0;
    for (const auto& range : d.ranges) {
        if (range.times_K) f[range.name] = value(range, r) * elliptic::quarter_period(f.at("m"));
        ++r;
    }
    return f;
}

bool admissible(const FamilyDef& d, const ParamMap& f, const Branch& b)
{
    try {
        run_close(d, d.printed, f, b);
        return true;
    } catch (const ExistenceError&) {
    } catch (const PoleError&) {
    } catch (const DomainError&) {
    }
    return false;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

namespace detail {

const std::vector<FamilyDef>& definitions()
{
    static const std::vector<FamilyDef> defs = build_definitions();
    return defs;
}

const FamilyDef& definition(std::string_view model, std::string_view family)
{
    const std::string id = models::find_model(model).id;
    std::string known;
    for (const auto& d : definitions()) {
        if (d.spec.model != id) continue;
        if (d.spec.id == family) return d;
        known += (known.empty() ? "" : ", ") + d.spec.id;
    }
    throw UsageError("model " + id + " has no family '" + std::string(family) + "' (known: " + known + ")");
}

}  // namespace detail

const char* family_kind_name(FamilyKind k)
{
    switch (k) {
        case FamilyKind::Dn: return "Dn";
        case FamilyKind::Cn: return "Cn";
        case FamilyKind::DnPlusCn: return "DnPlusCn";
        case FamilyKind::DnMinusCn: return "DnMinusCn";
        case FamilyKind::DnSq: return "DnSq";
        case FamilyKind::DnSqPlusCnDn: return "DnSqPlusCnDn";
        case FamilyKind::DnSqMinusCnDn: return "DnSqMinusCnDn";
        case FamilyKind::Mixed: return "Mixed";
    }
    return "?";
}

std::string Branch::label() const
{
    if (choice.empty()) return "default";
    std::string s;
    for (const auto& [k, v] : choice) {
        if (!s.empty()) s += ",";
        s += k + "=" + (v > 0 ? "+" : "-") + std::to_string(std::abs(v));
    }
    return s;
}

const std::vector<FamilySpec>& all_families()
{
    static const std::vector<FamilySpec> specs = [] {
        std::vector<FamilySpec> s;
        for (const auto& d : detail::definitions()) s.push_back(d.spec);
        return s;
    }();
    return specs;
}

std::vector<FamilySpec> list_families(std::string_view model)
{
    const std::string id = models::find_model(model).id;
    std::vector<FamilySpec> out;
    for (const auto& f : all_families()) {
        if (f.model == id) out.push_back(f);
    }
    return out;
}

const FamilySpec& find_family(std::string_view model, std::string_view family)
{
    return detail::definition(model, family).spec;
}

std::vector<Branch> branches(const FamilySpec& family)
{
    std::vector<Branch> out{Branch{}};
    for (const auto& sel : family.selectors) {
        std::vector<Branch> next;
        for (const auto& b : out) {
            for (int v : sel.values) {
                Branch c = b;
                c.choice[sel.name] = v;
                next.push_back(c);
            }
        }
        out = std::move(next);
    }
    return out;
}

Branch parse_branch(const FamilySpec& family, std::string_view label)
{
    Branch b;
    if (label.empty() || label == "default") return complete_branch(family, b);
    std::string text(label);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("branch item '" + item + "' is not name=value");
        const std::string name = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        int v = 0;
        if (value == "+" || value == "plus") v = 1;
        else if (value == "-" || value == "minus") v = -1;
        else {
            try {
                v = std::stoi(value);
            } catch (...) {
                throw UsageError("branch value '" + value + "' is not an integer sign");
            }
        }
        b.choice[name] = v;
    }
    return complete_branch(family, b);
}

ClosedSolution close_family(std::string_view model, std::string_view family, const ParamMap& free,
                            const Branch& branch)
{
    const FamilyDef& d = detail::definition(model, family);
    return run_close(d, d.printed, free, branch);
}

std::vector<Repair> repairs(std::string_view model, std::string_view family)
{
    std::vector<Repair> out;
    for (const auto& r : detail::definition(model, family).repairs) out.push_back(r.info);
    return out;
}

ClosedSolution close_with_repair(std::string_view model, std::string_view family, std::string_view repair,
                                 const ParamMap& free, const Branch& branch)
{
    const FamilyDef& d = detail::definition(model, family);
    for (const auto& r : d.repairs) {
        if (r.info.name != repair) continue;
        ClosedSolution sol = run_close(d, r.close, free, branch);
        if (!r.info.model_override.empty()) sol.model = r.info.model_override;
        return sol;
    }
    throw UsageError("family " + d.spec.id + " has no repair '" + std::string(repair) + "'");
}

Ansatz ansatz(const ClosedSolution& sol)
{
    const FamilyDef& d = detail::definition(sol.model, sol.family);
    Params p(sol.params);
    Ansatz a;
    a.beta = p("beta");
    a.m = p("m");
    a.velocity = d.layout.velocity.empty() ? 0.0 : p(d.layout.velocity);
    a.shift = p.get_or(d.layout.shift, 0.0);
    a.lattice = d.layout.lattice;
    for (const auto& fl : d.layout.fields) {
        FieldShape f;
        f.complex = fl.complex;
        f.offset = fl.offset.empty() ? 0.0 : p(fl.offset);
        for (const auto& t : fl.terms) f.terms.emplace_back(t.basis, t.factor * p(t.amp));
        f.omega = fl.omega.empty() ? 0.0 : p(fl.omega);
        f.k = fl.k.empty() ? 0.0 : p(fl.k);
        f.phase = fl.phase.empty() ? 0.0 : p.get_or(fl.phase, 0.0);
        a.fields.push_back(std::move(f));
    }
    return a;
}

models::ModelSpec model_of(const ClosedSolution& sol)
{
    return models::make_model(sol.model, sol.params);
}

EnvelopeJet envelope_jet(const FieldShape& f, double xi, double m)
{
    const elliptic::Triple t = elliptic::jacobi(xi, m);
    const double S = t.sn, C = t.cn, D = t.dn, sm = std::sqrt(m);
    EnvelopeJet j{f.offset, 0.0, 0.0, 0.0};
    for (const auto& [basis, amp] : f.terms) {
        double b0 = 0, b1 = 0, b2 = 0, b3 = 0;
        switch (basis) {
            case Basis::Dn:
                b0 = D;
                b1 = -m * S * C;
                b2 = (2.0 - m) * D - 2.0 * D * D * D;
                b3 = ((2.0 - m) - 6.0 * D * D) * b1;
                break;
            case Basis::Cn:
                b0 = sm * C;
                b1 = -sm * S * D;
                b2 = (2.0 * m - 1.0) * b0 - 2.0 * b0 * b0 * b0;
                b3 = ((2.0 * m - 1.0) - 6.0 * b0 * b0) * b1;
                break;
            case Basis::DnSq: {
                const double q = D * D;
                b0 = q;
                b1 = -2.0 * m * S * C * D;
                b2 = -6.0 * q * q + 4.0 * (2.0 - m) * q - 2.0 * (1.0 - m);
                b3 = (-12.0 * q + 4.0 * (2.0 - m)) * b1;
                break;
            }
            case Basis::CnDn: {
                const double w = 5.0 - m - 6.0 * D * D;
                b0 = sm * C * D;
                b1 = -sm * S * (D * D + m * C * C);
                b2 = b0 * w;
                b3 = b1 * w + 12.0 * m * b0 * D * S * C;
                break;
            }
        }
        j.p0 += amp * b0;
        j.p1 += amp * b1;
        j.p2 += amp * b2;
        j.p3 += amp * b3;
    }
    return j;
}

std::vector<cplx> evaluate_profile(const Ansatz& a, double x, double t)
{
    std::vector<cplx> out;
    const double xi = a.beta * (x - a.velocity * t + a.shift);
    for (const auto& f : a.fields) {
        const double p = envelope_jet(f, xi, a.m).p0;
        if (f.complex) out.push_back(p * std::exp(-I * (f.omega * t - f.k * x + f.phase)));
        else out.emplace_back(p, 0.0);
    }
    return out;
}

std::vector<cplx> evaluate_profile(const ClosedSolution& sol, double x, double t)
{
    return evaluate_profile(ansatz(sol), x, t);
}

models::FieldSample analytic_sample(const Ansatz& a, double x, double t)
{
    models::FieldSample s;
    const double b = a.beta, v = a.velocity;
    const double xi = b * (x - v * t + a.shift);
    for (const auto& f : a.fields) {
        const cplx E = f.complex ? std::exp(-I * (f.omega * t - f.k * x + f.phase)) : cplx(1.0, 0.0);
        const EnvelopeJet j = envelope_jet(f, xi, a.m);
        const double k = f.complex ? f.k : 0.0;
        const double w = f.complex ? f.omega : 0.0;
        models::FieldJet fj;
        fj.u = j.p0 * E;
        fj.ut = (-v * b * j.p1 - I * w * j.p0) * E;
        if (a.lattice) {
            const double pn = envelope_jet(f, xi + b, a.m).p0;
            const double pp = envelope_jet(f, xi - b, a.m).p0;
            fj.next = pn * E * std::exp(I * k);
            fj.prev = pp * E * std::exp(-I * k);
        } else {
            const double px = b * j.p1, pxx = b * b * j.p2, pxxx = b * b * b * j.p3;
            fj.ux = (px + I * k * j.p0) * E;
            fj.uxx = (pxx + 2.0 * I * k * px - k * k * j.p0) * E;
            fj.uxxx = (pxxx + 3.0 * I * k * pxx - 3.0 * k * k * px - I * k * k * k * j.p0) * E;
        }
        s.fields.push_back(fj);
    }
    return s;
}

double fundamental_period(const Ansatz& a)
{
    if (a.m >= 1.0) throw AperiodicError("m = 1 solutions are solitary waves without a finite period");
    bool odd = false;
    for (const auto& f : a.fields) {
        for (const auto& [basis, amp] : f.terms) {
            if ((basis == Basis::Cn || basis == Basis::CnDn) && amp != 0.0) odd = true;
        }
    }
    return (odd ? 4.0 : 2.0) * elliptic::quarter_period(a.m) / a.beta;
}

double fundamental_period(const ClosedSolution& sol)
{
    return fundamental_period(ansatz(sol));
}

ParamMap default_free(const FamilySpec& family, const Branch& branch)
{
    const FamilyDef& d = detail::definition(family.model, family.id);
    const Branch b = complete_branch(d.spec, branch);
    ParamMap f;
    for (const auto& name : d.spec.free) {
        auto it = d.defaults.find(name);
        if (it == d.defaults.end()) continue;
        f[name] = it->second;
        for (const auto& range : d.ranges) {
            if (range.name == name && !range.sign_by.empty()) f[name] *= detail::choice(b, range.sign_by);
        }
    }
    return f;
}

std::vector<ParamMap> default_panel(const FamilySpec& family, int count, const Branch& branch)
{
    const FamilyDef& d = detail::definition(family.model, family.id);
    std::vector<ParamMap> out;
    for (int i = 0; i < 400 && static_cast<int>(out.size()) < count; ++i) {
        ParamMap f = draw(d, complete_branch(d.spec, branch), [i](int r) { return fraction(r, i); });
        if (admissible(d, f, branch)) out.push_back(std::move(f));
    }
    return out;
}

std::vector<ParamMap> random_panel(const FamilySpec& family, int count, unsigned long long seed,
                                   const Branch& branch)
{
    const FamilyDef& d = detail::definition(family.model, family.id);
    std::mt19937_64 rng(seed ^ fnv1a(family.model + "/" + family.id + "/" + branch.label()));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ParamMap> out;
    for (int i = 0; i < 400 && static_cast<int>(out.size()) < count; ++i) {
        std::vector<double> fr(d.ranges.size());
        for (double& x : fr) x = u(rng);
        ParamMap f = draw(d, complete_branch(d.spec, branch), [&fr](int r) { return fr[r]; });
        if (admissible(d, f, branch)) out.push_back(std::move(f));
    }
    return out;
}

std::string to_key_values(const ClosedSolution& sol)
{
    std::ostringstream os;
    os << "model=" << sol.model << "\nfamily=" << sol.family << "\nbranch=" << sol.branch.label() << "\n";
    for (const auto& [k, v] : sol.params) os << k << "=" << fmt(v) << "\n";
    return os.str();
}

ClosedSolution from_key_values(std::string_view text)
{
    ClosedSolution sol;
    std::string branch;
    std::stringstream ss{std::string(text)};
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("malformed line '" + line + "'");
        const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "model") sol.model = value;
        else if (key == "family") sol.family = value;
        else if (key == "branch") branch = value;
        else {
            try {
                sol.params[key] = std::stod(value);
            } catch (...) {
                throw UsageError("value of '" + key + "' is not a number");
            }
        }
    }
    if (sol.model.empty() || sol.family.empty()) throw UsageError("serialized solution lacks model or family");
    sol.branch = parse_branch(find_family(sol.model, sol.family), branch);
    return sol;
}

}  // namespace ellwave::catalog
