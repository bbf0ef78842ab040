#include "family_def.hpp"

namespace ellwave::catalog::detail {

namespace {

using B = Basis;
using Fk = FamilyKind;
using elliptic::Quotient;

struct Edge {
    double sn, cn, dn, cs, ds, ns;
};

Edge edge(const Params& p)
{
    const double b = p("beta"), m = p("m");
    const auto t = elliptic::jacobi(b, m);
    return {t.sn, t.cn, t.dn, elliptic::quotient(Quotient::cs, b, m), elliptic::quotient(Quotient::ds, b, m),
            elliptic::quotient(Quotient::ns, b, m)};
}

// The three lattice profiles share their structure: a dn closure, a cn closure and the
// superposition with dn, cn replaced by (dn + cn)/2.
enum class Shape { Dn, Cn, Sup };

FamilyDef base(const std::string& model, Shape shape, int s, const std::string& rel, std::vector<std::string> free,
               std::vector<std::string> unknowns, bool complex, bool moving)
{
    FamilyDef d;
    d.spec.model = model;
    d.spec.relations = {rel};
    d.spec.free = std::move(free);
    d.spec.unknowns = std::move(unknowns);
    std::vector<TermSpec> terms;
    switch (shape) {
        case Shape::Dn:
            d.spec.id = "dn";
            d.spec.kind = Fk::Dn;
            d.spec.profile = "A dn(beta(n - vt))";
            terms = {{B::Dn, "A"}};
            break;
        case Shape::Cn:
            d.spec.id = "cn";
            d.spec.kind = Fk::Cn;
            d.spec.profile = "A sqrt(m) cn(beta(n - vt))";
            terms = {{B::Cn, "A"}};
            break;
        case Shape::Sup:
            d.spec.id = s > 0 ? "dn-plus-cn" : "dn-minus-cn";
            d.spec.kind = s > 0 ? Fk::DnPlusCn : Fk::DnMinusCn;
            d.spec.profile = "A/2 dn + B/2 sqrt(m) cn";
            d.spec.sign = s;
            d.spec.unknowns.insert(d.spec.unknowns.begin() + 1, "B");
            terms = {{B::Dn, "A", 0.5}, {B::Cn, "B", 0.5}};
            break;
    }
    if (const auto at = d.spec.profile.find(" - vt"); !moving && at != std::string::npos) d.spec.profile.erase(at, 5);
    if (complex) d.layout.fields = {complex_field(terms, "", "omega", moving ? "k" : "")};
    else d.layout.fields = {real_field(terms)};
    d.layout.velocity = moving ? "v" : "";
    d.layout.lattice = true;
    return d;
}

// dn, cn and (dn+cn)/2 variants of cs, ds used in the closures
double width_quotient(Shape shape, const Edge& e)
{
    switch (shape) {
        case Shape::Dn: return e.cs;
        case Shape::Cn: return e.ds;
        case Shape::Sup: return 0.5 * (e.cs + e.ds);
    }
    return 0.0;
}

double ratio(Shape shape, const Edge& e)
{
    switch (shape) {
        case Shape::Dn: return e.dn / (e.cn * e.cn);
        case Shape::Cn: return e.cn / (e.dn * e.dn);
        case Shape::Sup: return 2.0 / (e.cn + e.dn);
    }
    return 0.0;
}

void set_b(Params& p, int s)
{
    if (s != 0) p.set("B", s * p("A"));
}

const std::vector<std::pair<Shape, int>> kShapes = {{Shape::Dn, 0}, {Shape::Cn, 0}, {Shape::Sup, 1}, {Shape::Sup, -1}};

std::string rel_of(Shape shape, const char* dn, const char* cn, const char* sup)
{
    return shape == Shape::Dn ? dn : shape == Shape::Cn ? cn : sup;
}

void al(std::vector<FamilyDef>& out)
{
    for (auto [shape, s] : kShapes) {
        const std::string rel = rel_of(shape, "(1.3)", "(1.5)", "(1.7)");
        auto d = base("al", shape, s, rel, {"g", "beta", "m", "k"}, {"A", "omega", "v"}, true, true);
        d.printed = [shape, s, rel](Params& p, const Branch&) {
            const Edge e = edge(p);
            const double q = width_quotient(shape, e), k = p("k");
            p.set("A", root_of(1.0 / p("g"), rel, "1 / g") / std::abs(q));
            set_b(p, s);
            p.set("omega", -2.0 * std::cos(k) * ratio(shape, e));
            p.set("v", 2.0 * std::sin(k) / (q * p("beta")));
        };
        d.defaults = {{"g", 1.0}, {"beta", 0.6}, {"m", 0.7}, {"k", 0.4}};
        d.ranges = {kM, {"beta", 0.2, 0.8, true}, kK};
        out.push_back(d);
    }
}

void saturable(std::vector<FamilyDef>& out)
{
    for (auto [shape, s] : kShapes) {
        const std::string rel = rel_of(shape, "(1.18)", "(1.20)", "(1.22)");
        auto d = base("saturable-dnls", shape, s, rel, {"beta", "m"}, {"A", "nu", "omega"}, true, false);
        auto amp = [shape, s](Params& p) {
            p.set("A", 1.0 / std::abs(width_quotient(shape, edge(p))));
            set_b(p, s);
        };
        auto with_nu = [](Params& p, double nu) {
            p.set("nu", nu);
            p.set("omega", 2.0 - nu);
        };
        if (shape == Shape::Sup) {
            d.printed = [amp, with_nu](Params& p, const Branch&) {
                amp(p);
                with_nu(p, 2.0 * ratio(Shape::Sup, edge(p)));
            };
        } else {
            // the printed ratio of the dn solution is the one of the cn solution and vice versa
            const Shape other = shape == Shape::Dn ? Shape::Cn : Shape::Dn;
            d.printed = [amp, with_nu, other](Params& p, const Branch&) {
                amp(p);
                with_nu(p, 2.0 * ratio(other, edge(p)));
            };
            d.repairs.push_back({{"ratio-swap", {rel},
                                  shape == Shape::Dn ? "nu = 2 dn(beta)/cn(beta)^2" : "nu = 2 cn(beta)/dn(beta)^2", ""},
                                 [amp, with_nu, shape](Params& p, const Branch&) {
                                     amp(p);
                                     with_nu(p, 2.0 * ratio(shape, edge(p)));
                                 }});
        }
        d.defaults = {{"beta", 0.6}, {"m", 0.7}};
        d.ranges = {kM, {"beta", 0.2, 0.8, true}};
        out.push_back(d);
    }
}

void discrete_phi4(std::vector<FamilyDef>& out)
{
    for (auto [shape, s] : kShapes) {
        const std::string rel = rel_of(shape, "(1.30)", "(1.33)", "(1.35)");
        auto d = base("discrete-phi4", shape, s, rel, {"h", "beta", "m"}, {"A", "lambda"}, false, false);
        auto body = [shape, s, rel](Params& p, double cap_lambda) {
            require(cap_lambda < 0.0, rel, "lambda h^2 must be negative");
            const double q = width_quotient(shape, edge(p));
            p.set("lambda", cap_lambda / (p("h") * p("h")));
            p.set("A", std::sqrt(2.0 / (std::abs(cap_lambda) * q * q)));
            set_b(p, s);
        };
        if (shape == Shape::Sup) {
            d.printed = [body](Params& p, const Branch&) {
                const Edge e = edge(p);
                body(p, 2.0 * (1.0 - 2.0 / (e.cn * e.dn)));
            };
            d.repairs.push_back({{"sum-denominator", {rel}, "Lambda = 2[1 - 2/(cn(beta) + dn(beta))]", ""},
                                 [body](Params& p, const Branch&) {
                                     body(p, 2.0 * (1.0 - ratio(Shape::Sup, edge(p))));
                                 }});
        } else {
            d.printed = [body, shape](Params& p, const Branch&) { body(p, 2.0 * (1.0 - ratio(shape, edge(p)))); };
        }
        d.defaults = {{"h", 0.8}, {"beta", 0.6}, {"m", 0.7}};
        d.ranges = {kM, {"beta", 0.2, 0.8, true}, {"h", 0.3, 1.5}};
        out.push_back(d);
    }
}

void cubic_quintic(std::vector<FamilyDef>& out)
{
    for (auto [shape, s] : kShapes) {
        const std::string rel = rel_of(shape, "(1.38)", "(1.40)", "(1.42)");
        auto d = base("discrete-cubic-quintic", shape, s, rel, {"g1", "beta", "m"}, {"A", "g2", "omega"}, true, false);
        d.printed = [shape, s, rel](Params& p, const Branch&) {
            const double g1 = p("g1");
            require(g1 < 0.0, rel, "g1 must be negative");
            const Edge e = edge(p);
            const double q = width_quotient(shape, e), r = ratio(shape, e);
            p.set("A", std::pow(1.0 / (-g1 * std::pow(q, 4)), 0.25));
            set_b(p, s);
            p.set("omega", -2.0 * r);
            p.set("g2", 2.0 * std::sqrt(-g1) * r);
        };
        d.defaults = {{"g1", -0.6}, {"beta", 0.6}, {"m", 0.7}};
        d.ranges = {kM, {"beta", 0.2, 0.8, true}, {"g1", -1.5, -0.2}};
        out.push_back(d);
    }
}

void discrete_mkdv(std::vector<FamilyDef>& out)
{
    for (auto [shape, s] : kShapes) {
        const std::string rel = rel_of(shape, "(1.3a)", "(1.5a)", "(1.7a)");
        auto d = base("discrete-mkdv", shape, s, rel, {"alpha", "beta", "m", "k"}, {"A", "omega", "v"}, true, true);
        d.printed = [shape, s, rel](Params& p, const Branch&) {
            const double al = p("alpha"), k = p("k");
            require(al > 0.0, rel, "alpha must be positive");
            const Edge e = edge(p);
            const double q = width_quotient(shape, e);
            p.set("A", std::sqrt(al) / std::abs(q));
            set_b(p, s);
            p.set("omega", 2.0 * al * std::sin(k) * ratio(shape, e));
            p.set("v", 2.0 * al * std::cos(k) / (q * p("beta")));
        };
        d.defaults = {{"alpha", 0.8}, {"beta", 0.6}, {"m", 0.7}, {"k", 0.4}};
        d.ranges = {kM, {"beta", 0.2, 0.8, true}, kK, {"alpha", 0.3, 1.5}};
        out.push_back(d);
    }
}

}  // namespace

void add_lattice_families(std::vector<FamilyDef>& out)
{
    al(out);
    saturable(out);
    discrete_phi4(out);
    cubic_quintic(out);
    discrete_mkdv(out);
}

}  // namespace ellwave::catalog::detail
