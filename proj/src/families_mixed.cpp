#include "family_def.hpp"

namespace ellwave::catalog::detail {

namespace {

using B = Basis;
using Fk = FamilyKind;

double sq(double x) { return x * x; }
double q1(double m) { return std::sqrt(1.0 - m + m * m); }
double q14(double m) { return std::sqrt(1.0 + 14.0 * m + m * m); }

std::string with_suffix(std::string id, bool degenerate) { return degenerate ? id + "-degenerate" : id; }
std::string sup_id(int s, bool degenerate)
{
    return with_suffix(std::string("superposed-") + plus_minus(s), degenerate);
}

void finish(FamilyDef& d, ParamMap defaults, std::vector<Range> ranges, bool degenerate)
{
    d.spec.degenerate = degenerate;
    d.defaults = std::move(defaults);
    d.ranges = std::move(ranges);
}

// ---------------------------------------------------------------- NLS-KdV

void nls_kdv(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"g", "alpha", "gamma", "beta", "m", "k"};
    const std::vector<std::string> dfree = {"g", "A", "beta", "m", "k"};
    const ParamMap defaults = {{"g", 0.4}, {"alpha", 0.6}, {"gamma", 0.5}, {"beta", 1.0}, {"m", 0.6}, {"k", 0.9}};
    const ParamMap ddefaults = {{"g", 0.4}, {"A", 0.7}, {"beta", 1.0}, {"m", 0.6}, {"k", 0.9}};
    const std::vector<Range> ranges = {{"g", 0.3, 0.6}, {"alpha", 0.3, 0.8}, {"gamma", 0.2, 0.8}, kBeta, kM,
                                       {"k", 0.3, 1.2}};
    const std::vector<Range> dranges = {{"g", 0.3, 0.6}, {"A", 0.2, 1.0}, kBeta, kM, {"k", 0.3, 1.2}};

    // B = 2 gamma^2 - g A^2 as printed for the degenerate case, or with the width in place of gamma
    auto amps = [](Params& p, bool degenerate, bool width) {
        const double g = p("g"), b2 = sq(p("beta"));
        if (degenerate) {
            p.set("alpha", 1.0);
            p.set("gamma", 6.0 * g);
            p.set("B", 2.0 * (width ? b2 : sq(p("gamma"))) - g * sq(p("A")));
            return;
        }
        const double al = p("alpha"), ga = p("gamma"), den = al * ga - 6.0 * g;
        p.set("A", root_of(12.0 * (al - 1.0) * b2 / den, "(6.22)", "A^2"));
        p.set("B", 2.0 * (ga - 6.0 * g) * b2 / den);
    };
    const std::vector<std::string> amp_rels = {"(6.22)", "(6.23)"};

    struct Single {
        std::string id;
        Basis basis;
        std::string rel;
    };
    for (const Single& one : {Single{"dn-dnsq", B::Dn, "(6.21)"}, Single{"cn-dnsq", B::Cn, "(6.27)"}}) {
        for (bool degenerate : {false, true}) {
            const bool cn = one.basis == B::Cn;
            auto d = new_family("nls-kdv", with_suffix(one.id, degenerate), Fk::Mixed,
                                cn ? "u = A sqrt(m) cn e^{-i(wt-kx)}, v = B dn^2 + D"
                                   : "u = A dn e^{-i(wt-kx)}, v = B dn^2 + D",
                                {amp_rels[degenerate], one.rel}, degenerate ? dfree : free,
                                degenerate ? std::vector<std::string>{"B", "D", "z", "alpha", "gamma", "c", "omega"}
                                           : std::vector<std::string>{"A", "B", "D", "z", "c", "omega"});
            d.layout.fields = {complex_field({{one.basis, "A"}}), real_field({{B::DnSq, "B"}}, "D")};
            d.layout.velocity = "c";
            auto body = [=](Params& p, bool width, bool coupling) {
                amps(p, degenerate, width);
                const double m = p("m"), b2 = sq(p("beta")), k = p("k"), al = p("alpha"), Bv = p("B");
                const double z = (k / (2.0 * b2) - (2.0 - m)) / 3.0;
                p.set("z", z);
                p.set("D", z * Bv);
                p.set("c", 2.0 * k);
                if (!cn) p.set("omega", k * k - (2.0 - m) * b2 - al * z * Bv);
                else if (coupling) p.set("omega", k * k - (2.0 * m - 1.0) * b2 - al * (z + 1.0 - m) * Bv);
                else p.set("omega", k * k - (2.0 * m - 1.0) * b2 - (al * z + (1.0 - m)) * Bv);
            };
            d.printed = [body](Params& p, const Branch&) { body(p, false, false); };
            if (cn) {
                d.repairs.push_back({{"coupling-factor", {"(6.27)"}, "omega = k^2 - (2m-1) beta^2 - alpha(z + 1 - m) B",
                                      ""},
                                     [body](Params& p, const Branch&) { body(p, false, true); }});
            }
            if (degenerate) {
                d.repairs.push_back({{"constraint-width", {"(6.23)"}, "B + g A^2 = 2 beta^2", ""},
                                     [body](Params& p, const Branch&) { body(p, true, false); }});
                if (cn) {
                    d.repairs.push_back({{"constraint-width+coupling-factor", {"(6.23)", "(6.27)"},
                                          "B + g A^2 = 2 beta^2 and omega uses alpha(z + 1 - m) B", ""},
                                         [body](Params& p, const Branch&) { body(p, true, true); }});
                }
            }
            ParamMap dflt = degenerate ? ddefaults : defaults;
            std::vector<Range> rng = degenerate ? dranges : ranges;
            finish(d, dflt, rng, degenerate);
            out.push_back(d);
        }
    }
    for (bool degenerate : {false, true}) {
        for (int s : {1, -1}) {
            auto d = new_family("nls-kdv", sup_id(s, degenerate), Fk::Mixed,
                                "u = (A dn + H sqrt(m) cn)/2 e^{-i(wt-kx)}, v = B/2 dn^2 + F/2 sqrt(m) cn dn + D",
                                {amp_rels[degenerate], "(6.30)"}, degenerate ? dfree : free,
                                degenerate ? std::vector<std::string>{"B", "D", "F", "H", "z", "alpha", "gamma", "c", "omega"}
                                           : std::vector<std::string>{"A", "B", "D", "F", "H", "z", "c", "omega"},
                                s);
            d.layout.fields = {complex_field({{B::Dn, "A", 0.5}, {B::Cn, "H", 0.5}}),
                               real_field({{B::DnSq, "B", 0.5}, {B::CnDn, "F", 0.5}}, "D")};
            d.layout.velocity = "c";
            auto body = [=](Params& p, bool width) {
                amps(p, degenerate, width);
                const double m = p("m"), b2 = sq(p("beta")), k = p("k"), al = p("alpha"), Bv = p("B");
                const double z = (2.0 * k / b2 - (5.0 - m)) / 12.0;
                p.set("H", s * p("A"));
                p.set("F", s * Bv);
                p.set("z", z);
                p.set("D", z * Bv);
                p.set("c", 2.0 * k);
                p.set("omega", k * k - (1.0 + m) * b2 / 2.0 - al / 4.0 * ((1.0 - m) + 4.0 * z) * Bv);
            };
            d.printed = [body](Params& p, const Branch&) { body(p, false); };
            if (degenerate) {
                d.repairs.push_back({{"constraint-width", {"(6.23)"}, "B + g A^2 = 2 beta^2", ""},
                                     [body](Params& p, const Branch&) { body(p, true); }});
            }
            finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
            out.push_back(d);
        }
    }
}

// ---------------------------------------------------------------- coupled KdV-MKdV

void kdv_mkdv(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"alpha", "gamma", "beta", "m"};
    const std::vector<std::string> dfree = {"A", "beta", "m"};
    const ParamMap defaults = {{"alpha", 0.7}, {"gamma", 0.4}, {"beta", 1.0}, {"m", 0.6}};
    const ParamMap ddefaults = {{"A", 0.8}, {"beta", 1.0}, {"m", 0.6}};
    const std::vector<Range> ranges = {{"alpha", 0.3, 1.5}, {"gamma", 0.2, 1.2}, kBeta, kM};
    const std::vector<Range> dranges = {{"A", 0.2, 0.8}, {"beta", 0.9, 1.8}, kM};

    auto amps = [](Params& p, bool degenerate) {
        const double b2 = sq(p("beta"));
        if (degenerate) {
            p.set("alpha", 12.0);
            p.set("gamma", 1.5);
            p.set("D", root_of((2.0 * b2 - p("A")) / 2.0, "(6.35a)", "(2 beta^2 - A)/2"));
            return;
        }
        const double al = p("alpha"), ga = p("gamma"), den = al * ga - 18.0;
        p.set("D", root_of(6.0 * (2.0 * ga - 3.0) * b2 / den, "(6.34)", "D^2"));
        p.set("A", 3.0 * (al - 12.0) * b2 / den);
    };
    const char* amp_rel[] = {"(6.34)", "(6.35a)"};

    struct Single {
        std::string id;
        Basis basis;
        std::string rel;
    };
    for (const Single& one : {Single{"dnsq-dn", B::Dn, "(6.35)"}, Single{"dnsq-cn", B::Cn, "(6.38)"}}) {
        for (bool degenerate : {false, true}) {
            const bool cn = one.basis == B::Cn;
            auto d = new_family("coupled-kdv-mkdv", with_suffix(one.id, degenerate), Fk::Mixed,
                                cn ? "u = A dn^2 + B, v = D sqrt(m) cn" : "u = A dn^2 + B, v = D dn",
                                {amp_rel[degenerate], one.rel}, degenerate ? dfree : free,
                                degenerate ? std::vector<std::string>{"B", "D", "alpha", "gamma", "c"}
                                           : std::vector<std::string>{"A", "B", "D", "c"});
            d.layout.fields = {real_field({{B::DnSq, "A"}}, "B"), real_field({{one.basis, "D"}})};
            d.layout.velocity = "c";
            d.printed = [=](Params& p, const Branch&) {
                amps(p, degenerate);
                const double m = p("m"), b2 = sq(p("beta"));
                p.set("c", (cn ? 2.0 * m - 1.0 : 2.0 - m) * b2);
                p.set("B", -(cn ? 3.0 - 2.0 * m : 2.0 - m) / 4.0 * p("A"));
            };
            finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
            out.push_back(d);
        }
    }
    for (bool degenerate : {false, true}) {
        for (int s : {1, -1}) {
            auto d = new_family("coupled-kdv-mkdv", sup_id(s, degenerate), Fk::Mixed,
                                "u = A/2 dn^2 + F/2 sqrt(m) cn dn + B, v = D/2 dn + G/2 sqrt(m) cn",
                                {amp_rel[degenerate], "(6.41)"}, degenerate ? dfree : free,
                                degenerate ? std::vector<std::string>{"B", "D", "F", "G", "alpha", "gamma", "c"}
                                           : std::vector<std::string>{"A", "B", "D", "F", "G", "c"},
                                s);
            d.layout.fields = {real_field({{B::DnSq, "A", 0.5}, {B::CnDn, "F", 0.5}}, "B"),
                               real_field({{B::Dn, "D", 0.5}, {B::Cn, "G", 0.5}})};
            d.layout.velocity = "c";
            d.printed = [=](Params& p, const Branch&) {
                amps(p, degenerate);
                const double m = p("m");
                p.set("F", s * p("A"));
                p.set("G", s * p("D"));
                p.set("c", (1.0 + m) / 2.0 * sq(p("beta")));
                p.set("B", -(3.0 - m) / 8.0 * p("A"));
            };
            finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
            out.push_back(d);
        }
    }
}

// ---------------------------------------------------------------- QNLS-MKdV and QNLS-NLS

// The two models share the dn^2 closures of the QNLS field; the second field is either a
// real MKdV field (velocity fixed by the width) or a complex NLS field (k free).
struct QuadraticCoupling {
    std::string model;
    bool nls_partner;
    std::vector<std::string> free, dfree;
    ParamMap defaults, ddefaults;
    std::vector<Range> ranges, dranges;
    const char* amp_rel[2];
    const char* rel_dn;
    const char* rel_cn;
    const char* rel_sup;
};

std::vector<FamilyDef> quadratic_families(const QuadraticCoupling& q)
{
    std::vector<FamilyDef> out;
    const bool nls = q.nls_partner;

    auto amps = [nls](Params& p, bool degenerate) {
        const double b2 = sq(p("beta"));
        if (nls) {
            const double g1 = p("g1"), g2 = p("g2");
            if (degenerate) {
                p.set("gamma", g1 / 3.0);
                p.set("alpha", 3.0 * g2);
                p.set("D", root_of((6.0 * b2 - g1 * p("A")) / (3.0 * g2), "(6.61)", "(6 beta^2 - g1 A)/(3 g2)"));
                return;
            }
            const double al = p("alpha"), ga = p("gamma"), den = al * ga - g1 * g2;
            p.set("A", 2.0 * (al - 3.0 * g2) * b2 / den);
            p.set("D", root_of(2.0 * (3.0 * ga - g1) * b2 / den, "(6.60)", "D^2"));
            return;
        }
        const double g = p("g");
        if (degenerate) {
            p.set("gamma", g / 2.0);
            p.set("alpha", 6.0);
            p.set("D", root_of((3.0 * b2 - p("gamma") * p("A")) / 3.0, "(6.48)", "(3 beta^2 - gamma A)/3"));
            return;
        }
        const double al = p("alpha"), ga = p("gamma"), den = 3.0 * g - al * ga;
        p.set("A", 3.0 * (6.0 - al) * b2 / den);
        p.set("D", root_of(3.0 * (g - 2.0 * ga) * b2 / den, "(6.47)", "D^2"));
    };
    // self-coupling of the quadratic field
    auto gq = [nls](const Params& p) { return nls ? p("g1") : p("g"); };
    // wavenumber and velocity: free k for the NLS partner, fixed by the width for MKdV
    auto kinematics = [nls](Params& p, double c_fixed) {
        if (nls) {
            p.set("c", 2.0 * p("k"));
        } else {
            p.set("c", c_fixed);
            p.set("k", c_fixed / 2.0);
        }
    };
    const std::string partner_phase = nls ? " e^{-i(w2 t-kx)}" : "";
    const std::string w1 = nls ? "omega1" : "omega";
    auto second = [&](std::vector<TermSpec> terms) {
        return nls ? complex_field(std::move(terms), "", "omega2", "k", "delta2") : real_field(std::move(terms));
    };
    auto unknowns = [&](std::vector<std::string> amps_, bool degenerate) {
        std::vector<std::string> u = std::move(amps_);
        if (degenerate) {
            u.erase(std::find(u.begin(), u.end(), "A"));
            u.push_back("alpha");
            u.push_back("gamma");
        }
        u.push_back("z");
        u.push_back("c");
        if (!nls) u.push_back("k");
        u.push_back(nls ? "omega1" : "omega");
        if (nls) u.push_back("omega2");
        return u;
    };

    for (bool cn : {false, true}) {
        for (bool degenerate : {false, true}) {
            const std::string rel = cn ? q.rel_cn : q.rel_dn;
            auto d = new_family(q.model, with_suffix(cn ? "dnsq-cn" : "dnsq-dn", degenerate), Fk::Mixed,
                                std::string("u = (A dn^2 + B) e^{-i(w t-kx)}, v = ") + (cn ? "D sqrt(m) cn" : "D dn") +
                                    partner_phase,
                                {q.amp_rel[degenerate], rel}, degenerate ? q.dfree : q.free,
                                unknowns({"A", "B", "D"}, degenerate));
            d.spec.selectors = {{"root", {1, -1}, rel}};
            d.layout.fields = {complex_field({{B::DnSq, "A"}}, "B", w1), second({{cn ? B::Cn : B::Dn, "D"}})};
            d.layout.velocity = "c";
            d.printed = [=](Params& p, const Branch& br) {
                amps(p, degenerate);
                const double m = p("m"), b2 = sq(p("beta")), A = p("A");
                const double z = (-(2.0 - m) + choice(br, "root") * q1(m)) / 3.0;
                p.set("z", z);
                p.set("B", z * A);
                kinematics(p, (cn ? 2.0 * m - 1.0 : 2.0 - m) * b2);
                const double k = p("k");
                if (cn) p.set(w1, k * k - 2.0 * (1.0 + m + 3.0 * z) * b2 - A * gq(p) * (1.0 - m + z));
                else p.set(w1, k * k - 2.0 * (2.0 * (2.0 - m) + 3.0 * z) * b2 - A * gq(p) * z);
                if (nls) {
                    if (cn) p.set("omega2", k * k - (2.0 * m - 1.0) * b2 - A * p("gamma") * (z + 1.0 - m));
                    else p.set("omega2", k * k - (2.0 - m) * b2 - A * p("gamma") * z);
                }
            };
            finish(d, degenerate ? q.ddefaults : q.defaults, degenerate ? q.dranges : q.ranges, degenerate);
            out.push_back(d);
        }
    }
    for (bool degenerate : {false, true}) {
        for (int s : {1, -1}) {
            auto d = new_family(q.model, sup_id(s, degenerate), Fk::Mixed,
                                "u = (A/2 dn^2 + F/2 sqrt(m) cn dn + B) e^{-i(w t-kx)}, v = D/2 dn + G/2 sqrt(m) cn" +
                                    partner_phase,
                                {q.amp_rel[degenerate], q.rel_sup}, degenerate ? q.dfree : q.free,
                                unknowns({"A", "B", "D", "F", "G"}, degenerate), s);
            d.spec.selectors = {{"root", {1, -1}, q.rel_sup}};
            d.layout.fields = {complex_field({{B::DnSq, "A", 0.5}, {B::CnDn, "F", 0.5}}, "B", w1),
                               second({{B::Dn, "D", 0.5}, {B::Cn, "G", 0.5}})};
            d.layout.velocity = "c";
            auto body = [=](Params& p, const Branch& br, bool width) {
                amps(p, degenerate);
                const double m = p("m"), b2 = sq(p("beta")), A = p("A");
                const double z = -((5.0 - m) + choice(br, "root") * q14(m)) / 12.0;
                p.set("F", s * A);
                p.set("G", s * p("D"));
                p.set("z", z);
                p.set("B", z * A);
                kinematics(p, (1.0 + m) / 2.0 * b2);
                const double k = p("k"), tail = z + (1.0 - m) / 4.0;
                p.set(w1, k * k - ((7.0 + m) / 2.0 + 6.0 * z) * (width ? b2 : 1.0) - gq(p) * A * tail);
                if (nls) p.set("omega2", k * k - (1.0 + m) / 2.0 * b2 - p("gamma") * A * tail);
            };
            d.printed = [body](Params& p, const Branch& br) { body(p, br, false); };
            d.repairs.push_back({{"omega-width", {q.rel_sup}, "omega bracket [(7+m)/2 + 6z] carries beta^2", ""},
                                 [body](Params& p, const Branch& br) { body(p, br, true); }});
            finish(d, degenerate ? q.ddefaults : q.defaults, degenerate ? q.dranges : q.ranges, degenerate);
            out.push_back(d);
        }
    }
    return out;
}

void qnls_mkdv(std::vector<FamilyDef>& out)
{
    QuadraticCoupling q{"qnls-mkdv",
                        false,
                        {"g", "alpha", "gamma", "beta", "m"},
                        {"g", "A", "beta", "m"},
                        {{"g", 1.3}, {"alpha", 0.9}, {"gamma", 0.2}, {"beta", 1.0}, {"m", 0.6}},
                        {{"g", 1.3}, {"A", 1.0}, {"beta", 1.0}, {"m", 0.6}},
                        {{"g", 1.0, 1.6}, {"alpha", 0.3, 1.5}, {"gamma", 0.1, 0.4}, kBeta, kM},
                        {{"g", 1.0, 1.6}, {"A", 0.5, 2.0}, {"beta", 0.9, 1.8}, kM},
                        {"(6.47)", "(6.48)"},
                        "(6.46)",
                        "(6.51)",
                        "(6.54)"};
    for (auto& d : quadratic_families(q)) out.push_back(std::move(d));
}

void qnls_nls(std::vector<FamilyDef>& out)
{
    QuadraticCoupling q{"qnls-nls",
                        true,
                        {"g1", "g2", "alpha", "gamma", "beta", "m", "k"},
                        {"g1", "g2", "A", "beta", "m", "k"},
                        {{"g1", 1.3}, {"g2", 0.7}, {"alpha", 0.9}, {"gamma", 0.2}, {"beta", 1.0}, {"m", 0.6}, {"k", 0.45}},
                        {{"g1", 1.3}, {"g2", 0.7}, {"A", 1.0}, {"beta", 1.0}, {"m", 0.6}, {"k", 0.45}},
                        {{"g1", 1.0, 1.6}, {"g2", 0.5, 0.9}, {"alpha", 0.3, 1.2}, {"gamma", 0.1, 0.3}, kBeta, kM, kK},
                        {{"g1", 1.0, 1.6}, {"g2", 0.5, 0.9}, {"A", 0.5, 2.0}, {"beta", 0.9, 1.8}, kM, kK},
                        {"(6.60)", "(6.61)"},
                        "(6.59)",
                        "(6.64)",
                        "(6.67)"};
    auto families = quadratic_families(q);
    for (const auto& d : families) out.push_back(d);

    // the printed second equation admits a second reading; it shares every closure
    for (auto d : families) {
        d.spec.model = "qnls-nls-vx";
        std::vector<RepairDef> extra;
        extra.push_back({{"model-reading", {"(6.55)"}, "second equation read with g2|v|^2 v", "qnls-nls"}, d.printed});
        for (const auto& r : d.repairs) {
            extra.push_back({{"model-reading+" + r.info.name, {"(6.55)", r.info.relations.front()},
                              "second equation read with g2|v|^2 v; " + r.info.description, "qnls-nls"},
                             r.close});
        }
        for (auto& r : extra) d.repairs.push_back(std::move(r));
        out.push_back(std::move(d));
    }
}

}  // namespace

void add_mixed_families(std::vector<FamilyDef>& out)
{
    nls_kdv(out);
    kdv_mkdv(out);
    qnls_mkdv(out);
    qnls_nls(out);
}

}  // namespace ellwave::catalog::detail
