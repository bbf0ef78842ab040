#include "family_def.hpp"

namespace ellwave::catalog::detail {

namespace {

using B = Basis;
using Fk = FamilyKind;

const Range kKWide{"k", 0.3, 1.2};

Fk sup_kind(int s) { return s > 0 ? Fk::DnPlusCn : Fk::DnMinusCn; }
Fk sup2_kind(int s) { return s > 0 ? Fk::DnSqPlusCnDn : Fk::DnSqMinusCnDn; }
std::string sup_id(int s, bool degenerate = false)
{
    return std::string("superposed-") + plus_minus(s) + (degenerate ? "-degenerate" : "");
}
std::string sup2_id(int s, bool degenerate = false)
{
    return std::string("dnsq-superposed-") + plus_minus(s) + (degenerate ? "-degenerate" : "");
}

double sq(double x) { return x * x; }
double q1(double m) { return std::sqrt(1.0 - m + m * m); }
double q14(double m) { return std::sqrt(1.0 + 14.0 * m + m * m); }

void finish(FamilyDef& d, ParamMap defaults, std::vector<Range> ranges, bool degenerate)
{
    d.spec.degenerate = degenerate;
    d.defaults = std::move(defaults);
    d.ranges = std::move(ranges);
}

// ---------------------------------------------------------------- coupled phi^4

void coupled_phi4(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"beta1", "beta2", "gamma", "beta", "m"};
    const std::vector<std::string> dfree = {"gamma", "A", "beta", "m"};
    const ParamMap defaults = {{"beta1", -0.7}, {"beta2", -0.45}, {"gamma", -0.3}, {"beta", 1.0}, {"m", 0.6}};
    const ParamMap ddefaults = {{"gamma", -0.8}, {"A", 0.5}, {"beta", 1.2}, {"m", 0.6}};
    const std::vector<Range> ranges = {{"beta1", -1.0, -0.4}, {"beta2", -1.0, -0.4}, {"gamma", -0.4, -0.1}, kBeta, kM};
    const std::vector<Range> dranges = {{"gamma", -1.0, -0.4}, {"A", 0.2, 0.8}, {"beta", 0.9, 1.8}, kM};

    auto printed_amps = [](Params& p) {
        const double b1 = p("beta1"), b2 = p("beta2"), g = p("gamma");
        const double det = 4.0 * b1 * b2 - g * g;
        p.set("A", root_of((2.0 * std::abs(b2) - std::abs(g)) / det, "(39a)", "A^2"));
        p.set("D", root_of((2.0 * std::abs(b1) - std::abs(g)) / det, "(39a)", "D^2"));
    };
    auto solved_amps = [](Params& p) {
        const double b1 = p("beta1"), b2 = p("beta2"), g = p("gamma"), b2w = sq(p("beta"));
        const double det = 4.0 * b1 * b2 - g * g;
        p.set("A", root_of(b2w * (g - 2.0 * b2) / det, "(39a)", "A^2"));
        p.set("D", root_of(b2w * (g - 2.0 * b1) / det, "(39a)", "D^2"));
    };
    auto degenerate_amps = [](Params& p) {
        const double g = p("gamma");
        require(g < 0.0, "(39b)", "gamma must be negative");
        p.set("beta1", 0.5 * g);
        p.set("beta2", 0.5 * g);
        p.set("D", root_of(sq(p("beta")) / std::abs(g) - sq(p("A")), "(39b)", "beta^2/|gamma| - A^2"));
    };
    auto printed_alpha = [](Params& p) {
        const double m = p("m"), b2 = sq(p("beta")), g = p("gamma"), A2 = sq(p("A")), D2 = sq(p("D"));
        p.set("alpha1", (2.0 - m) * b2 * A2 / 2.0 + g * (1.0 - m) * D2);
        p.set("alpha2", (2.0 * m - 1.0) * b2 * D2 / 2.0 - g * (1.0 - m) * A2);
    };
    auto solved_alpha = [](Params& p) {
        const double m = p("m"), b2 = sq(p("beta")), g = p("gamma"), A2 = sq(p("A")), D2 = sq(p("D"));
        p.set("alpha1", (2.0 - m) * b2 / 2.0 + g * (1.0 - m) * D2);
        p.set("alpha2", (2.0 * m - 1.0) * b2 / 2.0 - g * (1.0 - m) * A2);
    };
    auto sup_alpha = [](Params& p) {
        const double a = (1.0 + p("m")) * sq(p("beta")) / 4.0;
        p.set("alpha1", a);
        p.set("alpha2", a);
    };

    for (bool degenerate : {false, true}) {
        auto d = new_family("coupled-phi4", degenerate ? "dn-cn-degenerate" : "dn-cn", Fk::Mixed,
                            "phi = A dn, psi = D sqrt(m) cn", degenerate ? std::vector<std::string>{"(39b)", "(40)"}
                                                                         : std::vector<std::string>{"(39a)", "(40)"},
                            degenerate ? dfree : free,
                            degenerate ? std::vector<std::string>{"D", "beta1", "beta2", "alpha1", "alpha2"}
                                       : std::vector<std::string>{"A", "D", "alpha1", "alpha2"});
        d.layout.fields = {real_field({{B::Dn, "A"}}), real_field({{B::Cn, "D"}})};
        if (degenerate) {
            d.printed = [=](Params& p, const Branch&) {
                degenerate_amps(p);
                printed_alpha(p);
            };
            d.repairs.push_back({{"frequency-factors", {"(40)"},
                                  "alpha1 = (2-m) beta^2/2 + gamma(1-m) D^2, alpha2 = (2m-1) beta^2/2 - gamma(1-m) A^2",
                                  ""},
                                 [=](Params& p, const Branch&) {
                                     degenerate_amps(p);
                                     solved_alpha(p);
                                 }});
        } else {
            d.printed = [=](Params& p, const Branch&) {
                printed_amps(p);
                printed_alpha(p);
            };
            d.repairs.push_back({{"amplitude-width", {"(39a)"}, "A^2, D^2 carry a factor beta^2", ""},
                                 [=](Params& p, const Branch&) {
                                     solved_amps(p);
                                     printed_alpha(p);
                                 }});
            d.repairs.push_back({{"frequency-factors", {"(40)"}, "alpha1, alpha2 without the A^2, D^2 factors", ""},
                                 [=](Params& p, const Branch&) {
                                     printed_amps(p);
                                     solved_alpha(p);
                                 }});
            d.repairs.push_back({{"amplitude-width+frequency-factors", {"(39a)", "(40)"},
                                  "A^2, D^2 carry beta^2 and alpha1, alpha2 drop the A^2, D^2 factors", ""},
                                 [=](Params& p, const Branch&) {
                                     solved_amps(p);
                                     solved_alpha(p);
                                 }});
        }
        finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
        out.push_back(d);
    }
    for (bool degenerate : {false, true}) {
        for (int s : {1, -1}) {
            auto d = new_family("coupled-phi4", sup_id(s, degenerate), sup_kind(s),
                                "phi = A/2 dn + B/2 sqrt(m) cn, psi = D/2 dn + E/2 sqrt(m) cn",
                                degenerate ? std::vector<std::string>{"(39b)", "(43)"}
                                           : std::vector<std::string>{"(39a)", "(43)"},
                                degenerate ? dfree : free,
                                degenerate ? std::vector<std::string>{"B", "D", "E", "beta1", "beta2", "alpha1", "alpha2"}
                                           : std::vector<std::string>{"A", "B", "D", "E", "alpha1", "alpha2"},
                                s);
            d.layout.fields = {real_field({{B::Dn, "A", 0.5}, {B::Cn, "B", 0.5}}),
                               real_field({{B::Dn, "D", 0.5}, {B::Cn, "E", 0.5}})};
            auto signs = [s](Params& p) {
                p.set("B", s * p("A"));
                p.set("E", s * p("D"));
            };
            if (degenerate) {
                d.printed = [=](Params& p, const Branch&) {
                    degenerate_amps(p);
                    signs(p);
                    sup_alpha(p);
                };
            } else {
                d.printed = [=](Params& p, const Branch&) {
                    printed_amps(p);
                    signs(p);
                    sup_alpha(p);
                };
                d.repairs.push_back({{"amplitude-width", {"(39a)"}, "A^2, D^2 carry a factor beta^2", ""},
                                     [=](Params& p, const Branch&) {
                                         solved_amps(p);
                                         signs(p);
                                         sup_alpha(p);
                                     }});
            }
            finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
            out.push_back(d);
        }
    }
}

// ---------------------------------------------------------------- NLS-MKdV

void nls_mkdv(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"g", "alpha", "gamma", "beta", "m"};
    const std::vector<std::string> dfree = {"g", "A", "beta", "m"};
    const ParamMap defaults = {{"g", 1.1}, {"alpha", 0.8}, {"gamma", 0.5}, {"beta", 1.0}, {"m", 0.6}};
    const ParamMap ddefaults = {{"g", 1.1}, {"A", 0.5}, {"beta", 1.0}, {"m", 0.6}};
    const std::vector<Range> ranges = {{"g", 0.8, 1.5}, {"alpha", 0.3, 1.5}, {"gamma", 0.2, 0.8}, kBeta, kM};
    const std::vector<Range> dranges = {{"g", 0.8, 1.5}, {"A", 0.2, 0.8}, {"beta", 0.9, 1.8}, kM};

    auto amps = [](Params& p) {
        const double g = p("g"), al = p("alpha"), ga = p("gamma"), b2 = sq(p("beta"));
        const double den = al * ga - 3.0 * g;
        p.set("A", root_of(3.0 * (al - 2.0) * b2 / den, "(a4)", "A^2"));
        p.set("B", root_of((2.0 * ga - 3.0 * g) * b2 / den, "(a4)", "B^2"));
    };
    auto degenerate_amps = [](Params& p) {
        const double g = p("g");
        p.set("alpha", 2.0);
        p.set("gamma", 1.5 * g);
        p.set("B", root_of(sq(p("beta")) - 0.5 * g * sq(p("A")), "(a6)", "beta^2 - gamma A^2/3"));
    };

    for (bool degenerate : {false, true}) {
        auto d = new_family("nls-mkdv", degenerate ? "dn-cn-degenerate" : "dn-cn", Fk::Mixed,
                            "u = A dn e^{-i(wt-kx)}, v = B sqrt(m) cn",
                            {degenerate ? "(a6)" : "(a4)", "(a3)"}, degenerate ? dfree : free,
                            degenerate ? std::vector<std::string>{"B", "alpha", "gamma", "k", "c", "omega"}
                                       : std::vector<std::string>{"A", "B", "k", "c", "omega"});
        d.layout.fields = {complex_field({{B::Dn, "A"}}), real_field({{B::Cn, "B"}})};
        d.layout.velocity = "c";
        d.printed = [=](Params& p, const Branch&) {
            if (degenerate) degenerate_amps(p);
            else amps(p);
            const double m = p("m"), b2 = sq(p("beta"));
            const double c = (2.0 * m - 1.0) * b2, k = c / 2.0;
            p.set("c", c);
            p.set("k", k);
            p.set("omega", k * k - (2.0 - m) * b2 + (1.0 - m) * p("alpha") * sq(p("B")));
        };
        finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
        out.push_back(d);
    }
    for (bool degenerate : {false, true}) {
        for (int s : {1, -1}) {
            auto d = new_family("nls-mkdv", sup_id(s, degenerate), sup_kind(s),
                                "u = (A dn + D sqrt(m) cn)/2 e^{-i(wt-kx)}, v = (B dn + F sqrt(m) cn)/2",
                                {degenerate ? "(a6)" : "(a4)", "(a9)"}, degenerate ? dfree : free,
                                degenerate ? std::vector<std::string>{"B", "D", "F", "alpha", "gamma", "k", "c", "omega"}
                                           : std::vector<std::string>{"A", "B", "D", "F", "k", "c", "omega"},
                                s);
            d.layout.fields = {complex_field({{B::Dn, "A", 0.5}, {B::Cn, "D", 0.5}}),
                               real_field({{B::Dn, "B", 0.5}, {B::Cn, "F", 0.5}})};
            d.layout.velocity = "c";
            d.printed = [=](Params& p, const Branch&) {
                if (degenerate) degenerate_amps(p);
                else amps(p);
                p.set("D", s * p("A"));
                p.set("F", s * p("B"));
                const double c = (1.0 + p("m")) * sq(p("beta")) / 2.0, k = c / 2.0;
                p.set("c", c);
                p.set("k", k);
                p.set("omega", k * (k - 2.0));
            };
            finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
            out.push_back(d);
        }
    }

    // dn^2 families: alpha = 3/2 and gamma = 2g < 0 are forced, k is free
    const std::vector<std::string> qfree = {"g", "beta", "m", "k"};
    const ParamMap qdefaults = {{"g", -0.6}, {"beta", 1.0}, {"m", 0.6}, {"k", 2.5}};
    const std::vector<Range> qranges = {{"g", -1.2, -0.3}, {"beta", 0.6, 1.2}, kM, {"k", 0.3, 4.0}};
    auto common = [](Params& p, double y, double z, const std::string& rel) {
        const double g = p("g");
        require(g < 0.0, rel, "g must be negative");
        p.set("alpha", 1.5);
        p.set("gamma", 2.0 * g);
        p.set("y", y);
        p.set("z", z);
        const double B = root_of(2.0 * sq(p("beta")) / (z - y), rel, "2 beta^2 / (z - y)");
        p.set("B", B);
        p.set("A", root_of(-3.0 * B * B / (2.0 * g), rel, "-3 B^2 / gamma"));
        p.set("F", y * p("A"));
        p.set("D", z * B);
    };
    {
        auto d = new_family("nls-mkdv", "dnsq-dnsq", Fk::DnSq, "u = (A dn^2 + F) e^{-i(wt-kx)}, v = B dn^2 + D",
                            {"(2.29)"}, qfree, {"A", "B", "F", "D", "y", "z", "alpha", "gamma", "c", "omega"});
        d.spec.selectors = {{"root", {1, -1}, "(2.29)"}};
        d.layout.fields = {complex_field({{B::DnSq, "A"}}, "F"), real_field({{B::DnSq, "B"}}, "D")};
        d.layout.velocity = "c";
        d.printed = [common](Params& p, const Branch& br) {
            const double m = p("m"), b2 = sq(p("beta")), k = p("k");
            const double y = (-(2.0 - m) + choice(br, "root") * q1(m)) / 3.0;
            const double z = (k / (2.0 * b2) - (2.0 - m)) / 3.0;
            common(p, y, z, "(2.29)");
            p.set("c", 2.0 * k);
            p.set("omega", k * k - (4.0 * (2.0 - m) + 9.0 * y + 3.0 * z) * b2);
        };
        finish(d, qdefaults, qranges, false);
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("nls-mkdv", sup2_id(s), sup2_kind(s),
                            "u = (F + A/2 dn^2 + G/2 sqrt(m) cn dn) e^{-i(wt-kx)}, v = D + B/2 dn^2 + H/2 sqrt(m) cn dn",
                            {"(2.29)", "(2.32)"}, qfree,
                            {"A", "B", "F", "D", "G", "H", "y", "z", "alpha", "gamma", "c", "omega"}, s);
        d.spec.selectors = {{"root", {1, -1}, "(2.32)"}};
        d.layout.fields = {complex_field({{B::DnSq, "A", 0.5}, {B::CnDn, "G", 0.5}}, "F"),
                           real_field({{B::DnSq, "B", 0.5}, {B::CnDn, "H", 0.5}}, "D")};
        d.layout.velocity = "c";
        d.printed = [common, s](Params& p, const Branch& br) {
            const double m = p("m"), b2 = sq(p("beta")), k = p("k");
            const double y = (-(5.0 - m) + choice(br, "root") * q14(m)) / 12.0;
            const double z = (2.0 * k / b2 - (5.0 - m)) / 12.0;
            common(p, y, z, "(2.32)");
            p.set("G", s * p("A"));
            p.set("H", s * p("B"));
            p.set("c", 2.0 * k);
            p.set("omega", k * k - ((5.0 - m) + 9.0 * y + 3.0 * z) * b2);
        };
        finish(d, qdefaults, qranges, false);
        out.push_back(d);
    }
}

// ---------------------------------------------------------------- coupled NLS

void coupled_nls(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"a", "b", "e", "f", "beta", "m", "k"};
    const std::vector<std::string> dfree = {"a", "b", "A", "beta", "m", "k"};
    const ParamMap defaults = {{"a", 1.2}, {"b", 0.5}, {"e", 1.4}, {"f", 0.3}, {"beta", 1.0}, {"m", 0.6}, {"k", 0.35}};
    const ParamMap ddefaults = {{"a", 1.2}, {"b", 0.5}, {"A", 0.6}, {"beta", 1.0}, {"m", 0.6}, {"k", 0.35}};
    const std::vector<Range> ranges = {{"a", 0.8, 1.6}, {"b", 0.2, 0.7}, {"e", 1.0, 1.8}, {"f", 0.1, 0.5},
                                       kBeta,           kM,              kK};
    const std::vector<Range> dranges = {{"a", 0.8, 1.6}, {"b", 0.2, 0.7}, {"A", 0.2, 0.8}, {"beta", 0.9, 1.8}, kM, kK};

    auto amps = [](Params& p) {
        const double a = p("a"), b = p("b"), e = p("e"), f = p("f"), b2 = sq(p("beta"));
        const double den = b * f - a * e;
        p.set("A", root_of(2.0 * b2 * (b - e) / den, "(12.6)", "A^2"));
        p.set("B", root_of(2.0 * b2 * (f - a) / den, "(12.6)", "B^2"));
    };
    auto degenerate_amps = [](Params& p) {
        const double a = p("a"), b = p("b");
        p.set("e", b);
        p.set("f", a);
        p.set("B", root_of((2.0 * sq(p("beta")) - a * sq(p("A"))) / b, "(12.7)", "(2 beta^2 - a A^2)/b"));
    };
    auto frequencies = [](Params& p, double sign) {
        const double m = p("m"), b2 = sq(p("beta")), k = p("k");
        p.set("c", 2.0 * k);
        p.set("omega1", k * k - (2.0 - m) * b2 + sign * (1.0 - m) * p("b") * sq(p("B")));
        p.set("omega2", k * k - (2.0 * m - 1.0) * b2 - (1.0 - m) * p("f") * sq(p("A")));
    };

    for (bool degenerate : {false, true}) {
        auto d = new_family("coupled-nls", degenerate ? "dn-cn-degenerate" : "dn-cn", Fk::Mixed,
                            "u = A dn e^{-i(w1 t-kx)}, v = B sqrt(m) cn e^{-i(w2 t-kx)}",
                            {degenerate ? "(12.7)" : "(12.6)", "(12.5)"}, degenerate ? dfree : free,
                            degenerate ? std::vector<std::string>{"B", "e", "f", "c", "omega1", "omega2"}
                                       : std::vector<std::string>{"A", "B", "c", "omega1", "omega2"});
        d.layout.fields = {complex_field({{B::Dn, "A"}}, "", "omega1"),
                           complex_field({{B::Cn, "B"}}, "", "omega2", "k", "delta2")};
        d.layout.velocity = "c";
        auto close_amps = [=](Params& p) {
            if (degenerate) degenerate_amps(p);
            else amps(p);
        };
        d.printed = [=](Params& p, const Branch&) {
            close_amps(p);
            frequencies(p, -1.0);
        };
        d.repairs.push_back({{"coupling-sign", {"(12.5)"}, "omega1 = k^2 - (2-m) beta^2 + (1-m) b B^2", ""},
                             [=](Params& p, const Branch&) {
                                 close_amps(p);
                                 frequencies(p, 1.0);
                             }});
        finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
        out.push_back(d);
    }
    for (bool degenerate : {false, true}) {
        for (int s : {1, -1}) {
            auto d = new_family("coupled-nls", sup_id(s, degenerate), sup_kind(s),
                                "u = (A dn + D sqrt(m) cn)/2 e^{-i(w1 t-kx)}, v = (B dn + E sqrt(m) cn)/2 e^{-i(w2 t-kx)}",
                                {degenerate ? "(12.7)" : "(12.6)", "(12.10)"}, degenerate ? dfree : free,
                                degenerate ? std::vector<std::string>{"B", "D", "E", "e", "f", "c", "omega1", "omega2"}
                                           : std::vector<std::string>{"A", "B", "D", "E", "c", "omega1", "omega2"},
                                s);
            d.layout.fields = {complex_field({{B::Dn, "A", 0.5}, {B::Cn, "D", 0.5}}, "", "omega1"),
                               complex_field({{B::Dn, "B", 0.5}, {B::Cn, "E", 0.5}}, "", "omega2", "k", "delta2")};
            d.layout.velocity = "c";
            d.printed = [=](Params& p, const Branch&) {
                if (degenerate) degenerate_amps(p);
                else amps(p);
                p.set("D", s * p("A"));
                p.set("E", s * p("B"));
                const double k = p("k"), w = k * k - 0.5 * (1.0 + p("m")) * sq(p("beta"));
                p.set("c", 2.0 * k);
                p.set("omega1", w);
                p.set("omega2", w);
            };
            finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
            out.push_back(d);
        }
    }

    // dn^2 families: a = f, b = e with a, b of opposite signs; the root selects (z+, y-) or (z-, y+)
    const std::vector<std::string> qfree = {"a", "b", "beta", "m", "k"};
    const ParamMap qdefaults = {{"a", 1.1}, {"b", -0.7}, {"beta", 1.0}, {"m", 0.6}, {"k", 0.35}};
    const std::vector<Range> qranges = {
        {"a", 0.6, 1.6, false, "root"}, {"b", -1.2, -0.3, false, "root"}, kBeta, kM, kK};
    auto common = [](Params& p, double z, double y, double factor, const std::string& rel) {
        const double a = p("a"), b = p("b");
        p.set("e", b);
        p.set("f", a);
        p.set("z", z);
        p.set("y", y);
        const double A = root_of(factor * sq(p("beta")) / ((z - y) * a), rel, "beta^2 / ((z - y) a)");
        p.set("A", A);
        p.set("B", root_of(-a * A * A / b, rel, "-a A^2 / b"));
        p.set("D", z * A);
        p.set("E", y * p("B"));
        p.set("c", 2.0 * p("k"));
    };
    auto set_omegas = [](Params& p, double r, double w) {
        const double k = p("k"), b2 = sq(p("beta"));
        p.set("omega1", k * k - r * w * b2);
        p.set("omega2", k * k + r * w * b2);
    };
    {
        auto d = new_family("coupled-nls", "dnsq-dnsq", Fk::DnSq,
                            "u = (A dn^2 + D) e^{-i(w1 t-kx)}, v = (B dn^2 + E) e^{-i(w2 t-kx)}",
                            {"(2.36)", "(2.37)"}, qfree,
                            {"A", "B", "D", "E", "z", "y", "e", "f", "c", "omega1", "omega2"});
        d.spec.selectors = {{"root", {1, -1}, "(2.37)"}};
        d.layout.fields = {complex_field({{B::DnSq, "A"}}, "D", "omega1"),
                           complex_field({{B::DnSq, "B"}}, "E", "omega2", "k", "delta2")};
        d.layout.velocity = "c";
        auto body = [=](Params& p, const Branch& br, double factor) {
            const double m = p("m"), r = choice(br, "root");
            common(p, (-(2.0 - m) + r * q1(m)) / 3.0, (-(2.0 - m) - r * q1(m)) / 3.0, factor, "(2.36)");
            set_omegas(p, r, 2.0 * q1(m));
        };
        d.printed = [body](Params& p, const Branch& br) { body(p, br, 6.0); };
        d.repairs.push_back({{"amplitude-factor", {"(2.36)"}, "(z - y) a A^2 = 3 beta^2", ""},
                             [body](Params& p, const Branch& br) { body(p, br, 3.0); }});
        finish(d, qdefaults, qranges, false);
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family(
            "coupled-nls", sup2_id(s), sup2_kind(s),
            "u = (A/2 dn^2 + D + G/2 sqrt(m) cn dn) e^{-i(w1 t-kx)}, v = (B/2 dn^2 + E + H/2 sqrt(m) cn dn) e^{-i(w2 t-kx)}",
            {"(2.40)", "(2.41)"}, qfree, {"A", "B", "D", "E", "G", "H", "z", "y", "e", "f", "c", "omega1", "omega2"}, s);
        d.spec.selectors = {{"root", {1, -1}, "(2.41)"}};
        d.layout.fields = {complex_field({{B::DnSq, "A", 0.5}, {B::CnDn, "G", 0.5}}, "D", "omega1"),
                           complex_field({{B::DnSq, "B", 0.5}, {B::CnDn, "H", 0.5}}, "E", "omega2", "k", "delta2")};
        d.layout.velocity = "c";
        auto body = [=](Params& p, const Branch& br, double factor, double w) {
            const double m = p("m"), r = choice(br, "root");
            common(p, (-(5.0 - m) + r * q14(m)) / 12.0, (-(5.0 - m) - r * q14(m)) / 12.0, factor, "(2.40)");
            p.set("G", s * p("A"));
            p.set("H", s * p("B"));
            set_omegas(p, r, w);
        };
        d.printed = [body](Params& p, const Branch& br) { body(p, br, 6.0, q1(p("m")) / 2.0); };
        d.repairs.push_back({{"amplitude-factor", {"(2.40)"}, "(z - y) a A^2 = 3 beta^2", ""},
                             [body](Params& p, const Branch& br) { body(p, br, 3.0, q1(p("m")) / 2.0); }});
        d.repairs.push_back({{"frequency-root", {"(2.41)"}, "omega offsets use sqrt(1+14m+m^2)/2", ""},
                             [body](Params& p, const Branch& br) { body(p, br, 6.0, q14(p("m")) / 2.0); }});
        d.repairs.push_back({{"amplitude-factor+frequency-root", {"(2.40)", "(2.41)"},
                              "(z - y) a A^2 = 3 beta^2 and omega offsets use sqrt(1+14m+m^2)/2", ""},
                             [body](Params& p, const Branch& br) { body(p, br, 3.0, q14(p("m")) / 2.0); }});
        finish(d, qdefaults, qranges, false);
        out.push_back(d);
    }
}

// ---------------------------------------------------------------- QNLS-KdV

void qnls_kdv(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"g", "alpha", "gamma", "beta", "m", "k"};
    const std::vector<std::string> dfree = {"g", "A", "beta", "m", "k"};
    const ParamMap defaults = {{"g", 1.1}, {"alpha", 0.8}, {"gamma", 0.5}, {"beta", 1.0}, {"m", 0.8}, {"k", 0.9}};
    const ParamMap ddefaults = {{"g", 1.1}, {"A", 1.5}, {"beta", 1.0}, {"m", 0.8}, {"k", 0.9}};
    const std::vector<Range> ranges = {{"g", 0.8, 1.5}, {"alpha", 0.3, 1.5}, {"gamma", 0.2, 0.8}, kBeta, kM, kKWide};
    const std::vector<Range> dranges = {{"g", 0.8, 1.5}, {"A", 0.5, 3.0}, kBeta, kM, kKWide};

    auto amps = [](Params& p, bool degenerate) {
        const double g = p("g"), b2 = sq(p("beta"));
        if (degenerate) {
            p.set("alpha", 3.0);
            p.set("gamma", 2.0 * g);
            p.set("B", (6.0 * b2 - g * p("A")) / 3.0);
            return;
        }
        const double al = p("alpha"), ga = p("gamma"), den = 6.0 * g - al * ga;
        p.set("A", 12.0 * (3.0 - al) * b2 / den);
        p.set("B", 6.0 * (2.0 * g - ga) * b2 / den);
    };

    for (bool degenerate : {false, true}) {
        const std::string amp_rel = degenerate ? "(2.24)" : "(2.23)";
        auto d = new_family("qnls-kdv", degenerate ? "dnsq-dnsq-degenerate" : "dnsq-dnsq", Fk::DnSq,
                            "u = (A dn^2 + D) e^{-i(wt-kx)}, v = B dn^2 + F", {amp_rel, "(2.21)", "(2.22)"},
                            degenerate ? dfree : free,
                            degenerate ? std::vector<std::string>{"B", "D", "F", "y", "z", "alpha", "gamma", "c", "omega"}
                                       : std::vector<std::string>{"A", "B", "D", "F", "y", "z", "c", "omega"});
        d.spec.selectors = {{"root", {1, -1}, "(2.22)"}};
        d.layout.fields = {complex_field({{B::DnSq, "A"}}, "D"), real_field({{B::DnSq, "B"}}, "F")};
        d.layout.velocity = "c";
        auto body = [=](Params& p, const Branch& br, bool printed_disc, bool width) {
            amps(p, degenerate);
            const double m = p("m"), b2 = sq(p("beta")), k = p("k"), r = choice(br, "root");
            const double disc = printed_disc ? root_of(m * m - 2.0 * (1.0 - m), "(2.22)", "discriminant m^2 - 2(1-m)")
                                             : q1(m);
            const double y = (-(2.0 - m) + r * disc) / 3.0;
            const double z = (k / (2.0 * b2) - (2.0 - m)) / 3.0;
            const double A = p("A");
            p.set("y", y);
            p.set("z", z);
            p.set("D", y * A);
            p.set("F", z * p("B"));
            p.set("c", 2.0 * k);
            p.set("omega",
                  k * k - 2.0 * (2.0 * (2.0 - m) + 3.0 * (z + y)) * (width ? b2 : 1.0) + A * p("g") * (z - y));
        };
        d.printed = [body](Params& p, const Branch& br) { body(p, br, true, false); };
        d.repairs.push_back({{"omega-width", {"(2.21)"}, "omega bracket carries beta^2", ""},
                             [body](Params& p, const Branch& br) { body(p, br, true, true); }});
        d.repairs.push_back({{"discriminant", {"(2.22)"}, "y = [-(2-m) +- sqrt(1-m+m^2)]/3", ""},
                             [body](Params& p, const Branch& br) { body(p, br, false, false); }});
        d.repairs.push_back({{"omega-width+discriminant", {"(2.21)", "(2.22)"},
                              "omega bracket carries beta^2 and y = [-(2-m) +- sqrt(1-m+m^2)]/3", ""},
                             [body](Params& p, const Branch& br) { body(p, br, false, true); }});
        finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
        out.push_back(d);
    }
    for (bool degenerate : {false, true}) {
        for (int s : {1, -1}) {
            const std::string amp_rel = degenerate ? "(2.24)" : "(2.23)";
            auto d = new_family(
                "qnls-kdv", sup2_id(s, degenerate), sup2_kind(s),
                "u = (D + A/2 dn^2 + G/2 sqrt(m) cn dn) e^{-i(wt-kx)}, v = F + B/2 dn^2 + H/2 sqrt(m) cn dn",
                {amp_rel, "(2.26)"}, degenerate ? dfree : free,
                degenerate ? std::vector<std::string>{"B", "D", "F", "G", "H", "y", "z", "alpha", "gamma", "c", "omega"}
                           : std::vector<std::string>{"A", "B", "D", "F", "G", "H", "y", "z", "c", "omega"},
                s);
            d.spec.selectors = {{"root", {1, -1}, "(2.26)"}};
            d.layout.fields = {complex_field({{B::DnSq, "A", 0.5}, {B::CnDn, "G", 0.5}}, "D"),
                               real_field({{B::DnSq, "B", 0.5}, {B::CnDn, "H", 0.5}}, "F")};
            d.layout.velocity = "c";
            auto body = [=](Params& p, const Branch& br, bool width) {
                amps(p, degenerate);
                const double m = p("m"), b2 = sq(p("beta")), k = p("k"), r = choice(br, "root");
                const double c = 2.0 * k;
                const double y = (-(5.0 - m) + r * q14(m)) / 12.0;
                const double z = (c / (width ? b2 : 1.0) - (5.0 - m)) / 12.0;
                const double A = p("A");
                p.set("G", s * A);
                p.set("H", s * p("B"));
                p.set("y", y);
                p.set("z", z);
                p.set("D", y * A);
                p.set("F", z * p("B"));
                p.set("c", c);
                p.set("omega", k * k - (5.0 - m + 6.0 * (z + y)) * b2 + p("g") * A * (z - y));
            };
            d.printed = [body](Params& p, const Branch& br) { body(p, br, false); };
            d.repairs.push_back({{"speed-width", {"(2.26)"}, "c = [5 - m + 12 z] beta^2", ""},
                                 [body](Params& p, const Branch& br) { body(p, br, true); }});
            finish(d, degenerate ? ddefaults : defaults, degenerate ? dranges : ranges, degenerate);
            out.push_back(d);
        }
    }
}

}  // namespace

void add_coupled_families(std::vector<FamilyDef>& out)
{
    coupled_phi4(out);
    nls_mkdv(out);
    coupled_nls(out);
    qnls_kdv(out);
}

}  // namespace ellwave::catalog::detail
