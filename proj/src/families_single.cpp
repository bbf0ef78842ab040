#include "family_def.hpp"

namespace ellwave::catalog::detail {

namespace {

using B = Basis;
using Fk = FamilyKind;

Fk dn_cn_kind(int s) { return s > 0 ? Fk::DnPlusCn : Fk::DnMinusCn; }
Fk dnsq_kind(int s) { return s > 0 ? Fk::DnSqPlusCnDn : Fk::DnSqMinusCnDn; }
std::string dn_cn_id(int s) { return s > 0 ? "dn-plus-cn" : "dn-minus-cn"; }
std::string dnsq_id(int s) { return s > 0 ? "dnsq-plus-cndn" : "dnsq-minus-cndn"; }

void nls(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"g", "beta", "m", "k"};
    auto amp = [](Params& p, const std::string& rel) {
        p.set("A", root_of(2.0 * p("beta") * p("beta") / p("g"), rel, "2 beta^2 / g"));
        p.set("v", 2.0 * p("k"));
    };
    {
        auto d = new_family("nls", "dn", Fk::Dn, "A dn e^{-i(wt-kx)}", {"(3)"}, free, {"A", "omega", "v"});
        d.layout.fields = {complex_field({{B::Dn, "A"}})};
        d.layout.velocity = "v";
        d.printed = [amp](Params& p, const Branch&) {
            amp(p, "(3)");
            p.set("omega", p("k") * p("k") - (2.0 - p("m")) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    {
        auto d = new_family("nls", "cn", Fk::Cn, "A sqrt(m) cn e^{-i(wt-kx)}", {"(5)"}, free, {"A", "omega", "v"});
        d.layout.fields = {complex_field({{B::Cn, "A"}})};
        d.layout.velocity = "v";
        d.printed = [amp](Params& p, const Branch&) {
            amp(p, "(5)");
            p.set("omega", p("k") * p("k") - (2.0 * p("m") - 1.0) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("nls", dn_cn_id(s), dn_cn_kind(s), "(A/2 dn + B/2 sqrt(m) cn) e^{-i(wt-kx)}", {"(7)"}, free,
                      {"A", "B", "omega", "v"}, s);
        d.layout.fields = {complex_field({{B::Dn, "A", 0.5}, {B::Cn, "B", 0.5}})};
        d.layout.velocity = "v";
        d.printed = [amp, s](Params& p, const Branch&) {
            amp(p, "(7)");
            p.set("B", s * p("A"));
            p.set("omega", p("k") * p("k") - 0.5 * (1.0 + p("m")) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    for (auto it = out.end() - 4; it != out.end(); ++it) {
        it->defaults = {{"g", 2.0}, {"beta", 1.0}, {"m", 0.5}, {"k", 0.3}};
        it->ranges = {kBeta, kM, kK};
    }
}

void mkdv(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"g", "beta", "m"};
    auto amp = [](Params& p, const std::string& rel) {
        p.set("A", root_of(6.0 * p("beta") * p("beta") / p("g"), rel, "6 beta^2 / g"));
    };
    {
        auto d = new_family("mkdv", "dn", Fk::Dn, "A dn", {"(10)"}, free, {"A", "v"});
        d.layout.fields = {real_field({{B::Dn, "A"}})};
        d.layout.velocity = "v";
        d.printed = [amp](Params& p, const Branch&) {
            amp(p, "(10)");
            p.set("v", (2.0 - p("m")) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    {
        auto d = new_family("mkdv", "cn", Fk::Cn, "A sqrt(m) cn", {"(12)"}, free, {"A", "v"});
        d.layout.fields = {real_field({{B::Cn, "A"}})};
        d.layout.velocity = "v";
        d.printed = [amp](Params& p, const Branch&) {
            amp(p, "(12)");
            p.set("v", (2.0 * p("m") - 1.0) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("mkdv", dn_cn_id(s), dn_cn_kind(s), "A/2 dn + B/2 sqrt(m) cn", {"(14)"}, free, {"A", "B", "v"},
                      s);
        d.layout.fields = {real_field({{B::Dn, "A", 0.5}, {B::Cn, "B", 0.5}})};
        d.layout.velocity = "v";
        d.printed = [amp, s](Params& p, const Branch&) {
            amp(p, "(14)");
            p.set("B", s * p("A"));
            p.set("v", 0.5 * (1.0 + p("m")) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    for (auto it = out.end() - 4; it != out.end(); ++it) {
        it->defaults = {{"g", 6.0}, {"beta", 1.0}, {"m", 0.5}};
        it->ranges = {kBeta, kM};
    }
}

void phi4(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"b", "beta", "m"};
    auto amp = [](Params& p, const std::string& rel) {
        p.set("A", root_of(-2.0 * p("beta") * p("beta") / p("b"), rel, "-2 beta^2 / b"));
    };
    {
        auto d = new_family("phi4", "dn", Fk::Dn, "A dn", {"(17)"}, free, {"A", "a"});
        d.layout.fields = {real_field({{B::Dn, "A"}})};
        d.printed = [amp](Params& p, const Branch&) {
            amp(p, "(17)");
            p.set("a", (2.0 - p("m")) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    {
        auto d = new_family("phi4", "cn", Fk::Cn, "A sqrt(m) cn", {"(19)"}, free, {"A", "a"});
        d.layout.fields = {real_field({{B::Cn, "A"}})};
        d.printed = [amp](Params& p, const Branch&) {
            amp(p, "(19)");
            p.set("a", (2.0 * p("m") - 1.0) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("phi4", dn_cn_id(s), dn_cn_kind(s), "A/2 dn + B/2 sqrt(m) cn", {"(21)"}, free, {"A", "B", "a"},
                      s);
        d.layout.fields = {real_field({{B::Dn, "A", 0.5}, {B::Cn, "B", 0.5}})};
        d.printed = [amp, s](Params& p, const Branch&) {
            amp(p, "(21)");
            p.set("B", s * p("A"));
            p.set("a", 0.5 * (1.0 + p("m")) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    for (auto it = out.end() - 4; it != out.end(); ++it) {
        it->defaults = {{"b", -1.5}, {"beta", 1.0}, {"m", 0.5}};
        it->ranges = {kBeta, kM};
    }
}

void phi234(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"c", "beta", "m"};
    // shared part of the printed closures once a is known
    auto rest = [](Params& p, const std::string& rel) {
        const double c = p("c");
        p.set("B", root_of(-2.0 * p("beta") * p("beta") / c, rel, "-2 beta^2 / c"));
        const double b = std::sqrt(4.5 * std::abs(p("a")) * std::abs(c));
        p.set("b", b);
        p.set("A", -b / (3.0 * c));
    };
    {
        auto d = new_family("phi234", "dn", Fk::Dn, "A + B dn", {"(24)"}, free, {"A", "B", "a", "b"});
        d.layout.fields = {real_field({{B::Dn, "B"}}, "A")};
        d.printed = [rest](Params& p, const Branch&) {
            p.set("a", -2.0 * (2.0 - p("m")) * p("beta") * p("beta"));
            rest(p, "(24)");
        };
        out.push_back(d);
    }
    {
        auto d = new_family("phi234", "cn", Fk::Cn, "A + B sqrt(m) cn", {"(26)"}, free, {"A", "B", "a", "b"});
        d.layout.fields = {real_field({{B::Cn, "B"}}, "A")};
        d.printed = [rest](Params& p, const Branch&) {
            p.set("a", -2.0 * (2.0 * p("m") - 1.0) * p("beta") * p("beta"));
            rest(p, "(26)");
        };
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("phi234", dn_cn_id(s), dn_cn_kind(s), "A + B/2 dn + D/2 sqrt(m) cn", {"(28)"}, free,
                      {"A", "B", "D", "a", "b"}, s);
        d.layout.fields = {real_field({{B::Dn, "B", 0.5}, {B::Cn, "D", 0.5}}, "A")};
        d.printed = [rest, s](Params& p, const Branch&) {
            p.set("a", -(1.0 + p("m")) * p("beta") * p("beta"));
            rest(p, "(28)");
            p.set("D", s * p("B"));
        };
        out.push_back(d);
    }
    for (auto it = out.end() - 4; it != out.end(); ++it) {
        it->defaults = {{"c", -0.8}, {"beta", 1.0}, {"m", 0.6}};
        it->ranges = {kBeta, kM};
    }
}

void kdv_mkdv(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"delta", "alpha", "gamma", "beta", "m"};
    auto base = [](Params& p, const std::string& rel) {
        p.set("A", -p("gamma") / (2.0 * p("alpha")));
        p.set("B", root_of(6.0 * p("delta") * p("beta") * p("beta") / p("alpha"), rel, "6 delta beta^2 / alpha"));
    };
    auto speed = [](Params& p, double factor) {
        const double g = p("gamma"), al = p("alpha");
        p.set("v", factor * p("delta") * p("beta") * p("beta") - g * g / (4.0 * al));
    };
    {
        auto d = new_family("kdv-mkdv", "dn", Fk::Dn, "A + B dn", {"(31)", "(32)"}, free, {"A", "B", "v"});
        d.layout.fields = {real_field({{B::Dn, "B"}}, "A")};
        d.layout.velocity = "v";
        d.printed = [base, speed](Params& p, const Branch&) {
            base(p, "(31)");
            speed(p, 2.0 - p("m"));
        };
        out.push_back(d);
    }
    {
        auto d = new_family("kdv-mkdv", "cn", Fk::Cn, "A + B sqrt(m) cn", {"(31)", "(34)"}, free, {"A", "B", "v"});
        d.layout.fields = {real_field({{B::Cn, "B"}}, "A")};
        d.layout.velocity = "v";
        d.printed = [base, speed](Params& p, const Branch&) {
            base(p, "(31)");
            speed(p, 2.0 * p("m") - 1.0);
        };
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("kdv-mkdv", dn_cn_id(s), dn_cn_kind(s), "A + B/2 dn + D/2 sqrt(m) cn", {"(31)", "(36)"}, free,
                      {"A", "B", "D", "v"}, s);
        d.layout.fields = {real_field({{B::Dn, "B", 0.5}, {B::Cn, "D", 0.5}}, "A")};
        d.layout.velocity = "v";
        d.printed = [base, speed, s](Params& p, const Branch&) {
            base(p, "(31)");
            p.set("D", s * p("B"));
            speed(p, 0.5 * (1.0 + p("m")));
        };
        out.push_back(d);
    }
    for (auto it = out.end() - 4; it != out.end(); ++it) {
        it->defaults = {{"delta", 0.7}, {"alpha", 1.6}, {"gamma", 0.9}, {"beta", 1.0}, {"m", 0.5}};
        it->ranges = {kBeta, kM};
    }
}

void qcnls(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"g2", "beta", "m", "k"};
    auto common = [](Params& p, const Branch& br, double offset_sq, const std::string& rel) {
        const double g2 = p("g2"), b2 = p("beta") * p("beta");
        p.set("A", root_of(2.0 * b2 / g2, rel, "2 beta^2 / g2"));
        const double off = choice(br, "offset") * root_of(offset_sq * b2 / g2, rel, "offset^2");
        p.set("B", off);
        p.set("g1", -3.0 * off * g2);
        p.set("v", 2.0 * p("k"));
    };
    auto sel = [](const std::string& rel) { return std::vector<Selector>{{"offset", {1, -1}, rel}}; };
    {
        auto d = new_family("qcnls", "dn", Fk::Dn, "(A dn + B) e^{-i(wt-kx)}", {"(3d)"}, free, {"A", "B", "g1", "omega", "v"});
        d.spec.selectors = sel("(3d)");
        d.layout.fields = {complex_field({{B::Dn, "A"}}, "B")};
        d.layout.velocity = "v";
        d.printed = [common](Params& p, const Branch& br) {
            common(p, br, 2.0 - p("m"), "(3d)");
            p.set("omega", p("k") * p("k") + 2.0 * (2.0 - p("m")) * p("beta") * p("beta"));
        };
        out.push_back(d);
    }
    {
        auto d = new_family("qcnls", "cn", Fk::Cn, "(A sqrt(m) cn + B) e^{-i(wt-kx)}", {"(5d)"}, free,
                      {"A", "B", "g1", "omega", "v"});
        d.spec.selectors = sel("(5d)");
        d.layout.fields = {complex_field({{B::Cn, "A"}}, "B")};
        d.layout.velocity = "v";
        d.printed = [common](Params& p, const Branch& br) {
            require(p("m") > 0.5, "(5d)", "the cn solution exists only for m > 1/2");
            common(p, br, 2.0 * p("m") - 1.0, "(5d)");
            p.set("omega", p("k") * p("k") + 2.0 * (2.0 * p("m") - 1.0) * p("beta") * p("beta"));
        };
        d.ranges = {kBeta, {"m", 0.55, 0.95}, kK};
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("qcnls", dn_cn_id(s), dn_cn_kind(s), "(A/2 dn + D/2 sqrt(m) cn + B) e^{-i(wt-kx)}", {"(7d)"},
                      free, {"A", "B", "D", "g1", "omega", "v"}, s);
        d.spec.selectors = sel("(7d)");
        d.layout.fields = {complex_field({{B::Dn, "A", 0.5}, {B::Cn, "D", 0.5}}, "B")};
        d.layout.velocity = "v";
        auto body = [common, s](Params& p, const Branch& br) {
            common(p, br, 0.5 * (1.0 + p("m")), "(7d)");
            p.set("D", s * p("A"));
        };
        d.printed = [body](Params& p, const Branch& br) {
            body(p, br);
            p.set("omega", p("k") * p("k") + 0.5 * (1.0 + p("m")) * p("beta") * p("beta"));
        };
        d.repairs.push_back({{"frequency-factor", {"(7d)"},
                              "omega = k^2 + (1+m) beta^2 (the printed factor 1/2 dropped); the printed 'B = +-A' "
                              "read as D = +-A",
                              ""},
                             [body](Params& p, const Branch& br) {
                                 body(p, br);
                                 p.set("omega", p("k") * p("k") + (1.0 + p("m")) * p("beta") * p("beta"));
                             }});
        out.push_back(d);
    }
    for (auto it = out.end() - 4; it != out.end(); ++it) {
        it->defaults = {{"g2", 1.5}, {"beta", 1.0}, {"m", 0.6}, {"k", 0.3}};
        if (it->ranges.empty()) it->ranges = {kBeta, kM, kK};
    }
}

void kdv(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"g", "beta", "m"};
    {
        auto d = new_family("kdv", "dnsq", Fk::DnSq, "A dn^2", {"(2.3)"}, free, {"A", "v"});
        d.layout.fields = {real_field({{B::DnSq, "A"}})};
        d.layout.velocity = "v";
        d.printed = [](Params& p, const Branch&) {
            const double b2 = p("beta") * p("beta");
            p.set("A", 12.0 * b2 / p("g"));
            p.set("v", 4.0 * (2.0 - p("m")) * b2);
        };
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("kdv", dnsq_id(s), dnsq_kind(s), "A/2 dn^2 + B/2 sqrt(m) cn dn", {"(2.5)"}, free,
                      {"A", "B", "v"}, s);
        d.layout.fields = {real_field({{B::DnSq, "A", 0.5}, {B::CnDn, "B", 0.5}})};
        d.layout.velocity = "v";
        d.printed = [s](Params& p, const Branch&) {
            const double b2 = p("beta") * p("beta");
            p.set("A", 12.0 * b2 / p("g"));
            p.set("B", s * p("A"));
            p.set("v", (5.0 - p("m")) * b2);
        };
        out.push_back(d);
    }
    for (auto it = out.end() - 3; it != out.end(); ++it) {
        it->defaults = {{"g", 6.0}, {"beta", 1.0}, {"m", 0.5}};
        it->ranges = {kBeta, kM};
    }
}

void qnls(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"g", "beta", "m", "k"};
    {
        auto d = new_family("qnls", "dnsq", Fk::DnSq, "(A dn^2 + D) e^{-i(wt-kx)}", {"(2.8)", "(2.9)"}, free,
                      {"A", "D", "omega", "v"});
        d.spec.selectors = {{"root", {1, -1}, "(2.9)"}};
        d.layout.fields = {complex_field({{B::DnSq, "A"}}, "D")};
        d.layout.velocity = "v";
        auto body = [](Params& p, const Branch& br) {
            const double g = p("g"), m = p("m"), b2 = p("beta") * p("beta");
            p.set("A", 6.0 * b2 / g);
            p.set("D", -2.0 * ((2.0 - m) + choice(br, "root") * std::sqrt(1.0 - m + m * m)) * b2 / g);
            p.set("v", 2.0 * p("k"));
        };
        d.printed = [body](Params& p, const Branch& br) {
            body(p, br);
            p.set("omega", p("k") * p("k") + 4.0 * (2.0 - p("m")) * p("beta") * p("beta") + 2.0 * p("g") * p("D"));
        };
        d.repairs.push_back({{"frequency-sign", {"(2.8)"}, "omega = k^2 - 4(2-m) beta^2 - 2 g D", ""},
                             [body](Params& p, const Branch& br) {
                                 body(p, br);
                                 p.set("omega", p("k") * p("k") - 4.0 * (2.0 - p("m")) * p("beta") * p("beta") -
                                                    2.0 * p("g") * p("D"));
                             }});
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("qnls", dnsq_id(s), dnsq_kind(s), "(D + A/2 dn^2 + B/2 sqrt(m) cn dn) e^{-i(wt-kx)}",
                      {"(2.11)", "(2.12)"}, free, {"A", "B", "D", "omega", "v"}, s);
        d.spec.selectors = {{"root", {1, -1}, "(2.12)"}};
        d.layout.fields = {complex_field({{B::DnSq, "A", 0.5}, {B::CnDn, "B", 0.5}}, "D")};
        d.layout.velocity = "v";
        auto body = [s](Params& p, const Branch& br) {
            const double g = p("g"), m = p("m"), b2 = p("beta") * p("beta");
            p.set("A", 6.0 * b2 / g);
            p.set("B", s * p("A"));
            p.set("D", -((5.0 - m) + choice(br, "root") * std::sqrt(1.0 + 14.0 * m + m * m)) * b2 / (2.0 * g));
            p.set("v", 2.0 * p("k"));
        };
        d.printed = [body](Params& p, const Branch& br) {
            body(p, br);
            p.set("omega", p("k") * p("k") + (5.0 - p("m")) * p("beta") * p("beta") + 2.0 * p("g") * p("D"));
        };
        d.repairs.push_back({{"frequency-sign", {"(2.11)"}, "omega = k^2 - (5-m) beta^2 - 2 g D", ""},
                             [body](Params& p, const Branch& br) {
                                 body(p, br);
                                 p.set("omega", p("k") * p("k") - (5.0 - p("m")) * p("beta") * p("beta") -
                                                    2.0 * p("g") * p("D"));
                             }});
        out.push_back(d);
    }
    for (auto it = out.end() - 3; it != out.end(); ++it) {
        it->defaults = {{"g", 2.0}, {"beta", 1.0}, {"m", 0.5}, {"k", 0.3}};
        it->ranges = {kBeta, kM, kK};
    }
}

void phi3(std::vector<FamilyDef>& out)
{
    const std::vector<std::string> free = {"a", "b", "m"};
    {
        auto d = new_family("phi3", "dnsq", Fk::DnSq, "A dn^2 + B", {"(2.15)"}, free, {"A", "B", "beta"});
        d.layout.fields = {real_field({{B::DnSq, "A"}}, "B")};
        d.layout.shift = "c";
        d.printed = [](Params& p, const Branch&) {
            const double a = p("a"), b = p("b"), m = p("m"), q = std::sqrt(1.0 - m + m * m);
            p.set("A", -3.0 * a / (2.0 * b * q));
            p.set("beta", root_of(a / (4.0 * q), "(2.15)", "beta^2 = a / (4 sqrt(1-m+m^2))"));
            p.set("B", a * (2.0 - m - q) / (2.0 * b * q));
        };
        out.push_back(d);
    }
    for (int s : {1, -1}) {
        auto d = new_family("phi3", dnsq_id(s), dnsq_kind(s), "A/2 dn^2 + D/2 sqrt(m) cn dn + B", {"(2.17)"}, free,
                      {"A", "D", "B", "beta"}, s);
        d.layout.fields = {real_field({{B::DnSq, "A", 0.5}, {B::CnDn, "D", 0.5}}, "B")};
        d.layout.shift = "c";
        d.printed = [s](Params& p, const Branch&) {
            const double a = p("a"), b = p("b"), m = p("m"), q = std::sqrt(1.0 + 14.0 * m + m * m);
            p.set("A", -6.0 * a / (b * q));
            p.set("D", s * p("A"));
            p.set("beta", root_of(a / q, "(2.17)", "beta^2 = a / sqrt(1+14m+m^2)"));
            p.set("B", a * (5.0 - m - q) / (2.0 * b * q));
        };
        out.push_back(d);
    }
    for (auto it = out.end() - 3; it != out.end(); ++it) {
        it->defaults = {{"a", 1.7}, {"b", -0.9}, {"m", 0.5}};
        it->ranges = {{"a", 0.5, 3.0}, kM};
    }
}

}  // namespace

void add_single_families(std::vector<FamilyDef>& out)
{
    nls(out);
    mkdv(out);
    phi4(out);
    phi234(out);
    kdv_mkdv(out);
    qcnls(out);
    kdv(out);
    qnls(out);
    phi3(out);
}

}  // namespace ellwave::catalog::detail
