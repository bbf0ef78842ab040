#include <boost/math/special_functions/ellint_1.hpp>

#include <cmath>
#include <set>

#include "doctest.h"
#include "ellwave/catalog.hpp"
#include "ellwave/errors.hpp"

using namespace ellwave;
using namespace ellwave::catalog;

namespace {

double K(double m) { return boost::math::ellint_1(std::sqrt(m)); }

std::set<std::string> ids(std::string_view model)
{
    std::set<std::string> out;
    for (const auto& f : list_families(model)) out.insert(f.id);
    return out;
}

ParamMap free_of(const FamilySpec& f, const ClosedSolution& sol)
{
    ParamMap out;
    for (const auto& name : f.free) out[name] = sol.params.at(name);
    return out;
}

std::string partner(const std::string& id)
{
    auto pos = id.find("plus");
    return pos == std::string::npos ? "" : id.substr(0, pos) + "minus" + id.substr(pos + 4);
}

}  // namespace

TEST_SUITE("catalog") {

TEST_CASE("family lists per model")
{
    CHECK(ids("nls") == std::set<std::string>{"dn", "cn", "dn-plus-cn", "dn-minus-cn"});
    CHECK(ids("kdv") == std::set<std::string>{"dnsq", "dnsq-plus-cndn", "dnsq-minus-cndn"});
    const auto cnls = ids("coupled-nls");
    for (const char* id : {"dn-cn", "superposed-plus", "superposed-minus", "dnsq-dnsq", "dnsq-superposed-plus",
                           "dnsq-superposed-minus"}) {
        CHECK(cnls.count(id) == 1);
    }
    CHECK_THROWS_AS(list_families("sine-gordon"), UsageError);
    CHECK_THROWS_AS(find_family("nls", "dn-plus-sn"), UsageError);
    for (const auto& t : models::registry()) CHECK_FALSE(list_families(t.id).empty());
}

TEST_CASE("closure examples")
{
    SUBCASE("nls dn")
    {
        const auto s = close_family("nls", "dn", {{"g", 2}, {"beta", 1}, {"m", 0.5}, {"k", 0}});
        CHECK(s.params.at("A") == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.params.at("omega") == doctest::Approx(-1.5).epsilon(1e-15));
        CHECK(s.params.at("v") == 0.0);
    }
    SUBCASE("nls dn plus cn")
    {
        const auto s = close_family("nls", "dn-plus-cn", {{"g", 2}, {"beta", 1}, {"m", 0.5}, {"k", 0}});
        CHECK(s.params.at("A") == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.params.at("B") == s.params.at("A"));
        CHECK(s.params.at("omega") == doctest::Approx(-0.75).epsilon(1e-15));
    }
    SUBCASE("kdv dn squared plus cn dn")
    {
        const auto s = close_family("kdv", "dnsq-plus-cndn", {{"g", 12}, {"beta", 1}, {"m", 0.5}});
        CHECK(s.params.at("A") == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.params.at("B") == s.params.at("A"));
        CHECK(s.params.at("v") == doctest::Approx(4.5).epsilon(1e-15));
    }
    SUBCASE("mkdv dn plus cn at m = 1")
    {
        const auto s = close_family("mkdv", "dn-plus-cn", {{"g", 6}, {"beta", 1}, {"m", 1}});
        CHECK(s.params.at("A") == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.params.at("v") == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("closure errors")
{
    CHECK_THROWS_AS(close_family("nls", "dn", {{"g", 2}, {"beta", 1}}), UsageError);
    CHECK_THROWS_AS(close_family("nls", "dn", {{"g", -2}, {"beta", 1}, {"m", 0.5}, {"k", 0}}), ExistenceError);
    CHECK_THROWS_AS(close_family("nls", "dn", {{"g", 2}, {"beta", 1}, {"m", 1.5}, {"k", 0}}), DomainError);
    try {
        close_family("qcnls", "cn", {{"g2", 1.5}, {"beta", 1}, {"m", 0.4}, {"k", 0}});
        FAIL("expected an existence error");
    } catch (const ExistenceError& e) {
        CHECK_FALSE(e.relation.empty());
    }
    const auto& f = find_family("qnls-kdv", "dnsq-dnsq");
    ParamMap low = default_free(f);
    low["m"] = 0.5;
    try {
        close_family("qnls-kdv", "dnsq-dnsq", low);
        FAIL("expected an existence error");
    } catch (const ExistenceError& e) {
        CHECK(std::find(f.relations.begin(), f.relations.end(), e.relation) != f.relations.end());
        CHECK(std::string(e.what()).find("discriminant") != std::string::npos);
    }
}

TEST_CASE("offset ratios solve their quadratic")
{
    const auto& f = find_family("qnls-kdv", "dnsq-dnsq");
    ParamMap free = default_free(f);
    for (double m : {0.75, 0.85, 0.95}) {
        free["m"] = m;
        for (int root : {1, -1}) {
            const auto s = close_family("qnls-kdv", "dnsq-dnsq", free, Branch{{{"root", root}}});
            const double y = s.params.at("y");
            // (3y + 2 - m)^2 = m^2 - 2(1 - m)
            const double lhs = 9.0 * y * y + 6.0 * (2.0 - m) * y + (2.0 - m) * (2.0 - m) - (m * m - 2.0 * (1.0 - m));
            CHECK(std::abs(lhs) <= 1e-12);
            CHECK(s.params.at("D") == doctest::Approx(y * s.params.at("A")).epsilon(1e-14));
        }
    }
}

TEST_CASE("profile evaluation")
{
    const auto s = close_family("nls", "dn", {{"g", 2}, {"beta", 1}, {"m", 0.5}, {"k", 0}});
    CHECK(std::abs(evaluate_profile(s, 0.0, 0.0)[0] - cplx(1.0, 0.0)) <= 1e-15);

    const auto minus = close_family("nls", "dn-minus-cn", {{"g", 2}, {"beta", 1}, {"m", 1}, {"k", 0.3}});
    for (double x : {-2.0, 0.0, 0.7, 3.1}) {
        for (double t : {0.0, 0.4}) CHECK(std::abs(evaluate_profile(minus, x, t)[0]) <= 1e-15);
    }
    const auto plus = close_family("nls", "dn-plus-cn", {{"g", 2}, {"beta", 1}, {"m", 1}, {"k", 0}});
    CHECK(std::abs(evaluate_profile(plus, 0.0, 0.0)[0] - 1.0) <= 1e-15);

    const auto shifted = close_family("nls", "dn", {{"g", 2}, {"beta", 1}, {"m", 0.5}, {"k", 0.2}, {"delta", 0.3},
                                              {"delta1", 0.4}});
    const auto at = evaluate_profile(shifted, -0.4, 0.0);
    CHECK(std::abs(at[0]) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::arg(at[0]) == doctest::Approx(0.2 * -0.4 - 0.3).epsilon(1e-14));
}

TEST_CASE("fundamental periods")
{
    CHECK(fundamental_period(close_family("nls", "dn", {{"g", 2}, {"beta", 1}, {"m", 0}, {"k", 0}})) ==
          doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(fundamental_period(close_family("nls", "dn-plus-cn", {{"g", 2}, {"beta", 1}, {"m", 0.5}, {"k", 0}})) ==
          doctest::Approx(4.0 * K(0.5)).epsilon(1e-14));
    CHECK(fundamental_period(close_family("kdv", "dnsq", {{"g", 12}, {"beta", 2}, {"m", 0.5}})) ==
          doctest::Approx(K(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(fundamental_period(close_family("kdv", "dnsq", {{"g", 12}, {"beta", 2}, {"m", 1}})),
                    AperiodicError);
}

TEST_CASE("closure is idempotent")
{
    for (const auto& f : all_families()) {
        for (const auto& b : branches(f)) {
            for (const auto& free : default_panel(f, 2, b)) {
                const auto s = close_family(f.model, f.id, free, b);
                const auto again = close_family(f.model, f.id, free_of(f, s), b);
                CHECK_MESSAGE(again.params == s.params, f.model << "/" << f.id);
            }
        }
    }
}

TEST_CASE("superposition branches share dependent parameters")
{
    int pairs = 0;
    for (const auto& f : all_families()) {
        const std::string other = partner(f.id);
        if (other.empty()) continue;
        const auto& g = find_family(f.model, other);
        CHECK(f.sign == 1);
        CHECK(g.sign == -1);
        for (const auto& b : branches(f)) {
            for (const auto& free : default_panel(f, 1, b)) {
                ClosedSolution sp, sm;
                try {
                    sp = close_family(f.model, f.id, free, b);
                    sm = close_family(g.model, g.id, free, b);
                } catch (const ExistenceError&) {
                    continue;
                }
                REQUIRE(sp.params.size() == sm.params.size());
                int flipped = 0;
                for (const auto& [k, v] : sp.params) {
                    const double w = sm.params.at(k);
                    if (v == w) continue;
                    CHECK_MESSAGE(v == -w, f.model << "/" << f.id << " key " << k);
                    ++flipped;
                }
                CHECK_MESSAGE(flipped >= 1, f.model << "/" << f.id);
                ++pairs;
            }
        }
    }
    CHECK(pairs >= 30);
}

TEST_CASE("correlated amplitudes flip together")
{
    const auto& f = find_family("coupled-phi4", "superposed-plus");
    const auto free = default_free(f);
    const auto p = close_family("coupled-phi4", "superposed-plus", free);
    const auto m = close_family("coupled-phi4", "superposed-minus", free);
    int flipped = 0;
    for (const auto& [k, v] : p.params) flipped += (v != 0.0 && v == -m.params.at(k));
    CHECK(flipped == 2);
    CHECK_THROWS_AS(parse_branch(f, "sign=-1"), UsageError);
    CHECK(branches(f).size() == 1);
}

TEST_CASE("branch labels")
{
    const auto& f = find_family("qnls", "dnsq");
    CHECK(branches(f).size() == 2);
    CHECK(parse_branch(f, "").choice.at("root") == 1);
    CHECK(parse_branch(f, "root=-1").choice.at("root") == -1);
    CHECK(parse_branch(f, "root=-1").label() == "root=-1");
    CHECK_THROWS_AS(parse_branch(f, "root=3"), UsageError);
    CHECK_THROWS_AS(parse_branch(f, "root"), UsageError);
    CHECK(Branch{}.label() == "default");
}

TEST_CASE("serialization round trip")
{
    for (const auto& f : all_families()) {
        for (const auto& b : branches(f)) {
            for (const auto& free : default_panel(f, 1, b)) {
                const auto s = close_family(f.model, f.id, free, b);
                const auto back = from_key_values(to_key_values(s));
                CHECK(back.model == s.model);
                CHECK(back.family == s.family);
                CHECK(back.branch == s.branch);
                CHECK(back.params == s.params);
            }
        }
    }
    CHECK_THROWS_AS(from_key_values("family=dn\n"), UsageError);
    CHECK_THROWS_AS(from_key_values("model=nls\nfamily=dn\nbeta=x\n"), UsageError);
}

TEST_CASE("panels are deterministic and admissible")
{
    for (const auto& f : all_families()) {
        for (const auto& b : branches(f)) {
            const auto p1 = default_panel(f, 3, b);
            CHECK_MESSAGE(p1.size() == 3, f.model << "/" << f.id << " " << b.label());
            CHECK(p1 == default_panel(f, 3, b));
            const auto r1 = random_panel(f, 5, 42, b);
            CHECK(r1.size() == 5);
            CHECK(r1 == random_panel(f, 5, 42, b));
            CHECK(r1 != random_panel(f, 5, 43, b));
            for (const auto& free : r1) CHECK_NOTHROW(close_family(f.model, f.id, free, b));
        }
    }
}

TEST_CASE("envelope jets match finite differences")
{
    const std::vector<Basis> bases = {Basis::Dn, Basis::Cn, Basis::DnSq, Basis::CnDn};
    for (double m : {0.0, 0.3, 0.8, 1.0}) {
        for (Basis basis : bases) {
            FieldShape f;
            f.offset = 0.4;
            f.terms = {{basis, 1.7}};
            const double h = 1e-3;
            for (double xi : {-1.3, 0.2, 0.9, 2.4}) {
                auto p = [&](double s) { return envelope_jet(f, s, m).p0; };
                auto d1 = [&](double s) { return (-p(s + 2 * h) + 8 * p(s + h) - 8 * p(s - h) + p(s - 2 * h)) / (12 * h); };
                const auto j = envelope_jet(f, xi, m);
                CHECK(j.p1 == doctest::Approx(d1(xi)).epsilon(1e-9));
                const double d2 = (-p(xi + 2 * h) + 16 * p(xi + h) - 30 * p(xi) + 16 * p(xi - h) - p(xi - 2 * h)) /
                                  (12 * h * h);
                CHECK(std::abs(j.p2 - d2) <= 1e-6);
                auto q = [&](double s) { return envelope_jet(f, s, m).p2; };
                const double d3 = (-q(xi + 2 * h) + 8 * q(xi + h) - 8 * q(xi - h) + q(xi - 2 * h)) / (12 * h);
                CHECK(std::abs(j.p3 - d3) <= 1e-8);
            }
        }
    }
}

TEST_CASE("single-field families degenerate to solitary waves at m = 1")
{
    int checked = 0;
    for (const auto& f : all_families()) {
        if (models::find_model(f.model).fields.size() != 1) continue;
        for (const auto& b : branches(f)) {
            ParamMap free = default_free(f);
            free["m"] = 1.0;
            const auto s = close_family(f.model, f.id, free, b);
            const Ansatz a = ansatz(s);
            const auto& fs = a.fields[0];
            double worst = 0.0;
            for (int i = 0; i < 64; ++i) {
                const double x = -8.0 + 16.0 * i / 64.0, t = 0.0;
                const double xi = a.beta * (x - a.velocity * t + a.shift);
                double env = fs.offset;
                for (const auto& [basis, amp] : fs.terms) {
                    const double sech = 1.0 / std::cosh(xi);
                    env += amp * ((basis == Basis::Dn || basis == Basis::Cn) ? sech : sech * sech);
                }
                const cplx expect = fs.complex ? env * std::exp(cplx(0, 1) * (fs.k * x - fs.phase)) : cplx(env, 0);
                worst = std::max(worst, std::abs(evaluate_profile(s, x, t)[0] - expect));
            }
            CHECK_MESSAGE(worst <= 1e-12, f.model << "/" << f.id << " " << b.label());
            ++checked;
        }
    }
    CHECK(checked >= 60);
}

TEST_CASE("repairs are named alternative closures")
{
    CHECK(repairs("nls", "dn").empty());
    const auto rs = repairs("qnls-kdv", "dnsq-superposed-plus");
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].name == "speed-width");
    auto free = default_free(find_family("qnls-kdv", "dnsq-superposed-plus"));
    free["beta"] = 1.3;
    const auto printed = close_family("qnls-kdv", "dnsq-superposed-plus", free);
    const auto repaired = close_with_repair("qnls-kdv", "dnsq-superposed-plus", "speed-width", free);
    CHECK(printed.params.at("A") == repaired.params.at("A"));
    CHECK(printed.params.at("z") != repaired.params.at("z"));
    CHECK_THROWS_AS(close_with_repair("nls", "dn", "speed-width", free), UsageError);
    const auto vx = close_with_repair("qnls-nls-vx", "superposed-plus", "model-reading",
                                      default_free(find_family("qnls-nls-vx", "superposed-plus")),
                                      Branch{{{"root", -1}}});
    CHECK(vx.model == "qnls-nls");
}

}  // TEST_SUITE
