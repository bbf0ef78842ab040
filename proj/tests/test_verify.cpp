#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ellwave/catalog.hpp"
#include "ellwave/errors.hpp"
#include "ellwave/verify.hpp"

using namespace ellwave;
using namespace ellwave::verify;

namespace {

double K(double m) { return boost::math::ellint_1(std::sqrt(m)); }

ClosedSolution closed(std::string_view model, std::string_view family, catalog::ParamMap free,
                      const Branch& b = {})
{
    const auto& f = catalog::find_family(model, family);
    auto p = catalog::default_free(f, b);
    for (const auto& [k, v] : free) p[k] = v;
    return catalog::close_family(model, family, p, b);
}

// |i u_t + u_xx + g|u|^2 u| for u = a dn(beta x) e^{-i w t}, written out by hand.
double nls_dn_residual(double a, double beta, double m, double w, double g, double x)
{
    const double k = std::sqrt(m);
    const double dn = boost::math::jacobi_dn(k, beta * x);
    const double dnxx = beta * beta * ((2.0 - m) * dn - 2.0 * dn * dn * dn);
    return std::abs(a * (w * dn + dnxx) + g * a * a * a * dn * dn * dn);
}

bool is_superposed_plus(const catalog::FamilySpec& f) { return f.sign == 1; }

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("NLS dn plus cn is exact on a 256 point grid")
{
    const auto sol = closed("nls", "dn-plus-cn", {{"g", 2}, {"beta", 1}, {"m", 0.5}, {"k", 0}});
    const auto r = verify_solution(sol, {256, 1});
    CHECK(r.max_abs <= 1e-11);
    CHECK(r.max_relative <= 1e-11);
    CHECK(r.max_abs >= r.rms);
    CHECK(r.rms >= 0.0);
    REQUIRE(r.times.size() == 2);
    CHECK(r.times[0] == 0.0);
    CHECK(r.times[1] == doctest::Approx(0.37 / (std::abs(sol.params.at("v")) + 1.0)));
    CHECK(r.per_equation.size() == 1);
    CHECK(std::string(method_name(r.method)) == "analytic-derivative");
}

TEST_CASE("residual of a wrong amplitude matches a hand-written oracle")
{
    auto sol = closed("nls", "dn", {{"g", 2}, {"beta", 1.2}, {"m", 0.6}, {"k", 0}});
    sol.params["A"] *= 1.1;
    const auto r = verify_solution(sol, {64, 1});
    const double a = sol.params.at("A"), beta = 1.2, m = 0.6, w = sol.params.at("omega");
    const double L = 2.0 * K(m) / beta;
    double worst = 0.0;
    for (int j = 0; j < 64; ++j) worst = std::max(worst, nls_dn_residual(a, beta, m, w, 2.0, L * j / 64));
    CHECK(worst > 1e-3);
    CHECK(r.max_abs == doctest::Approx(worst).epsilon(1e-10));
}

TEST_CASE("Ablowitz-Ladik dn plus cn on a 16 site ring")
{
    const double m = 0.5, beta = 4.0 * K(m) / 16.0;
    auto sol = closed("al", "dn-plus-cn", {{"g", 1}, {"beta", beta}, {"m", m}, {"k", std::numbers::pi / 8}});
    const GridSpec ring{16, 1};
    CHECK(verify_solution(sol, ring).max_abs <= 1e-11);
    CHECK(verify_solution(sol, ring, Method::Spectral).max_abs <= 1e-11);
    sol.params["omega"] += 1e-3;
    CHECK(verify_solution(sol, ring).max_abs >= 1e-4);
}

TEST_CASE("lattice sampling needs whole periods on the ring")
{
    const auto sol = closed("al", "dn", {{"beta", 0.61}});
    CHECK_NOTHROW(verify_solution(sol, {16, 1}));
    CHECK_THROWS_AS(verify_solution(sol, {16, 1}, Method::Spectral), UsageError);
    CHECK_THROWS_AS(verify_solution(sol, {16, 1}, Method::FiniteDifference), UsageError);
}

TEST_CASE("grids below 16 points are rejected")
{
    const auto sol = closed("nls", "dn", {});
    CHECK_THROWS_AS(verify_solution(sol, {8, 1}), UsageError);
    CHECK_THROWS_AS(verify_solution(sol, {32, 0}), UsageError);
}

TEST_CASE("method names round trip")
{
    for (auto m : {Method::Analytic, Method::Spectral, Method::FiniteDifference}) {
        CHECK(parse_method(method_name(m)) == m);
    }
    CHECK(parse_method("fd") == Method::FiniteDifference);
    CHECK_FALSE(parse_method("taylor").has_value());
}

TEST_CASE("analytic and spectral residuals agree on perturbed closures")
{
    int compared = 0;
    for (const auto& f : catalog::all_families()) {
        for (const auto& b : catalog::branches(f)) {
            ClosedSolution sol;
            try {
                sol = catalog::close_family(f.model, f.id, catalog::default_free(f, b), b);
            } catch (const std::exception&) {
                continue;
            }
            if (sol.params.count("m") == 0 || sol.params.at("m") > 0.7) continue;
            const auto a = catalog::ansatz(sol);
            if (a.lattice) continue;
            if (verify_solution(sol, {256, 1}).max_relative > 1e-9) continue;
            for (auto& [name, v] : sol.params) {
                if (name == "A") v *= 1.01;
            }
            const auto an = verify_solution(sol, {256, 1});
            const auto sp = verify_solution(sol, {256, 1}, Method::Spectral);
            if (an.max_abs < 1e-6 * an.term_scale) continue;
            INFO(f.model << "/" << f.id << " " << b.label());
            CHECK(sp.max_abs <= 10.0 * an.max_abs);
            CHECK(an.max_abs <= 10.0 * sp.max_abs);
            ++compared;
        }
    }
    CHECK(compared >= 30);
}

TEST_CASE("finite differences converge at fourth order")
{
    const auto sol = closed("kdv", "dnsq-plus-cndn", {{"g", 12}, {"beta", 1}, {"m", 0.5}});
    const double e1 = verify_solution(sol, {64, 1}, Method::FiniteDifference).max_abs;
    const double e2 = verify_solution(sol, {128, 1}, Method::FiniteDifference).max_abs;
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("plus and minus superpositions carry the same residual size")
{
    int pairs = 0;
    for (const auto& f : catalog::all_families()) {
        if (!is_superposed_plus(f)) continue;
        std::string minus = f.id;
        minus.replace(minus.find("plus"), 4, "minus");
        for (const auto& b : catalog::branches(f)) {
            ClosedSolution p, q;
            try {
                p = catalog::close_family(f.model, f.id, catalog::default_free(f, b), b);
                q = catalog::close_family(f.model, minus, catalog::default_free(f, b), b);
            } catch (const std::exception&) {
                continue;
            }
            if (catalog::ansatz(p).lattice) continue;
            for (auto* s : {&p, &q}) {
                const char* knob = s->params.count("omega") ? "omega" : "v";
                if (s->params.count(knob)) s->params[knob] += 1e-3;
            }
            const double rp = verify_solution(p, {256, 1}).max_abs, rq = verify_solution(q, {256, 1}).max_abs;
            INFO(f.model << "/" << f.id << " " << b.label() << " " << rp << " " << rq);
            if (rp == 0.0 && rq == 0.0) continue;
            CHECK(rp <= 2.0 * rq);
            CHECK(rq <= 2.0 * rp);
            ++pairs;
        }
    }
    CHECK(pairs >= 10);
}

TEST_CASE("audit of a correct closure is empty")
{
    CHECK(audit_constraints("nls", "dn").empty());
    CHECK(audit_constraints("kdv", "dnsq-plus-cndn").empty());
    CHECK(audit_constraints("al", "dn-plus-cn").empty());
}

TEST_CASE("Newton started on a correct closure stays there")
{
    for (auto [model, family] : {std::pair{"nls", "dn-plus-cn"}, {"mkdv", "dn-minus-cn"}, {"nls-kdv", "dn-dnsq"}}) {
        const auto& f = catalog::find_family(model, family);
        const auto sol = catalog::close_family(model, family, catalog::default_free(f));
        const auto nr = newton_rederive(sol, f.unknowns);
        INFO(model << "/" << family);
        CHECK(nr.converged);
        CHECK_FALSE(nr.collapsed);
        for (const auto& name : nr.solved) {
            const double v = sol.params.at(name);
            CHECK(std::abs(nr.params.at(name) - v) <= 1e-8 * std::max(1.0, std::abs(v)));
        }
    }
}

TEST_CASE("Newton recovers a displaced frequency")
{
    const auto& f = catalog::find_family("nls", "dn");
    const auto sol = catalog::close_family("nls", "dn", catalog::default_free(f));
    auto start = sol;
    start.params["omega"] += 0.3;
    const auto nr = newton_rederive(start, {"omega"});
    CHECK(nr.converged);
    CHECK(nr.params.at("omega") == doctest::Approx(sol.params.at("omega")).epsilon(1e-10));
}

TEST_CASE("superposed QNLS-KdV frequency needs the width factor")
{
    const auto ledger = audit_constraints("qnls-kdv", "dnsq-superposed-plus", catalog::parse_branch(
                                              catalog::find_family("qnls-kdv", "dnsq-superposed-plus"), "root=+1"));
    REQUIRE(ledger.size() == 1);
    const auto& e = ledger[0];
    CHECK(e.resolved);
    CHECK(e.newton_converged);
    CHECK(e.repair == "speed-width");
    CHECK(std::find(e.relations.begin(), e.relations.end(), "(2.26)") != e.relations.end());
    CHECK(e.residual_before > 1e-3);
    CHECK(e.residual_after <= 1e-10);
    CHECK(e.failing_points == e.panel_points);
}

TEST_CASE("only one reading of the QNLS-NLS pair admits its closures")
{
    const auto& f = catalog::find_family("qnls-nls", "dnsq-dn");
    const auto plain = audit_constraints("qnls-nls", "dnsq-dn", catalog::parse_branch(f, "root=+1"));
    CHECK(plain.empty());
    const auto& fx = catalog::find_family("qnls-nls-vx", "dnsq-dn");
    const auto vx = audit_constraints("qnls-nls-vx", "dnsq-dn", catalog::parse_branch(fx, "root=+1"));
    REQUIRE(vx.size() == 1);
    CHECK(vx[0].resolved);
    CHECK(vx[0].repair == "model-reading");
    CHECK(vx[0].evaluated_model == "qnls-nls");
}

TEST_CASE("sign changing root is reported unresolved")
{
    const auto& f = catalog::find_family("qnls", "dnsq");
    const auto ledger = audit_constraints("qnls", "dnsq", catalog::parse_branch(f, "root=+1"));
    REQUIRE(ledger.size() == 1);
    CHECK_FALSE(ledger[0].resolved);
    CHECK(ledger[0].repair.empty());
    CHECK_FALSE(ledger[0].note.empty());
}

TEST_CASE("identity A1 at a fixed point")
{
    const auto s = evaluate_identity("A1", 0.3, 0.2, 0.7);
    CHECK(std::abs(s.lhs - s.rhs) <= 1e-12);
    const double k = std::sqrt(0.7);
    using boost::math::jacobi_dn;
    const double lhs = std::pow(jacobi_dn(k, 0.3), 2) * (jacobi_dn(k, 0.5) + jacobi_dn(k, 0.1));
    CHECK(s.lhs == doctest::Approx(lhs).epsilon(1e-13));
}

TEST_CASE("identities hit a pole at a = 0")
{
    for (const auto& id : identity_ids()) CHECK_THROWS_AS(evaluate_identity(id, 0.4, 0.0, 0.5), PoleError);
}

TEST_CASE("identity A4 in the hyperbolic limit")
{
    for (double x : {-1.3, 0.2, 0.9}) {
        for (double a : {0.3, 1.1}) {
            const auto s = evaluate_identity("A4", x, a, 1.0);
            CHECK(std::abs(s.lhs - s.rhs) <= 1e-12);
            const double sech = 1.0 / std::cosh(x);
            CHECK(s.lhs == doctest::Approx(sech * sech * (1.0 / std::cosh(x + a) - 1.0 / std::cosh(x - a))));
        }
    }
}

TEST_CASE("identity sampling over a thousand guarded points")
{
    for (const auto& id : identity_ids()) {
        const auto r = verify_identity(id, 1000, 3);
        INFO(id << " " << r.max_error);
        CHECK(r.samples == 1000);
        CHECK(r.resampled >= 0);
        if (id == "A8") CHECK(r.max_error > 1e-3);
        else CHECK(r.max_error <= 1e-11);
    }
    CHECK(verify_identity("A2", 200, 5).max_error == verify_identity("A2", 200, 5).max_error);
    CHECK_THROWS_AS(verify_identity("A9", 10), UsageError);
}

TEST_CASE("verify_all on a filtered selection is deterministic")
{
    VerifyAllOptions o;
    o.model = "mkdv";
    o.threads = 2;
    const auto a = verify_all(o), b = verify_all(o);
    REQUIRE(a.results.size() == 4);
    CHECK(a.passed == 4);
    CHECK(a.identities.empty());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].family == b.results[i].family);
        CHECK(a.results[i].worst == b.results[i].worst);
        CHECK(a.results[i].points.size() == 3);
    }
    o.model = "nope";
    CHECK_THROWS_AS(verify_all(o), UsageError);
    o.model.clear();
    o.tolerance = 0;
    CHECK_THROWS_AS(verify_all(o), UsageError);
}

TEST_CASE("parallel_for visits every index once and rethrows")
{
    std::vector<int> hits(50, 0);
    parallel_for(50, 3, [&](int i) { ++hits[i]; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(4, 2, [](int i) {
                        if (i == 2) throw UsageError("x");
                    }),
                    UsageError);
}

}  // TEST_SUITE
