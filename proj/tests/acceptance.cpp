// Acceptance run: one PASS/FAIL line per criterion, then the analysis of every red criterion.
// usage: acceptance <ellwave binary> <scratch directory>
//
// Exit status is 0 when every criterion is green or red for its documented blocking reason (checked
// here, not assumed); any other failure exits 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ellwave/catalog.hpp"
#include "ellwave/cli.hpp"
#include "ellwave/elliptic.hpp"
#include "ellwave/evolve.hpp"
#include "ellwave/verify.hpp"

using namespace ellwave;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    bool blocked = false;  // red for the documented reason
    std::string metrics;
    std::string analysis;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// 1. Elliptic kernel
Outcome elliptic_kernel()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ux(-30.0, 30.0), um(0.0, 1.0);
    double pyth = 0.0, dnm = 0.0, prod = 0.0, limits = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double x = ux(rng), m = um(rng);
        const auto [sn, cn, dn] = elliptic::jacobi(x, m);
        pyth = std::max(pyth, std::abs(sn * sn + cn * cn - 1.0));
        dnm = std::max(dnm, std::abs(dn * dn + m * sn * sn - 1.0));
        prod = std::max(prod, std::abs((dn + std::sqrt(m) * cn) * (dn - std::sqrt(m) * cn) - (1.0 - m)));
        const auto z = elliptic::jacobi(x, 0.0), o = elliptic::jacobi(x, 1.0);
        const double sech = 1.0 / std::cosh(x);
        limits = std::max({limits, std::abs(z.sn - std::sin(x)), std::abs(z.cn - std::cos(x)), std::abs(z.dn - 1.0),
                           std::abs(o.sn - std::tanh(x)), std::abs(o.cn - sech), std::abs(o.dn - sech)});
    }
    const double s = seconds_since(t0);
    Outcome o;
    o.pass = pyth <= 1e-13 && dnm <= 1e-13 && prod <= 1e-13 && limits <= 1e-13 && s < 1.0;
    o.metrics = "sn^2+cn^2-1 " + sci(pyth) + ", dn^2+m sn^2-1 " + sci(dnm) + ", product " + sci(prod) +
                ", m=0/m=1 closed forms " + sci(limits) + " (limit 1e-13), " + sci(s) + " s (limit 1 s)";
    return o;
}

const std::set<std::string> open_question_relations{"(2.21)", "(2.26)", "(1.30)", "(1.33)", "(1.35)", "(2.41)",
                                                    "(6.67)", "(6.55)"};

// 2. Closure residuals over every family and branch
Outcome closure_panel(const cli::Manifest& manifest)
{
    const auto t0 = std::chrono::steady_clock::now();
    verify::VerifyAllOptions opts;
    opts.tolerance = 1e-9;
    opts.seed = 1;
    opts.panel = 3;
    opts.identity_samples = 0;
    const auto s = verify::verify_all(opts);
    const double secs = seconds_since(t0);

    int unresolved = 0, outside = 0, unlisted = 0;
    std::set<std::string> extra_relations;
    std::ostringstream fails;
    for (const auto& r : s.results) {
        if (r.status == "pass") continue;
        const auto it = manifest.entries.find(cli::manifest_key(r.model, r.family, r.branch));
        const bool listed = it != manifest.entries.end() && it->second.expected == r.status &&
                            (r.status != "repaired" || (!r.ledger.empty() && r.ledger.front().repair == it->second.repair));
        unlisted += !listed;
        if (r.status == "fail") {
            ++unresolved;
            if (listed && it->second.kind != "no-solution") ++unlisted;
            fails << "    " << r.model << "/" << r.family << " [" << r.branch << "]\n";
            continue;
        }
        bool out = false;
        for (const auto& e : r.ledger) {
            for (const auto& rel : e.relations) {
                if (!open_question_relations.count(rel)) {
                    out = true;
                    extra_relations.insert(rel);
                }
            }
        }
        outside += out;
    }
    Outcome o;
    o.pass = unresolved == 0 && outside == 0 && secs < 30.0;
    o.blocked = !o.pass && unlisted == 0 && secs < 30.0;
    o.metrics = std::to_string(s.results.size()) + " family branches: " + std::to_string(s.passed) + " pass, " +
                std::to_string(s.repaired) + " repaired (Newton closure <= 1e-9, named repair), " +
                std::to_string(unresolved) + " without any closure; " + std::to_string(outside) +
                " repaired entries cite relations outside the expected list; " + sci(secs) + " s (limit 30 s)";
    std::string rels;
    for (const auto& r : extra_relations) rels += r + " ";
    o.analysis =
        "  The expected ledger is limited to (2.21)/(2.26), (1.30)/(1.33)/(1.35), (2.41), (6.67) and the (6.55) variant.\n"
        "  Two things keep this red:\n"
        "  (a) " + std::to_string(unresolved) + " branches have no closure at all. Newton from the printed values and from\n"
        "      every named repair fails at each panel point, and no re-derived closure exists to pass <= 1e-9.\n"
        "      These are the sign-changing roots of the offset quadratics, the offset=-1 and cn branches of the\n"
        "      quadratic-cubic NLS, and the m < 1/2 part of the phi^2-phi^3-phi^4 cn panel:\n" +
        fails.str() +
        "  (b) Printed closures that fail but are repaired by a named alternative cite relations outside the list:\n"
        "      " + rels + "\n"
        "  Each of these is listed in data/known_discrepancies.json with its kind and rationale.\n";
    return o;
}

// 3. Identities
Outcome identities()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<verify::IdentityReport> reps;
    for (const auto& id : verify::identity_ids()) reps.push_back(verify::verify_identity(id, 1000, 1));
    const double secs = seconds_since(t0);
    bool printed_ok = true, only_a8 = true, corrected_ok = false;
    std::string line;
    for (const auto& r : reps) {
        const bool ok = r.max_error <= 1e-11 && r.samples >= 1000;
        if (r.id == "A8-corrected") {
            corrected_ok = ok;
            continue;
        }
        printed_ok = printed_ok && ok;
        if (!ok && r.id != "A8") only_a8 = false;
        line += r.id + " " + sci(r.max_error) + ", ";
    }
    Outcome o;
    o.pass = printed_ok && secs < 5.0;
    o.blocked = !o.pass && only_a8 && corrected_ok && secs < 5.0;
    o.metrics = line + "A8-corrected " + sci(reps.back().max_error) + " (limit 1e-11, 1000 samples), " + sci(secs) +
                " s (limit 5 s)";
    o.analysis =
        "  A8 as printed drops a factor m on its right-hand side, so the two sides differ at O(1) on generic\n"
        "  samples. With the factor restored (A8-corrected) it holds to roundoff. A1-A7 hold.\n";
    return o;
}

// 4. m -> 1 limits of single-field families against sech / sech^2 / vacuum forms
Outcome solitary_limits()
{
    int checked = 0, bad = 0;
    double worst = 0.0;
    std::string first_bad;
    for (const auto& f : catalog::all_families()) {
        if (models::find_model(f.model).fields.size() != 1) continue;
        for (const auto& b : catalog::branches(f)) {
            auto free = catalog::default_free(f, b);
            free["m"] = 1.0;
            double err = 0.0;
            try {
                const auto s = catalog::close_family(f.model, f.id, free, b);
                const auto a = catalog::ansatz(s);
                const auto& shape = a.fields[0];
                for (int i = 0; i < 64; ++i) {
                    const double x = a.lattice ? i - 32.0 : -8.0 + 16.0 * i / 64.0;
                    const double xi = a.beta * (x + a.shift);
                    const double sech = 1.0 / std::cosh(xi);
                    double env = shape.offset;
                    for (const auto& [basis, amp] : shape.terms) {
                        const bool first = basis == catalog::Basis::Dn || basis == catalog::Basis::Cn;
                        env += amp * (first ? sech : sech * sech);
                    }
                    const std::complex<double> expect =
                        shape.complex ? env * std::exp(std::complex<double>(0, shape.k * x - shape.phase)) : env;
                    err = std::max(err, std::abs(catalog::evaluate_profile(s, x, 0.0)[0] - expect));
                }
            } catch (const std::exception& e) {
                err = INFINITY;
            }
            worst = std::max(worst, err);
            ++checked;
            if (!(err <= 1e-12)) {
                ++bad;
                if (first_bad.empty()) first_bad = f.model + "/" + f.id + " [" + b.label() + "]";
            }
        }
    }
    Outcome o;
    o.pass = bad == 0 && checked > 0;
    o.metrics = std::to_string(checked) + " single-field family branches, worst deviation " + sci(worst) +
                " (limit 1e-12, 64 points)" + (bad ? ", first failure " + first_bad : "");
    return o;
}

catalog::ClosedSolution closed(const std::string& model, const std::string& family, catalog::ParamMap free)
{
    return catalog::close_family(model, family, free);
}

const catalog::ClosedSolution& nls_case()
{
    static const auto s = closed("nls", "dn-plus-cn", {{"g", 2}, {"beta", 1}, {"m", 0.5}, {"k", 0}});
    return s;
}

const catalog::ClosedSolution& kdv_case()
{
    static const auto s = closed("kdv", "dnsq-plus-cndn", {{"g", 12}, {"beta", 1}, {"m", 0.5}});
    return s;
}

const catalog::ClosedSolution& al_case()
{
    static const auto s = closed("al", "dn-plus-cn",
                                 {{"g", 1}, {"beta", 4.0 * elliptic::quarter_period(0.5) / 8.0}, {"m", 0.5},
                                  {"k", std::numbers::pi / 8.0}});
    return s;
}

// 5. Evolution fidelity
Outcome evolution()
{
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    const auto a = evolve::evolve_schrodinger(nls_case(), {256, 1}, 1e-4, 0.5);
    const double ta = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto b = evolve::evolve_kdv_family(kdv_case(), {256, 1}, 1e-5, 0.1);
    const double tb = seconds_since(t0);
    const double speed = evolve::measured_speed(b), v = (5.0 - 0.5) * 1.0;
    t0 = std::chrono::steady_clock::now();
    const auto c = evolve::evolve_lattice(al_case(), 32, 1e-4, 1.0);
    const double tc = seconds_since(t0);
    const bool pa = a.final_error() <= 1e-6 && a.max_drift() <= 1e-10 && ta < 60.0;
    const bool pb = b.final_error() <= 1e-6 && std::abs(speed - v) <= 1e-3 * v && tb < 60.0;
    const bool pc = c.final_error() <= 1e-6 && c.quantities[0].drift <= 1e-8 && tc < 60.0;
    o.pass = pa && pb && pc;
    o.metrics = "(a) NLS error " + sci(a.final_error()) + ", norm drift " + sci(a.max_drift()) + ", " + sci(ta) +
                " s; (b) KdV error " + sci(b.final_error()) + ", speed " + std::to_string(speed) + " vs " +
                std::to_string(v) + ", " + sci(tb) + " s; (c) AL error " + sci(c.final_error()) + ", log-norm drift " +
                sci(c.quantities[0].drift) + ", " + sci(tc) + " s";
    return o;
}

// 6. Order of accuracy at the pinned steps
Outcome order_of_accuracy()
{
    const double kb1 = evolve::evolve_kdv_family(kdv_case(), {256, 1}, 1e-5, 0.1, 1).final_error();
    const double kb2 = evolve::evolve_kdv_family(kdv_case(), {256, 1}, 5e-6, 0.1, 1).final_error();
    const double lc1 = evolve::evolve_lattice(al_case(), 32, 1e-4, 1.0, 1).final_error();
    const double lc2 = evolve::evolve_lattice(al_case(), 32, 5e-5, 1.0, 1).final_error();
    const double rb = kb1 / kb2, rc = lc1 / lc2;
    // the same integrators where the time error dominates
    const double cb1 = evolve::evolve_kdv_family(kdv_case(), {256, 1}, 1e-3, 0.1, 1).final_error();
    const double cb2 = evolve::evolve_kdv_family(kdv_case(), {256, 1}, 5e-4, 0.1, 1).final_error();
    const double cc1 = evolve::evolve_lattice(al_case(), 32, 1e-3, 1.0, 1).final_error();
    const double cc2 = evolve::evolve_lattice(al_case(), 32, 5e-4, 1.0, 1).final_error();
    Outcome o;
    o.pass = rb >= 3.5 && rc >= 3.5;
    const bool floor = kb1 < 1e-11 && kb2 < 1e-11 && lc1 < 1e-11 && lc2 < 1e-11;
    o.blocked = !o.pass && floor && cb1 / cb2 >= 3.5 && cc1 / cc2 >= 3.5;
    o.metrics = "(b) dt 1e-5 -> 5e-6: " + sci(kb1) + " -> " + sci(kb2) + ", ratio " + sci(rb) +
                "; (c) dt 1e-4 -> 5e-5: " + sci(lc1) + " -> " + sci(lc2) + ", ratio " + sci(rc) + " (limit 3.5)";
    o.analysis =
        "  At the pinned steps both runs already sit on the roundoff floor (errors below 1e-11), so halving dt\n"
        "  cannot reduce the error and accumulated rounding over twice the steps can even raise it.\n"
        "  Where the time error dominates the same integrators show fourth order:\n"
        "  (b) dt 1e-3 -> 5e-4: " + sci(cb1) + " -> " + sci(cb2) + ", ratio " + sci(cb1 / cb2) + "\n" +
        "  (c) dt 1e-3 -> 5e-4: " + sci(cc1) + " -> " + sci(cc2) + ", ratio " + sci(cc1 / cc2) + "\n";
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 7. CLI determinism and exit status under the shipped manifest
Outcome cli_determinism(const std::string& binary, const fs::path& scratch)
{
    int codes[2];
    for (int i = 0; i < 2; ++i) {
        const auto dir = scratch / ("run" + std::to_string(i + 1));
        fs::remove_all(dir);
        const std::string cmd = "\"" + binary + "\" verify-all --tol 1e-9 --seed 1 --out-dir \"" + dir.string() +
                                "\" > \"" + (scratch / ("run" + std::to_string(i + 1) + ".log")).string() + "\" 2>&1";
        const int st = std::system(cmd.c_str());
        codes[i] = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    }
    const auto r1 = slurp(scratch / "run1" / "report.json"), r2 = slurp(scratch / "run2" / "report.json");
    Outcome o;
    o.pass = codes[0] == 0 && codes[1] == 0 && !r1.empty() && r1 == r2;
    o.metrics = "exit codes " + std::to_string(codes[0]) + ", " + std::to_string(codes[1]) + "; report.json " +
                std::to_string(r1.size()) + " bytes, " + (r1 == r2 ? "byte-identical" : "DIFFERENT");
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc < 3) {
        std::cerr << "usage: acceptance <ellwave binary> <scratch directory>\n";
        return 2;
    }
    const fs::path scratch = argv[2];
    fs::create_directories(scratch);
    const auto manifest = cli::load_manifest(cli::default_manifest_path());

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"elliptic kernel", elliptic_kernel},
        {"closure residuals", [&] { return closure_panel(manifest); }},
        {"identities A1-A8", identities},
        {"m -> 1 limits", solitary_limits},
        {"evolution fidelity", evolution},
        {"order of accuracy", order_of_accuracy},
        {"CLI determinism", [&] { return cli_determinism(argv[1], scratch); }},
    };
    std::vector<Outcome> results;
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.metrics = std::string("exception: ") + e.what();
        }
        std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << "  "
                  << o.metrics << std::endl;
        if (!o.pass && !o.blocked) ++unexpected;
        results.push_back(std::move(o));
    }
    bool header = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].pass) continue;
        if (!header) std::cout << "\nanalysis of red criteria\n";
        header = true;
        std::cout << "criterion " << i + 1 << (results[i].blocked ? " (blocked, reason confirmed)" : " (UNEXPECTED)")
                  << ":\n"
                  << results[i].analysis;
    }
    std::cout << "\n" << (unexpected ? "acceptance: unexpected failures\n" : "acceptance: every red criterion is blocked for its documented reason\n");
    return unexpected ? 1 : 0;
}
