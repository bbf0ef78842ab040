#include "ellwave/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ellwave/errors.hpp"
#include "ellwave/evolve.hpp"
#include "ellwave/verify.hpp"

namespace ellwave::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

double parse_number(const std::string& text, const std::string& flag)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || p != end || !std::isfinite(v)) {
        throw UsageError(flag + ": malformed value '" + text + "'");
    }
    return v;
}

catalog::ParamMap parse_params(const std::vector<std::string>& items)
{
    catalog::ParamMap out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--param: malformed value '" + item + "' (expected name=value)");
        out[item.substr(0, eq)] = parse_number(item.substr(eq + 1), "--param " + item.substr(0, eq));
    }
    return out;
}

std::vector<std::string> resolve_families(const std::string& model, const std::string& family, bool single)
{
    std::vector<std::string> ids;
    const auto all = catalog::list_families(model);
    for (const auto& f : all) {
        if (f.id == family) return {f.id};
    }
    for (const auto& f : all) {
        if (f.id.find(family) != std::string::npos) ids.push_back(f.id);
    }
    if (ids.empty()) throw UsageError("--family: '" + family + "' is not in the catalog for model '" + model + "'");
    if (single && ids.size() > 1) {
        std::string list;
        for (const auto& id : ids) list += (list.empty() ? "" : ", ") + id;
        throw UsageError("--family: '" + family + "' matches several families (" + list + "); give an exact id");
    }
    return ids;
}

void check_params(const RunConfig& c)
{
    for (const auto& [name, value] : c.params) {
        bool known = false;
        std::string free;
        for (const auto& id : c.families) {
            const auto& f = catalog::find_family(c.model, id);
            known = known || std::count(f.free.begin(), f.free.end(), name);
            if (free.empty()) {
                for (const auto& n : f.free) free += (free.empty() ? "" : ", ") + n;
            }
        }
        if (!known) throw UsageError("--param: '" + name + "' is not a free parameter here (free: " + free + ")");
    }
}

catalog::Branch branch_for(const catalog::FamilySpec& f, const std::string& label)
{
    return catalog::parse_branch(f, label == "default" ? "" : label);
}

std::vector<catalog::Branch> selected_branches(const catalog::FamilySpec& f, const std::string& label)
{
    if (label.empty()) return catalog::branches(f);
    return {branch_for(f, label)};
}

catalog::ParamMap free_point(const catalog::FamilySpec& f, const catalog::Branch& b, const catalog::ParamMap& given)
{
    auto p = catalog::default_free(f, b);
    for (const auto& [k, v] : given) {
        if (std::count(f.free.begin(), f.free.end(), k)) p[k] = v;
    }
    return p;
}

verify::Method method_of(const std::string& name)
{
    const auto m = verify::parse_method(name);
    if (!m) throw UsageError("--method: unknown method '" + name + "' (analytic, spectral, finite-difference)");
    return *m;
}

// ---- JSON ----

json residual_json(const verify::ResidualReport& r)
{
    return {{"max", r.max_abs}, {"rms", r.rms}, {"max_relative", r.max_relative}, {"method", verify::method_name(r.method)},
            {"points", r.points}};
}

json ledger_json(const verify::LedgerEntry& e)
{
    return {{"model", e.model},
            {"family", e.family},
            {"branch", e.branch},
            {"relations", e.relations},
            {"repair", e.repair},
            {"repair_description", e.repair_description},
            {"evaluated_model", e.evaluated_model},
            {"free", e.free},
            {"printed", e.printed},
            {"rederived", e.rederived},
            {"residual_before", e.residual_before},
            {"residual_after", e.residual_after},
            {"panel_points", e.panel_points},
            {"failing_points", e.failing_points},
            {"newton_converged", e.newton_converged},
            {"resolved", e.resolved},
            {"note", e.note}};
}

struct Check {
    bool ok = true;
    std::string verdict;  // "pass", "expected", "unexpected", "listed-but-passes"
    std::string detail;
};

Check check_family(const verify::FamilyResult& r, const Manifest& m)
{
    const auto it = m.entries.find(manifest_key(r.model, r.family, r.branch));
    if (r.status == "pass") {
        if (it != m.entries.end()) return {true, "listed-but-passes", "listed as " + it->second.expected + " but passes"};
        return {true, "pass", ""};
    }
    if (it == m.entries.end()) return {false, "unexpected", r.status + " and not listed in the manifest"};
    const auto& e = it->second;
    if (e.expected != r.status) return {false, "unexpected", r.status + " but the manifest expects " + e.expected};
    if (r.status == "repaired") {
        const std::string repair = r.ledger.empty() ? "" : r.ledger.front().repair;
        if (repair != e.repair) return {false, "unexpected", "repaired by '" + repair + "', manifest names '" + e.repair + "'"};
    }
    return {true, "expected", e.kind};
}

Check check_identity(const verify::IdentityReport& r, double tol, const Manifest& m)
{
    const bool pass = r.max_error <= tol;
    const auto it = m.identities.find(r.id);
    if (pass) {
        if (it != m.identities.end()) return {true, "listed-but-passes", "listed as " + it->second.expected + " but passes"};
        return {true, "pass", ""};
    }
    if (it == m.identities.end() || it->second.expected != "fail") return {false, "unexpected", "not listed in the manifest"};
    return {true, "expected", "correction: " + it->second.correction};
}

json check_json(const Check& c) { return {{"verdict", c.verdict}, {"detail", c.detail}}; }

json family_json(const verify::FamilyResult& r, const Check& c)
{
    json points = json::array();
    verify::ResidualReport worst;
    bool have = false;
    for (const auto& p : r.points) {
        json jp{{"free", p.free}, {"params", p.params}};
        if (p.error.empty()) {
            jp["residual"] = residual_json(p.residual);
            if (!have || p.residual.max_relative > worst.max_relative) worst = p.residual;
            have = true;
        } else {
            jp["error"] = p.error;
        }
        points.push_back(std::move(jp));
    }
    json ledger = json::array();
    for (const auto& e : r.ledger) ledger.push_back(ledger_json(e));
    json out{{"model", r.model},
             {"family", r.family},
             {"branch", r.branch},
             {"relations", r.relations},
             {"status", r.status},
             {"worst_relative", r.worst},
             {"params", r.points.empty() ? json::object() : json(r.points.front().params)},
             {"points", points},
             {"ledger", ledger},
             {"manifest", check_json(c)}};
    out["residual"] = have ? residual_json(worst) : json(nullptr);
    return out;
}

json identity_json(const verify::IdentityReport& r, double tol, const Check& c)
{
    return {{"id", r.id},
            {"samples", r.samples},
            {"resampled", r.resampled},
            {"max_error", r.max_error},
            {"status", r.max_error <= tol ? "pass" : "fail"},
            {"manifest", check_json(c)}};
}

std::string fmt(double v)
{
    std::ostringstream s;
    s << std::setprecision(3) << std::scientific << v;
    return s.str();
}

// ---- output ----

struct Output {
    json report;
    std::string summary;
    std::vector<std::pair<std::string, std::string>> files;  // extra files: name, contents
};

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot open " + p.string() + " for writing");
    f << text;
    if (!f.good()) throw IoError("write to " + p.string() + " failed");
}

std::string utc_now()
{
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_outputs(const RunConfig& c, const Output& o, double seconds)
{
    const fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    write_file(dir / "report.json", o.report.dump(2) + "\n");
    write_file(dir / "summary.txt", o.summary);
    for (const auto& [name, text] : o.files) write_file(dir / name, text);
    json meta{{"command", command_name(c.command)},
              {"timestamp", utc_now()},
              {"runtime_seconds", seconds},
              {"threads", c.threads},
              {"out_dir", c.out_dir},
              {"manifest", c.manifest}};
    write_file(dir / "metadata.json", meta.dump(2) + "\n");
}

json run_json(const RunConfig& c)
{
    return {{"command", command_name(c.command)}, {"seed", c.seed}, {"tolerance", c.tolerance}};
}

// ---- commands ----

struct Failures {
    std::vector<std::string> names;
    void add(const std::string& what) { names.push_back(what); }
};

std::string label(const std::string& model, const std::string& family, const std::string& branch)
{
    return model + "/" + family + (branch == "default" ? "" : " [" + branch + "]");
}

void family_lines(std::ostringstream& s, const verify::FamilyResult& r, const Check& c)
{
    s << std::left << std::setw(9) << r.status << ' ' << std::setw(58) << label(r.model, r.family, r.branch)
      << " worst=" << fmt(r.worst);
    if (!r.ledger.empty() && !r.ledger.front().repair.empty()) s << " repair=" << r.ledger.front().repair;
    s << " manifest=" << c.verdict << '\n';
}

Output families_report(const RunConfig& c, const std::vector<verify::FamilyResult>& results,
                       const std::vector<verify::IdentityReport>& ids, const Manifest& m, json run, Failures& fail)
{
    Output o;
    std::ostringstream s;
    json jr = json::array(), ji = json::array();
    int passed = 0, repaired = 0, failed = 0, expected = 0;
    for (const auto& r : results) {
        const auto ch = check_family(r, m);
        jr.push_back(family_json(r, ch));
        family_lines(s, r, ch);
        if (r.status == "pass") ++passed;
        else if (r.status == "repaired") ++repaired;
        else ++failed;
        if (ch.verdict == "expected") ++expected;
        if (!ch.ok) fail.add(label(r.model, r.family, r.branch) + ": " + ch.detail);
    }
    int id_failed = 0;
    for (const auto& r : ids) {
        const auto ch = check_identity(r, c.identity_tolerance, m);
        ji.push_back(identity_json(r, c.identity_tolerance, ch));
        const bool pass = r.max_error <= c.identity_tolerance;
        id_failed += !pass;
        s << std::left << std::setw(9) << (pass ? "pass" : "fail") << " identity " << std::setw(49) << r.id
          << " max_error=" << fmt(r.max_error) << " manifest=" << ch.verdict << '\n';
        if (!ch.ok) fail.add("identity " + r.id + ": " + ch.detail);
    }
    s << "families: " << results.size() << " (pass " << passed << ", repaired " << repaired << ", fail " << failed
      << "; " << expected << " as listed in the manifest)\n";
    if (!ids.empty()) s << "identities: " << ids.size() << " (fail " << id_failed << ")\n";
    s << (fail.names.empty() ? "result: ok\n" : "result: verification failure\n");
    o.report["run"] = std::move(run);
    o.report["results"] = jr;
    o.report["identities"] = ji;
    o.report["summary"] = {{"families", results.size()},
                           {"passed", passed},
                           {"repaired", repaired},
                           {"failed", failed},
                           {"listed", expected},
                           {"identity_failures", id_failed},
                           {"unexpected", fail.names}};
    o.summary = s.str();
    return o;
}

Output cmd_verify_all(const RunConfig& c, const Manifest& m, Failures& fail)
{
    verify::VerifyAllOptions o;
    o.tolerance = c.tolerance;
    o.seed = c.seed;
    o.panel = c.panel;
    o.audit_panel = c.audit_panel;
    o.identity_samples = c.samples;
    o.grid = {c.points, c.periods};
    o.method = method_of(c.method);
    o.threads = c.threads;
    o.model = c.model;
    o.family = c.family;
    const auto s = verify::verify_all(o);
    auto run = run_json(c);
    run["panel"] = c.panel;
    run["audit_panel"] = c.audit_panel;
    run["identity_samples"] = c.samples;
    run["identity_tolerance"] = c.identity_tolerance;
    run["points"] = c.points;
    run["periods"] = c.periods;
    run["method"] = c.method;
    run["model"] = c.model;
    run["family"] = c.family;
    return families_report(c, s.results, s.identities, m, std::move(run), fail);
}

Output cmd_verify(const RunConfig& c, const Manifest& m, Failures& fail)
{
    std::vector<std::pair<std::string, catalog::Branch>> tasks;
    for (const auto& id : c.families) {
        for (const auto& b : selected_branches(catalog::find_family(c.model, id), c.branch)) tasks.emplace_back(id, b);
    }
    verify::VerifyAllOptions o;
    o.tolerance = c.tolerance;
    o.seed = c.seed;
    o.audit_panel = c.audit_panel;
    o.grid = {c.points, c.periods};
    o.method = method_of(c.method);
    std::vector<verify::FamilyResult> results(tasks.size());
    verify::parallel_for(static_cast<int>(tasks.size()), c.threads, [&](int i) {
        const auto& f = catalog::find_family(c.model, tasks[i].first);
        results[i] = verify::verify_family(c.model, f.id, tasks[i].second, {free_point(f, tasks[i].second, c.params)}, o);
    });
    auto run = run_json(c);
    run["model"] = catalog::find_family(c.model, c.families.front()).model;
    run["family"] = c.family;
    run["branch"] = c.branch;
    run["params"] = c.params;
    run["points"] = c.points;
    run["periods"] = c.periods;
    run["method"] = c.method;
    run["audit_panel"] = c.audit_panel;
    return families_report(c, results, {}, m, std::move(run), fail);
}

Output cmd_audit(const RunConfig& c, const Manifest& m, Failures& fail)
{
    std::vector<std::pair<std::string, catalog::Branch>> tasks;
    for (const auto& id : c.families) {
        for (const auto& b : selected_branches(catalog::find_family(c.model, id), c.branch)) tasks.emplace_back(id, b);
    }
    std::vector<std::vector<verify::LedgerEntry>> found(tasks.size());
    verify::parallel_for(static_cast<int>(tasks.size()), c.threads, [&](int i) {
        const auto& f = catalog::find_family(c.model, tasks[i].first);
        verify::AuditOptions o{c.audit_panel, c.seed, c.tolerance, {}};
        if (!c.params.empty()) o.extra_points.push_back(free_point(f, tasks[i].second, c.params));
        found[i] = verify::audit_constraints(f.model, f.id, tasks[i].second, o);
    });
    Output out;
    std::ostringstream s;
    json ledger = json::array(), checked = json::array();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& f = catalog::find_family(c.model, tasks[i].first);
        const std::string br = tasks[i].second.label();
        verify::FamilyResult r;
        r.model = f.model;
        r.family = f.id;
        r.branch = br;
        r.ledger = found[i];
        const bool resolved = !r.ledger.empty() && std::all_of(r.ledger.begin(), r.ledger.end(),
                                                                [](const auto& e) { return e.resolved; });
        r.status = r.ledger.empty() ? "pass" : (resolved ? "repaired" : "fail");
        const auto ch = check_family(r, m);
        checked.push_back({{"model", f.model},
                           {"family", f.id},
                           {"branch", br},
                           {"relations", f.relations},
                           {"status", r.status},
                           {"entries", r.ledger.size()},
                           {"manifest", check_json(ch)}});
        for (const auto& e : r.ledger) {
            ledger.push_back(ledger_json(e));
            s << label(e.model, e.family, e.branch) << ": relations";
            for (const auto& rel : e.relations) s << ' ' << rel;
            s << "; " << (e.resolved ? "resolved by '" + e.repair + "'" : std::string("unresolved"));
            if (!e.repair_description.empty()) s << " (" << e.repair_description << ")";
            s << "; residual " << fmt(e.residual_before) << " -> " << fmt(e.residual_after);
            if (!e.note.empty()) s << "; " << e.note;
            s << '\n';
        }
        if (!ch.ok) fail.add(label(f.model, f.id, br) + ": " + ch.detail);
    }
    s << "audited " << tasks.size() << " family branches, " << ledger.size() << " ledger entries\n";
    s << (fail.names.empty() ? "result: ok\n" : "result: verification failure\n");
    auto run = run_json(c);
    run["model"] = catalog::find_family(c.model, c.families.front()).model;
    run["family"] = c.family;
    run["branch"] = c.branch;
    run["params"] = c.params;
    run["audit_panel"] = c.audit_panel;
    out.report["run"] = run;
    out.report["checked"] = checked;
    out.report["ledger"] = ledger;
    out.report["unexpected"] = fail.names;
    out.summary = s.str();
    out.files.emplace_back("ledger.json", ledger.dump(2) + "\n");
    return out;
}

Output cmd_identities(const RunConfig& c, const Manifest& m, Failures& fail)
{
    const auto ids = verify::identity_ids();
    std::vector<verify::IdentityReport> reports(ids.size());
    verify::parallel_for(static_cast<int>(ids.size()), c.threads,
                         [&](int i) { reports[i] = verify::verify_identity(ids[i], c.samples, c.seed); });
    auto run = run_json(c);
    run["samples"] = c.samples;
    run["identity_tolerance"] = c.identity_tolerance;
    auto o = families_report(c, {}, reports, m, std::move(run), fail);
    o.report.erase("results");
    return o;
}

struct Selected {
    catalog::ClosedSolution sol;
    const catalog::FamilySpec* spec;
};

Selected close_selected(const RunConfig& c)
{
    const auto& f = catalog::find_family(c.model, c.families.front());
    const auto b = branch_for(f, c.branch);
    return {catalog::close_family(f.model, f.id, free_point(f, b, c.params), b), &f};
}

json solution_json(const Selected& s)
{
    return {{"model", s.sol.model},
            {"family", s.sol.family},
            {"branch", s.sol.branch.label()},
            {"relations", s.spec->relations},
            {"params", s.sol.params}};
}

Output cmd_evolve(const RunConfig& c, Failures& fail)
{
    const auto s = close_selected(c);
    const verify::GridSpec grid{c.points, c.periods};
    const double dt = c.dt > 0.0 ? c.dt : evolve::suggested_dt(s.sol, grid);
    const auto r = evolve::evolve_solution(s.sol, grid, dt, c.T, c.snapshots);
    Output o;
    auto run = run_json(c);
    run["points"] = c.points;
    run["periods"] = c.periods;
    run["T"] = c.T;
    run["snapshots"] = c.snapshots;
    run["max_error"] = c.max_error;
    json q = json::array();
    for (const auto& x : r.quantities) q.push_back({{"name", x.name}, {"values", x.values}, {"drift", x.drift}});
    json rep{{"run", run},
             {"solution", solution_json(s)},
             {"integrator", evolve::integrator_name(r.integrator)},
             {"dt", r.dt},
             {"steps", r.steps},
             {"length", r.length},
             {"lattice", r.lattice},
             {"times", r.times},
             {"errors", r.errors},
             {"final_error", r.final_error()},
             {"max_drift", r.max_drift()},
             {"quantities", q}};
    std::ostringstream sm;
    sm << "solution: " << label(s.sol.model, s.sol.family, s.sol.branch.label()) << '\n'
       << "integrator: " << evolve::integrator_name(r.integrator) << ", dt=" << fmt(r.dt) << ", steps=" << r.steps
       << '\n'
       << "final relative L2 error: " << fmt(r.final_error()) << " (limit " << fmt(c.max_error) << ")\n";
    for (const auto& x : r.quantities) sm << "drift " << x.name << ": " << fmt(x.drift) << '\n';
    if (!r.lattice) {
        const double exact = catalog::ansatz(s.sol).velocity;
        const double measured = evolve::measured_speed(r);
        rep["velocity"] = {{"exact", exact}, {"measured", measured}};
        sm << "speed: measured " << std::setprecision(10) << measured << ", closure " << exact << '\n';
    }
    const bool ok = r.final_error() <= c.max_error;
    rep["status"] = ok ? "pass" : "fail";
    if (!ok) fail.add(label(s.sol.model, s.sol.family, s.sol.branch.label()) + ": final error " + fmt(r.final_error()) +
                      " exceeds " + fmt(c.max_error));
    sm << (ok ? "result: ok\n" : "result: verification failure\n");
    std::ostringstream series, profile;
    evolve::write_series_csv(r, series);
    evolve::write_profile_csv(r, profile);
    o.report = std::move(rep);
    o.summary = sm.str();
    o.files.emplace_back("series.csv", series.str());
    o.files.emplace_back("profile.csv", profile.str());
    return o;
}

Output cmd_probe(const RunConfig& c)
{
    const auto s = close_selected(c);
    evolve::ProbeOptions po;
    po.grid = {c.points, c.periods};
    po.dt = c.dt;
    po.seed = c.seed;
    po.threads = c.threads;
    const auto p = evolve::perturbation_probe(s.sol, c.epsilon, c.T, c.modes, po);
    json modes = json::array();
    std::ostringstream sm;
    sm << "solution: " << label(s.sol.model, s.sol.family, s.sol.branch.label()) << '\n'
       << "epsilon=" << fmt(p.epsilon) << " T=" << p.T << " dt=" << fmt(p.dt)
       << " reference error=" << fmt(p.reference_error) << '\n';
    for (const auto& m : p.modes) {
        modes.push_back({{"mode", m.mode}, {"initial_norm", m.initial_norm}, {"final_norm", m.final_norm}, {"growth", m.growth}});
        sm << "mode " << m.mode << ": growth " << fmt(m.growth) << '\n';
    }
    auto run = run_json(c);
    run["points"] = c.points;
    run["periods"] = c.periods;
    run["T"] = c.T;
    run["epsilon"] = c.epsilon;
    run["modes"] = c.modes;
    Output o;
    o.report = {{"run", run},
                {"solution", solution_json(s)},
                {"epsilon", p.epsilon},
                {"T", p.T},
                {"dt", p.dt},
                {"reference_error", p.reference_error},
                {"modes", modes}};
    o.summary = sm.str();
    return o;
}

Output cmd_list(const RunConfig& c)
{
    std::string model_id;
    if (!c.model.empty()) model_id = models::find_model(c.model).id;
    json jm = json::array(), jf = json::array();
    std::ostringstream s;
    for (const auto& t : models::registry()) {
        if (!model_id.empty() && t.id != model_id) continue;
        jm.push_back({{"id", t.id},
                      {"name", t.display},
                      {"kind", models::kind_name(t.kind)},
                      {"coefficients", t.coefficients},
                      {"equation", t.equation},
                      {"form", t.form}});
        s << t.id << " (" << t.display << ", " << t.equation << ")\n";
        for (const auto& f : catalog::list_families(t.id)) {
            json br = json::array();
            for (const auto& b : catalog::branches(f)) br.push_back(b.label());
            jf.push_back({{"model", f.model},
                          {"id", f.id},
                          {"kind", catalog::family_kind_name(f.kind)},
                          {"profile", f.profile},
                          {"relations", f.relations},
                          {"free", f.free},
                          {"unknowns", f.unknowns},
                          {"branches", br},
                          {"defaults", catalog::default_free(f)}});
            s << "  " << std::left << std::setw(36) << f.id << ' ' << f.profile << '\n';
        }
    }
    Output o;
    o.report = {{"run", {{"command", "list"}, {"model", c.model}}}, {"models", jm}, {"families", jf}};
    o.summary = s.str();
    return o;
}

void add_common(CLI::App* app, RunConfig& c, std::string& tol)
{
    app->add_option("--tol", tol, "closure tolerance (relative residual)");
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--out-dir", c.out_dir, "output directory (default: $ELLWAVE_OUT or ./ellwave-out)");
    app->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

void add_selector(CLI::App* app, RunConfig& c, std::vector<std::string>& params, bool required)
{
    auto* m = app->add_option("--model", c.model, "model id");
    auto* f = app->add_option("--family", c.family, "family id (or a substring selecting a group where allowed)");
    if (required) {
        m->required();
        f->required();
    }
    app->add_option("--branch", c.branch, "branch label, e.g. root=+1");
    app->add_option("--param", params, "free parameter name=value (repeatable)")->take_all()->allow_extra_args(false);
}

void add_grid(CLI::App* app, RunConfig& c)
{
    app->add_option("--points", c.points, "grid points (lattice: sites)");
    app->add_option("--periods", c.periods, "fundamental periods in the domain");
}

void validate(const RunConfig& c)
{
    if (!(c.tolerance > 0.0)) throw UsageError("--tol: tolerance must be positive");
    if (c.points < 8) throw UsageError("--points: need at least 8");
    if (c.periods < 1) throw UsageError("--periods: need at least 1");
    if (c.panel < 1) throw UsageError("--panel: need at least 1");
    if (c.audit_panel < 0) throw UsageError("--audit-panel: must be nonnegative");
    if (c.samples < 1) throw UsageError("--samples: need at least 1");
    if (!(c.identity_tolerance > 0.0)) throw UsageError("--identity-tol: must be positive");
    if (c.dt < 0.0) throw UsageError("--dt: must be positive");
    if (!(c.T > 0.0)) throw UsageError("--T: must be positive");
    if (c.snapshots < 1) throw UsageError("--snapshots: need at least 1");
    if (!(c.max_error > 0.0)) throw UsageError("--max-error: must be positive");
    if (!(c.epsilon >= 0.0)) throw UsageError("--epsilon: must be nonnegative");
    if (c.modes < 1) throw UsageError("--modes: need at least 1");
    method_of(c.method);
}

}  // namespace

const char* command_name(Command c)
{
    switch (c) {
    case Command::Help: return "help";
    case Command::VerifyAll: return "verify-all";
    case Command::Verify: return "verify";
    case Command::Audit: return "audit";
    case Command::Identities: return "identities";
    case Command::Evolve: return "evolve";
    case Command::Probe: return "probe";
    case Command::List: return "list";
    }
    return "?";
}

std::string manifest_key(const std::string& model, const std::string& family, const std::string& branch)
{
    return model + "/" + family + "/" + branch;
}

std::string default_manifest_path() { return std::string(ELLWAVE_DATA_DIR) + "/known_discrepancies.json"; }

Manifest load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read manifest " + path);
    Manifest m;
    try {
        const auto j = json::parse(in);
        for (const auto& e : j.at("entries")) {
            ManifestEntry x;
            x.model = e.at("model").get<std::string>();
            x.family = e.at("family").get<std::string>();
            x.branch = e.value("branch", std::string("default"));
            x.expected = e.at("expected").get<std::string>();
            x.repair = e.value("repair", std::string());
            x.kind = e.value("kind", std::string());
            x.relations = e.value("relations", std::vector<std::string>{});
            x.note = e.value("note", std::string());
            if (x.expected != "repaired" && x.expected != "fail") {
                throw IoError("manifest entry " + x.model + "/" + x.family + " has unknown expectation '" + x.expected + "'");
            }
            m.entries[manifest_key(x.model, x.family, x.branch)] = std::move(x);
        }
        for (const auto& e : j.value("identities", json::array())) {
            ManifestIdentity x;
            x.id = e.at("id").get<std::string>();
            x.expected = e.at("expected").get<std::string>();
            x.correction = e.value("correction", std::string());
            x.note = e.value("note", std::string());
            m.identities[x.id] = std::move(x);
        }
    } catch (const json::exception& e) {
        throw IoError("malformed manifest " + path + ": " + e.what());
    }
    return m;
}

RunConfig parse_args(const std::vector<std::string>& args)
{
    RunConfig c;
    CLI::App app{"Exact elliptic-function wave solutions: closure verification, constraint audit and evolution"};
    app.name("ellwave");
    app.require_subcommand(1);
    std::string tol;
    std::vector<std::string> params;
    std::string dt, T, epsilon, max_error, id_tol;

    auto* va = app.add_subcommand("verify-all", "verify every family and the identities against the manifest");
    add_common(va, c, tol);
    va->add_option("--model", c.model, "restrict to one model");
    va->add_option("--family", c.family, "restrict to family ids containing this text");
    add_grid(va, c);
    va->add_option("--method", c.method, "analytic, spectral or finite-difference");
    va->add_option("--panel", c.panel, "panel points per family");
    va->add_option("--audit-panel", c.audit_panel, "random audit points per failing family");
    va->add_option("--identity-samples", c.samples, "samples per identity");
    va->add_option("--manifest", c.manifest, "known-discrepancy manifest");

    auto* ve = app.add_subcommand("verify", "verify one family (or a group) at given free parameters");
    add_common(ve, c, tol);
    add_selector(ve, c, params, true);
    add_grid(ve, c);
    ve->add_option("--method", c.method, "analytic, spectral or finite-difference");
    ve->add_option("--audit-panel", c.audit_panel, "random audit points when the closure fails");
    ve->add_option("--manifest", c.manifest, "known-discrepancy manifest");

    auto* au = app.add_subcommand("audit", "re-derive closure relations by Newton iteration");
    add_common(au, c, tol);
    add_selector(au, c, params, true);
    au->add_option("--audit-panel", c.audit_panel, "random audit points");
    au->add_option("--manifest", c.manifest, "known-discrepancy manifest");

    auto* id = app.add_subcommand("identities", "check the elliptic-function identities");
    add_common(id, c, tol);
    id->add_option("--samples", c.samples, "samples per identity");
    id->add_option("--identity-tol", id_tol, "pass threshold for the two-sided difference");
    id->add_option("--manifest", c.manifest, "known-discrepancy manifest");

    auto* ev = app.add_subcommand("evolve", "evolve a closed solution and compare with the exact one");
    add_common(ev, c, tol);
    add_selector(ev, c, params, true);
    add_grid(ev, c);
    ev->add_option("--dt", dt, "time step (default: a stable step for the integrator)");
    ev->add_option("--T", T, "final time");
    ev->add_option("--snapshots", c.snapshots, "sample times after t = 0");
    ev->add_option("--max-error", max_error, "largest accepted final relative L2 error");

    auto* pr = app.add_subcommand("probe", "growth of small perturbations of a closed solution");
    add_common(pr, c, tol);
    add_selector(pr, c, params, true);
    add_grid(pr, c);
    pr->add_option("--dt", dt, "time step");
    pr->add_option("--T", T, "final time");
    pr->add_option("--epsilon", epsilon, "perturbation amplitude");
    pr->add_option("--modes", c.modes, "Fourier modes probed");

    auto* li = app.add_subcommand("list", "list models and solution families");
    add_common(li, c, tol);
    li->add_option("--model", c.model, "restrict to one model");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        c.command = Command::Help;
        c.help = app.help();
        for (auto* sub : app.get_subcommands()) c.help = sub->help();
        return c;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (va->parsed()) c.command = Command::VerifyAll;
    else if (ve->parsed()) c.command = Command::Verify;
    else if (au->parsed()) c.command = Command::Audit;
    else if (id->parsed()) c.command = Command::Identities;
    else if (ev->parsed()) c.command = Command::Evolve;
    else if (pr->parsed()) c.command = Command::Probe;
    else c.command = Command::List;

    if (!tol.empty()) c.tolerance = parse_number(tol, "--tol");
    if (!id_tol.empty()) c.identity_tolerance = parse_number(id_tol, "--identity-tol");
    if (!dt.empty()) c.dt = parse_number(dt, "--dt");
    if (!T.empty()) c.T = parse_number(T, "--T");
    if (!epsilon.empty()) c.epsilon = parse_number(epsilon, "--epsilon");
    if (!max_error.empty()) c.max_error = parse_number(max_error, "--max-error");
    c.params = parse_params(params);
    if (c.command == Command::Evolve && T.empty()) throw UsageError("--T: final time is required");

    if (c.out_dir.empty()) {
        const char* env = std::getenv("ELLWAVE_OUT");
        c.out_dir = env && *env ? env : "ellwave-out";
    }
    if (c.manifest.empty()) c.manifest = default_manifest_path();
    validate(c);

    if (!c.model.empty()) c.model = models::find_model(c.model).id;
    if (c.command == Command::Verify || c.command == Command::Audit || c.command == Command::Evolve ||
        c.command == Command::Probe) {
        const bool single = c.command == Command::Evolve || c.command == Command::Probe;
        c.families = resolve_families(c.model, c.family, single);
        check_params(c);
        if (!c.branch.empty()) {
            for (const auto& f : c.families) branch_for(catalog::find_family(c.model, f), c.branch);
        }
    }
    return c;
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    if (c.command == Command::Help) {
        out << c.help;
        return 0;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        Manifest manifest;
        const bool needs_manifest = c.command == Command::VerifyAll || c.command == Command::Verify ||
                                    c.command == Command::Audit || c.command == Command::Identities;
        if (needs_manifest) manifest = load_manifest(c.manifest);
        Failures fail;
        Output o;
        switch (c.command) {
        case Command::VerifyAll: o = cmd_verify_all(c, manifest, fail); break;
        case Command::Verify: o = cmd_verify(c, manifest, fail); break;
        case Command::Audit: o = cmd_audit(c, manifest, fail); break;
        case Command::Identities: o = cmd_identities(c, manifest, fail); break;
        case Command::Evolve: o = cmd_evolve(c, fail); break;
        case Command::Probe: o = cmd_probe(c); break;
        case Command::List: o = cmd_list(c); break;
        case Command::Help: break;
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_outputs(c, o, seconds);
        out << o.summary;
        out << "wrote " << (fs::path(c.out_dir) / "report.json").string() << '\n';
        if (!fail.names.empty()) {
            for (const auto& f : fail.names) err << "verification failure: " << f << '\n';
            return 1;
        }
        return 0;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    try {
        c = parse_args(args);
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << "\nrun 'ellwave --help' for usage\n";
        return 2;
    }
    return execute(c, out, err);
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace ellwave::cli
