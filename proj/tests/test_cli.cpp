#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ellwave/cli.hpp"
#include "ellwave/errors.hpp"

using namespace ellwave;
using namespace ellwave::cli;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path out_root()
{
    const char* env = std::getenv("ELLWAVE_OUT");
    return env && *env ? fs::path(env) : fs::temp_directory_path() / "ellwave-cli-test";
}

struct Run {
    int code;
    std::string out, err;
    fs::path dir;
};

Run run_in(const std::string& sub, std::vector<std::string> args)
{
    const auto dir = out_root() / sub;
    fs::remove_all(dir);
    args.push_back("--out-dir");
    args.push_back(dir.string());
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str(), dir};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("flags map onto the run configuration")
{
    const auto c = parse_args({"verify", "--model", "nls", "--family", "dn-plus-cn", "--param", "g=2", "--param",
                               "beta=1", "--param", "m=0.5"});
    CHECK(c.command == Command::Verify);
    CHECK(c.model == "nls");
    REQUIRE(c.families.size() == 1);
    CHECK(c.families[0] == "dn-plus-cn");
    CHECK(c.params == catalog::ParamMap{{"g", 2.0}, {"beta", 1.0}, {"m", 0.5}});
    CHECK(c.tolerance == 1e-9);

    const auto i = parse_args({"identities", "--samples", "5000", "--seed", "7"});
    CHECK(i.command == Command::Identities);
    CHECK(i.samples == 5000);
    CHECK(i.seed == 7);

    const auto g = parse_args({"audit", "--model", "qnls-kdv", "--family", "superposed"});
    CHECK(g.families.size() == 4);
    CHECK(parse_args({"list"}).command == Command::List);
}

TEST_CASE("usage errors")
{
    CHECK_THROWS_AS(parse_args({"verify", "--model", "nls", "--family", "dn-plus-sn"}), UsageError);
    CHECK_THROWS_AS(parse_args({"verify", "--model", "nls"}), UsageError);
    CHECK_THROWS_AS(parse_args({"verify", "--model", "nls", "--family", "dn", "--frobnicate"}), UsageError);
    CHECK_THROWS_AS(parse_args({"verify", "--model", "nls", "--family", "dn", "--param", "zeta=1"}), UsageError);
    CHECK_THROWS_AS(parse_args({"verify-all", "--tol", "0"}), UsageError);
    CHECK_THROWS_AS(parse_args({"evolve", "--model", "kdv", "--family", "dnsq-plus-cndn"}), UsageError);
    CHECK_THROWS_AS(parse_args({"evolve", "--model", "kdv", "--family", "cndn", "--T", "1"}), UsageError);
    CHECK_THROWS_AS(parse_args({}), UsageError);
    try {
        parse_args({"verify", "--model", "nls", "--family", "dn", "--param", "g=two"});
        FAIL("no exception");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("--param") != std::string::npos);
    }
    try {
        parse_args({"evolve", "--model", "kdv", "--family", "dnsq", "--T", "1e-"});
        FAIL("no exception");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("--T") != std::string::npos);
    }
    std::ostringstream out, err;
    CHECK(run({"verify", "--model", "nls", "--family", "dn-plus-sn"}, out, err) == 2);
    CHECK(err.str().find("dn-plus-sn") != std::string::npos);
}

TEST_CASE("output directory comes from the environment unless given")
{
    const char* env = std::getenv("ELLWAVE_OUT");
    const auto c = parse_args({"list"});
    CHECK(c.out_dir == (env && *env ? std::string(env) : std::string("ellwave-out")));
    CHECK(parse_args({"list", "--out-dir", "x"}).out_dir == "x");
}

TEST_CASE("verify writes a report with relation labels")
{
    const auto r = run_in("verify", {"verify", "--model", "nls", "--family", "dn-plus-cn", "--param", "g=2", "--param",
                                     "beta=1", "--param", "m=0.5"});
    CHECK(r.code == 0);
    const auto j = json::parse(slurp(r.dir / "report.json"));
    REQUIRE(j["results"].size() == 1);
    for (const auto& x : j["results"]) {
        CHECK(x["status"] == "pass");
        CHECK(!x["relations"].empty());
        CHECK(x["residual"]["max_relative"].get<double>() <= 1e-9);
        CHECK(x["params"]["A"].get<double>() == doctest::Approx(1.0));
    }
    CHECK(j["run"]["seed"] == 1);
    CHECK(fs::exists(r.dir / "summary.txt"));
    CHECK(json::parse(slurp(r.dir / "metadata.json")).contains("timestamp"));
    CHECK(j.dump().find("timestamp") == std::string::npos);
}

TEST_CASE("audit of the superposed quadratic NLS-KdV families names the speed relation")
{
    const auto r = run_in("audit", {"audit", "--model", "qnls-kdv", "--family", "superposed"});
    CHECK(r.code == 0);
    const auto ledger = json::parse(slurp(r.dir / "ledger.json"));
    REQUIRE(!ledger.empty());
    bool named = false;
    for (const auto& e : ledger) {
        for (const auto& rel : e["relations"]) named = named || rel == "(2.26)";
    }
    CHECK(named);
}

TEST_CASE("failures outside the manifest exit 1 naming the family")
{
    const auto empty = out_root() / "empty_manifest.json";
    fs::create_directories(out_root());
    std::ofstream(empty) << R"({"entries": [], "identities": []})";
    const auto r = run_in("unlisted", {"verify", "--model", "qnls-kdv", "--family", "dnsq-superposed-plus", "--branch",
                                       "root=+1", "--manifest", empty.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("qnls-kdv/dnsq-superposed-plus") != std::string::npos);
    const auto listed = run_in("listed", {"verify", "--model", "qnls-kdv", "--family", "dnsq-superposed-plus",
                                          "--branch", "root=+1"});
    CHECK(listed.code == 0);
    const auto missing = run_in("missing", {"identities", "--samples", "10", "--manifest", "/nonexistent/m.json"});
    CHECK(missing.code == 2);
}

TEST_CASE("shipped manifest loads and lists the identity correction")
{
    const auto m = load_manifest(default_manifest_path());
    CHECK(m.identities.count("A8"));
    CHECK(m.entries.count(manifest_key("qnls-kdv", "dnsq-superposed-plus", "root=+1")));
    for (const auto& [key, e] : m.entries) {
        CHECK(!e.relations.empty());
        CHECK(!e.note.empty());
        if (e.expected == "repaired") CHECK(!e.repair.empty());
    }
}

TEST_CASE("identities: A8 fails as listed, the rest pass")
{
    const auto r = run_in("identities", {"identities", "--samples", "200", "--seed", "7"});
    CHECK(r.code == 0);
    const auto j = json::parse(slurp(r.dir / "report.json"));
    REQUIRE(j["identities"].size() == 9);
    for (const auto& x : j["identities"]) {
        CHECK(x["status"] == (x["id"] == "A8" ? "fail" : "pass"));
        CHECK(x["samples"] == 200);
    }
}

TEST_CASE("evolve writes a CSV series with monotone time and small error")
{
    const auto r = run_in("evolve", {"evolve", "--model", "kdv", "--family", "dnsq-plus-cndn", "--param", "g=12",
                                     "--param", "beta=1", "--param", "m=0.5", "--dt", "1e-4", "--T", "0.1"});
    CHECK(r.code == 0);
    std::istringstream csv(slurp(r.dir / "series.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line.rfind("t,l2_error", 0) == 0);
    double last = -1.0, err = 0.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string t, e;
        std::getline(row, t, ',');
        std::getline(row, e, ',');
        CHECK(std::stod(t) > last);
        last = std::stod(t);
        err = std::stod(e);
        ++rows;
    }
    CHECK(rows == 11);
    CHECK(last == doctest::Approx(0.1));
    CHECK(err <= 1e-6);
    const auto j = json::parse(slurp(r.dir / "report.json"));
    CHECK(j["velocity"]["measured"].get<double>() == doctest::Approx(4.5).epsilon(1e-3));
    CHECK(fs::exists(r.dir / "profile.csv"));

    const auto strict = run_in("evolve-strict", {"evolve", "--model", "nls", "--family", "dn", "--dt", "1e-3", "--T",
                                                 "0.2", "--points", "32", "--max-error", "1e-14"});
    CHECK(strict.code == 1);
    CHECK(strict.err.find("nls/dn") != std::string::npos);
}

TEST_CASE("probe with zero amplitude reports zero growth")
{
    const auto r = run_in("probe", {"probe", "--model", "nls", "--family", "dn", "--epsilon", "0", "--T", "0.2",
                                    "--modes", "2", "--points", "64"});
    CHECK(r.code == 0);
    const auto j = json::parse(slurp(r.dir / "report.json"));
    REQUIRE(j["modes"].size() == 2);
    for (const auto& m : j["modes"]) CHECK(m["growth"] == 0.0);
}

TEST_CASE("list covers the catalog")
{
    const auto r = run_in("list", {"list"});
    CHECK(r.code == 0);
    const auto j = json::parse(slurp(r.dir / "report.json"));
    CHECK(j["families"].size() == catalog::all_families().size());
    CHECK(j["models"].size() == models::registry().size());
}

TEST_CASE("reports are byte-identical across runs")
{
    const std::vector<std::string> args{"verify-all", "--model", "mkdv", "--tol", "1e-9", "--seed", "3"};
    const auto a = run_in("det-a", args), b = run_in("det-b", args);
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(slurp(a.dir / "report.json") == slurp(b.dir / "report.json"));
    auto c = args;
    c.push_back("--threads");
    c.push_back("3");
    CHECK(slurp(run_in("det-c", c).dir / "report.json") == slurp(a.dir / "report.json"));
}

}  // TEST_SUITE
