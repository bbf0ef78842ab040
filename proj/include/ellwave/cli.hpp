#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellwave/catalog.hpp"

namespace ellwave::cli {

// File or manifest problem; maps to exit status 2 like a usage error.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { Help, VerifyAll, Verify, Audit, Identities, Evolve, Probe, List };

const char* command_name(Command c);

struct RunConfig {
    Command command = Command::Help;
    std::string help;  // usage text for Command::Help

    std::string model;
    std::string family;                 // as given: an exact id or a substring selecting a group
    std::vector<std::string> families;  // resolved catalog ids
    std::string branch;                 // empty: every branch (verify, audit) or the default one
    catalog::ParamMap params;

    double tolerance = 1e-9;
    unsigned long long seed = 1;
    std::string out_dir;
    unsigned threads = 0;
    std::string manifest;

    int points = 256;
    int periods = 1;
    std::string method = "analytic";
    int panel = 3;
    int audit_panel = 5;
    int samples = 1000;  // identity samples
    double identity_tolerance = 1e-11;

    double dt = 0.0;  // 0: suggested step
    double T = 1.0;
    int snapshots = 10;
    double max_error = 1e-6;

    double epsilon = 1e-6;
    int modes = 4;
};

// Raises UsageError naming the offending flag.
RunConfig parse_args(const std::vector<std::string>& args);

struct ManifestEntry {
    std::string model;
    std::string family;
    std::string branch;
    std::string expected;  // "repaired" or "fail"
    std::string repair;
    std::string kind;      // "typo", "model-reading", "no-solution"
    std::vector<std::string> relations;
    std::string note;
};

struct ManifestIdentity {
    std::string id;
    std::string expected;
    std::string correction;
    std::string note;
};

struct Manifest {
    std::map<std::string, ManifestEntry> entries;  // keyed by "model/family/branch"
    std::map<std::string, ManifestIdentity> identities;
};

std::string manifest_key(const std::string& model, const std::string& family, const std::string& branch);
Manifest load_manifest(const std::string& path);
std::string default_manifest_path();

// Runs the command, writes report.json, summary.txt and metadata.json (plus CSV series for evolve) into
// config.out_dir. Returns 0 on success, 1 on a verification failure, 2 on a usage or I/O error.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace ellwave::cli
