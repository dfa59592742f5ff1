#pragma once

// Run configuration, JSON reports, and the acceptance suite.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "minimal2/modcurve.hpp"
#include "minimal2/subgroup.hpp"

namespace minimal2 {

inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
    std::string command;  // census, check, genus, lie-check, falsify, quadfamily, family-check, verify-all
    std::uint32_t level_bound = 64;
    std::uint64_t index_bound = 96;  // 0 = unbounded
    std::optional<std::int64_t> genus;
    std::uint64_t seed = 1;
    unsigned max_retries = 8;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::uint32_t prime = 3;
    unsigned n_max = 20;
    std::string label;          // family-check; empty = all four
    std::string group;          // check, genus: path to a subgroup JSON file
    std::string families;       // family table path; empty = the bundled one
    unsigned family_primes = 25;
    unsigned family_points = 40;
    std::uint64_t family_prime_start = 10007;
    std::string profile = "desk";  // verify-all: desk or extended
    std::uint64_t max_elements = std::uint64_t{1} << 26;
    std::uint64_t max_orbit = 4096;
    bool records = false;  // include per-item records (lie-check, census generators)
    bool timing = false;   // wall-clock times make reports non-reproducible, so opt-in

    Budget budget() const { return {max_elements, max_orbit}; }
};

// Throws Error on unknown keys, wrong types or out-of-range values.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);
void validate(const RunConfig& c);

struct CheckResult {
    std::string id;
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0;
};

struct Report {
    std::string command;
    nlohmann::json config;
    nlohmann::json results = nlohmann::json::object();
    std::vector<CheckResult> checks;
    bool timing = false;

    bool pass() const;
    nlohmann::json to_json() const;
};

// Progress lines go to this sink (stderr in the CLI); never into the report.
using ProgressSink = std::function<void(const std::string&)>;

Report run(const RunConfig& config, const ProgressSink& progress = {});

struct SuiteOptions {
    std::string profile = "desk";
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string families;
    Budget budget;
    // Substituted into every genus computation; tests use a tampered one.
    GenusFormula genus_formula = standard_genus_formula;
    // Criteria to run, empty = all.
    std::vector<int> only;
    ProgressSink progress;
};

// One check per acceptance criterion, ids "1" to "11".
Report verify_all(const SuiteOptions& options);

// Census entries as CSV: label, level, index, genus, cusps, contains -I, key, generators.
std::string census_csv(const nlohmann::json& census_results);

}  // namespace minimal2
