// minimal2: command-line front end. Every subcommand writes one JSON report
// (stdout or --out) and exits 0 only if all of its checks pass.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "minimal2/error.hpp"
#include "minimal2/report.hpp"

using namespace minimal2;

namespace {

struct Common {
    std::string config_file;
    std::string out;
    std::string csv;
    bool quiet = false;
};

void add_common(CLI::App* sub, Common& common, RunConfig& cfg) {
    sub->add_option("--config", common.config_file, "JSON config; command-line flags override it");
    sub->add_option("--out", common.out, "write the JSON report here instead of stdout");
    sub->add_flag("--quiet", common.quiet, "no progress lines on stderr");
    sub->add_option("--max-elements", cfg.max_elements, "largest closure allowed");
    sub->add_option("--max-orbit", cfg.max_orbit, "largest conjugacy orbit explored");
    sub->add_flag("--timing", cfg.timing, "include wall-clock times (reports stop being reproducible)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal open subgroups of GL_2(Z_2): census, checks and reports"};
    app.require_subcommand(1);
    RunConfig cfg;
    Common common;
    // The config file is read before parsing, so that flags bound to the same
    // fields override it.
    try {
        for (int i = 1; i < argc; ++i) {
            std::string arg = argv[i], path;
            if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
            else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
            else continue;
            std::ifstream in(path);
            if (!in) throw Error("cannot open " + path);
            auto j = nlohmann::json::parse(in);
            if (!j.contains("command") && argc > 1) j["command"] = argv[1];
            cfg = config_from_json(j);
        }
    } catch (const std::exception& e) {
        std::cerr << "minimal2: " << e.what() << '\n';
        return 2;
    }
    std::int64_t genus = 0;

    auto* census = app.add_subcommand("census", "enumerate minimal groups up to conjugacy");
    census->add_option("--level-bound", cfg.level_bound, "power of 2, at most 128");
    census->add_option("--index-bound", cfg.index_bound, "0 for no bound");
    auto* genus_opt = census->add_option("--genus", genus, "keep only this genus");
    census->add_option("--csv", common.csv, "also write the entries as CSV");

    auto* check = app.add_subcommand("check", "decide minimality of one group");
    check->add_option("--group", cfg.group, "subgroup JSON file")->required();

    auto* genus_cmd = app.add_subcommand("genus", "genus and label of X_G");
    genus_cmd->add_option("--group", cfg.group, "subgroup JSON file")->required();

    auto* lie = app.add_subcommand("lie-check", "the 96^2 Lie determinant check");
    lie->add_option("--seed", cfg.seed);
    lie->add_option("--max-retries", cfg.max_retries);
    lie->add_option("--threads", cfg.threads, "0 = all cores");
    lie->add_flag("--records", cfg.records, "include one record per class pair");

    auto* falsify = app.add_subcommand("falsify", "non-minimality witnesses at an odd prime");
    falsify->add_option("--prime", cfg.prime, "3, 5 or 7");
    falsify->add_option("--seed", cfg.seed);

    auto* quad = app.add_subcommand("quadfamily", "the family y^2 = x^3 + 2a x^2 + (a^2+1) x");
    quad->add_option("--n-max", cfg.n_max);

    auto* fam = app.add_subcommand("family-check", "twist and isogeny identities of the families");
    fam->add_option("--label", cfg.label, "one family; default all");
    fam->add_option("--families", cfg.families, "family table; default the bundled one");
    fam->add_option("--primes", cfg.family_primes);
    fam->add_option("--points", cfg.family_points, "points per prime");
    fam->add_option("--prime-start", cfg.family_prime_start);
    fam->add_option("--seed", cfg.seed);

    auto* all = app.add_subcommand("verify-all", "every acceptance criterion");
    all->add_option("--profile", cfg.profile, "desk or extended");
    all->add_option("--seed", cfg.seed);
    all->add_option("--threads", cfg.threads);
    all->add_option("--families", cfg.families);

    for (auto* sub : {census, check, genus_cmd, lie, falsify, quad, fam, all})
        add_common(sub, common, cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        if (!cfg.command.empty() && cfg.command != command)
            throw Error("config is for '" + cfg.command + "', not '" + command + "'");
        cfg.command = command;
        if (genus_opt->count()) cfg.genus = genus;

        ProgressSink progress;
        if (!common.quiet) progress = [](const std::string& s) { std::cerr << s << '\n'; };
        const Report report = run(cfg, progress);
        const std::string text = report.to_json().dump(2) + "\n";
        if (common.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(common.out);
            out << text;
            if (!out) throw Error("cannot write " + common.out);
        }
        if (!common.csv.empty()) {
            std::ofstream out(common.csv);
            out << census_csv(report.results);
            if (!out) throw Error("cannot write " + common.csv);
        }
        for (const auto& c : report.checks)
            std::cerr << (c.skipped ? "SKIP " : c.pass ? "PASS " : "FAIL ") << c.id << ": " << c.detail
                      << '\n';
        return report.pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "minimal2: " << e.what() << '\n';
        return 2;
    }
}
