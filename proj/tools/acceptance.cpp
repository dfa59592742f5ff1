// One line per acceptance criterion. The level-128 census (criterion 2) runs
// only with --extended.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "minimal2/report.hpp"

using namespace minimal2;

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    bool extended = false, verbose = false;
    SuiteOptions opt;
    std::string json_out;
    app.add_flag("--extended", extended, "also run the level-128 census (hours)");
    app.add_option("--seed", opt.seed);
    app.add_option("--threads", opt.threads);
    app.add_option("--only", opt.only, "criterion ids to run");
    app.add_option("--json", json_out, "write the full report here");
    app.add_flag("-v,--verbose", verbose, "progress on stderr");
    CLI11_PARSE(app, argc, argv);
    opt.profile = extended ? "extended" : "desk";
    if (verbose) opt.progress = [](const std::string& s) { std::cerr << s << '\n'; };

    Report rep;
    try {
        rep = verify_all(opt);
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << '\n';
        return 2;
    }
    rep.timing = true;
    for (const auto& c : rep.checks) {
        std::printf("[%s] %2s  %s: %s (%.1fs)\n", c.skipped ? "SKIP" : c.pass ? "PASS" : "FAIL",
                    c.id.c_str(), c.name.c_str(), c.detail.c_str(), c.seconds);
    }
    if (!json_out.empty()) {
        std::FILE* f = std::fopen(json_out.c_str(), "w");
        if (!f) {
            std::cerr << "acceptance: cannot write " << json_out << '\n';
            return 2;
        }
        std::fputs((rep.to_json().dump(2) + "\n").c_str(), f);
        std::fclose(f);
    }
    std::printf("%s\n", rep.pass() ? "all criteria pass" : "SOME CRITERIA FAILED");
    return rep.pass() ? 0 : 1;
}
