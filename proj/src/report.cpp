#include "minimal2/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "minimal2/ellcurve.hpp"
#include "minimal2/error.hpp"
#include "minimal2/finite_group.hpp"
#include "minimal2/lie2adic.hpp"
#include "minimal2/minimality.hpp"

namespace minimal2 {

namespace {

const std::set<std::string> kCommands{"census",     "check",        "genus",     "lie-check",
                                      "falsify",    "quadfamily",   "family-check", "verify-all"};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string multiset_string(const std::map<std::string, int>& m) {
    std::string s;
    for (const auto& [k, v] : m) {
        if (!s.empty()) s += ", ";
        s += k + " x" + std::to_string(v);
    }
    return s;
}

std::map<std::string, int> label_counts(const std::vector<CensusEntry>& entries) {
    std::map<std::string, int> m;
    for (const auto& e : entries) ++m[Label{e.level, e.index, e.genus.genus}.to_string()];
    return m;
}

FamilyTable families_from(const std::string& path) {
    return load_families(path.empty() ? default_families_path() : path);
}

// Three distinct index-2 subgroups of (Z/8)^x, as sorted residue lists.
bool realizes_index2_subgroups(std::vector<std::vector<std::uint32_t>> images) {
    std::sort(images.begin(), images.end());
    const std::vector<std::vector<std::uint32_t>> expected{{1, 3}, {1, 5}, {1, 7}};
    return images == expected;
}

OpenSubgroup load_group(const RunConfig& c) {
    if (c.group.empty()) throw Error("--group is required");
    std::ifstream in(c.group);
    if (!in) throw Error("cannot open " + c.group);
    return subgroup_from_json(nlohmann::json::parse(in), c.budget());
}

// ---------------------------------------------------------------------------
// The acceptance criteria. Each returns its check and may add to `results`.

struct Suite {
    const SuiteOptions& opt;
    nlohmann::json& results;
    std::vector<CensusEntry> genus0;  // from criterion 1, reused by 8 and 10
    std::vector<CensusEntry> level16;

    void say(const std::string& s) const {
        if (opt.progress) opt.progress(s);
    }

    CensusConfig census_config(std::uint32_t level_bound, std::uint64_t index_bound,
                               std::optional<std::int64_t> genus) const {
        CensusConfig c;
        c.level_bound = level_bound;
        c.index_bound = index_bound;
        c.genus_filter = genus;
        c.budget = opt.budget;
        c.genus_formula = opt.genus_formula;
        c.progress = opt.progress;
        return c;
    }

    CheckResult c1() {
        CheckResult r{"1", "genus-0 census: 28 classes, none containing -I", false, false, "", 0};
        const auto res = census(census_config(64, 96, 0));
        genus0 = res.entries;
        const auto counts = label_counts(res.entries);
        const std::map<std::string, int> expected{{"8.24.0", 4}, {"16.48.0", 8}, {"32.96.0", 16}};
        bool minus_i = false, genus_ok = true;
        for (const auto& e : res.entries) {
            minus_i |= e.contains_minus_I;
            genus_ok &= e.genus.genus == 0;
        }
        r.pass = counts == expected && !minus_i && genus_ok;
        r.detail = std::to_string(res.entries.size()) + " classes: " + multiset_string(counts) +
                   (minus_i ? "; some contain -I" : "; none contain -I");
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : res.entries) entries.push_back(to_json(e));
        results["census_genus0"] = {{"labels", counts}, {"entries", entries}};
        return r;
    }

    CheckResult c2() {
        CheckResult r{"2", "extended census at level 128: 7652 classes", false, false, "", 0};
        if (opt.profile != "extended") {
            r.skipped = true;
            r.pass = true;
            r.detail = "extended profile only";
            return r;
        }
        // The index <= 96 box first: it is cheap and is the other possible
        // reading of the count.
        const auto boxed = census(census_config(128, 96, {}));
        say("level <= 128, index <= 96: " + std::to_string(boxed.entries.size()) + " classes");
        const auto res = census(census_config(128, std::numeric_limits<std::uint64_t>::max(), {}));
        bool minus_i = false;
        for (const auto& e : res.entries) minus_i |= e.contains_minus_I;
        r.pass = res.entries.size() == 7652;
        r.detail = std::to_string(res.entries.size()) + " classes of level <= 128 (any index), " +
                   std::to_string(boxed.entries.size()) + " of index <= 96" +
                   (minus_i ? "; some contain -I" : "; none contain -I");
        results["census_extended"] = {{"classes", res.entries.size()},
                                      {"index_at_most_96", boxed.entries.size()},
                                      {"labels", label_counts(res.entries)},
                                      {"labels_index_at_most_96", label_counts(boxed.entries)},
                                      {"contains_minus_I", minus_i}};
        return r;
    }

    CheckResult c3() {
        CheckResult r{"3", "Lie check: d != 0 mod 2^50 for all 9216 class pairs", false, false, "", 0};
        try {
            const auto res = lie_check_all_classes(opt.seed, 8, opt.threads);
            r.pass = res.failures == 0 && res.records.size() == 9216;
            r.detail = std::to_string(res.records.size()) + " pairs, valuation of d in [" +
                       std::to_string(res.min_valuation) + ", " +
                       std::to_string(res.max_valuation) + "], at most " +
                       std::to_string(res.max_retries_used) + " retries";
            results["lie_check"] = to_json(res, false);
        } catch (const VerificationFailure& e) {
            r.detail = e.what();
        }
        return r;
    }

    CheckResult c4() {
        CheckResult r{"4", "odd primes 3 and 5: every det-surjective class has a witness", true,
                      false, "", 0};
        nlohmann::json out = nlohmann::json::array();
        for (std::uint32_t p : {3u, 5u}) {
            FalsifyReport f;
            try {
                f = falsify_odd_prime(p, opt.seed);
            } catch (const VerificationFailure& e) {
                r.pass = false;
                r.detail += std::string(e.what()) + "; ";
                continue;
            }
            // Re-verify each witness from its generators alone.
            const std::uint32_t q = p * p;
            std::uint64_t verified = 0;
            for (const auto& w : f.witnesses) {
                const auto k = closure(w.witness_generators, q);
                bool inside = true;
                for (const auto& g : w.witness_generators)
                    inside &= std::binary_search(w.class_elements.begin(), w.class_elements.end(),
                                                 reduce(g, p).pack());
                const bool ok = inside && k.size() == w.witness_size &&
                                k.size() < w.preimage_size &&
                                w.preimage_size == w.class_size * p * p * p * p &&
                                det_image(k, q).size() == q - p;
                verified += ok;
            }
            const bool ok = f.minimal == 0 && verified == f.witnesses.size() &&
                            f.witnesses.size() == f.det_surjective_classes &&
                            f.det_surjective_classes > 0;
            r.pass &= ok;
            r.detail += "p=" + std::to_string(p) + ": " + std::to_string(f.classes) + " classes, " +
                        std::to_string(f.det_surjective_classes) + " det-surjective, " +
                        std::to_string(verified) + " witnesses verified, " +
                        std::to_string(f.minimal) + " minimal; ";
            out.push_back(to_json(f));
        }
        if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
        results["falsify"] = out;
        return r;
    }

    CheckResult c5() {
        CheckResult r{"5", "nilpotent subgroups of GL_2(Z/9) over the mod-3 kernel have square det",
                      false, false, "", 0};
        const auto l = check_nilpotent_det_lemma();
        r.pass = l.pass;
        r.detail = l.detail;
        return r;
    }

    CheckResult c6() {
        CheckResult r{"6", "quadratic family, n = 1..20", true, false, "", 0};
        const mpq_class j257(mpz_class(257) * 257 * 257, mpz_class(256));
        nlohmann::json rows = nlohmann::json::array();
        std::vector<std::string> bad;
        for (unsigned n = 1; n <= 20; ++n) {
            const auto row = quadfamily_check(n);
            rows.push_back(to_json(row));
            bool ok = row.discriminant_matches && row.bad_only_above_2;
            ok &= row.field_is_gaussian == (n == 3);
            if (n % 2 == 1) ok &= row.conic_solvable;
            if (n == 10) ok &= row.twist_j == j257.get_str();
            if (n == 2) ok &= row.twist_a == "-10" && row.twist_b == "20";
            if (!ok) bad.push_back(std::to_string(n));
        }
        r.pass = bad.empty();
        r.detail = bad.empty() ? "Delta = -2^(2n+6) for all n; n = 3 is Q(i); n = 10 twist has "
                                 "j = 257^3/2^8; n = 2 twist is y^2 = x^3 - 10x^2 + 20x"
                               : "failing n:";
        for (const auto& n : bad) r.detail += " " + n;
        results["quadfamily"] = rows;
        return r;
    }

    CheckResult c7() {
        CheckResult r{"7", "exp(log M) = M mod 2^50 for 10^4 random M = I mod 4", false, false, "", 0};
        std::mt19937_64 rng(opt.seed);
        std::uint64_t failures = 0;
        unsigned min_prec = 64;
        for (int i = 0; i < 10000; ++i) {
            std::array<u128, 4> e;
            for (auto& x : e) x = u128(rng()) << 2;
            e[0] += 1;
            e[3] += 1;
            const PrecisionMatrix m(64, e, 64);
            const auto back = mat_exp(mat_log(m));
            min_prec = std::min(min_prec, back.precision());
            if (back.precision() < 50 || !back.equal_mod(m, 50)) ++failures;
        }
        r.pass = failures == 0;
        r.detail = std::to_string(failures) + " failures, tracked precision >= " +
                   std::to_string(min_prec) + " bits";
        return r;
    }

    CheckResult c8() {
        CheckResult r{"8", "census entries: Frattini rank 2, maximal subgroups hit each index-2 "
                           "det image once", true, false, "", 0};
        if (genus0.empty()) genus0 = census(census_config(64, 96, 0)).entries;
        level16 = census(census_config(16, std::numeric_limits<std::uint64_t>::max(), {})).entries;
        std::uint64_t checked = 0, failed = 0;
        for (const auto* list : {&genus0, &level16})
            for (const auto& e : *list) {
                ++checked;
                const auto rep = is_minimal(e.group, opt.budget);
                const bool ok = rep.verdict && rep.frattini_rank == 2 && e.frattini_rank == 2 &&
                                rep.certifying_modulus == std::max<std::uint32_t>(8, 2 * e.level) &&
                                realizes_index2_subgroups(rep.maximal_det_images) &&
                                realizes_index2_subgroups(e.maximal_det_images);
                failed += !ok;
            }
        r.pass = failed == 0 && checked > 28;
        r.detail = std::to_string(checked) + " entries re-checked at modulus 2 * level (" +
                   std::to_string(genus0.size()) + " genus 0, " + std::to_string(level16.size()) +
                   " of level <= 16), " + std::to_string(failed) + " failures";
        return r;
    }

    CheckResult c9() {
        CheckResult r{"9", "family identities, 25 primes x 40 points", true, false, "", 0};
        const auto table = families_from(opt.families);
        const auto primes = primes_from(10007, 25);
        nlohmann::json out = nlohmann::json::array();
        for (const auto& f : table.families) {
            const auto rep = family_identity_check(f, primes, 40, opt.seed);
            r.pass &= rep.pass();
            r.detail += f.label + ": " + std::to_string(rep.nonsingular) + "/" +
                        std::to_string(rep.points) + " nonsingular, " +
                        std::to_string(rep.failures) + " failures; ";
            out.push_back(to_json(rep));
        }
        r.pass &= table.families.size() == 4;
        if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
        results["family_check"] = out;
        return r;
    }

    CheckResult c10() {
        CheckResult r{"10", "genus integrality everywhere; X(1), X_0(2), X(2) have genus 0", true,
                      false, "", 0};
        std::uint64_t groups = 0;
        std::string bad;
        auto g = [&](const OpenSubgroup& h) {
            ++groups;
            return genus(h, opt.genus_formula);
        };
        try {
            const auto x1 = g(full_group(2));
            const auto x02 = g(closure(std::vector{ResidueMatrix(2, 1, 1, 0, 1)}, 2));
            const auto x2 = g(OpenSubgroup(2, 2, {}, {ModRing(2).identity()}));
            if (!(x1.psl_index == 1 && x1.genus == 0)) bad += " X(1)";
            if (!(x02.psl_index == 3 && x02.nu2 == 1 && x02.nu3 == 0 && x02.cusps == 2 &&
                  x02.genus == 0))
                bad += " X_0(2)";
            if (!(x2.psl_index == 6 && x2.nu2 == 0 && x2.nu3 == 0 && x2.cusps == 3 && x2.genus == 0))
                bad += " X(2)";
            // Every det-surjective subgroup of GL_2(Z/4).
            const auto gl4 = FiniteGroup::gl2(4);
            for (const auto& s : gl4.all_subgroups()) {
                std::vector<Packed> elems;
                for (auto i : gl4.members(s)) elems.push_back(gl4.element(i));
                const auto h = subgroup_from_elements(2, 4, std::move(elems));
                if (det_image(h, 4).size() == 2) g(h);
            }
            for (const auto* list : {&genus0, &level16})
                for (const auto& e : *list) {
                    const auto d = g(e.group);
                    if (!d.integral() || d.genus != e.genus.genus) bad += " census:" + e.key.digest();
                }
        } catch (const VerificationFailure& e) {
            bad += std::string(" ") + e.what();
        }
        r.pass = bad.empty();
        r.detail = std::to_string(groups) + " genus computations" +
                   (bad.empty() ? ", classical values reproduced" : "; failed:" + bad);
        return r;
    }

    CheckResult c11() {
        CheckResult r{"11", "lemma oracles: det mod 8 certifies Z_2^x; non-2-groups are not minimal",
                      false, false, "", 0};
        const auto a = check_det_lemma(2, 6);
        const auto a3 = check_det_lemma(3, 4);
        const auto a5 = check_det_lemma(5, 3);
        const auto b = check_non_two_group_lemma();
        r.pass = a.pass && a3.pass && a5.pass && b.pass;
        r.detail = "(a) " + a.detail + " for (Z/2^k)^x, k <= 6 (odd: " + a3.detail + ", " +
                   a5.detail + "); (b) " + b.detail;
        return r;
    }
};

}  // namespace

// ---------------------------------------------------------------------------

void validate(const RunConfig& c) {
    if (!kCommands.count(c.command)) throw Error("unknown command '" + c.command + "'");
    if (c.level_bound == 0 || c.level_bound > 128 || (c.level_bound & (c.level_bound - 1)))
        throw Error("level_bound must be a power of 2 at most 128");
    if (c.max_retries == 0) throw Error("max_retries must be positive");
    if (c.n_max == 0 || c.n_max > 40) throw Error("n_max must be in [1, 40]");
    if (c.family_primes == 0 || c.family_points == 0) throw Error("family sizes must be positive");
    if (c.max_elements == 0 || c.max_orbit == 0) throw Error("budgets must be positive");
    if (c.profile != "desk" && c.profile != "extended") throw Error("profile must be desk or extended");
    if (c.prime < 3 || prime_of(c.prime) != c.prime) throw Error("prime must be an odd prime");
}

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error("config must be a JSON object");
    RunConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "command") c.command = v.get<std::string>();
        else if (key == "level_bound") c.level_bound = v.get<std::uint32_t>();
        else if (key == "index_bound") c.index_bound = v.get<std::uint64_t>();
        else if (key == "genus") c.genus = v.is_null() ? std::nullopt : std::optional(v.get<std::int64_t>());
        else if (key == "seed") c.seed = v.get<std::uint64_t>();
        else if (key == "max_retries") c.max_retries = v.get<unsigned>();
        else if (key == "threads") c.threads = v.get<unsigned>();
        else if (key == "prime") c.prime = v.get<std::uint32_t>();
        else if (key == "n_max") c.n_max = v.get<unsigned>();
        else if (key == "label") c.label = v.get<std::string>();
        else if (key == "group") c.group = v.get<std::string>();
        else if (key == "families") c.families = v.get<std::string>();
        else if (key == "family_primes") c.family_primes = v.get<unsigned>();
        else if (key == "family_points") c.family_points = v.get<unsigned>();
        else if (key == "family_prime_start") c.family_prime_start = v.get<std::uint64_t>();
        else if (key == "profile") c.profile = v.get<std::string>();
        else if (key == "max_elements") c.max_elements = v.get<std::uint64_t>();
        else if (key == "max_orbit") c.max_orbit = v.get<std::uint64_t>();
        else if (key == "records") c.records = v.get<bool>();
        else if (key == "timing") c.timing = v.get<bool>();
        else throw Error("config: unknown key '" + key + "'");
    }
    validate(c);
    return c;
}

nlohmann::json to_json(const RunConfig& c) {
    return {{"command", c.command},
            {"level_bound", c.level_bound},
            {"index_bound", c.index_bound},
            {"genus", c.genus ? nlohmann::json(*c.genus) : nlohmann::json(nullptr)},
            {"seed", c.seed},
            {"max_retries", c.max_retries},
            {"threads", c.threads},
            {"prime", c.prime},
            {"n_max", c.n_max},
            {"label", c.label},
            {"group", c.group},
            {"families", c.families},
            {"family_primes", c.family_primes},
            {"family_points", c.family_points},
            {"family_prime_start", c.family_prime_start},
            {"profile", c.profile},
            {"max_elements", c.max_elements},
            {"max_orbit", c.max_orbit},
            {"records", c.records},
            {"timing", c.timing}};
}

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

nlohmann::json Report::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json j{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
        if (c.skipped) j["skipped"] = true;
        if (timing) j["seconds"] = c.seconds;
        cs.push_back(j);
    }
    return {{"schema_version", kReportSchemaVersion},
            {"command", command},
            {"config", config},
            {"results", results},
            {"checks", cs},
            {"pass", pass()}};
}

Report verify_all(const SuiteOptions& options) {
    if (options.profile != "desk" && options.profile != "extended")
        throw Error("verify_all: profile must be desk or extended");
    Report rep;
    rep.command = "verify-all";
    rep.config = {{"profile", options.profile}, {"seed", options.seed}};
    Suite suite{options, rep.results, {}, {}};
    using Fn = CheckResult (Suite::*)();
    // The lemma oracles come first: later checks rely on them.
    const std::vector<std::pair<int, Fn>> order{
        {11, &Suite::c11}, {1, &Suite::c1}, {2, &Suite::c2}, {3, &Suite::c3},
        {4, &Suite::c4},   {5, &Suite::c5}, {6, &Suite::c6}, {7, &Suite::c7},
        {8, &Suite::c8},   {9, &Suite::c9}, {10, &Suite::c10}};
    std::map<int, CheckResult> done;
    for (const auto& [id, fn] : order) {
        if (!options.only.empty() &&
            std::find(options.only.begin(), options.only.end(), id) == options.only.end())
            continue;
        suite.say("criterion " + std::to_string(id));
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult c;
        try {
            c = (suite.*fn)();
        } catch (const std::exception& e) {
            c.id = std::to_string(id);
            c.name = "criterion " + c.id;
            c.pass = false;
            c.detail = std::string("aborted: ") + e.what();
        }
        c.seconds = seconds_since(t0);
        done[id] = c;
    }
    for (auto& [id, c] : done) rep.checks.push_back(c);
    return rep;
}

// ---------------------------------------------------------------------------

Report run(const RunConfig& config, const ProgressSink& progress) {
    validate(config);
    Report rep;
    rep.command = config.command;
    rep.config = to_json(config);
    rep.timing = config.timing;
    const auto t0 = std::chrono::steady_clock::now();
    auto add = [&](std::string id, std::string name, bool pass, std::string detail) {
        rep.checks.push_back({std::move(id), std::move(name), pass, false, std::move(detail),
                              seconds_since(t0)});
    };
    const std::string& cmd = config.command;

    if (cmd == "census") {
        CensusConfig c;
        c.level_bound = config.level_bound;
        c.index_bound = config.index_bound == 0 ? std::numeric_limits<std::uint64_t>::max()
                                                : config.index_bound;
        c.genus_filter = config.genus;
        c.seed = 0;
        c.budget = config.budget();
        c.progress = progress;
        const auto res = census(c);
        nlohmann::json entries = nlohmann::json::array();
        bool ranks = true;
        for (const auto& e : res.entries) {
            entries.push_back(to_json(e));
            ranks &= e.frattini_rank == 2 && realizes_index2_subgroups(e.maximal_det_images);
        }
        rep.results = {{"classes", res.entries.size()},
                       {"labels", label_counts(res.entries)},
                       {"entries", entries},
                       {"stats",
                        {{"nodes_per_depth", res.stats.nodes_per_depth},
                         {"classes_per_depth", res.stats.classes_per_depth},
                         {"pruned_det", res.stats.pruned_det},
                         {"pruned_level", res.stats.pruned_level},
                         {"pruned_genus", res.stats.pruned_genus},
                         {"conjugacy_tests", res.stats.conjugacy_tests}}}};
        add("census", "every entry has Frattini rank 2 and the three index-2 det images", ranks,
            std::to_string(res.entries.size()) + " classes: " +
                multiset_string(label_counts(res.entries)));
    } else if (cmd == "check") {
        const auto h = load_group(config);
        const auto r = is_minimal(h, config.budget());
        rep.results = to_json(r);
        rep.results["group"] = to_json(h);
        const bool witness_ok = r.verdict || verify_witness(h, r, config.budget());
        add("check", "verdict computed and its evidence re-verified", witness_ok,
            std::string(r.verdict ? "minimal" : "not minimal: " + r.witness_kind));
    } else if (cmd == "genus") {
        const auto h = load_group(config);
        const auto d = genus(h);
        rep.results = to_json(d);
        rep.results["label"] = label(h).to_string();
        add("genus", "integrality identity", d.integral(), "genus " + std::to_string(d.genus));
    } else if (cmd == "lie-check") {
        try {
            const auto res = lie_check_all_classes(config.seed, config.max_retries, config.threads);
            rep.results = to_json(res, config.records);
            add("lie-check", "d != 0 mod 2^50 for every class pair", res.failures == 0,
                std::to_string(res.records.size()) + " class pairs, valuation of d in [" +
                    std::to_string(res.min_valuation) + ", " + std::to_string(res.max_valuation) +
                    "]");
        } catch (const VerificationFailure& e) {
            add("lie-check", "d != 0 mod 2^50 for every class pair", false, e.what());
        }
    } else if (cmd == "falsify") {
        try {
            const auto f = falsify_odd_prime(config.prime, config.seed);
            rep.results = to_json(f);
            add("falsify", "every det-surjective class has a witness", f.minimal == 0,
                std::to_string(f.det_surjective_classes) + " det-surjective classes, " +
                    std::to_string(f.minimal) + " minimal");
        } catch (const VerificationFailure& e) {
            add("falsify", "every det-surjective class has a witness", false, e.what());
        }
    } else if (cmd == "quadfamily") {
        nlohmann::json rows = nlohmann::json::array();
        bool ok = true;
        for (unsigned n = 1; n <= config.n_max; ++n) {
            const auto row = quadfamily_check(n);
            ok &= row.discriminant_matches && row.bad_only_above_2;
            rows.push_back(to_json(row));
        }
        rep.results = {{"rows", rows}};
        add("quadfamily", "Delta = -2^(2n+6), so bad reduction only above 2", ok,
            "n = 1.." + std::to_string(config.n_max));
    } else if (cmd == "family-check") {
        const auto table = families_from(config.families);
        const auto primes = primes_from(config.family_prime_start, config.family_primes);
        nlohmann::json out = nlohmann::json::array();
        bool any = false;
        for (const auto& f : table.families) {
            if (!config.label.empty() && f.label != config.label) continue;
            any = true;
            const auto r = family_identity_check(f, primes, config.family_points, config.seed);
            out.push_back(to_json(r));
            add(f.label, "twist and 2-isogeny relations", r.pass(),
                std::to_string(r.relations_checked) + " relations, " +
                    std::to_string(r.failures) + " failures");
        }
        if (!any) throw Error("family-check: no family labelled '" + config.label + "'");
        rep.results = {{"checksum", table.checksum}, {"families", out}};
    } else if (cmd == "verify-all") {
        SuiteOptions o;
        o.profile = config.profile;
        o.seed = config.seed;
        o.threads = config.threads;
        o.families = config.families;
        o.budget = config.budget();
        o.progress = progress;
        Report all = verify_all(o);
        all.config = rep.config;
        all.timing = config.timing;
        return all;
    }
    return rep;
}

std::string census_csv(const nlohmann::json& census_results) {
    std::ostringstream out;
    out << "label,level,index,genus,cusps,contains_minus_I,canonical_key,generator_modulus,generators\n";
    for (const auto& e : census_results.at("entries")) {
        std::string gens;
        for (const auto& g : e.at("generators")) {
            if (!gens.empty()) gens += ";";
            gens += std::to_string(g[0].get<int>()) + " " + std::to_string(g[1].get<int>()) + " " +
                    std::to_string(g[2].get<int>()) + " " + std::to_string(g[3].get<int>());
        }
        out << e.at("label").get<std::string>() << ',' << e.at("level") << ',' << e.at("index")
            << ',' << e.at("genus").at("genus") << ',' << e.at("genus").at("cusps") << ','
            << (e.at("contains_minus_I").get<bool>() ? "true" : "false") << ','
            << e.at("canonical_key").get<std::string>() << ',' << e.at("generator_modulus") << ','
            << '"' << gens << '"' << '\n';
    }
    return out.str();
}

}  // namespace minimal2
