#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"

#include "minimal2/error.hpp"
#include "minimal2/minimality.hpp"

using namespace minimal2;

namespace {

CensusResult run_census(std::uint32_t level, std::uint64_t index, std::optional<std::int64_t> g,
                        std::uint64_t seed) {
    CensusConfig c;
    c.level_bound = level;
    c.index_bound = index;
    c.genus_filter = g;
    c.seed = seed;
    return census(c);
}

const CensusResult& level16() {
    static const CensusResult r =
        run_census(16, std::numeric_limits<std::uint64_t>::max(), std::nullopt, 0);
    return r;
}

std::set<CanonicalKey> keys(const CensusResult& r) {
    std::set<CanonicalKey> s;
    for (const auto& e : r.entries) s.insert(e.key);
    return s;
}

}  // namespace

TEST_CASE("full GL_2(Z_2) is not minimal: the Borel preimage has index 3") {
    const auto r = is_minimal(full_group(2));
    CHECK_FALSE(r.verdict);
    CHECK_FALSE(r.is_two_group);
    CHECK(r.det_surjective);
    CHECK(r.witness_kind == "index-3-sylow");
    CHECK(r.witness_index == 3);
    CHECK(r.certifying_modulus == 8);
    CHECK(verify_witness(full_group(2), r));
    REQUIRE(r.double_check.has_value());
    CHECK(*r.double_check);
}

TEST_CASE("non-surjective det is not minimal") {
    const auto h = closure(std::vector{ResidueMatrix::diag(8, 3, 1), ResidueMatrix(8, 1, 2, 0, 1)}, 8);
    const auto r = is_minimal(h);
    CHECK_FALSE(r.verdict);
    CHECK(r.witness_kind == "det-not-surjective");
    CHECK(verify_witness(h, r));
}

TEST_CASE("tampered witness is rejected") {
    auto r = is_minimal(full_group(2));
    r.witness_index = 2;
    CHECK_FALSE(verify_witness(full_group(2), r));
    auto r2 = is_minimal(full_group(2));
    r2.witness_generators.clear();
    CHECK_FALSE(verify_witness(full_group(2), r2));
}

TEST_CASE("no minimal groups of level at most 2") {
    CHECK(run_census(2, 96, std::nullopt, 0).entries.empty());
    CHECK(run_census(4, 96, std::nullopt, 0).entries.empty());
}

TEST_CASE("census entries are minimal, rank 2, consistent with their labels") {
    const auto& r = level16();
    REQUIRE_FALSE(r.entries.empty());
    std::map<std::string, int> counts;
    for (const auto& e : r.entries) {
        ++counts[Label{e.level, e.index, e.genus.genus}.to_string()];
        REQUIRE(level(e.group) == e.level);
        REQUIRE(e.group.index() == e.index);
        REQUIRE(e.contains_minus_I == contains_minus_I(e.group));
        REQUIRE(label(e.group) == Label{e.level, e.index, e.genus.genus});
        const auto rep = is_minimal(e.group);
        REQUIRE(rep.verdict);
        REQUIRE(rep.frattini_rank == 2);
        REQUIRE(rep.certifying_modulus == std::max<std::uint32_t>(8, 2 * e.level));
        auto images = rep.maximal_det_images;
        std::sort(images.begin(), images.end());
        REQUIRE(images == std::vector<std::vector<std::uint32_t>>{{1, 3}, {1, 5}, {1, 7}});
        // The stored generators rebuild a conjugate with the same key.
        const auto rebuilt = full_preimage(closure(e.generators, e.level), e.group.modulus());
        REQUIRE(rebuilt.size() == e.group.size());
        REQUIRE(canonical_key(rebuilt) == e.key);
    }
    CHECK(counts["8.24.0"] == 4);
    CHECK(counts["16.48.0"] == 8);
    // The family with a^2 = -(2^n + 1) has minimal image 16.384.9 for n = 2, 10.
    CHECK(counts["16.384.9"] > 0);
}

TEST_CASE("canonical keys of census entries are the full-orbit minimum") {
    for (const auto& e : level16().entries) REQUIRE(canonical_key(e.group) == e.key);
    CHECK(keys(level16()).size() == level16().entries.size());
}

TEST_CASE("census does not depend on the starting Sylow subgroup or branch order") {
    const auto a = keys(level16());
    const auto b = keys(run_census(16, std::numeric_limits<std::uint64_t>::max(), std::nullopt, 7));
    CHECK(a == b);
    const auto g0 = run_census(64, 96, 0, 0);
    const auto g1 = run_census(64, 96, 0, 1234);
    CHECK(g0.entries.size() == 28);
    CHECK(keys(g0) == keys(g1));
}

TEST_CASE("genus filter and index bound agree with the unfiltered census") {
    const auto all = run_census(16, 48, std::nullopt, 0);
    const auto g0 = run_census(16, 48, 0, 0);
    std::set<CanonicalKey> expected;
    for (const auto& e : all.entries)
        if (e.genus.genus == 0) expected.insert(e.key);
    CHECK(keys(g0) == expected);
    for (const auto& e : level16().entries)
        if (e.index <= 48) CHECK(keys(all).count(e.key) == 1);
}

TEST_CASE("det pruning is monotone") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> u(0, 15);
    int tested = 0;
    for (int i = 0; i < 2000 && tested < 100; ++i) {
        std::vector<ResidueMatrix> gens;
        for (int j = 0; j < 2; ++j) {
            ResidueMatrix m(16, u(rng), u(rng), u(rng), u(rng));
            if (is_unit(mat_det(m), 16)) gens.push_back(m);
        }
        const auto k = closure(gens, 16);
        if (det_surjective_2adic(k)) continue;
        ++tested;
        const auto e = k.elements();
        const auto sub = closure(std::vector{ResidueMatrix::unpack(e[rng() % e.size()], 16)}, 16);
        REQUIRE_FALSE(det_surjective_2adic(sub));
    }
    CHECK(tested == 100);
}

TEST_CASE("random negative verdicts carry valid witnesses") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::int64_t> u(0, 7);
    int negative = 0;
    for (int i = 0; i < 200; ++i) {
        std::vector<ResidueMatrix> gens;
        for (int j = 0; j < 3; ++j) {
            ResidueMatrix m(8, u(rng), u(rng), u(rng), u(rng));
            if (is_unit(mat_det(m), 8)) gens.push_back(m);
        }
        const auto h = closure(gens, 8);
        const auto r = is_minimal(h);
        if (r.verdict) {
            CHECK(r.frattini_rank == 2);
            continue;
        }
        ++negative;
        REQUIRE(verify_witness(h, r));
    }
    CHECK(negative > 0);
}

TEST_CASE("random two-generator subgroups") {
    const auto g = full_group(32);
    int rank2 = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto t = random_two_generator(g, seed);
        CHECK(mat_det(t.a) % 8 == 3);
        CHECK(mat_det(t.b) % 8 == 5);
        CHECK(det_surjective_2adic(t.group));
        CHECK(t.verified_up_to == 32);
        rank2 += t.report.frattini_rank == 2;
    }
    CHECK(rank2 > 0);
    const auto x = random_two_generator(g, 99), y = random_two_generator(g, 99);
    CHECK(x.a == y.a);
    CHECK(x.b == y.b);
    CHECK(x.group == y.group);
    CHECK_THROWS(random_two_generator(closure(std::vector{ResidueMatrix::diag(8, 3, 1)}, 8), 1));
}

TEST_CASE("odd primes") {
    const auto f3 = falsify_odd_prime(3, 1);
    CHECK(f3.minimal == 0);
    CHECK(f3.det_surjective_classes == f3.witnesses.size());
    CHECK(f3.det_surjective_classes > 0);
    for (const auto& w : f3.witnesses) {
        const auto k = closure(w.witness_generators, 9);
        CHECK(k.size() == w.witness_size);
        CHECK(k.size() < w.preimage_size);
        CHECK(det_image(k, 9).size() == 6);
    }
    // Same seed, same report.
    CHECK(to_json(falsify_odd_prime(3, 1)) == to_json(f3));
    CHECK_THROWS(falsify_odd_prime(2, 1));
}

TEST_CASE("lemma oracles") {
    CHECK(check_det_lemma(2, 6).pass);
    CHECK(check_det_lemma(3, 3).pass);
    CHECK(check_non_two_group_lemma().pass);
    CHECK(check_nilpotent_det_lemma().pass);
}

TEST_CASE("minimality JSON") {
    const auto j = to_json(is_minimal(full_group(2)));
    CHECK(j.at("verdict") == false);
    CHECK(j.at("witness").at("kind") == "index-3-sylow");
    CHECK(j.at("double_check_agrees") == true);
}
