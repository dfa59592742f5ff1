#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"

#include "minimal2/error.hpp"
#include "minimal2/finite_group.hpp"
#include "minimal2/subgroup.hpp"

using namespace minimal2;

namespace {

ResidueMatrix random_unit_matrix(std::mt19937_64& rng, std::uint32_t n) {
    std::uniform_int_distribution<std::int64_t> u(0, n - 1);
    for (;;) {
        ResidueMatrix m(n, u(rng), u(rng), u(rng), u(rng));
        if (is_unit(mat_det(m), n)) return m;
    }
}

OpenSubgroup random_subgroup(std::mt19937_64& rng, std::uint32_t n) {
    std::vector<ResidueMatrix> gens;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) gens.push_back(random_unit_matrix(rng, n));
    return closure(gens, n);
}

// Brute-force element set of <gens>: words until nothing new appears.
std::set<Packed> naive_closure(const std::vector<ResidueMatrix>& gens, std::uint32_t n) {
    std::set<Packed> s{ResidueMatrix::identity(n).pack()};
    for (bool grew = true; grew;) {
        grew = false;
        for (Packed x : std::vector<Packed>(s.begin(), s.end()))
            for (const auto& g : gens)
                grew |= s.insert(mat_mul(ResidueMatrix::unpack(x, n), g).pack()).second;
    }
    return s;
}

// Phi(H) by the exhaustive sweep: all squares and commutators, closed.
std::uint64_t naive_frattini_size(const OpenSubgroup& h) {
    const ModRing r = h.ring();
    std::vector<ResidueMatrix> gens;
    const auto e = h.elements();
    for (Packed x : e) gens.push_back(ResidueMatrix::unpack(r.mul(x, x), h.modulus()));
    for (Packed x : e)
        for (Packed y : e)
            gens.push_back(ResidueMatrix::unpack(
                r.mul(r.mul(r.inverse(x), r.inverse(y)), r.mul(x, y)), h.modulus()));
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return closure(gens, h.modulus()).size();
}

}  // namespace

TEST_CASE("closure examples") {
    CHECK(closure(std::vector<ResidueMatrix>{}, 8).size() == 1);
    const std::vector gl2f2{ResidueMatrix(2, 0, 1, 1, 0), ResidueMatrix(2, 1, 1, 0, 1)};
    CHECK(closure(gl2f2, 2).size() == 6);
    const std::vector diag{ResidueMatrix::diag(8, 3, 1), ResidueMatrix::diag(8, 5, 1)};
    const auto d = closure(diag, 8);
    CHECK(d.size() == 4);
    CHECK(det_image(d, 8) == std::vector<std::uint32_t>{1, 3, 5, 7});
    CHECK(det_surjective_2adic(d));
    CHECK_THROWS(closure(std::vector{ResidueMatrix(8, 2, 0, 0, 1)}, 8));
}

TEST_CASE("closure matches brute force and is idempotent") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        const std::uint32_t n = i % 3 == 0 ? 9 : 16;
        std::vector<ResidueMatrix> gens{random_unit_matrix(rng, n), random_unit_matrix(rng, n)};
        const auto h = closure(gens, n);
        const auto naive = naive_closure(gens, n);
        REQUIRE(std::vector<Packed>(naive.begin(), naive.end()) ==
                std::vector<Packed>(h.elements().begin(), h.elements().end()));
        std::vector<ResidueMatrix> all;
        for (Packed x : h.elements()) all.push_back(ResidueMatrix::unpack(x, n));
        REQUIRE(closure(all, n) == h);
        REQUIRE(h.size() * h.index() == gl2_order(n));
        REQUIRE(gl2_order(n) % h.size() == 0);
    }
}

TEST_CASE("level examples") {
    CHECK(level(full_group(8)) == 1);
    const auto borel = full_preimage(closure(std::vector{ResidueMatrix(2, 1, 1, 0, 1)}, 2), 8);
    CHECK(level(borel) == 2);
    CHECK(borel.index() == 3);
    CHECK(level(congruence_kernel(4, 8)) == 4);
    CHECK(level(closure(std::vector<ResidueMatrix>{}, 8)) == 8);
}

TEST_CASE("rebuilding from the level reproduces the group") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto h = random_subgroup(rng, 16);
        const auto l = level(h);
        REQUIRE(16 % l == 0);
        REQUIRE(full_preimage(reduce_to(h, l), 16) == h);
        if (l > 1) REQUIRE_FALSE(full_preimage(reduce_to(h, l / 2), 16) == h);
    }
}

TEST_CASE("det image examples") {
    CHECK(det_image(full_group(8), 8) == std::vector<std::uint32_t>{1, 3, 5, 7});
    std::vector<ResidueMatrix> sl;
    for (const auto& g : gl2_generators(8))
        if (mat_det(g) == 1) sl.push_back(g);
    sl.push_back(ResidueMatrix(8, 1, 1, 0, 1));
    sl.push_back(ResidueMatrix(8, 1, 0, 1, 1));
    CHECK(det_image(closure(sl, 8), 8) == std::vector<std::uint32_t>{1});
    CHECK(det_image(closure(std::vector{ResidueMatrix::diag(8, 3, 1)}, 8), 8) ==
          std::vector<std::uint32_t>{1, 3});
    CHECK_FALSE(det_surjective_2adic(closure(std::vector{ResidueMatrix::diag(8, 7, 1)}, 8)));
    CHECK(det_surjective_2adic(full_group(8)));
    CHECK_THROWS(det_surjective_2adic(full_group(4)));
}

TEST_CASE("Frattini quotient examples") {
    CHECK(frattini_quotient(closure(std::vector<ResidueMatrix>{}, 8)).rank == 0);
    CHECK(frattini_quotient(closure(std::vector{ResidueMatrix(8, 1, 1, 0, 1)}, 8)).rank == 1);
    const auto d = closure(std::vector{ResidueMatrix::diag(8, 3, 1), ResidueMatrix::diag(8, 5, 1)}, 8);
    const auto fq = frattini_quotient(d);
    CHECK(fq.rank == 2);
    CHECK(fq.frattini->size() == 1);
    std::set<std::vector<std::uint32_t>> images;
    for (const auto& k : index2_subgroups(d)) images.insert(det_image(k, 8));
    CHECK(images == std::set<std::vector<std::uint32_t>>{{1, 3}, {1, 5}, {1, 7}});
    CHECK_THROWS(frattini_quotient(full_group(2)));

    const auto c2 = closure(std::vector{ResidueMatrix(2, 1, 1, 0, 1)}, 2);
    const auto k = index2_subgroups(c2);
    REQUIRE(k.size() == 1);
    CHECK(k[0].size() == 1);
}

TEST_CASE("Frattini quotient against the sweep, and index-2 subgroups") {
    std::mt19937_64 rng(23);
    const auto sylow = full_preimage(closure(std::vector{ResidueMatrix(2, 1, 1, 0, 1)}, 2), 16);
    REQUIRE(sylow.is_p_group());
    int tested = 0;
    for (int i = 0; i < 2000 && tested < 40; ++i) {
        std::vector<ResidueMatrix> gens;
        for (int j = 0; j < 2; ++j) {
            const auto e = sylow.elements();
            gens.push_back(ResidueMatrix::unpack(e[rng() % e.size()], 16));
        }
        const auto h = closure(gens, 16);
        if (h.size() > 512) continue;  // the sweep is quadratic
        ++tested;
        const auto fq = frattini_quotient(h);
        REQUIRE(fq.frattini->size() == naive_frattini_size(h));
        REQUIRE(h.size() == fq.frattini->size() << fq.rank);
        // Coordinates are additive.
        const ModRing r = h.ring();
        const auto e = h.elements();
        for (int t = 0; t < 50; ++t) {
            const Packed x = e[rng() % e.size()], y = e[rng() % e.size()];
            REQUIRE(fq.coordinates_of(r.mul(x, y)) == (fq.coordinates_of(x) ^ fq.coordinates_of(y)));
        }
        const auto subs = index2_subgroups(h, fq);
        REQUIRE(subs.size() == (std::size_t{1} << fq.rank) - 1);
        std::vector<Packed> meet(e.begin(), e.end());
        for (const auto& k : subs) {
            REQUIRE(k.size() * 2 == h.size());
            for (Packed x : fq.frattini->elements()) REQUIRE(k.contains(x));
            std::vector<Packed> next;
            std::set_intersection(meet.begin(), meet.end(), k.elements().begin(), k.elements().end(),
                                  std::back_inserter(next));
            meet = std::move(next);
        }
        if (fq.rank > 0)
            REQUIRE(meet == std::vector<Packed>(fq.frattini->elements().begin(),
                                                fq.frattini->elements().end()));
    }
    CHECK(tested == 40);
}

TEST_CASE("nilpotency") {
    CHECK(is_nilpotent(closure(std::vector{ResidueMatrix(8, 1, 1, 0, 1), ResidueMatrix(8, 1, 0, 2, 3)}, 8)));
    CHECK_FALSE(is_nilpotent(full_group(2)));
    CHECK_FALSE(is_nilpotent(full_group(3)));
    CHECK_FALSE(is_nilpotent_sylow(full_group(3)));

    std::mt19937_64 rng(31);
    int nilpotent = 0;
    for (int i = 0; i < 100; ++i) {
        const std::uint32_t n = std::vector<std::uint32_t>{3, 5, 9, 8, 7}[i % 5];
        const auto h = random_subgroup(rng, n);
        const bool a = is_nilpotent(h), b = is_nilpotent_sylow(h);
        REQUIRE(a == b);
        nilpotent += a;
        if (h.is_p_group()) REQUIRE(a);
    }
    CHECK(nilpotent > 0);
    CHECK(nilpotent < 100);
}

TEST_CASE("canonical key") {
    const auto upper = closure(std::vector{ResidueMatrix(2, 1, 1, 0, 1)}, 2);
    const auto lower = closure(std::vector{ResidueMatrix(2, 1, 0, 1, 1)}, 2);
    CHECK(canonical_key(upper) == canonical_key(lower));
    CHECK(canonical_key(upper) == canonical_key(upper));
    const auto cartan = closure(std::vector{ResidueMatrix::diag(4, 3, 1), ResidueMatrix::diag(4, 1, 3)}, 4);
    const auto borel = closure(std::vector{ResidueMatrix::diag(4, 3, 1), ResidueMatrix::diag(4, 1, 3),
                                           ResidueMatrix(4, 1, 1, 0, 1)},
                               4);
    CHECK_FALSE(canonical_key(cartan) == canonical_key(borel));

    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
        const auto h = random_subgroup(rng, 8);
        const auto key = canonical_key(h);
        for (int j = 0; j < 10; ++j)
            REQUIRE(canonical_key(conjugate(h, random_unit_matrix(rng, 8))) == key);
    }
}

// Keys separate classes: compare with conjugacy classes of subgroups of
// GL_2(Z/4) computed by the finite-group oracle.
TEST_CASE("canonical key counts classes of subgroups of GL_2(Z/4)") {
    const auto g = FiniteGroup::gl2(4);
    const auto subs = g.all_subgroups();
    const auto reps = g.class_representatives(subs);
    std::set<CanonicalKey> keys;
    for (const auto& s : subs) {
        std::vector<Packed> elems;
        for (auto i : g.members(s)) elems.push_back(g.element(i));
        auto k = canonical_key(subgroup_from_elements(2, 4, std::move(elems)));
        keys.insert(k);
    }
    CHECK(keys.size() == reps.size());
}

TEST_CASE("JSON round trip and strictness") {
    const auto h = closure(std::vector{ResidueMatrix(16, 1, 2, 0, 3), ResidueMatrix(16, 5, 0, 4, 1)}, 16);
    const auto j = to_json(h);
    CHECK(subgroup_from_json(j) == h);
    CHECK(j.at("generators").size() == h.generators().size());
    auto bad = j;
    bad["elements"] = nlohmann::json::array();
    CHECK_THROWS_AS(subgroup_from_json(bad), Error);
    auto bad2 = j;
    bad2["modulus"] = 12;
    CHECK_THROWS(subgroup_from_json(bad2));
}
