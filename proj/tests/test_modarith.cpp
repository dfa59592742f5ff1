#include <random>
#include <set>

#include "doctest.h"

#include "minimal2/error.hpp"
#include "minimal2/modarith.hpp"

using namespace minimal2;

TEST_CASE("matrix examples") {
    const auto s = ResidueMatrix(2, 0, 1, 1, 0), t = ResidueMatrix(2, 1, 1, 0, 1);
    CHECK(mat_mul(s, t) == ResidueMatrix(2, 0, 1, 1, 1));
    CHECK(mat_mul(ResidueMatrix::identity(8), ResidueMatrix::identity(8)).is_identity());

    CHECK(mat_det(ResidueMatrix::identity(8)) == 1);
    CHECK(mat_det(ResidueMatrix::diag(8, 3, 1)) == 3);
    CHECK(mat_det(ResidueMatrix(8, 1, 2, 3, 4)) == 6);

    CHECK(mat_inverse(ResidueMatrix::diag(8, 3, 1)) == ResidueMatrix::diag(8, 3, 1));
    CHECK(mat_inverse(ResidueMatrix(8, 1, 1, 0, 1)) == ResidueMatrix(8, 1, 7, 0, 1));
    CHECK_THROWS_AS(mat_inverse(ResidueMatrix(8, 2, 0, 0, 1)), Error);

    CHECK(mat_order(ResidueMatrix::identity(8)) == 1);
    CHECK(mat_order(ResidueMatrix(4, -1, 0, 0, -1)) == 2);
    CHECK(mat_order(ResidueMatrix(8, 1, 1, 0, 1)) == 8);
    CHECK(mat_order(ResidueMatrix(256, 1, 1, 0, 1)) == 256);

    CHECK(reduce(ResidueMatrix::diag(8, 5, 1), 2).is_identity());
    CHECK(reduce(ResidueMatrix(8, 1, 4, 0, 1), 4).is_identity());
    CHECK(reduce(ResidueMatrix(16, 3, 2, 1, 1), 4) == ResidueMatrix(4, 3, 2, 1, 1));
    CHECK_THROWS(reduce(ResidueMatrix(8, 1, 0, 0, 1), 3));
    CHECK_THROWS(mat_mul(ResidueMatrix::identity(8), ResidueMatrix::identity(4)));
}

TEST_CASE("entries are reduced, negatives included") {
    const ResidueMatrix m(8, -1, 9, -9, 17);
    CHECK(m.a() == 7);
    CHECK(m.b() == 1);
    CHECK(m.c() == 7);
    CHECK(m.d() == 1);
}

TEST_CASE("group orders against brute force") {
    for (std::uint32_t n : {2u, 3u, 4u, 5u, 8u, 9u}) {
        std::uint64_t gl = 0, sl = 0;
        for (std::uint32_t x = 0; x < n * n * n * n; ++x) {
            const ResidueMatrix m(n, x % n, x / n % n, x / n / n % n, x / n / n / n);
            const auto d = mat_det(m);
            gl += is_unit(d, n);
            sl += d == 1 % n;
        }
        CHECK(gl2_order(n) == gl);
        CHECK(sl2_order(n) == sl);
    }
}

TEST_CASE("det is multiplicative on random pairs") {
    std::mt19937_64 rng(7);
    for (std::uint32_t n : {2u, 4u, 8u, 16u, 32u}) {
        std::uniform_int_distribution<std::int64_t> u(0, n - 1);
        for (int i = 0; i < 10000; ++i) {
            const ResidueMatrix x(n, u(rng), u(rng), u(rng), u(rng));
            const ResidueMatrix y(n, u(rng), u(rng), u(rng), u(rng));
            REQUIRE(mat_det(mat_mul(x, y)) == mat_det(x) * mat_det(y) % n);
        }
    }
}

TEST_CASE("reduction mod 2 is a homomorphism on all of M_2(Z/8)") {
    std::vector<ResidueMatrix> all;
    for (std::uint32_t x = 0; x < 4096; ++x)
        all.emplace_back(8, x & 7, (x >> 3) & 7, (x >> 6) & 7, x >> 9);
    for (std::size_t i = 0; i < all.size(); i += 7)
        for (const auto& y : all) {
            const auto& x = all[i];
            REQUIRE(reduce(mat_mul(x, y), 2) == mat_mul(reduce(x, 2), reduce(y, 2)));
        }
    for (const auto& x : all) REQUIRE(mat_det(reduce(x, 2)) == mat_det(x) % 2);
}

TEST_CASE("pack round trip and inverse law over GL_2(Z/8)") {
    std::set<Packed> seen;
    const ModRing ring(8);
    for (std::uint32_t x = 0; x < 4096; ++x) {
        const ResidueMatrix m(8, x & 7, (x >> 3) & 7, (x >> 6) & 7, x >> 9);
        if (!is_unit(mat_det(m), 8)) continue;
        REQUIRE(ResidueMatrix::unpack(m.pack(), 8) == m);
        REQUIRE(seen.insert(m.pack()).second);
        REQUIRE(mat_mul(m, mat_inverse(m)).is_identity());
        REQUIRE(mat_mul(mat_inverse(m), m).is_identity());
        REQUIRE(ring.mul(ring.inverse(m.pack()), m.pack()) == ring.identity());
        REQUIRE(mat_pow(m, mat_order(m)).is_identity());
    }
    CHECK(seen.size() == gl2_order(8));
}

TEST_CASE("mat_order is minimal") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> u(0, 63);
    for (int i = 0; i < 300; ++i) {
        const ResidueMatrix m(64, u(rng), u(rng), u(rng), u(rng));
        if (!is_unit(mat_det(m), 64)) continue;
        const auto n = mat_order(m);
        REQUIRE(mat_pow(m, n).is_identity());
        std::uint64_t k = 1;
        auto p = m;
        while (!p.is_identity()) {
            p = mat_mul(p, m);
            ++k;
        }
        REQUIRE(k == n);
    }
}

TEST_CASE("prime powers") {
    CHECK(prime_of(128) == 2u);
    CHECK(prime_of(81) == 3u);
    CHECK(prime_of(7) == 7u);
    CHECK_FALSE(prime_of(12).has_value());
    CHECK(mod_inverse(3, 8) == 3);
    CHECK(mod_inverse(7, 9) == 4);
}

TEST_CASE("GSp multiplier") {
    CHECK(gsp_mult(SymplecticMatrix::identity(2, 3)) == 1u);
    CHECK(gsp_mult(SymplecticMatrix::omega(2, 3)) == 1u);
    CHECK(gsp_mult(SymplecticMatrix(2, 3, {2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1})) == 2u);
    CHECK_FALSE(gsp_mult(SymplecticMatrix(1, 3, {1, 0, 0, 0})).has_value());
    CHECK(gsp_mult(SymplecticMatrix::scalar(3, 7, 3)) == 2u);

    CHECK(gsp_centralizer_is_scalar(2, 5, SymplecticMatrix::scalar(2, 5, 2)));
    CHECK(gsp_mult(SymplecticMatrix::scalar(2, 5, 2)) == 4u);
    CHECK_FALSE(gsp_centralizer_is_scalar(2, 3, SymplecticMatrix::omega(2, 3)));
}

// Exhaustive for g = 1 and a sample of g = 2 at p = 3: central elements have
// square multiplier, and they are exactly the scalars.
TEST_CASE("GSp centralizer is scalar, multiplier is a square") {
    std::set<std::uint32_t> commuting;
    for (std::uint32_t x = 0; x < 81; ++x) {
        const SymplecticMatrix m(1, 3, {x % 3, x / 3 % 3, x / 9 % 3, x / 27});
        if (!gsp_mult(m)) continue;
        if (gsp_centralizer_is_scalar(1, 3, m)) {
            commuting.insert(x);
            const auto l = m.scalar_value();
            REQUIRE(l.has_value());
            REQUIRE(*gsp_mult(m) == *l * *l % 3);
        }
    }
    CHECK(commuting == std::set<std::uint32_t>{1 + 27, 2 + 2 * 27});

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> u(0, 2);
    std::uint64_t members = 0;
    for (int i = 0; i < 200000; ++i) {
        std::vector<std::int64_t> e(16);
        for (auto& v : e) v = u(rng);
        const SymplecticMatrix m(2, 3, e);
        const auto mult = gsp_mult(m);
        if (!mult) continue;
        ++members;
        if (gsp_centralizer_is_scalar(2, 3, m)) REQUIRE(*mult == 1);
    }
    CHECK(members > 0);
    for (std::int64_t l : {1, 2}) {
        const auto s = SymplecticMatrix::scalar(2, 3, l);
        CHECK(gsp_centralizer_is_scalar(2, 3, s));
        CHECK(*gsp_mult(s) == 1);
    }
}
