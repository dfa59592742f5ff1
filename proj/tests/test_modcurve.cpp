#include <random>

#include "doctest.h"

#include "minimal2/error.hpp"
#include "minimal2/finite_group.hpp"
#include "minimal2/modcurve.hpp"

using namespace minimal2;

namespace {

std::vector<ResidueMatrix> unit_diagonals(std::uint32_t n, bool both) {
    std::vector<ResidueMatrix> out;
    for (std::uint32_t u = 1; u < n; ++u)
        if (is_unit(u, n)) {
            out.push_back(ResidueMatrix::diag(n, 1, u));
            if (both) out.push_back(ResidueMatrix::diag(n, u, 1));
        }
    return out;
}

// Gamma_0(N), Gamma_1(N) and Gamma(N) images with surjective det.
OpenSubgroup gamma0(std::uint32_t n) {
    auto g = unit_diagonals(n, true);
    g.push_back(ResidueMatrix(n, 1, 1, 0, 1));
    return closure(g, n);
}
OpenSubgroup gamma1(std::uint32_t n) {
    auto g = unit_diagonals(n, false);
    g.push_back(ResidueMatrix(n, 1, 1, 0, 1));
    return closure(g, n);
}
OpenSubgroup gamma_full(std::uint32_t n) { return closure(unit_diagonals(n, false), n); }

std::uint64_t phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return b ? gcd(b, a % b) : a; }

// X_0(2^k), k >= 2: no elliptic points, cusps sum_{d|N} phi(gcd(d, N/d)).
std::int64_t genus_x0_2power(std::uint64_t n) {
    const std::int64_t m = n + n / 2;
    std::int64_t c = 0;
    for (std::uint64_t d = 1; d <= n; d *= 2) c += phi(gcd(d, n / d));
    return 1 + (m - 6 * c) / 12;
}

}  // namespace

TEST_CASE("classical curves") {
    const auto x1 = genus(full_group(2));
    CHECK(x1.psl_index == 1);
    CHECK(x1.genus == 0);
    const auto x02 = genus(gamma0(2));
    CHECK(x02.psl_index == 3);
    CHECK(x02.nu2 == 1);
    CHECK(x02.nu3 == 0);
    CHECK(x02.cusps == 2);
    CHECK(x02.genus == 0);
    const auto x2 = genus(gamma_full(2));
    CHECK(x2.psl_index == 6);
    CHECK(x2.cusps == 3);
    CHECK(x2.genus == 0);
}

TEST_CASE("X_0, X_1 and X(N) against closed forms") {
    for (std::uint32_t n : {4u, 8u, 16u, 32u, 64u}) {
        const auto d = genus(gamma0(n));
        CHECK(d.psl_index == n + n / 2);
        CHECK(d.genus == genus_x0_2power(n));
    }
    CHECK(genus(gamma0(32)).genus == 1);
    CHECK(genus(gamma0(64)).genus == 3);
    CHECK(genus(gamma0(9)).genus == 0);
    CHECK(genus(gamma0(27)).genus == 1);
    CHECK(genus(gamma0(25)).genus == 0);
    CHECK(genus(gamma0(49)).genus == 1);

    // g(X_1(N)) = 1 + N^2/24 prod(1 - 1/p^2) - 1/4 sum_{d|N} phi(d) phi(N/d), N >= 5.
    for (std::uint32_t n : {8u, 16u, 32u, 9u, 27u, 25u}) {
        const std::uint64_t p = *prime_of(n);
        std::uint64_t s = 0;
        for (std::uint64_t d = 1; d <= n; d *= p) s += phi(d) * phi(n / d);
        const std::int64_t g = 1 + static_cast<std::int64_t>(n * n * (p * p - 1) / (24 * p * p)) -
                               static_cast<std::int64_t>(s / 4);
        CHECK(genus(gamma1(n)).genus == g);
    }
    // g(X(N)) = 1 + N^2 (N - 6)/24 prod(1 - 1/p^2).
    CHECK(genus(gamma_full(4)).genus == 0);
    CHECK(genus(gamma_full(8)).genus == 5);
    CHECK(genus(gamma_full(16)).genus == 81);
    CHECK(genus(gamma_full(3)).genus == 0);
    CHECK(genus(gamma_full(9)).genus == 10);
    CHECK(genus(gamma_full(4)).cusps == 6);
}

TEST_CASE("minus I") {
    const auto triv = closure(std::vector<ResidueMatrix>{}, 4);
    CHECK(adjoin_minus_I(triv).size() == 2);
    CHECK(adjoin_minus_I(full_group(4)) == full_group(4));
    CHECK(contains_minus_I(full_group(4)));
    CHECK_FALSE(contains_minus_I(gamma1(8)));
    CHECK(contains_minus_I(gamma0(8)));
}

TEST_CASE("genus needs surjective det") {
    CHECK_THROWS(genus(closure(std::vector{ResidueMatrix(8, 1, 1, 0, 1)}, 8)));
}

TEST_CASE("integrality, conjugation invariance, covering degrees") {
    std::mt19937_64 rng(3);
    const auto g = FiniteGroup::gl2(8);
    auto random_unit = [&](std::uint32_t n) {
        std::uniform_int_distribution<std::int64_t> u(0, n - 1);
        for (;;) {
            ResidueMatrix m(n, u(rng), u(rng), u(rng), u(rng));
            if (is_unit(mat_det(m), n)) return m;
        }
    };
    int tested = 0;
    for (int i = 0; i < 400 && tested < 40; ++i) {
        std::vector<ResidueMatrix> gens{random_unit(8), random_unit(8), random_unit(8)};
        const auto h = closure(gens, 8);
        if (det_image(h, 8).size() != 4) continue;
        ++tested;
        const auto d = genus(h);
        REQUIRE(d.integral());
        REQUIRE(12 * (d.genus - 1) + 3 * static_cast<std::int64_t>(d.nu2) +
                    4 * static_cast<std::int64_t>(d.nu3) + 6 * static_cast<std::int64_t>(d.cusps) ==
                static_cast<std::int64_t>(d.psl_index));
        for (int j = 0; j < 10; ++j) {
            const auto e = genus(conjugate(h, random_unit(8)));
            REQUIRE(e.genus == d.genus);
            REQUIRE(e.psl_index == d.psl_index);
            REQUIRE(e.cusps == d.cusps);
        }
        // A det-surjective subgroup: drop one generator and add back a det lift.
        std::vector<ResidueMatrix> sub{gens[0], gens[1]};
        for (Packed x : h.elements())
            if (is_unit(mat_det(ResidueMatrix::unpack(x, 8)), 8)) {
                sub.push_back(ResidueMatrix::unpack(x, 8));
                if (det_image(closure(sub, 8), 8).size() == 4) break;
                sub.pop_back();
            }
        const auto k = closure(sub, 8);
        if (det_image(k, 8).size() == 4) REQUIRE(genus(k).psl_index % d.psl_index == 0);
    }
    CHECK(tested == 40);
}

TEST_CASE("genus is the same at any modulus above the level") {
    const auto g8 = gamma0(8);
    CHECK(genus(full_preimage(g8, 32)).genus == genus(g8).genus);
    CHECK(genus(full_preimage(g8, 32)).psl_index == genus(g8).psl_index);
    CHECK(label(full_preimage(g8, 32)) == label(g8));
    CHECK(label(g8).to_string() == "8.12.0");
}

TEST_CASE("tampered formula is caught by integrality") {
    auto bad = [](std::uint64_t m, std::uint64_t nu2, std::uint64_t nu3, std::uint64_t c) {
        return standard_genus_formula(m, nu2, nu3, c) + 1;
    };
    CHECK_THROWS_AS(genus(gamma0(2), bad), VerificationFailure);
}
