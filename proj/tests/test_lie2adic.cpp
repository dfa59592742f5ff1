#include <random>

#include <gmpxx.h>

#include "doctest.h"

#include "minimal2/error.hpp"
#include "minimal2/lie2adic.hpp"

using namespace minimal2;

namespace {

PrecisionMatrix random_kernel_matrix(std::mt19937_64& rng, std::uint64_t shift = 2) {
    std::array<u128, 4> e;
    for (auto& x : e) x = u128(rng()) << shift;
    return PrecisionMatrix(64, e, 64);
}

PrecisionMatrix random_unit_mod4(std::mt19937_64& rng) {
    auto m = random_kernel_matrix(rng);
    return m + PrecisionMatrix::identity(64);
}

mpz_class to_mpz(u128 x) {
    mpz_class hi(static_cast<unsigned long>(x >> 64)), lo(static_cast<unsigned long>(x));
    return (hi << 64) + lo;
}

}  // namespace

TEST_CASE("log and exp examples") {
    CHECK(mat_log(PrecisionMatrix::identity(64)).equal_mod(PrecisionMatrix::zero(64), 60));
    CHECK(mat_exp(PrecisionMatrix::zero(64)).equal_mod(PrecisionMatrix::identity(64), 60));
    const auto l = mat_log(PrecisionMatrix::exact(64, 5, 0, 0, 1));
    CHECK(l.low(0, 6) == 60);
    CHECK(l.low(1, 6) == 0);
    CHECK(l.low(2, 6) == 0);
    CHECK(l.low(3, 6) == 0);
    CHECK(mat_exp(l).equal_mod(PrecisionMatrix::exact(64, 5, 0, 0, 1), 50));
    CHECK_THROWS(mat_log(PrecisionMatrix::exact(64, 3, 0, 0, 1)));
    CHECK_THROWS(mat_exp(PrecisionMatrix::exact(64, 2, 0, 0, 0)));
}

TEST_CASE("round trips and the inverse law") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 10000; ++i) {
        const auto m = random_unit_mod4(rng);
        const auto x = random_kernel_matrix(rng);
        REQUIRE(mat_exp(mat_log(m)).equal_mod(m, 50));
        REQUIRE(mat_log(mat_exp(x)).equal_mod(x, 50));
        REQUIRE((mat_exp(x) * mat_exp(-x)).equal_mod(PrecisionMatrix::identity(64), 50));
    }
}

TEST_CASE("log of a square is twice the log") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 2000; ++i) {
        const auto m = random_unit_mod4(rng);
        REQUIRE(mat_log(m * m).equal_mod(mat_log(m).scaled(2), 50));
        REQUIRE(mat_log(m.pow(12)).equal_mod(mat_log(m).scaled(12), 50));
    }
}

// Scalars: log(1 + 4k) against the exact rational partial sum, whose tail has
// valuation above the working width.
TEST_CASE("tracked precision is a true lower bound on scalars") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const std::int64_t k = static_cast<std::int64_t>(rng() >> 8) * ((i & 1) ? 1 : -1);
        const mpz_class x = 4 * mpz_class(static_cast<long>(k));
        mpq_class sum = 0;
        mpz_class pow = 1;
        for (long n = 1; n <= 90; ++n) {
            pow *= x;
            sum += mpq_class((n % 2 ? 1 : -1) * pow, n);
        }
        sum.canonicalize();
        REQUIRE(mpz_odd_p(sum.get_den().get_mpz_t()));
        const auto m = PrecisionMatrix::exact(64, 1 + 4 * k, 0, 0, 1 + 4 * k);
        const auto l = mat_log(m);
        const unsigned p = l.precision();
        REQUIRE(p >= 50);
        const mpz_class mod = mpz_class(1) << p;
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), sum.get_den().get_mpz_t(), mod.get_mpz_t());
        mpz_class expected = sum.get_num() * inv % mod;
        if (expected < 0) expected += mod;
        REQUIRE(to_mpz(l.entry(0)) % mod == expected);
        REQUIRE(to_mpz(l.entry(3)) % mod == expected);
        REQUIRE(to_mpz(l.entry(1)) % mod == 0);
    }
}

TEST_CASE("precision bookkeeping") {
    const auto x = PrecisionMatrix::exact(64, 8, 4, 12, 16);
    const auto half = x.divided(4);
    CHECK(half.precision() == 62);
    CHECK(half.low(0, 8) == 2);
    CHECK(half.low(1, 8) == 1);
    CHECK_THROWS(x.divided(8));
    CHECK(x.valuation() == 2);
    CHECK((x * x).precision() == 64);
    const PrecisionMatrix rough(64, {4, 0, 0, 4}, 10);
    CHECK((rough * x).precision() == 12);
    CHECK((rough + x).precision() == 10);
}

TEST_CASE("brackets") {
    std::mt19937_64 rng(24);
    const auto e12 = PrecisionMatrix::exact(64, 0, 1, 0, 0);
    const auto e21 = PrecisionMatrix::exact(64, 0, 0, 1, 0);
    CHECK(lie_bracket(e12, e21).equal_mod(PrecisionMatrix::exact(64, 1, 0, 0, -1), 64));
    for (int i = 0; i < 1000; ++i) {
        const auto x = random_kernel_matrix(rng, 0), y = random_kernel_matrix(rng, 0),
                   z = random_kernel_matrix(rng, 0);
        const std::int64_t s = static_cast<std::int64_t>(rng() % 1000) - 500;
        REQUIRE(lie_bracket(x, x).equal_mod(PrecisionMatrix::zero(64), 64));
        REQUIRE(lie_bracket(x + y.scaled(s), z)
                    .equal_mod(lie_bracket(x, z) + lie_bracket(y, z).scaled(s), 64));
        REQUIRE(lie_bracket(x, y).equal_mod(-lie_bracket(y, x), 64));
        // Jacobi.
        const auto j = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) +
                       lie_bracket(z, lie_bracket(x, y));
        REQUIRE(j.equal_mod(PrecisionMatrix::zero(64), 64));
    }
}

TEST_CASE("d determinant") {
    const auto a = PrecisionMatrix::exact(64, 1, 4, 8, 5);
    CHECK(d_determinant(a, a).d == 0);
    CHECK(d_determinant(PrecisionMatrix::exact(64, 5, 0, 0, 1), PrecisionMatrix::exact(64, 1, 0, 0, 9)).d ==
          0);

    // Conjugating both by C = I mod 4 acts on M_2 with determinant 1.
    std::mt19937_64 rng(25);
    const auto c = PrecisionMatrix::exact(64, 1, 4, 0, 1), ci = PrecisionMatrix::exact(64, 1, -4, 0, 1);
    const auto c2 = PrecisionMatrix::exact(64, 1, 0, -8, 1), c2i = PrecisionMatrix::exact(64, 1, 0, 8, 1);
    int nonzero = 0;
    for (int i = 0; i < 200; ++i) {
        std::array<u128, 4> ea, eb;
        for (auto& v : ea) v = rng() % 64;
        for (auto& v : eb) v = rng() % 64;
        ea[0] = ea[0] * 2 + 1;  // make it a unit mod 2
        ea[1] *= 2;
        ea[2] *= 2;
        ea[3] = ea[3] * 2 + 1;
        eb[0] = eb[0] * 2 + 1;
        eb[1] = eb[1] * 2 + 1;
        eb[2] = eb[2] * 2 + 1;
        eb[3] *= 2;
        const PrecisionMatrix ma(64, ea, 64), mb(64, eb, 64);
        DResult d0;
        try {
            d0 = d_determinant(ma, mb);
        } catch (const Error&) {
            continue;
        }
        const auto d1 = d_determinant(c * ma * ci, c * mb * ci);
        const auto d2 = d_determinant(c2 * ma * c2i, c2 * mb * c2i);
        REQUIRE(d1.d == d0.d);
        REQUIRE(d2.d == d0.d);
        nonzero += d0.d != 0;
    }
    CHECK(nonzero > 0);
}

TEST_CASE("all 96^2 classes") {
    const auto r = lie_check_all_classes(1, 8, 2);
    CHECK(r.records.size() == 9216);
    CHECK(r.failures == 0);
    CHECK(r.min_valuation < 50);
    CHECK(r.max_valuation < 50);
    for (std::size_t i = 0; i < r.records.size(); i += 97) {
        CHECK(r.records[i].class_a * 96 + r.records[i].class_b == i);
        CHECK(r.records[i].d != 0);
    }
    // Thread count does not change the records.
    const auto s = lie_check_all_classes(1, 8, 5);
    CHECK(to_json(s, true) == to_json(r, true));
    CHECK_FALSE(to_json(lie_check_all_classes(2, 8, 0), true) == to_json(r, true));
}
