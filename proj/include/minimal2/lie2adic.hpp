#pragma once

// 2x2 matrices over Z/2^P with a tracked number of correct low bits, the
// matrix log and exp on I + 4M_2(Z_2), and the determinant test on the
// Lie algebra spanned by two elements.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace minimal2 {

using u128 = unsigned __int128;

class PrecisionMatrix {
public:
    // Entries are integers mod 2^bits, known to be correct mod 2^precision.
    PrecisionMatrix(unsigned bits, std::array<u128, 4> entries, unsigned precision);
    // Exact input: precision = bits.
    static PrecisionMatrix exact(unsigned bits, std::int64_t a, std::int64_t b, std::int64_t c,
                                 std::int64_t d);
    static PrecisionMatrix identity(unsigned bits) { return exact(bits, 1, 0, 0, 1); }
    static PrecisionMatrix zero(unsigned bits) { return exact(bits, 0, 0, 0, 0); }

    unsigned bits() const { return bits_; }
    unsigned precision() const { return prec_; }
    u128 entry(int i) const { return e_[i]; }
    // Entry i mod 2^k, k <= 64 and k <= precision.
    std::uint64_t low(int i, unsigned k) const;
    // Guaranteed lower bound for the 2-adic valuation (capped at precision).
    unsigned valuation() const;
    // Equal mod 2^k, with k within both precisions.
    bool equal_mod(const PrecisionMatrix& o, unsigned k) const;

    PrecisionMatrix operator+(const PrecisionMatrix& o) const;
    PrecisionMatrix operator-(const PrecisionMatrix& o) const;
    PrecisionMatrix operator*(const PrecisionMatrix& o) const;
    PrecisionMatrix operator-() const;
    PrecisionMatrix scaled(std::int64_t s) const;
    // Exact division by n; needs valuation >= v_2(n) and costs v_2(n) bits.
    PrecisionMatrix divided(std::uint64_t n) const;
    PrecisionMatrix pow(std::uint64_t e) const;

    std::string to_string() const;

private:
    unsigned bits_;
    unsigned prec_;
    std::array<u128, 4> e_;
    u128 mask() const;
};

unsigned valuation(u128 x, unsigned cap);

// log(M) for M = I mod 4.
PrecisionMatrix mat_log(const PrecisionMatrix& m);
// exp(X) for X = 0 mod 4.
PrecisionMatrix mat_exp(const PrecisionMatrix& x);
PrecisionMatrix lie_bracket(const PrecisionMatrix& x, const PrecisionMatrix& y);

struct DResult {
    std::uint64_t d = 0;  // mod 2^50
    unsigned precision = 0;
    unsigned valuation = 0;  // of d, 50 when d = 0 mod 2^50
};

// det of the 4x4 matrix whose columns are the entries of X = log A^12,
// Y = log B^12, [X, Y] and [[X, Y], X].
DResult d_determinant(const PrecisionMatrix& a, const PrecisionMatrix& b);

struct LieCheckRecord {
    std::uint32_t class_a = 0, class_b = 0;  // indices into the sorted GL_2(Z/4)
    std::array<std::uint32_t, 4> lift_a{}, lift_b{};
    std::uint64_t d = 0;
    unsigned valuation = 0;
    unsigned retries = 0;
};

struct LieCheckResult {
    std::vector<LieCheckRecord> records;  // by class_a * 96 + class_b
    std::uint64_t failures = 0;
    unsigned min_valuation = 0, max_valuation = 0;
    std::uint64_t max_retries_used = 0;
};

// Every pair of classes mod 4 gets lifts A = Abar + 4 (a_i), a_i in {1,2,3},
// with d != 0 mod 2^50. Throws VerificationFailure if some class runs out of
// retries.
LieCheckResult lie_check_all_classes(std::uint64_t seed, unsigned max_retries = 8,
                                     unsigned threads = 0);

nlohmann::json to_json(const LieCheckRecord& r);
nlohmann::json to_json(const LieCheckResult& r, bool with_records);

}  // namespace minimal2
