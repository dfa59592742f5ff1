#pragma once

// Exact 2x2 matrix arithmetic over Z/nZ for prime powers n <= 256, and the
// 2g x 2g similitude checks over F_p used by the symplectic argument.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace minimal2 {

// Four residues packed as a<<24 | b<<16 | c<<8 | d. Injective for n <= 256,
// and the numeric order is the lexicographic order on (a, b, c, d).
using Packed = std::uint32_t;

inline constexpr std::uint32_t kMaxModulus = 256;

constexpr Packed pack_entries(std::uint32_t a, std::uint32_t b, std::uint32_t c,
                              std::uint32_t d) {
    return (a << 24) | (b << 16) | (c << 8) | d;
}
constexpr std::uint32_t entry_a(Packed x) { return x >> 24; }
constexpr std::uint32_t entry_b(Packed x) { return (x >> 16) & 0xffu; }
constexpr std::uint32_t entry_c(Packed x) { return (x >> 8) & 0xffu; }
constexpr std::uint32_t entry_d(Packed x) { return x & 0xffu; }

// Returns p if n = p^k with k >= 1, nullopt otherwise.
std::optional<std::uint32_t> prime_of(std::uint32_t n);
bool is_unit(std::int64_t r, std::uint32_t modulus);
std::uint32_t mod_inverse(std::uint32_t r, std::uint32_t modulus);
// |GL_2(Z/n)| for a prime power n (n = 1 gives 1).
std::uint64_t gl2_order(std::uint32_t modulus);
// |SL_2(Z/n)| for a prime power n.
std::uint64_t sl2_order(std::uint32_t modulus);

// Arithmetic on packed words at a fixed modulus. This is the hot path of
// every closure, so it stays branch-light and allocation-free.
class ModRing {
public:
    explicit ModRing(std::uint32_t modulus);

    std::uint32_t modulus() const { return n_; }
    std::uint32_t reduce(std::uint32_t x) const { return pow2_ ? (x & mask_) : (x % n_); }

    Packed mul(Packed x, Packed y) const {
        const std::uint32_t a = entry_a(x), b = entry_b(x), c = entry_c(x), d = entry_d(x);
        const std::uint32_t e = entry_a(y), f = entry_b(y), g = entry_c(y), h = entry_d(y);
        return pack_entries(reduce(a * e + b * g), reduce(a * f + b * h), reduce(c * e + d * g),
                            reduce(c * f + d * h));
    }
    std::uint32_t det(Packed x) const {
        return reduce(entry_a(x) * entry_d(x) + n_ * n_ - reduce(entry_b(x) * entry_c(x)));
    }
    std::uint32_t trace(Packed x) const { return reduce(entry_a(x) + entry_d(x)); }
    // Precondition: det(x) is a unit.
    Packed inverse(Packed x) const;
    Packed negate(Packed x) const;
    Packed identity() const { return pack_entries(1 % n_, 0, 0, 1 % n_); }
    Packed pow(Packed x, std::uint64_t e) const;
    Packed conjugate(Packed g, Packed x, Packed g_inv) const { return mul(mul(g, x), g_inv); }
    // Dense index in [0, n^4); used for bitmap membership.
    std::uint64_t dense_index(Packed x) const {
        const std::uint64_t n = n_;
        return ((entry_a(x) * n + entry_b(x)) * n + entry_c(x)) * n + entry_d(x);
    }

private:
    std::uint32_t n_;
    std::uint32_t mask_;
    bool pow2_;
};

class ResidueMatrix {
public:
    ResidueMatrix() = default;
    // Entries may be any integers; they are reduced into [0, modulus).
    ResidueMatrix(std::uint32_t modulus, std::int64_t a, std::int64_t b, std::int64_t c,
                  std::int64_t d);

    static ResidueMatrix identity(std::uint32_t modulus);
    static ResidueMatrix diag(std::uint32_t modulus, std::int64_t x, std::int64_t y) {
        return {modulus, x, 0, 0, y};
    }
    static ResidueMatrix unpack(Packed word, std::uint32_t modulus);

    std::uint32_t modulus() const { return modulus_; }
    std::uint32_t a() const { return a_; }
    std::uint32_t b() const { return b_; }
    std::uint32_t c() const { return c_; }
    std::uint32_t d() const { return d_; }
    Packed pack() const { return pack_entries(a_, b_, c_, d_); }
    bool is_identity() const;
    std::string to_string() const;

    friend bool operator==(const ResidueMatrix&, const ResidueMatrix&) = default;
    friend auto operator<=>(const ResidueMatrix&, const ResidueMatrix&) = default;

private:
    std::uint32_t modulus_ = 1;
    std::uint32_t a_ = 0, b_ = 0, c_ = 0, d_ = 0;
};

ResidueMatrix mat_mul(const ResidueMatrix& x, const ResidueMatrix& y);
std::uint32_t mat_det(const ResidueMatrix& x);
ResidueMatrix mat_inverse(const ResidueMatrix& x);
ResidueMatrix mat_pow(const ResidueMatrix& x, std::uint64_t e);
// Least n >= 1 with x^n = I, found by stripping prime factors off |GL_2|.
std::uint64_t mat_order(const ResidueMatrix& x);
// Entrywise reduction to a divisor m of the modulus.
ResidueMatrix reduce(const ResidueMatrix& x, std::uint32_t m);
// Same residues read at a larger modulus (any lift works for coset purposes).
ResidueMatrix lift(const ResidueMatrix& x, std::uint32_t new_modulus);

// ---------------------------------------------------------------------------
// GSp_{2g}(F_p), g <= 3.

class SymplecticMatrix {
public:
    // entries are row-major, (2g)^2 of them, reduced mod p.
    SymplecticMatrix(unsigned g, std::uint32_t p, const std::vector<std::int64_t>& entries);

    static SymplecticMatrix identity(unsigned g, std::uint32_t p);
    static SymplecticMatrix scalar(unsigned g, std::uint32_t p, std::int64_t lambda);
    // Omega = [[0, -I], [I, 0]].
    static SymplecticMatrix omega(unsigned g, std::uint32_t p);

    unsigned genus() const { return g_; }
    unsigned dim() const { return 2 * g_; }
    std::uint32_t prime() const { return p_; }
    std::uint32_t at(unsigned i, unsigned j) const { return e_[i * dim() + j]; }
    const std::vector<std::uint32_t>& entries() const { return e_; }

    SymplecticMatrix operator*(const SymplecticMatrix& o) const;
    SymplecticMatrix transpose() const;
    SymplecticMatrix scaled(std::uint32_t lambda) const;
    // Returns lambda if every entry equals lambda * identity's entries.
    std::optional<std::uint32_t> scalar_value() const;

    friend bool operator==(const SymplecticMatrix&, const SymplecticMatrix&) = default;

private:
    unsigned g_;
    std::uint32_t p_;
    std::vector<std::uint32_t> e_;
};

// Multiplier lambda with x^T Omega x = lambda Omega, or nullopt when x is not
// a similitude.
std::optional<std::uint32_t> gsp_mult(const SymplecticMatrix& x);

// The block test matrices Z: diag(A, -A^T) for A in a spanning set of
// invertible A, plus [[I, I], [0, -I]] and [[I, 0], [I, -I]].
std::vector<SymplecticMatrix> gsp_test_matrices(unsigned g, std::uint32_t p);

// True iff x commutes mod p with every test matrix. Throws if x is not in
// GSp_{2g}(F_p).
bool gsp_centralizer_is_scalar(unsigned g, std::uint32_t p, const SymplecticMatrix& x);

}  // namespace minimal2
