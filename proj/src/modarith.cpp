#include "minimal2/modarith.hpp"

#include <numeric>
#include <sstream>
#include <tuple>

#include "minimal2/error.hpp"

namespace minimal2 {

std::optional<std::uint32_t> prime_of(std::uint32_t n) {
    if (n < 2) return std::nullopt;
    std::uint32_t p = 2;
    while (p * p <= n && n % p != 0) ++p;
    if (n % p != 0) p = n;
    while (n % p == 0) n /= p;
    if (n != 1) return std::nullopt;
    return p;
}

bool is_unit(std::int64_t r, std::uint32_t modulus) {
    const auto m = static_cast<std::int64_t>(modulus);
    const std::int64_t x = ((r % m) + m) % m;
    return std::gcd(x, m) == 1;
}

std::uint32_t mod_inverse(std::uint32_t r, std::uint32_t modulus) {
    if (modulus == 1) return 0;
    std::int64_t t = 0, new_t = 1;
    std::int64_t m = modulus, x = r % modulus;
    while (x != 0) {
        const std::int64_t q = m / x;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(m, x) = std::make_pair(x, m - q * x);
    }
    if (m != 1) throw Error("mod_inverse: " + std::to_string(r) + " is not a unit mod " +
                            std::to_string(modulus));
    if (t < 0) t += modulus;
    return static_cast<std::uint32_t>(t);
}

std::uint64_t gl2_order(std::uint32_t modulus) {
    if (modulus == 1) return 1;
    const auto p = prime_of(modulus);
    if (!p) throw Error("gl2_order: modulus " + std::to_string(modulus) + " is not a prime power");
    const std::uint64_t q = *p;
    const std::uint64_t scale = static_cast<std::uint64_t>(modulus / q);
    return scale * scale * scale * scale * (q * q - 1) * (q * q - q);
}

std::uint64_t sl2_order(std::uint32_t modulus) {
    if (modulus == 1) return 1;
    const auto p = prime_of(modulus);
    if (!p) throw Error("sl2_order: modulus " + std::to_string(modulus) + " is not a prime power");
    const std::uint64_t q = *p;
    const std::uint64_t scale = static_cast<std::uint64_t>(modulus / q);
    return scale * scale * scale * q * (q * q - 1);
}

ModRing::ModRing(std::uint32_t modulus) : n_(modulus), mask_(modulus - 1) {
    if (modulus == 0 || modulus > kMaxModulus)
        throw Error("ModRing: modulus " + std::to_string(modulus) + " outside [1, 256]");
    pow2_ = (modulus & (modulus - 1)) == 0;
}

Packed ModRing::inverse(Packed x) const {
    std::uint32_t inv;
    if (pow2_) {
        // Newton iteration: an odd u is its own inverse mod 8, and each step
        // doubles the number of correct bits.
        const std::uint32_t u = det(x);
        if ((u & 1u) == 0 && n_ > 1) throw Error("ModRing::inverse: singular matrix");
        inv = u;
        for (int i = 0; i < 3; ++i) inv *= 2 - u * inv;
        inv = reduce(inv);
    } else {
        inv = mod_inverse(det(x), n_);
    }
    const std::uint32_t a = entry_a(x), b = entry_b(x), c = entry_c(x), d = entry_d(x);
    return pack_entries(reduce(d * inv), reduce((n_ - b) * inv), reduce((n_ - c) * inv),
                        reduce(a * inv));
}

Packed ModRing::negate(Packed x) const {
    return pack_entries(reduce(n_ - entry_a(x)), reduce(n_ - entry_b(x)), reduce(n_ - entry_c(x)),
                        reduce(n_ - entry_d(x)));
}

Packed ModRing::pow(Packed x, std::uint64_t e) const {
    Packed result = identity();
    while (e > 0) {
        if (e & 1u) result = mul(result, x);
        x = mul(x, x);
        e >>= 1;
    }
    return result;
}

// ---------------------------------------------------------------------------

namespace {
std::uint32_t reduce_signed(std::int64_t v, std::uint32_t modulus) {
    const auto m = static_cast<std::int64_t>(modulus);
    return static_cast<std::uint32_t>(((v % m) + m) % m);
}
}  // namespace

ResidueMatrix::ResidueMatrix(std::uint32_t modulus, std::int64_t a, std::int64_t b,
                             std::int64_t c, std::int64_t d)
    : modulus_(modulus) {
    if (modulus == 0 || modulus > kMaxModulus)
        throw Error("ResidueMatrix: modulus " + std::to_string(modulus) + " outside [1, 256]");
    a_ = reduce_signed(a, modulus);
    b_ = reduce_signed(b, modulus);
    c_ = reduce_signed(c, modulus);
    d_ = reduce_signed(d, modulus);
}

ResidueMatrix ResidueMatrix::identity(std::uint32_t modulus) { return {modulus, 1, 0, 0, 1}; }

ResidueMatrix ResidueMatrix::unpack(Packed word, std::uint32_t modulus) {
    return {modulus, entry_a(word), entry_b(word), entry_c(word), entry_d(word)};
}

bool ResidueMatrix::is_identity() const { return *this == identity(modulus_); }

std::string ResidueMatrix::to_string() const {
    std::ostringstream os;
    os << "[[" << a_ << "," << b_ << "],[" << c_ << "," << d_ << "]] mod " << modulus_;
    return os.str();
}

ResidueMatrix mat_mul(const ResidueMatrix& x, const ResidueMatrix& y) {
    if (x.modulus() != y.modulus())
        throw Error("mat_mul: modulus mismatch " + std::to_string(x.modulus()) + " vs " +
                    std::to_string(y.modulus()));
    const ModRing ring(x.modulus());
    return ResidueMatrix::unpack(ring.mul(x.pack(), y.pack()), x.modulus());
}

std::uint32_t mat_det(const ResidueMatrix& x) { return ModRing(x.modulus()).det(x.pack()); }

ResidueMatrix mat_inverse(const ResidueMatrix& x) {
    const ModRing ring(x.modulus());
    if (!is_unit(ring.det(x.pack()), x.modulus()))
        throw Error("mat_inverse: determinant of " + x.to_string() + " is not a unit");
    return ResidueMatrix::unpack(ring.inverse(x.pack()), x.modulus());
}

ResidueMatrix mat_pow(const ResidueMatrix& x, std::uint64_t e) {
    return ResidueMatrix::unpack(ModRing(x.modulus()).pow(x.pack(), e), x.modulus());
}

std::uint64_t mat_order(const ResidueMatrix& x) {
    const ModRing ring(x.modulus());
    if (!is_unit(ring.det(x.pack()), x.modulus()))
        throw Error("mat_order: " + x.to_string() + " is not invertible");
    std::uint64_t n = gl2_order(x.modulus());
    const Packed one = ring.identity();
    std::uint64_t rest = n;
    for (std::uint64_t q = 2; rest > 1; ++q) {
        if (rest % q != 0) continue;
        while (rest % q == 0) rest /= q;
        while (n % q == 0 && ring.pow(x.pack(), n / q) == one) n /= q;
    }
    return n;
}

ResidueMatrix reduce(const ResidueMatrix& x, std::uint32_t m) {
    if (m == 0 || x.modulus() % m != 0)
        throw Error("reduce: " + std::to_string(m) + " does not divide " +
                    std::to_string(x.modulus()));
    return {m, x.a(), x.b(), x.c(), x.d()};
}

ResidueMatrix lift(const ResidueMatrix& x, std::uint32_t new_modulus) {
    if (new_modulus % x.modulus() != 0)
        throw Error("lift: " + std::to_string(x.modulus()) + " does not divide " +
                    std::to_string(new_modulus));
    return {new_modulus, x.a(), x.b(), x.c(), x.d()};
}

// ---------------------------------------------------------------------------

SymplecticMatrix::SymplecticMatrix(unsigned g, std::uint32_t p,
                                   const std::vector<std::int64_t>& entries)
    : g_(g), p_(p) {
    if (g == 0 || g > 3) throw Error("SymplecticMatrix: g must be in [1, 3]");
    if (prime_of(p) != p) throw Error("SymplecticMatrix: modulus must be prime");
    if (entries.size() != 4u * g * g) throw Error("SymplecticMatrix: expected (2g)^2 entries");
    e_.reserve(entries.size());
    for (auto v : entries) e_.push_back(reduce_signed(v, p));
}

SymplecticMatrix SymplecticMatrix::identity(unsigned g, std::uint32_t p) { return scalar(g, p, 1); }

SymplecticMatrix SymplecticMatrix::scalar(unsigned g, std::uint32_t p, std::int64_t lambda) {
    std::vector<std::int64_t> e(4u * g * g, 0);
    for (unsigned i = 0; i < 2 * g; ++i) e[i * 2 * g + i] = lambda;
    return {g, p, e};
}

SymplecticMatrix SymplecticMatrix::omega(unsigned g, std::uint32_t p) {
    const unsigned n = 2 * g;
    std::vector<std::int64_t> e(n * n, 0);
    for (unsigned i = 0; i < g; ++i) {
        e[i * n + (g + i)] = -1;
        e[(g + i) * n + i] = 1;
    }
    return {g, p, e};
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& o) const {
    if (g_ != o.g_ || p_ != o.p_) throw Error("SymplecticMatrix: shape or modulus mismatch");
    const unsigned n = dim();
    std::vector<std::int64_t> r(n * n, 0);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned k = 0; k < n; ++k) {
            const std::int64_t x = at(i, k);
            if (x == 0) continue;
            for (unsigned j = 0; j < n; ++j) r[i * n + j] += x * o.at(k, j);
        }
    return {g_, p_, r};
}

SymplecticMatrix SymplecticMatrix::transpose() const {
    const unsigned n = dim();
    std::vector<std::int64_t> r(n * n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) r[j * n + i] = at(i, j);
    return {g_, p_, r};
}

SymplecticMatrix SymplecticMatrix::scaled(std::uint32_t lambda) const {
    std::vector<std::int64_t> r(e_.begin(), e_.end());
    for (auto& v : r) v *= lambda;
    return {g_, p_, r};
}

std::optional<std::uint32_t> SymplecticMatrix::scalar_value() const {
    const unsigned n = dim();
    const std::uint32_t lambda = at(0, 0);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j)
            if (at(i, j) != (i == j ? lambda : 0u)) return std::nullopt;
    return lambda;
}

std::optional<std::uint32_t> gsp_mult(const SymplecticMatrix& x) {
    const auto omega = SymplecticMatrix::omega(x.genus(), x.prime());
    const auto lhs = x.transpose() * omega * x;
    // Omega has a -1 at (0, g), so lambda is read off the (g, 0) entry (+1).
    const std::uint32_t lambda = lhs.at(x.genus(), 0);
    if (lambda == 0) return std::nullopt;
    if (lhs != omega.scaled(lambda)) return std::nullopt;
    return lambda;
}

std::vector<SymplecticMatrix> gsp_test_matrices(unsigned g, std::uint32_t p) {
    const unsigned n = 2 * g;
    std::vector<SymplecticMatrix> out;
    auto block_diag = [&](const std::vector<std::int64_t>& a) {
        std::vector<std::int64_t> z(n * n, 0);
        for (unsigned i = 0; i < g; ++i)
            for (unsigned j = 0; j < g; ++j) {
                z[i * n + j] = a[i * g + j];
                z[(g + j) * n + (g + i)] = -a[i * g + j];  // -A^T
            }
        return SymplecticMatrix(g, p, z);
    };
    // A = I, I + E_ii (invertible since p is odd), I + E_ij: these span M_g(F_p).
    for (unsigned i = 0; i < g; ++i)
        for (unsigned j = 0; j < g; ++j) {
            std::vector<std::int64_t> a(g * g, 0);
            for (unsigned k = 0; k < g; ++k) a[k * g + k] = 1;
            a[i * g + j] += 1;
            out.push_back(block_diag(a));
        }
    {
        std::vector<std::int64_t> a(g * g, 0);
        for (unsigned k = 0; k < g; ++k) a[k * g + k] = 1;
        out.push_back(block_diag(a));
    }
    std::vector<std::int64_t> upper(n * n, 0), lower(n * n, 0);
    for (unsigned i = 0; i < g; ++i) {
        upper[i * n + i] = 1;
        upper[i * n + g + i] = 1;
        upper[(g + i) * n + g + i] = -1;
        lower[i * n + i] = 1;
        lower[(g + i) * n + i] = 1;
        lower[(g + i) * n + g + i] = -1;
    }
    out.emplace_back(g, p, upper);
    out.emplace_back(g, p, lower);
    return out;
}

bool gsp_centralizer_is_scalar(unsigned g, std::uint32_t p, const SymplecticMatrix& x) {
    if (p == 2) throw Error("gsp_centralizer_is_scalar: p must be odd");
    if (x.genus() != g || x.prime() != p) throw Error("gsp_centralizer_is_scalar: shape mismatch");
    if (!gsp_mult(x)) throw Error("gsp_centralizer_is_scalar: matrix is not in GSp");
    for (const auto& z : gsp_test_matrices(g, p))
        if (x * z != z * x) return false;
    return true;
}

}  // namespace minimal2
