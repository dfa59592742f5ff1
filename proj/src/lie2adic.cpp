#include "minimal2/lie2adic.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <thread>

#include "minimal2/error.hpp"
#include "minimal2/modarith.hpp"

namespace minimal2 {

namespace {

u128 odd_inverse(u128 u) {
    u128 inv = u;  // correct mod 8
    for (int i = 0; i < 7; ++i) inv *= 2 - u * inv;
    return inv;
}

unsigned floor_log2(std::uint64_t n) { return 63u - static_cast<unsigned>(std::countl_zero(n)); }

u128 from_signed(std::int64_t x) {
    return x >= 0 ? u128(static_cast<std::uint64_t>(x)) : -u128(static_cast<std::uint64_t>(-x));
}

}  // namespace

unsigned valuation(u128 x, unsigned cap) {
    if (cap < 128) x &= (u128(1) << cap) - 1;
    if (x == 0) return cap;
    const auto lo = static_cast<std::uint64_t>(x);
    if (lo != 0) return std::min<unsigned>(cap, static_cast<unsigned>(std::countr_zero(lo)));
    return std::min<unsigned>(cap, 64 + static_cast<unsigned>(std::countr_zero(
                                             static_cast<std::uint64_t>(x >> 64))));
}

PrecisionMatrix::PrecisionMatrix(unsigned bits, std::array<u128, 4> entries, unsigned precision)
    : bits_(bits), prec_(std::min(precision, bits)), e_(entries) {
    if (bits < 8 || bits > 128) throw Error("PrecisionMatrix: working bits outside [8, 128]");
    for (auto& x : e_) x &= mask();
}

PrecisionMatrix PrecisionMatrix::exact(unsigned bits, std::int64_t a, std::int64_t b,
                                       std::int64_t c, std::int64_t d) {
    return {bits, {from_signed(a), from_signed(b), from_signed(c), from_signed(d)}, bits};
}

u128 PrecisionMatrix::mask() const { return bits_ == 128 ? ~u128(0) : (u128(1) << bits_) - 1; }

std::uint64_t PrecisionMatrix::low(int i, unsigned k) const {
    if (k > 64 || k > prec_) throw Error("PrecisionMatrix: requested bits beyond precision");
    const u128 m = (u128(1) << k) - 1;
    return static_cast<std::uint64_t>(e_[i] & m);
}

unsigned PrecisionMatrix::valuation() const {
    unsigned v = prec_;
    for (auto x : e_) v = std::min(v, minimal2::valuation(x, prec_));
    return v;
}

bool PrecisionMatrix::equal_mod(const PrecisionMatrix& o, unsigned k) const {
    if (k > prec_ || k > o.prec_) throw Error("equal_mod: precision too low");
    const u128 m = k == 128 ? ~u128(0) : (u128(1) << k) - 1;
    for (int i = 0; i < 4; ++i)
        if (((e_[i] ^ o.e_[i]) & m) != 0) return false;
    return true;
}

PrecisionMatrix PrecisionMatrix::operator+(const PrecisionMatrix& o) const {
    if (bits_ != o.bits_) throw Error("PrecisionMatrix: working bits mismatch");
    return {bits_, {e_[0] + o.e_[0], e_[1] + o.e_[1], e_[2] + o.e_[2], e_[3] + o.e_[3]},
            std::min(prec_, o.prec_)};
}

PrecisionMatrix PrecisionMatrix::operator-(const PrecisionMatrix& o) const {
    if (bits_ != o.bits_) throw Error("PrecisionMatrix: working bits mismatch");
    return {bits_, {e_[0] - o.e_[0], e_[1] - o.e_[1], e_[2] - o.e_[2], e_[3] - o.e_[3]},
            std::min(prec_, o.prec_)};
}

PrecisionMatrix PrecisionMatrix::operator-() const {
    return {bits_, {-e_[0], -e_[1], -e_[2], -e_[3]}, prec_};
}

PrecisionMatrix PrecisionMatrix::operator*(const PrecisionMatrix& o) const {
    if (bits_ != o.bits_) throw Error("PrecisionMatrix: working bits mismatch");
    const auto& x = e_;
    const auto& y = o.e_;
    // An error of 2^p in one factor is multiplied by at least 2^v of the other.
    const unsigned p = std::min(prec_ + o.valuation(), o.prec_ + valuation());
    return {bits_,
            {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
             x[2] * y[1] + x[3] * y[3]},
            p};
}

PrecisionMatrix PrecisionMatrix::scaled(std::int64_t s) const {
    const u128 f = from_signed(s);
    const unsigned v = s == 0 ? bits_ : static_cast<unsigned>(std::countr_zero(
                                            static_cast<std::uint64_t>(s < 0 ? -s : s)));
    return {bits_, {e_[0] * f, e_[1] * f, e_[2] * f, e_[3] * f}, prec_ + v};
}

PrecisionMatrix PrecisionMatrix::divided(std::uint64_t n) const {
    if (n == 0) throw Error("PrecisionMatrix: division by zero");
    const unsigned v = static_cast<unsigned>(std::countr_zero(n));
    if (valuation() < v || prec_ < v)
        throw Error("PrecisionMatrix: precision underflow dividing by " + std::to_string(n));
    const u128 inv = odd_inverse(n >> v);
    const u128 m = prec_ == 128 ? ~u128(0) : (u128(1) << prec_) - 1;
    std::array<u128, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = ((e_[i] & m) >> v) * inv;
    return {bits_, out, prec_ - v};
}

PrecisionMatrix PrecisionMatrix::pow(std::uint64_t e) const {
    PrecisionMatrix result = identity(bits_);
    PrecisionMatrix base = *this;
    for (; e; e >>= 1) {
        if (e & 1u) result = result * base;
        if (e > 1) base = base * base;
    }
    return result;
}

std::string PrecisionMatrix::to_string() const {
    const unsigned k = std::min(prec_, 64u);
    std::string s = "[[";
    for (int i = 0; i < 4; ++i) {
        s += std::to_string(low(i, k));
        s += i == 1 ? "],[" : (i == 3 ? "]]" : ",");
    }
    return s + " mod 2^" + std::to_string(k);
}

PrecisionMatrix mat_log(const PrecisionMatrix& m) {
    const PrecisionMatrix x = m - PrecisionMatrix::identity(m.bits());
    if (x.precision() < 2 || x.valuation() < 2) throw Error("mat_log: argument is not I mod 4");
    const unsigned w = x.valuation();
    const unsigned target = x.precision();
    PrecisionMatrix sum = PrecisionMatrix::zero(m.bits());
    if (w >= target) return PrecisionMatrix(m.bits(), {0, 0, 0, 0}, target);
    PrecisionMatrix power = PrecisionMatrix::identity(m.bits());
    // The n-th term has valuation at least w n - v_2(n) >= w n - log_2 n,
    // which increases with n.
    for (std::uint64_t n = 1; w * n - floor_log2(n) < target; ++n) {
        power = power * x;
        const PrecisionMatrix term = power.divided(n);
        sum = (n % 2 == 1) ? sum + term : sum - term;
    }
    return sum;
}

PrecisionMatrix mat_exp(const PrecisionMatrix& x) {
    if (x.precision() < 2 || x.valuation() < 2) throw Error("mat_exp: argument is not 0 mod 4");
    const unsigned w = x.valuation();
    const unsigned target = x.precision();
    PrecisionMatrix sum = PrecisionMatrix::identity(x.bits());
    PrecisionMatrix term = sum;
    // v(X^n / n!) >= w n - (n - 1).
    for (std::uint64_t n = 1; (w - 1) * n + 1 < target; ++n) {
        term = (term * x).divided(n);
        sum = sum + term;
    }
    return sum;
}

PrecisionMatrix lie_bracket(const PrecisionMatrix& x, const PrecisionMatrix& y) {
    return x * y - y * x;
}

DResult d_determinant(const PrecisionMatrix& a, const PrecisionMatrix& b) {
    const unsigned bits = a.bits();
    const PrecisionMatrix x = mat_log(a.pow(12));
    const PrecisionMatrix y = mat_log(b.pow(12));
    const PrecisionMatrix xy = lie_bracket(x, y);
    const PrecisionMatrix cols[4] = {x, y, xy, lie_bracket(xy, x)};

    unsigned prec = bits;
    for (int j = 0; j < 4; ++j) {
        unsigned p = cols[j].precision();
        for (int k = 0; k < 4; ++k)
            if (k != j) p += cols[k].valuation();
        prec = std::min(prec, p);
    }
    if (prec < 50) throw Error("d_determinant: precision underflow, raise the working bits");

    // Leibniz over the 24 permutations; entry (i, j) is entry i of column j.
    u128 det = 0;
    int perm[4] = {0, 1, 2, 3};
    do {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) inversions += perm[i] > perm[j];
        u128 t = 1;
        for (int j = 0; j < 4; ++j) t *= cols[j].entry(perm[j]);
        det = (inversions % 2 == 0) ? det + t : det - t;
    } while (std::next_permutation(perm, perm + 4));

    DResult r;
    r.d = static_cast<std::uint64_t>(det & ((u128(1) << 50) - 1));
    r.precision = prec;
    r.valuation = valuation(det, 50);
    return r;
}

LieCheckResult lie_check_all_classes(std::uint64_t seed, unsigned max_retries, unsigned threads) {
    if (max_retries == 0) throw Error("lie_check_all_classes: need at least one attempt");
    std::vector<Packed> classes;
    const ModRing r4(4);
    for (Packed x = 0; x <= pack_entries(3, 3, 3, 3); ++x)
        if ((entry_a(x) | entry_b(x) | entry_c(x) | entry_d(x)) < 4 && r4.det(x) % 2 == 1)
            classes.push_back(x);
    if (classes.size() != 96) throw VerificationFailure("|GL_2(Z/4)| != 96");
    const std::size_t total = classes.size() * classes.size();

    LieCheckResult result;
    result.records.resize(total);
    std::vector<char> ok(total, 0);
    auto work = [&](std::size_t first, std::size_t stride) {
        for (std::size_t idx = first; idx < total; idx += stride) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(idx)};
            std::mt19937_64 rng(seq);
            std::uniform_int_distribution<std::uint32_t> digit(1, 3);
            auto& rec = result.records[idx];
            rec.class_a = static_cast<std::uint32_t>(idx / classes.size());
            rec.class_b = static_cast<std::uint32_t>(idx % classes.size());
            const Packed ca = classes[rec.class_a], cb = classes[rec.class_b];
            for (unsigned attempt = 0; attempt < max_retries; ++attempt) {
                for (auto& v : rec.lift_a) v = digit(rng);
                for (auto& v : rec.lift_b) v = digit(rng);
                const auto lifted = [](Packed c, const std::array<std::uint32_t, 4>& l) {
                    return PrecisionMatrix::exact(64, entry_a(c) + 4 * l[0], entry_b(c) + 4 * l[1],
                                                  entry_c(c) + 4 * l[2], entry_d(c) + 4 * l[3]);
                };
                const DResult d = d_determinant(lifted(ca, rec.lift_a), lifted(cb, rec.lift_b));
                rec.d = d.d;
                rec.valuation = d.valuation;
                rec.retries = attempt;
                if (d.valuation < 50) {
                    ok[idx] = 1;
                    break;
                }
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t, threads);
    work(0, threads);
    for (auto& t : pool) t.join();

    result.min_valuation = 50;
    for (std::size_t i = 0; i < total; ++i) {
        const auto& rec = result.records[i];
        if (!ok[i]) {
            ++result.failures;
            continue;
        }
        result.min_valuation = std::min(result.min_valuation, rec.valuation);
        result.max_valuation = std::max(result.max_valuation, rec.valuation);
        result.max_retries_used = std::max<std::uint64_t>(result.max_retries_used, rec.retries);
    }
    if (result.failures != 0)
        throw VerificationFailure("lie_check_all_classes: " + std::to_string(result.failures) +
                                  " class pairs have d = 0 mod 2^50 after " +
                                  std::to_string(max_retries) + " lifts");
    return result;
}

nlohmann::json to_json(const LieCheckRecord& r) {
    return {{"class_a", r.class_a}, {"class_b", r.class_b}, {"lift_a", r.lift_a},
            {"lift_b", r.lift_b},   {"d", r.d},             {"valuation", r.valuation},
            {"retries", r.retries}};
}

nlohmann::json to_json(const LieCheckResult& r, bool with_records) {
    nlohmann::json j{{"classes", r.records.size()},
                     {"failures", r.failures},
                     {"min_valuation", r.min_valuation},
                     {"max_valuation", r.max_valuation},
                     {"max_retries_used", r.max_retries_used}};
    if (with_records) {
        j["records"] = nlohmann::json::array();
        for (const auto& rec : r.records) j["records"].push_back(to_json(rec));
    }
    return j;
}

}  // namespace minimal2
