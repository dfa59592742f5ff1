#pragma once

// Curves y^2 = x^3 + A x^2 + B x over Q, Q(sqrt d) and F_p: discriminant,
// j-invariant, quadratic twists and the 2-isogeny with kernel {O, (0,0)}.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "minimal2/error.hpp"

namespace minimal2 {

class Rational {
public:
    Rational() = default;
    Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    Rational constant(const mpz_class& k) const { return Rational(mpq_class(k)); }

    const mpq_class& value() const { return q_; }
    bool is_zero() const { return q_ == 0; }
    std::string to_string() const { return q_.get_str(); }

    friend Rational operator+(const Rational& x, const Rational& y) { return Rational(x.q_ + y.q_); }
    friend Rational operator-(const Rational& x, const Rational& y) { return Rational(x.q_ - y.q_); }
    friend Rational operator*(const Rational& x, const Rational& y) { return Rational(x.q_ * y.q_); }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.is_zero()) throw Error("Rational: division by zero");
        return Rational(x.q_ / y.q_);
    }
    Rational operator-() const { return Rational(-q_); }
    friend bool operator==(const Rational& x, const Rational& y) { return x.q_ == y.q_; }

private:
    mpq_class q_;
};

// u + v sqrt(d) with d squarefree, d != 0, 1.
class QuadFieldElem {
public:
    QuadFieldElem(long d, mpq_class u, mpq_class v);
    QuadFieldElem constant(const mpz_class& k) const { return {d_, mpq_class(k), 0}; }

    long d() const { return d_; }
    const mpq_class& u() const { return u_; }
    const mpq_class& v() const { return v_; }
    bool is_zero() const { return u_ == 0 && v_ == 0; }
    bool is_rational() const { return v_ == 0; }
    QuadFieldElem conj() const { return {d_, u_, -v_}; }
    mpq_class norm() const { return u_ * u_ - d_ * v_ * v_; }
    std::string to_string() const;

    friend QuadFieldElem operator+(const QuadFieldElem& x, const QuadFieldElem& y);
    friend QuadFieldElem operator-(const QuadFieldElem& x, const QuadFieldElem& y);
    friend QuadFieldElem operator*(const QuadFieldElem& x, const QuadFieldElem& y);
    friend QuadFieldElem operator/(const QuadFieldElem& x, const QuadFieldElem& y);
    QuadFieldElem operator-() const { return {d_, -u_, -v_}; }
    friend bool operator==(const QuadFieldElem& x, const QuadFieldElem& y) {
        return x.d_ == y.d_ && x.u_ == y.u_ && x.v_ == y.v_;
    }

private:
    long d_;
    mpq_class u_, v_;
};

// Residue mod an odd prime p < 2^32.
class PrimeFieldElem {
public:
    PrimeFieldElem(std::uint64_t p, std::uint64_t v) : p_(p), v_(v % p) {}
    PrimeFieldElem constant(const mpz_class& k) const;

    std::uint64_t prime() const { return p_; }
    std::uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    PrimeFieldElem pow(std::uint64_t e) const;
    PrimeFieldElem inverse() const;
    bool is_square() const;
    // A square root, nullopt for non-squares.
    std::optional<PrimeFieldElem> sqrt() const;
    std::string to_string() const { return std::to_string(v_) + " mod " + std::to_string(p_); }

    friend PrimeFieldElem operator+(const PrimeFieldElem& x, const PrimeFieldElem& y) {
        return {x.p_, x.v_ + y.v_};
    }
    friend PrimeFieldElem operator-(const PrimeFieldElem& x, const PrimeFieldElem& y) {
        return {x.p_, x.v_ + x.p_ - y.v_};
    }
    friend PrimeFieldElem operator*(const PrimeFieldElem& x, const PrimeFieldElem& y) {
        return {x.p_, static_cast<std::uint64_t>((unsigned __int128)x.v_ * y.v_ % x.p_)};
    }
    friend PrimeFieldElem operator/(const PrimeFieldElem& x, const PrimeFieldElem& y) {
        return x * y.inverse();
    }
    PrimeFieldElem operator-() const { return {p_, p_ - v_}; }
    friend bool operator==(const PrimeFieldElem& x, const PrimeFieldElem& y) {
        return x.p_ == y.p_ && x.v_ == y.v_;
    }

private:
    std::uint64_t p_, v_;
};

template <class F>
struct WeierstrassCurve {
    F A, B;
    friend bool operator==(const WeierstrassCurve&, const WeierstrassCurve&) = default;
};

// 16 B^2 (A^2 - 4B).
template <class F>
F discriminant(const WeierstrassCurve<F>& e) {
    const F sixteen = e.A.constant(16), four = e.A.constant(4);
    return sixteen * e.B * e.B * (e.A * e.A - four * e.B);
}

template <class F>
bool is_singular(const WeierstrassCurve<F>& e) {
    return discriminant(e).is_zero();
}

// c4^3 / Delta with c4 = 16 (A^2 - 3B).
template <class F>
F j_invariant(const WeierstrassCurve<F>& e) {
    const F delta = discriminant(e);
    if (delta.is_zero()) throw Error("j_invariant: singular curve");
    const F c4 = e.A.constant(16) * (e.A * e.A - e.A.constant(3) * e.B);
    return c4 * c4 * c4 / delta;
}

// (A, B) -> (D A, D^2 B).
template <class F>
WeierstrassCurve<F> twist(const WeierstrassCurve<F>& e, const F& d) {
    if (d.is_zero()) throw Error("twist: D = 0");
    return {d * e.A, d * d * e.B};
}

// (A, B) -> (-2A, A^2 - 4B).
template <class F>
WeierstrassCurve<F> two_isogenous(const WeierstrassCurve<F>& e) {
    if (e.B.is_zero()) throw Error("two_isogenous: B = 0");
    return {-(e.A.constant(2) * e.A), e.A * e.A - e.A.constant(4) * e.B};
}

// ---------------------------------------------------------------------------
// Polynomial expressions in single-letter variables with integer
// coefficients: + - * ^ and parentheses.

class Expr {
public:
    static Expr parse(const std::string& text);

    template <class F>
    F evaluate(const std::map<char, F>& vars, const F& like) const {
        return eval_node(*root_, vars, like);
    }
    std::vector<char> variables() const;

    struct Node {
        char op = 0;  // 'n' number, 'v' variable, '+', '-', '*', '^', 'u' (negation)
        mpz_class number;
        char var = 0;
        unsigned long exponent = 0;
        std::unique_ptr<Node> left, right;
    };

private:
    std::shared_ptr<const Node> root_;

    template <class F>
    static F eval_node(const Node& n, const std::map<char, F>& vars, const F& like) {
        switch (n.op) {
            case 'n':
                return like.constant(n.number);
            case 'v': {
                const auto it = vars.find(n.var);
                if (it == vars.end()) throw Error(std::string("Expr: unbound variable ") + n.var);
                return it->second;
            }
            case '+':
                return eval_node(*n.left, vars, like) + eval_node(*n.right, vars, like);
            case '-':
                return eval_node(*n.left, vars, like) - eval_node(*n.right, vars, like);
            case '*':
                return eval_node(*n.left, vars, like) * eval_node(*n.right, vars, like);
            case 'u':
                return -eval_node(*n.left, vars, like);
            case '^': {
                const F base = eval_node(*n.left, vars, like);
                F out = like.constant(1);
                for (unsigned long i = 0; i < n.exponent; ++i) out = out * base;
                return out;
            }
        }
        throw Error("Expr: corrupt node");
    }
};

// ---------------------------------------------------------------------------

struct FamilySpec {
    std::string label;
    std::string base;  // "conic" (a^2 + b^2 = -1) or "line" (variable t)
    std::string a_text, b_text;
    Expr A, B;
    // Optional square classes c with c * X a nonzero square at every
    // specialization, for X = A^2 - 4B and X = B.
    std::optional<long> isogeny_b_class, b_class;
};

struct FamilyTable {
    int version = 0;
    std::string checksum;
    std::vector<FamilySpec> families;
};

// Checksum over the transcribed expressions (FNV-1a 64, hex).
std::string family_checksum(const std::vector<FamilySpec>& families);
// Throws if the stored checksum does not match or a key is unknown.
FamilyTable load_families(const std::string& path);
FamilyTable parse_families(const nlohmann::json& j);
std::string default_families_path();

// Distinct (a, b) in F_p^2 with a^2 + b^2 = -1, scanning b = 0, 1, ...
std::vector<std::pair<std::uint64_t, std::uint64_t>> conic_points(std::uint64_t p,
                                                                    std::size_t count);
// The first `count` primes at or above `from` (odd).
std::vector<std::uint64_t> primes_from(std::uint64_t from, std::size_t count);

struct FamilyCheckReport {
    std::string label;
    std::uint64_t primes = 0;
    std::uint64_t points = 0;
    std::uint64_t nonsingular = 0;
    std::uint64_t singular = 0;
    std::uint64_t relations_checked = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> failure_details;  // first few
    bool pass() const { return failures == 0 && nonsingular * 2 > points; }
};

FamilyCheckReport family_identity_check(const FamilySpec& spec,
                                        const std::vector<std::uint64_t>& primes,
                                        std::size_t points_per_prime, std::uint64_t seed);
nlohmann::json to_json(const FamilyCheckReport& r);

// E: y^2 = x^3 + 2a x^2 + (a^2 + 1) x with a = sqrt(-(2^n + 1)).
struct QuadFamilyRow {
    unsigned n = 0;
    long d = 0;           // squarefree part of -(2^n + 1)
    mpz_class s;          // a = s sqrt(d)
    std::string discriminant;
    bool discriminant_matches = false;  // Delta = -2^(2n+6)
    bool bad_only_above_2 = false;      // Delta is a unit times a power of 2
    bool plus_one_is_square = false;    // 2^n + 1 is a square
    bool plus_one_twice_square = false;
    bool field_is_gaussian = false;     // Q(a) = Q(i)
    bool conic_solvable = false;        // t^2 + 1 = -2u^2 has t = a, u rational
    std::string u;                      // u^2 = 2^(n-1) when solvable
    std::string expected_label;         // level.index.genus or empty
    std::string twist_a, twist_b;       // E twisted by a
    std::string twist_j;
};

QuadFamilyRow quadfamily_check(unsigned n);
nlohmann::json to_json(const QuadFamilyRow& r);

}  // namespace minimal2
