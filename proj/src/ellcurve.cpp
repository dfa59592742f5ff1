#include "minimal2/ellcurve.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>

namespace minimal2 {

// ---------------------------------------------------------------------------
// Q(sqrt d)

QuadFieldElem::QuadFieldElem(long d, mpq_class u, mpq_class v)
    : d_(d), u_(std::move(u)), v_(std::move(v)) {
    if (d == 0 || d == 1) throw Error("QuadFieldElem: d must not be 0 or 1");
    for (long f = 2; f * f <= std::labs(d); ++f)
        if (d % (f * f) == 0) throw Error("QuadFieldElem: d must be squarefree");
    u_.canonicalize();
    v_.canonicalize();
}

namespace {
void same_field(const QuadFieldElem& x, const QuadFieldElem& y) {
    if (x.d() != y.d()) throw Error("QuadFieldElem: mixing Q(sqrt " + std::to_string(x.d()) +
                                    ") and Q(sqrt " + std::to_string(y.d()) + ")");
}
}  // namespace

QuadFieldElem operator+(const QuadFieldElem& x, const QuadFieldElem& y) {
    same_field(x, y);
    return {x.d_, x.u_ + y.u_, x.v_ + y.v_};
}

QuadFieldElem operator-(const QuadFieldElem& x, const QuadFieldElem& y) {
    same_field(x, y);
    return {x.d_, x.u_ - y.u_, x.v_ - y.v_};
}

QuadFieldElem operator*(const QuadFieldElem& x, const QuadFieldElem& y) {
    same_field(x, y);
    return {x.d_, x.u_ * y.u_ + x.d_ * x.v_ * y.v_, x.u_ * y.v_ + x.v_ * y.u_};
}

QuadFieldElem operator/(const QuadFieldElem& x, const QuadFieldElem& y) {
    same_field(x, y);
    const mpq_class n = y.norm();
    if (n == 0) throw Error("QuadFieldElem: division by zero");
    const QuadFieldElem t = x * y.conj();
    return {x.d_, t.u_ / n, t.v_ / n};
}

std::string QuadFieldElem::to_string() const {
    if (v_ == 0) return u_.get_str();
    return u_.get_str() + " + " + v_.get_str() + "*sqrt(" + std::to_string(d_) + ")";
}

// ---------------------------------------------------------------------------
// F_p

PrimeFieldElem PrimeFieldElem::constant(const mpz_class& k) const {
    mpz_class r = k % mpz_class(static_cast<unsigned long>(p_));
    if (r < 0) r += static_cast<unsigned long>(p_);
    return {p_, r.get_ui()};
}

PrimeFieldElem PrimeFieldElem::pow(std::uint64_t e) const {
    PrimeFieldElem out(p_, 1), base = *this;
    for (; e; e >>= 1) {
        if (e & 1u) out = out * base;
        base = base * base;
    }
    return out;
}

PrimeFieldElem PrimeFieldElem::inverse() const {
    if (v_ == 0) throw Error("PrimeFieldElem: division by zero");
    return pow(p_ - 2);
}

bool PrimeFieldElem::is_square() const { return v_ == 0 || pow((p_ - 1) / 2).v_ == 1; }

std::optional<PrimeFieldElem> PrimeFieldElem::sqrt() const {
    if (v_ == 0) return *this;
    if (!is_square()) return std::nullopt;
    // Tonelli-Shanks.
    std::uint64_t q = p_ - 1;
    unsigned s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    PrimeFieldElem z(p_, 2);
    while (z.is_square()) z = z + PrimeFieldElem(p_, 1);
    PrimeFieldElem c = z.pow(q), t = pow(q), r = pow((q + 1) / 2);
    unsigned m = s;
    while (t.v_ != 1) {
        unsigned i = 0;
        for (PrimeFieldElem u = t; u.v_ != 1; u = u * u) ++i;
        PrimeFieldElem b = c;
        for (unsigned k = 0; k + i + 1 < m; ++k) b = b * b;
        m = i;
        c = b * b;
        t = t * c;
        r = r * b;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Expressions

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    std::unique_ptr<Expr::Node> parse() {
        auto n = sum();
        skip();
        if (i_ != s_.size()) fail("trailing input");
        return n;
    }

private:
    using NodePtr = std::unique_ptr<Expr::Node>;

    [[noreturn]] void fail(const std::string& what) const {
        throw Error("Expr: " + what + " at offset " + std::to_string(i_) + " in '" + s_ + "'");
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    static NodePtr binary(char op, NodePtr l, NodePtr r) {
        auto n = std::make_unique<Expr::Node>();
        n->op = op;
        n->left = std::move(l);
        n->right = std::move(r);
        return n;
    }

    NodePtr sum() {
        NodePtr n = product();
        for (;;) {
            if (eat('+'))
                n = binary('+', std::move(n), product());
            else if (eat('-'))
                n = binary('-', std::move(n), product());
            else
                return n;
        }
    }
    NodePtr product() {
        NodePtr n = unary();
        while (eat('*')) n = binary('*', std::move(n), unary());
        return n;
    }
    NodePtr unary() {
        if (eat('-')) {
            auto n = std::make_unique<Expr::Node>();
            n->op = 'u';
            n->left = unary();
            return n;
        }
        return power();
    }
    NodePtr power() {
        NodePtr base = atom();
        if (!eat('^')) return base;
        skip();
        const std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected an exponent");
        auto n = std::make_unique<Expr::Node>();
        n->op = '^';
        n->exponent = std::stoul(s_.substr(start, i_ - start));
        n->left = std::move(base);
        return n;
    }
    NodePtr atom() {
        skip();
        if (eat('(')) {
            NodePtr n = sum();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            const std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            auto n = std::make_unique<Expr::Node>();
            n->op = 'n';
            n->number = mpz_class(s_.substr(start, i_ - start));
            return n;
        }
        if (i_ < s_.size() && std::islower(static_cast<unsigned char>(s_[i_]))) {
            auto n = std::make_unique<Expr::Node>();
            n->op = 'v';
            n->var = s_[i_++];
            if (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_])))
                fail("variables are single letters");
            return n;
        }
        fail("unexpected character");
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

void collect_vars(const Expr::Node& n, std::set<char>& out) {
    if (n.op == 'v') out.insert(n.var);
    if (n.left) collect_vars(*n.left, out);
    if (n.right) collect_vars(*n.right, out);
}

}  // namespace

Expr Expr::parse(const std::string& text) {
    Expr e;
    e.root_ = Parser(text).parse();
    return e;
}

std::vector<char> Expr::variables() const {
    std::set<char> s;
    collect_vars(*root_, s);
    return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// Family table

std::string family_checksum(const std::vector<FamilySpec>& families) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        h ^= '\n';
        h *= 0x100000001b3ull;
    };
    for (const auto& f : families) {
        feed(f.label);
        feed(f.base);
        feed(f.a_text);
        feed(f.b_text);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

FamilyTable parse_families(const nlohmann::json& j) {
    static const std::set<std::string> top{"version", "checksum", "families"};
    static const std::set<std::string> fam{"label", "base", "A", "B", "square_classes"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!top.count(it.key())) throw Error("family table: unknown key '" + it.key() + "'");
    FamilyTable t;
    t.version = j.at("version").get<int>();
    if (t.version != 1) throw Error("family table: unsupported version");
    t.checksum = j.at("checksum").get<std::string>();
    for (const auto& f : j.at("families")) {
        for (auto it = f.begin(); it != f.end(); ++it)
            if (!fam.count(it.key())) throw Error("family table: unknown key '" + it.key() + "'");
        FamilySpec s;
        s.label = f.at("label").get<std::string>();
        s.base = f.at("base").get<std::string>();
        if (s.base != "conic" && s.base != "line")
            throw Error("family table: base must be 'conic' or 'line'");
        s.a_text = f.at("A").get<std::string>();
        s.b_text = f.at("B").get<std::string>();
        s.A = Expr::parse(s.a_text);
        s.B = Expr::parse(s.b_text);
        const std::set<char> allowed = s.base == "conic" ? std::set<char>{'a', 'b'}
                                                         : std::set<char>{'t'};
        for (const Expr* e : {&s.A, &s.B})
            for (char v : e->variables())
                if (!allowed.count(v))
                    throw Error("family table: variable '" + std::string(1, v) + "' in " +
                                s.label);
        if (f.contains("square_classes")) {
            const auto& sc = f.at("square_classes");
            for (auto it = sc.begin(); it != sc.end(); ++it) {
                if (it.key() == "A^2-4B")
                    s.isogeny_b_class = it.value().get<long>();
                else if (it.key() == "B")
                    s.b_class = it.value().get<long>();
                else
                    throw Error("family table: unknown square class '" + it.key() + "'");
            }
        }
        t.families.push_back(std::move(s));
    }
    if (family_checksum(t.families) != t.checksum)
        throw Error("family table: checksum mismatch, expected " + t.checksum + ", got " +
                    family_checksum(t.families));
    return t;
}

FamilyTable load_families(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("family table: cannot open " + path);
    return parse_families(nlohmann::json::parse(in));
}

std::string default_families_path() {
#ifdef MINIMAL2_DATA_DIR
    return std::string(MINIMAL2_DATA_DIR) + "/families.json";
#else
    return "data/families.json";
#endif
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> conic_points(std::uint64_t p,
                                                                    std::size_t count) {
    if (p < 3 || p % 2 == 0) throw Error("conic_points: p must be an odd prime");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t b = 0; b < p && out.size() < count; ++b) {
        const PrimeFieldElem rhs = -(PrimeFieldElem(p, 1) + PrimeFieldElem(p, b) * PrimeFieldElem(p, b));
        const auto r = rhs.sqrt();
        if (!r) continue;
        const std::uint64_t a1 = std::min(r->value(), p - r->value()) % p;
        const std::uint64_t a2 = (p - a1) % p;
        out.push_back({a1, b});
        if (a2 != a1 && out.size() < count) out.push_back({a2, b});
    }
    return out;
}

std::vector<std::uint64_t> primes_from(std::uint64_t from, std::size_t count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = std::max<std::uint64_t>(from, 3); out.size() < count; ++n) {
        if (n % 2 == 0) continue;
        bool prime = true;
        for (std::uint64_t q = 3; q * q <= n; q += 2)
            if (n % q == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(n);
    }
    return out;
}

FamilyCheckReport family_identity_check(const FamilySpec& spec,
                                        const std::vector<std::uint64_t>& primes,
                                        std::size_t points_per_prime, std::uint64_t seed) {
    using E = WeierstrassCurve<PrimeFieldElem>;
    FamilyCheckReport r;
    r.label = spec.label;
    std::mt19937_64 rng(seed);
    auto check = [&](bool ok, const std::string& what, const std::string& where) {
        ++r.relations_checked;
        if (ok) return;
        ++r.failures;
        if (r.failure_details.size() < 8) r.failure_details.push_back(what + " at " + where);
    };
    for (std::uint64_t p : primes) {
        if (p < 5 || p % 2 == 0 || p >= (std::uint64_t{1} << 32))
            throw Error("family_identity_check: primes must be odd, in [5, 2^32)");
        ++r.primes;
        std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
        const PrimeFieldElem one(p, 1);
        std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
        for (std::size_t k = 0; k < points_per_prime; ++k) {
            std::map<char, PrimeFieldElem> vars;
            std::string where;
            if (spec.base == "conic") {
                // A random point: pick b until -1 - b^2 is a square.
                for (int tries = 0;; ++tries) {
                    if (tries > 10000) throw Error("family_identity_check: no conic point");
                    const PrimeFieldElem b(p, dist(rng));
                    const auto a = (-(one + b * b)).sqrt();
                    if (!a) continue;
                    const PrimeFieldElem aa = (rng() & 1u) ? *a : -*a;
                    if (!seen.insert({aa.value(), b.value()}).second) continue;
                    vars.insert({'a', aa});
                    vars.insert({'b', b});
                    where = "p=" + std::to_string(p) + " a=" + std::to_string(aa.value()) +
                            " b=" + std::to_string(b.value());
                    break;
                }
                check(vars.at('a') * vars.at('a') + vars.at('b') * vars.at('b') == -one,
                      "conic equation", where);
            } else {
                const PrimeFieldElem t(p, dist(rng));
                vars.insert({'t', t});
                where = "p=" + std::to_string(p) + " t=" + std::to_string(t.value());
            }
            ++r.points;
            const E e{spec.A.evaluate(vars, one), spec.B.evaluate(vars, one)};
            if (is_singular(e)) {
                ++r.singular;
                continue;
            }
            ++r.nonsingular;
            const PrimeFieldElem j = j_invariant(e);
            const PrimeFieldElem minus1 = -one, two = one + one;
            // Twists by -1, 2 and -2: same j, Delta scales by D^6, and
            // twisting commutes with the 2-isogeny.
            for (const PrimeFieldElem& d : {minus1, two, -two}) {
                const E t = twist(e, d);
                check(j_invariant(t) == j, "j changed under twist", where);
                check(discriminant(t) == d.pow(6) * discriminant(e), "twist discriminant", where);
                check(two_isogenous(t) == twist(two_isogenous(e), d), "twist/isogeny commute",
                      where);
            }
            check(twist(twist(e, minus1), minus1) == e, "twist by -1 is an involution", where);
            check(twist(twist(e, two), two) == E{two * two * e.A, two.pow(4) * e.B},
                  "twist by 2 twice", where);
            const E e1 = two_isogenous(e);
            check(!is_singular(e1), "2-isogenous curve singular", where);
            const E e2 = two_isogenous(e1);
            check(e2 == E{one.constant(4) * e.A, one.constant(16) * e.B}, "double isogeny scaling",
                  where);
            check(j_invariant(e2) == j, "double isogeny j", where);
            if (spec.isogeny_b_class)
                check((one.constant(*spec.isogeny_b_class) * e1.B).is_square(),
                      "square class of A^2 - 4B", where);
            if (spec.b_class)
                check((one.constant(*spec.b_class) * e.B).is_square(), "square class of B", where);
        }
    }
    return r;
}

nlohmann::json to_json(const FamilyCheckReport& r) {
    return {{"label", r.label},
            {"primes", r.primes},
            {"points", r.points},
            {"nonsingular", r.nonsingular},
            {"singular", r.singular},
            {"relations_checked", r.relations_checked},
            {"failures", r.failures},
            {"failure_details", r.failure_details},
            {"pass", r.pass()}};
}

// ---------------------------------------------------------------------------
// The quadratic family

QuadFamilyRow quadfamily_check(unsigned n) {
    if (n == 0 || n > 40) throw Error("quadfamily_check: n must be in [1, 40]");
    QuadFamilyRow row;
    row.n = n;
    const mpz_class m = (mpz_class(1) << n) + 1;  // a^2 = -m
    // m = s^2 * f with f squarefree.
    mpz_class f = m, s = 1;
    for (unsigned long q = 2; mpz_class(q) * q <= f; ++q) {
        while (f % (q * q) == 0) {
            f /= q * q;
            s *= q;
        }
    }
    row.d = -f.get_si();
    row.s = s;
    row.plus_one_is_square = mpz_perfect_square_p(m.get_mpz_t()) != 0;
    row.plus_one_twice_square = m % 2 == 0 && mpz_perfect_square_p(mpz_class(m / 2).get_mpz_t());
    row.field_is_gaussian = row.d == -1;

    const QuadFieldElem a(row.d, 0, mpq_class(s));
    const QuadFieldElem two = a.constant(2), one = a.constant(1);
    const WeierstrassCurve<QuadFieldElem> e{two * a, a * a + one};
    const QuadFieldElem delta = discriminant(e);
    row.discriminant = delta.to_string();
    const mpz_class expected = -(mpz_class(1) << (2 * n + 6));
    row.discriminant_matches = delta.is_rational() && delta.u() == mpq_class(expected);
    if (delta.is_rational() && delta.u() != 0) {
        mpz_class num = abs(delta.u().get_num());
        while (num % 2 == 0) num /= 2;
        row.bad_only_above_2 = num == 1 && delta.u().get_den() == 1;
    }

    // t = a: a^2 + 1 = -2^n = -2 u^2 needs u^2 = 2^(n-1).
    const mpz_class u2 = mpz_class(1) << (n - 1);
    row.conic_solvable = mpz_perfect_square_p(u2.get_mpz_t()) != 0;
    if (row.conic_solvable) row.u = mpz_class(sqrt(u2)).get_str();

    if (n % 2 == 1 && n != 3) row.expected_label = "8.24.0";
    if (n == 2 || n == 10) row.expected_label = "16.384.9";

    const auto t = twist(e, a);
    row.twist_a = t.A.to_string();
    row.twist_b = t.B.to_string();
    row.twist_j = j_invariant(t).to_string();
    return row;
}

nlohmann::json to_json(const QuadFamilyRow& r) {
    return {{"n", r.n},
            {"d", r.d},
            {"s", r.s.get_str()},
            {"discriminant", r.discriminant},
            {"discriminant_matches", r.discriminant_matches},
            {"bad_only_above_2", r.bad_only_above_2},
            {"plus_one_is_square", r.plus_one_is_square},
            {"plus_one_twice_square", r.plus_one_twice_square},
            {"field_is_gaussian", r.field_is_gaussian},
            {"conic_solvable", r.conic_solvable},
            {"u", r.u},
            {"expected_label", r.expected_label},
            {"twist_A", r.twist_a},
            {"twist_B", r.twist_b},
            {"twist_j", r.twist_j}};
}

}  // namespace minimal2
