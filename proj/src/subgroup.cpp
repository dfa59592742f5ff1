#include "minimal2/subgroup.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <map>
#include <set>

#include "minimal2/closure.hpp"
#include "minimal2/error.hpp"

namespace minimal2 {

namespace {

std::uint32_t check_prime_power(std::uint32_t prime, std::uint32_t modulus) {
    if (prime_of(prime) != prime) throw Error("not a prime: " + std::to_string(prime));
    if (modulus != 1 && prime_of(modulus) != prime)
        throw Error("modulus " + std::to_string(modulus) + " is not a power of " +
                    std::to_string(prime));
    return prime;
}

std::vector<Packed> packed_of(std::span<const ResidueMatrix> xs) {
    std::vector<Packed> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(x.pack());
    return out;
}

std::vector<ResidueMatrix> unpacked(std::span<const Packed> xs, std::uint32_t modulus) {
    std::vector<ResidueMatrix> out;
    out.reserve(xs.size());
    for (Packed x : xs) out.push_back(ResidueMatrix::unpack(x, modulus));
    return out;
}

std::vector<Packed> sorted_copy(std::vector<Packed> v) {
    std::sort(v.begin(), v.end());
    return v;
}

Packed commutator(const ModRing& ring, Packed x, Packed y) {
    return ring.mul(ring.mul(x, y), ring.mul(ring.inverse(x), ring.inverse(y)));
}

// Generators of ker(GL_2(Z/modulus) -> GL_2(Z/m)) for m >= p: I + p^j E_ab
// for every layer p^j in [m, modulus). Their images span every layer quotient
// of the congruence filtration, so they generate the kernel.
std::vector<ResidueMatrix> kernel_generators(std::uint32_t p, std::uint32_t m,
                                             std::uint32_t modulus) {
    std::vector<ResidueMatrix> gens;
    for (std::uint32_t q = m; q < modulus; q *= p) {
        const auto s = static_cast<std::int64_t>(q);
        gens.emplace_back(modulus, 1 + s, 0, 0, 1);
        gens.emplace_back(modulus, 1, s, 0, 1);
        gens.emplace_back(modulus, 1, 0, s, 1);
        gens.emplace_back(modulus, 1, 0, 0, 1 + s);
    }
    return gens;
}

std::uint32_t primitive_root(std::uint32_t p) {
    // A primitive root mod p^2 stays primitive mod every p^k.
    const std::uint32_t n = p * p;
    const std::uint32_t phi = p * (p - 1);
    for (std::uint32_t g = 2; g < n; ++g) {
        if (g % p == 0) continue;
        std::uint32_t x = 1, ord = 0;
        do {
            x = (x * g) % n;
            ++ord;
        } while (x != 1);
        if (ord == phi) return g;
    }
    throw Error("no primitive root");
}

}  // namespace

OpenSubgroup::OpenSubgroup(std::uint32_t prime, std::uint32_t modulus,
                           std::vector<ResidueMatrix> generators, std::vector<Packed> elements)
    : prime_(check_prime_power(prime, modulus)),
      modulus_(modulus),
      generators_(std::move(generators)),
      elements_(std::make_shared<const std::vector<Packed>>(std::move(elements))) {
    for (const auto& g : generators_)
        if (g.modulus() != modulus_) throw Error("OpenSubgroup: generator modulus mismatch");
}

std::uint64_t OpenSubgroup::index() const { return gl2_order(modulus_) / size(); }

bool OpenSubgroup::contains(Packed x) const {
    return std::binary_search(elements_->begin(), elements_->end(), x);
}

bool OpenSubgroup::contains(const ResidueMatrix& x) const {
    return x.modulus() == modulus_ && contains(x.pack());
}

bool OpenSubgroup::is_p_group() const {
    std::uint64_t n = size();
    while (n % prime_ == 0) n /= prime_;
    return n == 1;
}

OpenSubgroup closure(std::span<const ResidueMatrix> gens, std::uint32_t modulus,
                     const Budget& budget) {
    const auto p = prime_of(modulus);
    if (!p) throw Error("closure: modulus " + std::to_string(modulus) + " is not a prime power");
    const ModRing ring(modulus);
    ClosureBuilder builder(ring, budget.max_elements);
    std::vector<ResidueMatrix> used;
    for (const auto& g : gens) {
        if (g.modulus() != modulus) throw Error("closure: generator modulus mismatch");
        if (!is_unit(mat_det(g), modulus))
            throw Error("closure: generator " + g.to_string() + " is not invertible");
        if (builder.add_generator(g.pack())) used.push_back(g);
    }
    return {*p, modulus, std::move(used), sorted_copy(builder.elements())};
}

OpenSubgroup full_group(std::uint32_t modulus) {
    const auto p = prime_of(modulus);
    if (!p) throw Error("full_group: modulus must be a prime power");
    std::vector<Packed> base;
    for (std::uint32_t a = 0; a < *p; ++a)
        for (std::uint32_t b = 0; b < *p; ++b)
            for (std::uint32_t c = 0; c < *p; ++c)
                for (std::uint32_t d = 0; d < *p; ++d)
                    if ((a * d + *p * *p - b * c) % *p != 0) base.push_back(pack_entries(a, b, c, d));
    OpenSubgroup mod_p(*p, *p, gl2_generators(*p), std::move(base));
    if (modulus == *p) return mod_p;
    auto lifted = full_preimage(mod_p, modulus);
    return {*p, modulus, gl2_generators(modulus), {lifted.elements().begin(), lifted.elements().end()}};
}

OpenSubgroup subgroup_from_elements(std::uint32_t prime, std::uint32_t modulus,
                                    std::vector<Packed> elements, const Budget& budget) {
    const ModRing ring(modulus);
    ClosureBuilder builder(ring, budget.max_elements);
    std::vector<ResidueMatrix> gens;
    for (Packed x : elements) {
        if (builder.size() == elements.size()) break;
        if (builder.add_generator(x)) gens.push_back(ResidueMatrix::unpack(x, modulus));
    }
    if (builder.size() != elements.size())
        throw Error("subgroup_from_elements: element list is not a group");
    return {prime, modulus, std::move(gens), std::move(elements)};
}

std::uint32_t level(const OpenSubgroup& h) {
    const std::uint32_t n = h.modulus(), p = h.prime();
    if (h.size() == gl2_order(n)) return 1;
    unsigned k = 0;
    for (std::uint32_t q = 1; q < n; q *= p) ++k;
    // depth[j] = number of elements congruent to I mod p^j.
    std::vector<std::uint64_t> depth(k + 1, 0);
    for (Packed x : h.elements()) {
        const std::uint32_t e[4] = {(entry_a(x) + n - 1) % n, entry_b(x), entry_c(x),
                                    (entry_d(x) + n - 1) % n};
        unsigned v = 0;
        for (std::uint32_t q = p; v < k; q *= p) {
            bool all = true;
            for (auto y : e) all = all && (y % q == 0);
            if (!all) break;
            ++v;
        }
        for (unsigned j = 0; j <= v; ++j) ++depth[j];
    }
    std::uint32_t q = 1;
    for (unsigned j = 1; j <= k; ++j) {
        q *= p;
        const std::uint64_t s = n / q;
        if (depth[j] == s * s * s * s) return q;
    }
    return n;
}

OpenSubgroup reduce_to(const OpenSubgroup& h, std::uint32_t m) {
    if (m == 0 || h.modulus() % m != 0)
        throw Error("reduce_to: " + std::to_string(m) + " does not divide " +
                    std::to_string(h.modulus()));
    if (m == h.modulus()) return h;
    const ModRing ring(m);
    std::vector<Packed> elems;
    elems.reserve(h.size());
    for (Packed x : h.elements())
        elems.push_back(pack_entries(ring.reduce(entry_a(x)), ring.reduce(entry_b(x)),
                                     ring.reduce(entry_c(x)), ring.reduce(entry_d(x))));
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    std::vector<ResidueMatrix> gens;
    for (const auto& g : h.generators()) gens.push_back(reduce(g, m));
    return {h.prime(), m, std::move(gens), std::move(elems)};
}

OpenSubgroup full_preimage(const OpenSubgroup& h, std::uint32_t modulus, const Budget& budget) {
    const std::uint32_t n = h.modulus();
    if (modulus % n != 0)
        throw Error("full_preimage: " + std::to_string(n) + " does not divide " +
                    std::to_string(modulus));
    if (modulus == n) return h;
    if (prime_of(modulus) != h.prime()) throw Error("full_preimage: prime mismatch");
    // Over Z/1 every lift would be taken, singular ones included.
    if (n == 1) return full_group(modulus);
    const std::uint32_t s = modulus / n;
    const std::uint64_t fibre = std::uint64_t{s} * s * s * s;
    if (h.size() * fibre > budget.max_elements)
        throw BudgetExceeded("full_preimage: " + std::to_string(h.size() * fibre) +
                             " elements exceed the budget");
    std::vector<Packed> elems;
    elems.reserve(h.size() * fibre);
    for (Packed x : h.elements()) {
        const std::uint32_t a = entry_a(x), b = entry_b(x), c = entry_c(x), d = entry_d(x);
        for (std::uint32_t i = 0; i < s; ++i)
            for (std::uint32_t j = 0; j < s; ++j)
                for (std::uint32_t k = 0; k < s; ++k)
                    for (std::uint32_t l = 0; l < s; ++l)
                        elems.push_back(
                            pack_entries(a + n * i, b + n * j, c + n * k, d + n * l));
    }
    std::sort(elems.begin(), elems.end());
    std::vector<ResidueMatrix> gens;
    for (const auto& g : h.generators()) gens.push_back(lift(g, modulus));
    if (n == 1) {
        gens = gl2_generators(modulus);
    } else {
        for (auto& g : kernel_generators(h.prime(), n, modulus)) gens.push_back(g);
    }
    return {h.prime(), modulus, std::move(gens), std::move(elems)};
}

OpenSubgroup congruence_kernel(std::uint32_t m, std::uint32_t modulus) {
    const auto p = prime_of(modulus);
    if (!p || modulus % m != 0) throw Error("congruence_kernel: bad moduli");
    if (m == 1) return full_group(modulus);
    const OpenSubgroup trivial(*p, m, {}, {ModRing(m).identity()});
    return full_preimage(trivial, modulus);
}

OpenSubgroup conjugate(const OpenSubgroup& h, const ResidueMatrix& g) {
    if (g.modulus() != h.modulus()) throw Error("conjugate: modulus mismatch");
    const ModRing ring(h.modulus());
    const Packed gp = g.pack(), gi = ring.inverse(gp);
    std::vector<Packed> elems;
    elems.reserve(h.size());
    for (Packed x : h.elements()) elems.push_back(ring.conjugate(gp, x, gi));
    std::sort(elems.begin(), elems.end());
    std::vector<ResidueMatrix> gens;
    for (const auto& x : h.generators())
        gens.push_back(ResidueMatrix::unpack(ring.conjugate(gp, x.pack(), gi), h.modulus()));
    return {h.prime(), h.modulus(), std::move(gens), std::move(elems)};
}

std::vector<std::uint32_t> det_image(const OpenSubgroup& h, std::uint32_t m) {
    if (m == 0 || h.modulus() % m != 0)
        throw Error("det_image: " + std::to_string(m) + " does not divide " +
                    std::to_string(h.modulus()));
    std::vector<std::uint32_t> dets;
    for (const auto& g : h.generators()) dets.push_back(mat_det(g) % m);
    std::set<std::uint32_t> image{1 % m};
    std::vector<std::uint32_t> frontier{1 % m};
    while (!frontier.empty()) {
        const std::uint32_t x = frontier.back();
        frontier.pop_back();
        for (auto d : dets) {
            const std::uint32_t y = (x * d) % m;
            if (image.insert(y).second) frontier.push_back(y);
        }
    }
    return {image.begin(), image.end()};
}

bool det_surjective_2adic(const OpenSubgroup& h) {
    if (h.prime() != 2 || h.modulus() < 8)
        throw Error("det_surjective_2adic: needs p = 2 and modulus >= 8");
    return det_image(h, 8).size() == 4;
}

// ---------------------------------------------------------------------------

std::uint32_t FrattiniQuotient::coordinates_of(Packed x) const {
    const auto& e = *parent_elements;
    const auto it = std::lower_bound(e.begin(), e.end(), x);
    if (it == e.end() || *it != x) throw Error("FrattiniQuotient: element not in the group");
    return coordinates[static_cast<std::size_t>(it - e.begin())];
}

FrattiniQuotient frattini_quotient(const OpenSubgroup& h, const Budget& budget) {
    if (h.prime() != 2 || !h.is_p_group())
        throw Error("frattini_quotient: input is not a 2-group");
    const ModRing ring = h.ring();
    const auto gens = packed_of(h.generators());
    ClosureBuilder builder(ring, budget.max_elements);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        builder.add_generator(ring.mul(gens[i], gens[i]));
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            builder.add_generator(commutator(ring, gens[i], gens[j]));
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (Packed g : gens) {
            const Packed gi = ring.inverse(g);
            for (std::size_t k = 0; k < builder.generators().size(); ++k) {
                const Packed c = ring.conjugate(g, builder.generators()[k], gi);
                if (builder.add_generator(c)) changed = true;
            }
        }
    }
    const std::size_t phi_size = builder.size();
    const std::vector<Packed> phi_gens = builder.generators();

    FrattiniQuotient fq;
    for (Packed g : gens) {
        if (builder.contains(g)) continue;
        if (fq.rank >= 32) throw Error("frattini_quotient: rank exceeds 32");
        builder.add_generator(g, std::uint32_t{1} << fq.rank);
        fq.basis.push_back(ResidueMatrix::unpack(g, h.modulus()));
        ++fq.rank;
    }
    if (builder.size() != h.size() || (std::uint64_t{phi_size} << fq.rank) != h.size())
        throw Error("frattini_quotient: generators do not generate the group");

    std::vector<std::pair<Packed, std::uint32_t>> tagged(builder.size());
    std::vector<Packed> phi_elems;
    phi_elems.reserve(phi_size);
    for (std::size_t i = 0; i < builder.size(); ++i) {
        tagged[i] = {builder.elements()[i], builder.tags()[i]};
        if (builder.tags()[i] == 0) phi_elems.push_back(builder.elements()[i]);
    }
    std::sort(tagged.begin(), tagged.end());
    std::sort(phi_elems.begin(), phi_elems.end());
    fq.coordinates.reserve(tagged.size());
    for (const auto& t : tagged) fq.coordinates.push_back(t.second);
    fq.parent_elements = h.shared_elements();
    fq.frattini = std::make_shared<const OpenSubgroup>(h.prime(), h.modulus(),
                                                       unpacked(phi_gens, h.modulus()),
                                                       std::move(phi_elems));
    return fq;
}

OpenSubgroup hyperplane_subgroup(const OpenSubgroup& h, const FrattiniQuotient& fq,
                                 std::uint32_t functional) {
    if (functional == 0 || (fq.rank < 32 && functional >> fq.rank) != 0)
        throw Error("hyperplane_subgroup: functional out of range");
    std::vector<Packed> elems;
    elems.reserve(h.size() / 2);
    const auto all = h.elements();
    for (std::size_t i = 0; i < all.size(); ++i)
        if ((std::popcount(fq.coordinates[i] & functional) & 1) == 0) elems.push_back(all[i]);

    std::vector<ResidueMatrix> gens = fq.frattini->generators();
    const unsigned pivot = static_cast<unsigned>(std::countr_zero(functional));
    for (unsigned i = 0; i < fq.rank; ++i) {
        if (i == pivot) continue;
        if ((functional >> i) & 1u)
            gens.push_back(mat_mul(fq.basis[pivot], fq.basis[i]));
        else
            gens.push_back(fq.basis[i]);
    }
    return {h.prime(), h.modulus(), std::move(gens), std::move(elems)};
}

std::vector<OpenSubgroup> index2_subgroups(const OpenSubgroup& h, const FrattiniQuotient& fq) {
    std::vector<OpenSubgroup> out;
    for (std::uint32_t f = 1; f < (std::uint32_t{1} << fq.rank); ++f)
        out.push_back(hyperplane_subgroup(h, fq, f));
    return out;
}

std::vector<OpenSubgroup> index2_subgroups(const OpenSubgroup& h, const Budget& budget) {
    return index2_subgroups(h, frattini_quotient(h, budget));
}

OpenSubgroup normal_closure(const OpenSubgroup& h, std::span<const Packed> seeds,
                            const Budget& budget) {
    const ModRing ring = h.ring();
    ClosureBuilder builder(ring, budget.max_elements);
    for (Packed s : seeds) builder.add_generator(s);
    const auto gens = packed_of(h.generators());
    for (bool changed = true; changed;) {
        changed = false;
        for (Packed g : gens) {
            const Packed gi = ring.inverse(g);
            for (std::size_t k = 0; k < builder.generators().size(); ++k)
                if (builder.add_generator(ring.conjugate(g, builder.generators()[k], gi)))
                    changed = true;
        }
    }
    return {h.prime(), h.modulus(), unpacked(builder.generators(), h.modulus()),
            sorted_copy(builder.elements())};
}

bool is_nilpotent(const OpenSubgroup& h, const Budget& budget) {
    const ModRing ring = h.ring();
    const auto gens = packed_of(h.generators());
    OpenSubgroup term = h;
    while (term.size() > 1) {
        std::vector<Packed> seeds;
        for (const auto& x : term.generators())
            for (Packed g : gens) seeds.push_back(commutator(ring, x.pack(), g));
        OpenSubgroup next = normal_closure(h, seeds, budget);
        if (next.size() == term.size()) return false;
        term = std::move(next);
    }
    return true;
}

bool is_nilpotent_sylow(const OpenSubgroup& h) {
    const ModRing ring = h.ring();
    const Packed one = ring.identity();
    std::uint64_t n = h.size();
    for (std::uint64_t q = 2; n > 1; ++q) {
        if (n % q != 0) continue;
        std::uint64_t part = 1;
        while (n % q == 0) {
            n /= q;
            part *= q;
        }
        std::uint64_t count = 0;
        for (Packed x : h.elements())
            if (ring.pow(x, part) == one) ++count;
        if (count != part) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

std::vector<ResidueMatrix> gl2_generators(std::uint32_t modulus) {
    const auto p = prime_of(modulus);
    if (!p) return {ResidueMatrix::identity(modulus)};
    std::vector<ResidueMatrix> gens{{modulus, 1, 1, 0, 1}, {modulus, 0, -1, 1, 0}};
    if (*p == 2) {
        for (std::int64_t u : {-1, 3, 5}) gens.push_back(ResidueMatrix::diag(modulus, u, 1));
    } else {
        gens.push_back(ResidueMatrix::diag(modulus, primitive_root(*p), 1));
    }
    return gens;
}

std::string CanonicalKey::digest() const {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    auto mix = [&](std::uint32_t w) {
        for (int i = 0; i < 4; ++i) {
            hash ^= (w >> (8 * i)) & 0xffu;
            hash *= 0x100000001b3ull;
        }
    };
    mix(level);
    for (Packed x : elements) mix(x);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

CanonicalKey canonical_key(const OpenSubgroup& h, const Budget& budget) {
    const std::uint32_t lvl = level(h);
    if (lvl == 1) return {1, {0}};
    const OpenSubgroup base = reduce_to(h, lvl);
    const ModRing ring(lvl);
    std::vector<std::pair<Packed, Packed>> conjugators;
    for (const auto& g : gl2_generators(lvl)) conjugators.emplace_back(g.pack(), ring.inverse(g.pack()));

    std::set<std::vector<Packed>> orbit;
    std::vector<const std::vector<Packed>*> frontier;
    auto first = orbit.insert({base.elements().begin(), base.elements().end()}).first;
    frontier.push_back(&*first);
    while (!frontier.empty()) {
        const auto* cur = frontier.back();
        frontier.pop_back();
        for (const auto& [g, gi] : conjugators) {
            std::vector<Packed> next;
            next.reserve(cur->size());
            for (Packed x : *cur) next.push_back(ring.conjugate(g, x, gi));
            std::sort(next.begin(), next.end());
            auto [it, fresh] = orbit.insert(std::move(next));
            if (!fresh) continue;
            if (orbit.size() > budget.max_orbit)
                throw BudgetExceeded("canonical_key: conjugacy orbit exceeds " +
                                     std::to_string(budget.max_orbit));
            frontier.push_back(&*it);
        }
    }
    return {lvl, *orbit.begin()};
}

nlohmann::json to_json(const OpenSubgroup& h) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : h.generators()) gens.push_back({g.a(), g.b(), g.c(), g.d()});
    return {{"prime", h.prime()}, {"modulus", h.modulus()}, {"generators", gens}};
}

OpenSubgroup subgroup_from_json(const nlohmann::json& j, const Budget& budget) {
    if (!j.is_object()) throw Error("subgroup JSON must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "prime" && key != "modulus" && key != "generators")
            throw Error("subgroup JSON: unknown key '" + key + "'");
    const auto prime = j.at("prime").get<std::uint32_t>();
    const auto modulus = j.at("modulus").get<std::uint32_t>();
    if (prime_of(modulus) != prime)
        throw Error("subgroup JSON: modulus is not a power of the stated prime");
    std::vector<ResidueMatrix> gens;
    for (const auto& g : j.at("generators")) {
        if (!g.is_array() || g.size() != 4) throw Error("subgroup JSON: generator needs 4 entries");
        gens.emplace_back(modulus, g[0].get<std::int64_t>(), g[1].get<std::int64_t>(),
                          g[2].get<std::int64_t>(), g[3].get<std::int64_t>());
    }
    return closure(gens, modulus, budget);
}

}  // namespace minimal2
