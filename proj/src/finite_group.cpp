#include "minimal2/finite_group.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_set>

#include "minimal2/error.hpp"

namespace minimal2 {

namespace {
struct SubsetHash {
    std::size_t operator()(const FiniteGroup::Subset& s) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ull;
        for (auto w : s) h = (h ^ w) * 0x100000001B3ull + (h >> 29);
        return static_cast<std::size_t>(h);
    }
};
}  // namespace

FiniteGroup::FiniteGroup(std::uint32_t modulus, std::vector<Packed> sorted_elements)
    : ring_(modulus), elems_(std::move(sorted_elements)) {
    const std::size_t n = elems_.size();
    if (n == 0 || n > 65535) throw Error("FiniteGroup: size out of range");
    if (!std::is_sorted(elems_.begin(), elems_.end()))
        throw Error("FiniteGroup: elements must be sorted");
    table_.resize(n * n);
    inv_.resize(n);
    identity_ = index_of(ring_.identity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            table_[i * n + j] = index_of(ring_.mul(elems_[i], elems_[j]));
        inv_[i] = index_of(ring_.inverse(elems_[i]));
    }
}

FiniteGroup FiniteGroup::gl2(std::uint32_t modulus) {
    std::vector<Packed> elems;
    const ModRing ring(modulus);
    for (std::uint32_t a = 0; a < modulus; ++a)
        for (std::uint32_t b = 0; b < modulus; ++b)
            for (std::uint32_t c = 0; c < modulus; ++c)
                for (std::uint32_t d = 0; d < modulus; ++d) {
                    const Packed x = pack_entries(a, b, c, d);
                    if (is_unit(ring.det(x), modulus)) elems.push_back(x);
                }
    return {modulus, std::move(elems)};
}

FiniteGroup::Index FiniteGroup::index_of(Packed x) const {
    const auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
    if (it == elems_.end() || *it != x) throw Error("FiniteGroup: element not in the group");
    return static_cast<Index>(it - elems_.begin());
}

std::uint64_t FiniteGroup::order(Index x) const {
    std::uint64_t n = 1;
    for (Index y = x; y != identity_; y = mul(y, x)) ++n;
    return n;
}

std::size_t FiniteGroup::count(const Subset& s) {
    std::size_t n = 0;
    for (auto w : s) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<FiniteGroup::Index> FiniteGroup::members(const Subset& s) const {
    std::vector<Index> out;
    for (std::size_t w = 0; w < s.size(); ++w)
        for (std::uint64_t bits = s[w]; bits; bits &= bits - 1)
            out.push_back(static_cast<Index>(w * 64 + std::countr_zero(bits)));
    return out;
}

FiniteGroup::Subset FiniteGroup::generate(std::span<const Index> gens) const {
    Subset s = empty_subset();
    set(s, identity_);
    std::vector<Index> used;
    for (Index g : gens) {
        if (test(s, g)) continue;
        s = extend(s, used, g);
        used.push_back(g);
    }
    return s;
}

std::vector<FiniteGroup::Index> FiniteGroup::generators_of(const Subset& h) const {
    Subset s = empty_subset();
    set(s, identity_);
    std::vector<Index> gens;
    const std::size_t n = count(h);
    for (Index x : members(h)) {
        if (count(s) == n) break;
        if (test(s, x)) continue;
        s = extend(s, gens, x);
        gens.push_back(x);
    }
    return gens;
}

FiniteGroup::Subset FiniteGroup::extend(const Subset& h, std::span<const Index> h_gens,
                                        Index g) const {
    if (test(h, g)) return h;
    Subset s = h;
    std::vector<Index> frontier;
    for (Index x : members(h)) {
        const Index y = mul(x, g);
        if (!test(s, y)) {
            set(s, y);
            frontier.push_back(y);
        }
    }
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        const Index e = frontier[i];
        auto step = [&](Index t) {
            const Index y = mul(e, t);
            if (!test(s, y)) {
                set(s, y);
                frontier.push_back(y);
            }
        };
        for (Index t : h_gens) step(t);
        step(g);
    }
    return s;
}

FiniteGroup::Subset FiniteGroup::conjugate(const Subset& h, Index g) const {
    Subset s = empty_subset();
    const Index gi = inverse(g);
    for (Index x : members(h)) set(s, mul(mul(g, x), gi));
    return s;
}

FiniteGroup::Subset FiniteGroup::canonical(const Subset& h) const {
    Subset best = h;
    for (std::size_t g = 0; g < size(); ++g) {
        Subset c = conjugate(h, static_cast<Index>(g));
        if (c < best) best = std::move(c);
    }
    return best;
}

std::vector<FiniteGroup::Subset> FiniteGroup::subgroups_containing(
    std::span<const Index> seeds) const {
    std::vector<Subset> out{generate(seeds)};
    std::unordered_set<Subset, SubsetHash> seen{out.front()};
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Subset h = out[i];
        const auto h_elems = members(h);
        const auto h_gens = generators_of(h);
        // <H, g> only depends on the double coset HgH.
        Subset covered = h;
        for (std::size_t g = 0; g < size(); ++g) {
            const auto gi = static_cast<Index>(g);
            if (test(covered, gi)) continue;
            for (Index x : h_elems)
                for (Index y : h_elems) set(covered, mul(mul(x, gi), y));
            Subset k = extend(h, h_gens, gi);
            if (seen.insert(k).second) out.push_back(std::move(k));
        }
    }
    return out;
}

std::vector<FiniteGroup::Subset> FiniteGroup::class_representatives(
    const std::vector<Subset>& subgroups) const {
    std::set<Subset> reps;
    for (const auto& h : subgroups) reps.insert(canonical(h));
    return {reps.begin(), reps.end()};
}

}  // namespace minimal2
