#pragma once

// Small matrix groups (at most 2^16 elements) with a full multiplication
// table, for exhaustive subgroup enumeration.

#include <cstdint>
#include <span>
#include <vector>

#include "minimal2/modarith.hpp"

namespace minimal2 {

class FiniteGroup {
public:
    using Index = std::uint16_t;
    using Subset = std::vector<std::uint64_t>;  // bitset over element indices

    FiniteGroup(std::uint32_t modulus, std::vector<Packed> sorted_elements);
    static FiniteGroup gl2(std::uint32_t modulus);

    std::uint32_t modulus() const { return ring_.modulus(); }
    const ModRing& ring() const { return ring_; }
    std::size_t size() const { return elems_.size(); }
    Packed element(Index i) const { return elems_[i]; }
    Index index_of(Packed x) const;
    Index identity() const { return identity_; }
    Index mul(Index x, Index y) const { return table_[std::size_t{x} * elems_.size() + y]; }
    Index inverse(Index x) const { return inv_[x]; }
    std::uint64_t order(Index x) const;

    Subset empty_subset() const { return Subset((elems_.size() + 63) / 64, 0); }
    static bool test(const Subset& s, Index i) { return (s[i >> 6] >> (i & 63)) & 1u; }
    static void set(Subset& s, Index i) { s[i >> 6] |= std::uint64_t{1} << (i & 63); }
    static std::size_t count(const Subset& s);
    std::vector<Index> members(const Subset& s) const;

    Subset generate(std::span<const Index> gens) const;
    // <H, g> for a subgroup H generated by h_gens.
    Subset extend(const Subset& h, std::span<const Index> h_gens, Index g) const;
    // A small generating set, chosen greedily in index order.
    std::vector<Index> generators_of(const Subset& h) const;
    Subset conjugate(const Subset& h, Index g) const;
    // Least conjugate, comparing bitsets word by word.
    Subset canonical(const Subset& h) const;

    // Every subgroup containing <seeds>, each exactly once.
    std::vector<Subset> subgroups_containing(std::span<const Index> seeds) const;
    std::vector<Subset> all_subgroups() const { return subgroups_containing({}); }
    // One representative (the canonical one) per conjugacy class.
    std::vector<Subset> class_representatives(const std::vector<Subset>& subgroups) const;

private:
    ModRing ring_;
    std::vector<Packed> elems_;
    std::vector<Index> table_;
    std::vector<Index> inv_;
    Index identity_ = 0;
};

}  // namespace minimal2
