#pragma once

// Breadth-first closure of packed matrices under right multiplication.

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <vector>

#include "minimal2/modarith.hpp"

namespace minimal2 {

// Membership set for packed words at one modulus. A zero-initialised bitmap
// over the dense index when n^4 <= 2^28, an open-addressing table otherwise.
class PackedSet {
public:
    explicit PackedSet(const ModRing& ring);

    bool insert(Packed x);
    bool contains(Packed x) const;
    std::size_t size() const { return count_; }

private:
    struct FreeDeleter {
        void operator()(std::uint64_t* p) const { std::free(p); }
    };

    bool hash_insert(Packed x);
    void rehash();

    ModRing ring_;
    bool dense_;
    std::unique_ptr<std::uint64_t[], FreeDeleter> bits_;
    std::vector<Packed> table_;  // 0 marks an empty slot: the zero matrix is never invertible
    std::size_t count_ = 0;
};

// Incrementally grown group <gens>, optionally tagging each element with the
// XOR of generator tags along the path that reached it. Tags are only
// meaningful when they factor through an elementary abelian 2-quotient.
class ClosureBuilder {
public:
    ClosureBuilder(const ModRing& ring, std::uint64_t max_elements);

    const ModRing& ring() const { return ring_; }
    bool contains(Packed x) const { return set_.contains(x); }
    // Returns false (and changes nothing) when g is already a member.
    bool add_generator(Packed g, std::uint32_t tag = 0);

    std::size_t size() const { return elements_.size(); }
    const std::vector<Packed>& elements() const { return elements_; }
    const std::vector<std::uint32_t>& tags() const { return tags_; }
    const std::vector<Packed>& generators() const { return gens_; }

private:
    void push(Packed x, std::uint32_t tag);

    ModRing ring_;
    std::uint64_t max_elements_;
    PackedSet set_;
    std::vector<Packed> elements_;
    std::vector<std::uint32_t> tags_;
    std::vector<Packed> gens_;
    std::vector<std::uint32_t> gen_tags_;
};

}  // namespace minimal2
