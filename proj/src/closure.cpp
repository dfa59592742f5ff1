#include "minimal2/closure.hpp"

#include <string>

#include "minimal2/error.hpp"

namespace minimal2 {

namespace {
constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 28;

std::size_t slot_of(Packed x, std::size_t mask) {
    return static_cast<std::size_t>((x * 0x9E3779B1u) ^ (x >> 15)) & mask;
}
}  // namespace

PackedSet::PackedSet(const ModRing& ring) : ring_(ring) {
    const std::uint64_t n = ring.modulus();
    const std::uint64_t span = n * n * n * n;
    dense_ = span <= kDenseLimit;
    if (dense_) {
        const std::size_t words = static_cast<std::size_t>((span + 63) / 64);
        bits_.reset(static_cast<std::uint64_t*>(std::calloc(words, sizeof(std::uint64_t))));
        if (!bits_) throw BudgetExceeded("PackedSet: bitmap allocation failed");
    } else {
        table_.assign(1u << 16, 0);
    }
}

bool PackedSet::insert(Packed x) {
    if (!dense_) return hash_insert(x);
    const std::uint64_t i = ring_.dense_index(x);
    std::uint64_t& word = bits_[i >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (word & bit) return false;
    word |= bit;
    ++count_;
    return true;
}

bool PackedSet::contains(Packed x) const {
    if (dense_) {
        const std::uint64_t i = ring_.dense_index(x);
        return (bits_[i >> 6] >> (i & 63)) & 1u;
    }
    const std::size_t mask = table_.size() - 1;
    for (std::size_t s = slot_of(x, mask);; s = (s + 1) & mask) {
        if (table_[s] == x) return true;
        if (table_[s] == 0) return false;
    }
}

bool PackedSet::hash_insert(Packed x) {
    if (2 * (count_ + 1) > table_.size()) rehash();
    const std::size_t mask = table_.size() - 1;
    for (std::size_t s = slot_of(x, mask);; s = (s + 1) & mask) {
        if (table_[s] == x) return false;
        if (table_[s] == 0) {
            table_[s] = x;
            ++count_;
            return true;
        }
    }
}

void PackedSet::rehash() {
    std::vector<Packed> old;
    old.swap(table_);
    table_.assign(old.size() * 2, 0);
    const std::size_t mask = table_.size() - 1;
    for (Packed x : old) {
        if (x == 0) continue;
        std::size_t s = slot_of(x, mask);
        while (table_[s] != 0) s = (s + 1) & mask;
        table_[s] = x;
    }
}

ClosureBuilder::ClosureBuilder(const ModRing& ring, std::uint64_t max_elements)
    : ring_(ring), max_elements_(max_elements), set_(ring) {
    set_.insert(ring_.identity());
    push(ring_.identity(), 0);
}

void ClosureBuilder::push(Packed x, std::uint32_t tag) {
    if (elements_.size() >= max_elements_)
        throw BudgetExceeded("closure exceeded the element budget of " +
                             std::to_string(max_elements_) + " at modulus " +
                             std::to_string(ring_.modulus()));
    elements_.push_back(x);
    tags_.push_back(tag);
}

bool ClosureBuilder::add_generator(Packed g, std::uint32_t tag) {
    if (set_.contains(g)) return false;
    gens_.push_back(g);
    gen_tags_.push_back(tag);
    const std::size_t old = elements_.size();
    for (std::size_t i = 0; i < old; ++i) {
        const Packed x = ring_.mul(elements_[i], g);
        if (set_.insert(x)) push(x, tags_[i] ^ tag);
    }
    for (std::size_t i = old; i < elements_.size(); ++i) {
        const Packed e = elements_[i];
        const std::uint32_t t = tags_[i];
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            const Packed x = ring_.mul(e, gens_[j]);
            if (set_.insert(x)) push(x, t ^ gen_tags_[j]);
        }
    }
    return true;
}

}  // namespace minimal2
