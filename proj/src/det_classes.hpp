#pragma once

// Determinants mod 8 as vectors in F_2^2, shared by the minimality test and
// the census.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

namespace minimal2::detail {

// (Z/8)^x = {1,3,5,7} as F_2^2: 3 -> 01, 5 -> 10, 7 -> 11.
inline std::uint32_t det_class(std::uint32_t d) {
    return ((d >> 1) & 1u) | (((d >> 2) & 1u) << 1);
}

inline std::vector<std::uint32_t> class_residues(std::uint32_t span) {
    static constexpr std::uint32_t kResidue[4] = {1, 3, 5, 7};
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 0; c < 4; ++c)
        if ((span >> c) & 1u) out.push_back(kResidue[c]);
    std::sort(out.begin(), out.end());
    return out;
}

// The set of det classes (bit c for class c) reached by the hyperplane
// ker f, given the class of each basis vector of the Frattini quotient.
inline std::uint32_t kernel_det_span(std::uint32_t f, const std::vector<std::uint32_t>& classes) {
    const unsigned r = static_cast<unsigned>(classes.size());
    const unsigned pivot = static_cast<unsigned>(std::countr_zero(f));
    std::uint32_t span = 1;
    auto add = [&](std::uint32_t c) {
        std::uint32_t next = span;
        for (std::uint32_t x = 0; x < 4; ++x)
            if ((span >> x) & 1u) next |= 1u << (x ^ c);
        span = next;
    };
    for (unsigned i = 0; i < r; ++i) {
        if (i == pivot) continue;
        add(((f >> i) & 1u) ? (classes[pivot] ^ classes[i]) : classes[i]);
    }
    return span;
}

}  // namespace minimal2::detail
