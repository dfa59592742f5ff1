#pragma once

// Genus of the modular curve X_G from the action of SL_2 on cosets of
// <G, -I> ∩ SL_2.

#include <cstdint>
#include <functional>
#include <string>

#include "json.hpp"

#include "minimal2/subgroup.hpp"

namespace minimal2 {

struct GenusData {
    std::uint64_t psl_index = 0;  // m
    std::uint64_t nu2 = 0;
    std::uint64_t nu3 = 0;
    std::uint64_t cusps = 0;
    std::int64_t genus = 0;

    // 12(g - 1) + 3 nu2 + 4 nu3 + 6 c = m
    bool integral() const;
};

struct Label {
    std::uint32_t level = 1;
    std::uint64_t index = 1;
    std::int64_t genus = 0;

    std::string to_string() const;
    friend bool operator==(const Label&, const Label&) = default;
    friend auto operator<=>(const Label&, const Label&) = default;
};

// Maps (m, nu2, nu3, c) to 12 g. The default is 12 + m - 3 nu2 - 4 nu3 - 6 c;
// tests substitute a tampered one.
using GenusFormula = std::function<std::int64_t(std::uint64_t m, std::uint64_t nu2,
                                                std::uint64_t nu3, std::uint64_t c)>;
std::int64_t standard_genus_formula(std::uint64_t m, std::uint64_t nu2, std::uint64_t nu3,
                                    std::uint64_t c);

OpenSubgroup adjoin_minus_I(const OpenSubgroup& g, const Budget& budget = {});
bool contains_minus_I(const OpenSubgroup& g);

// Throws unless det(G) is all of (Z/modulus)^x.
GenusData genus(const OpenSubgroup& g, const GenusFormula& formula = standard_genus_formula);
Label label(const OpenSubgroup& g);

nlohmann::json to_json(const GenusData& d);

}  // namespace minimal2
