#include "minimal2/modcurve.hpp"

#include <numeric>

#include "minimal2/error.hpp"

namespace minimal2 {

bool GenusData::integral() const {
    return 12 * (genus - 1) + 3 * static_cast<std::int64_t>(nu2) +
               4 * static_cast<std::int64_t>(nu3) + 6 * static_cast<std::int64_t>(cusps) ==
           static_cast<std::int64_t>(psl_index);
}

std::string Label::to_string() const {
    return std::to_string(level) + "." + std::to_string(index) + "." + std::to_string(genus);
}

std::int64_t standard_genus_formula(std::uint64_t m, std::uint64_t nu2, std::uint64_t nu3,
                                    std::uint64_t c) {
    return 12 + static_cast<std::int64_t>(m) - 3 * static_cast<std::int64_t>(nu2) -
           4 * static_cast<std::int64_t>(nu3) - 6 * static_cast<std::int64_t>(c);
}

bool contains_minus_I(const OpenSubgroup& g) {
    return g.contains(g.ring().negate(g.ring().identity()));
}

OpenSubgroup adjoin_minus_I(const OpenSubgroup& g, const Budget& budget) {
    if (contains_minus_I(g)) return g;
    std::vector<ResidueMatrix> gens = g.generators();
    gens.emplace_back(g.modulus(), -1, 0, 0, -1);
    return closure(gens, g.modulus(), budget);
}

GenusData genus(const OpenSubgroup& g0, const GenusFormula& formula) {
    const auto dets = det_image(g0, g0.modulus());
    std::uint64_t units = 0;
    for (std::uint32_t r = 0; r < g0.modulus(); ++r) units += is_unit(r, g0.modulus());
    if (dets.size() != units) throw Error("genus: determinant is not surjective");

    const OpenSubgroup g = reduce_to(g0, level(g0));
    const ModRing ring = g.ring();
    // Membership in <G, -I> ∩ SL_2.
    auto in_h = [&](Packed z) {
        return ring.det(z) == 1 % ring.modulus() && (g.contains(z) || g.contains(ring.negate(z)));
    };

    const Packed s = ResidueMatrix(g.modulus(), 0, -1, 1, 0).pack();
    const Packed t = ResidueMatrix(g.modulus(), 1, 1, 0, 1).pack();
    const Packed u = ResidueMatrix(g.modulus(), 0, -1, 1, -1).pack();

    // Right cosets H x, with H x = H y iff x y^-1 in H.
    std::vector<Packed> reps{ring.identity()};
    std::vector<Packed> inv_reps{ring.identity()};
    auto find = [&](Packed x) -> std::size_t {
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (in_h(ring.mul(x, inv_reps[i]))) return i;
        return reps.size();
    };
    std::vector<std::size_t> t_perm;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (Packed gen : {s, t}) {
            const Packed y = ring.mul(reps[i], gen);
            const std::size_t j = find(y);
            if (j == reps.size()) {
                reps.push_back(y);
                inv_reps.push_back(ring.inverse(y));
            }
            if (gen == t) t_perm.push_back(j);
        }
    }

    GenusData out;
    out.psl_index = reps.size();
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (in_h(ring.conjugate(reps[i], s, inv_reps[i]))) ++out.nu2;
        if (in_h(ring.conjugate(reps[i], u, inv_reps[i]))) ++out.nu3;
    }
    std::vector<bool> seen(reps.size(), false);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (seen[i]) continue;
        ++out.cusps;
        for (std::size_t j = i; !seen[j]; j = t_perm[j]) seen[j] = true;
    }
    const std::int64_t twelve_g = formula(out.psl_index, out.nu2, out.nu3, out.cusps);
    if (twelve_g % 12 != 0)
        throw VerificationFailure("genus: 12g = " + std::to_string(twelve_g) +
                                  " is not divisible by 12");
    out.genus = twelve_g / 12;
    if (out.genus < 0 || !out.integral())
        throw VerificationFailure("genus: integrality identity fails for m = " +
                                  std::to_string(out.psl_index));
    return out;
}

Label label(const OpenSubgroup& g) {
    const std::uint32_t lvl = level(g);
    return {lvl, g.index(), genus(g).genus};
}

nlohmann::json to_json(const GenusData& d) {
    return {{"psl_index", d.psl_index}, {"nu2", d.nu2},     {"nu3", d.nu3},
            {"cusps", d.cusps},         {"genus", d.genus}, {"integral", d.integral()}};
}

}  // namespace minimal2
