#include "minimal2/minimality.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>

#include "minimal2/error.hpp"
#include "det_classes.hpp"

namespace minimal2 {

namespace {

using detail::det_class;
using detail::kernel_det_span;

std::uint32_t max_modulus(std::uint32_t lvl) { return std::max<std::uint32_t>(8, 2 * lvl); }

OpenSubgroup at_modulus(const OpenSubgroup& h, std::uint32_t m, const Budget& budget) {
    if (h.modulus() == m) return h;
    if (h.modulus() > m) return reduce_to(h, m);
    return full_preimage(h, m, budget);
}

std::vector<std::uint32_t> basis_det_classes(const FrattiniQuotient& fq) {
    std::vector<std::uint32_t> out;
    for (const auto& b : fq.basis) out.push_back(det_class(mat_det(b) % 8));
    return out;
}

MinimalityReport evaluate(const OpenSubgroup& h, const Budget& budget) {
    MinimalityReport r;
    r.certifying_modulus = h.modulus();
    r.is_two_group = h.is_p_group();
    r.det_surjective = det_surjective_2adic(h);
    if (!r.det_surjective) {
        r.witness_kind = "det-not-surjective";
        return r;
    }
    if (!r.is_two_group) {
        // H mod 2 has order 3 or 6; the preimage of a Sylow 2-subgroup of it
        // has index 3 and still contains a Sylow 2-subgroup of H, which maps
        // onto the 2-group det(H) mod 8.
        const ModRing r2(2);
        Packed t = r2.identity();
        for (Packed x : h.elements()) {
            const Packed xb = pack_entries(entry_a(x) & 1u, entry_b(x) & 1u, entry_c(x) & 1u,
                                           entry_d(x) & 1u);
            if (xb != t && r2.mul(xb, xb) == r2.identity()) {
                t = xb;
                break;
            }
        }
        std::vector<Packed> sylow;
        for (Packed x : h.elements()) {
            const Packed xb = pack_entries(entry_a(x) & 1u, entry_b(x) & 1u, entry_c(x) & 1u,
                                           entry_d(x) & 1u);
            if (xb == r2.identity() || xb == t) sylow.push_back(x);
        }
        const auto s = subgroup_from_elements(2, h.modulus(), std::move(sylow), budget);
        r.witness_kind = "index-3-sylow";
        r.witness_generators = s.generators();
        r.witness_index = h.size() / s.size();
        return r;
    }
    const auto fq = frattini_quotient(h, budget);
    r.frattini_rank = fq.rank;
    const auto classes = basis_det_classes(fq);
    if (fq.rank == 2) {
        r.verdict = true;
        for (std::uint32_t f = 1; f < 4; ++f)
            r.maximal_det_images.push_back(det_image(hyperplane_subgroup(h, fq, f), 8));
        return r;
    }
    for (std::uint32_t f = 1; f < (std::uint32_t{1} << fq.rank); ++f) {
        if (kernel_det_span(f, classes) != 0xfu) continue;
        const auto k = hyperplane_subgroup(h, fq, f);
        r.witness_kind = "index-2-det-surjective";
        r.witness_generators = k.generators();
        r.witness_index = 2;
        return r;
    }
    throw VerificationFailure("is_minimal: det-surjective 2-group of Frattini rank " +
                              std::to_string(fq.rank) + " without a surjective hyperplane");
}

}  // namespace

MinimalityReport is_minimal(const OpenSubgroup& h, const Budget& budget) {
    if (h.prime() != 2) throw Error("is_minimal: only p = 2 is supported");
    const std::uint32_t lvl = level(h);
    const std::uint32_t m = max_modulus(lvl);
    const OpenSubgroup lifted = at_modulus(reduce_to(h, std::min(h.modulus(), m)), m, budget);
    MinimalityReport r = evaluate(lifted, budget);
    r.level = lvl;
    if (lvl < 4) {
        const auto again = evaluate(full_preimage(lifted, 2 * m, budget), budget);
        r.double_check = again.verdict == r.verdict;
    }
    return r;
}

bool verify_witness(const OpenSubgroup& h, const MinimalityReport& r, const Budget& budget) {
    if (r.verdict) return false;
    const std::uint32_t m = r.certifying_modulus;
    const OpenSubgroup lifted =
        at_modulus(reduce_to(h, std::min(h.modulus(), m)), m, budget);
    if (r.witness_kind == "det-not-surjective") return !det_surjective_2adic(lifted);
    for (const auto& g : r.witness_generators)
        if (!lifted.contains(g)) return false;
    const auto k = closure(r.witness_generators, m, budget);
    return k.size() < lifted.size() && lifted.size() == k.size() * r.witness_index &&
           det_surjective_2adic(k);
}

// ---------------------------------------------------------------------------

TwoGeneratorResult random_two_generator(const OpenSubgroup& h, std::uint64_t seed,
                                        const Budget& budget) {
    if (h.prime() != 2 || h.modulus() < 8 || !det_surjective_2adic(h))
        throw Error("random_two_generator: needs a det-surjective subgroup at modulus >= 8");
    std::vector<Packed> threes, fives;
    const ModRing ring = h.ring();
    for (Packed x : h.elements()) {
        const std::uint32_t d = ring.det(x) % 8;
        if (d == 3) threes.push_back(x);
        if (d == 5) fives.push_back(x);
    }
    if (threes.empty() || fives.empty())
        throw Error("random_two_generator: no elements with det 3 and 5 mod 8");
    std::mt19937_64 rng(seed);
    const Packed a = threes[std::uniform_int_distribution<std::size_t>(0, threes.size() - 1)(rng)];
    const Packed b = fives[std::uniform_int_distribution<std::size_t>(0, fives.size() - 1)(rng)];
    const auto am = ResidueMatrix::unpack(a, h.modulus());
    const auto bm = ResidueMatrix::unpack(b, h.modulus());
    const std::vector<ResidueMatrix> gens{am, bm};
    auto group = closure(gens, h.modulus(), budget);
    // <A, B> is only known through its image mod h.modulus().
    auto report = is_minimal(group, budget);
    return {am, bm, std::move(group), std::move(report), h.modulus()};
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const MinimalityReport& r) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : r.witness_generators) gens.push_back({g.a(), g.b(), g.c(), g.d()});
    nlohmann::json j = {{"verdict", r.verdict},
                        {"is_two_group", r.is_two_group},
                        {"det_surjective", r.det_surjective},
                        {"frattini_rank", r.frattini_rank},
                        {"level", r.level},
                        {"certifying_modulus", r.certifying_modulus},
                        {"maximal_det_images", r.maximal_det_images}};
    if (r.double_check) j["double_check_agrees"] = *r.double_check;
    if (!r.verdict)
        j["witness"] = {{"kind", r.witness_kind},
                        {"index", r.witness_index},
                        {"generators", gens}};
    return j;
}

nlohmann::json to_json(const CensusEntry& e) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : e.generators) gens.push_back({g.a(), g.b(), g.c(), g.d()});
    return {{"label", Label{e.level, e.index, e.genus.genus}.to_string()},
            {"level", e.level},
            {"index", e.index},
            {"genus", to_json(e.genus)},
            {"contains_minus_I", e.contains_minus_I},
            {"frattini_rank", e.frattini_rank},
            {"maximal_det_images", e.maximal_det_images},
            {"canonical_key", e.key.digest()},
            {"generators", gens},
            {"generator_modulus", e.key.level}};
}

}  // namespace minimal2
