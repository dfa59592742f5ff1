#pragma once

// Minimality of open subgroups of GL_2(Z_2), the census of minimal groups of
// bounded level and index, and the odd-prime falsifier.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "minimal2/modcurve.hpp"
#include "minimal2/subgroup.hpp"

namespace minimal2 {

struct MinimalityReport {
    bool verdict = false;
    bool is_two_group = false;
    bool det_surjective = false;
    unsigned frattini_rank = 0;
    std::uint32_t level = 1;
    std::uint32_t certifying_modulus = 8;
    // Set for level < 4: the verdict recomputed at twice the certifying modulus.
    std::optional<bool> double_check;
    // verdict = false: a proper subgroup of index 2 or 3 with surjective det,
    // or the failed precondition.
    std::string witness_kind;
    std::vector<ResidueMatrix> witness_generators;
    std::uint64_t witness_index = 0;
    // verdict = true: det images mod 8 of the three maximal subgroups.
    std::vector<std::vector<std::uint32_t>> maximal_det_images;
};

MinimalityReport is_minimal(const OpenSubgroup& h, const Budget& budget = {});

// Re-checks a negative verdict's witness from scratch. Returns false if the
// witness is malformed.
bool verify_witness(const OpenSubgroup& h, const MinimalityReport& r, const Budget& budget = {});

struct CensusConfig {
    std::uint32_t level_bound = 64;
    std::uint64_t index_bound = 96;
    std::optional<std::int64_t> genus_filter;
    // Non-zero: conjugate the starting Sylow subgroup by a random element and
    // shuffle the branch order. The output must not depend on it.
    std::uint64_t seed = 0;
    Budget budget;
    GenusFormula genus_formula = standard_genus_formula;
    std::function<void(const std::string&)> progress;
};

struct CensusEntry {
    std::uint32_t level = 1;
    std::uint64_t index = 1;
    GenusData genus;
    bool contains_minus_I = false;
    unsigned frattini_rank = 0;
    std::vector<std::vector<std::uint32_t>> maximal_det_images;
    CanonicalKey key;
    // Generators of the conjugate whose element list is the key, at the level.
    std::vector<ResidueMatrix> generators;
    // The group at modulus max(4, level).
    OpenSubgroup group;
};

struct CensusStats {
    std::vector<std::uint64_t> nodes_per_depth;
    std::vector<std::uint64_t> classes_per_depth;
    std::uint64_t pruned_det = 0;
    std::uint64_t pruned_level = 0;
    std::uint64_t pruned_genus = 0;
    std::uint64_t conjugacy_tests = 0;
};

struct CensusResult {
    std::vector<CensusEntry> entries;  // sorted by key
    CensusStats stats;
};

CensusResult census(const CensusConfig& config);

nlohmann::json to_json(const MinimalityReport& r);
nlohmann::json to_json(const CensusEntry& e);

// ---------------------------------------------------------------------------
// Odd primes.

struct OddPrimeWitness {
    std::vector<std::uint32_t> class_elements;  // the subgroup of GL_2(F_p), packed
    std::uint64_t class_size = 0;
    std::string strategy;
    std::vector<ResidueMatrix> witness_generators;  // mod p^2
    std::uint64_t witness_size = 0;
    std::uint64_t preimage_size = 0;
};

struct FalsifyReport {
    std::uint32_t prime = 0;
    std::uint64_t subgroups = 0;         // all subgroups of GL_2(F_p)
    std::uint64_t classes = 0;           // up to conjugacy
    std::uint64_t det_surjective_classes = 0;
    std::uint64_t minimal = 0;
    std::vector<OddPrimeWitness> witnesses;
};

// Throws VerificationFailure if some det-surjective class gets no witness.
FalsifyReport falsify_odd_prime(std::uint32_t p, std::uint64_t seed = 1);
nlohmann::json to_json(const FalsifyReport& r);

// <A, B> for random A, B in H with det A = 3 and det B = 5 mod 8.
struct TwoGeneratorResult {
    ResidueMatrix a, b;
    OpenSubgroup group;
    MinimalityReport report;
    std::uint32_t verified_up_to = 0;
};
TwoGeneratorResult random_two_generator(const OpenSubgroup& h, std::uint64_t seed,
                                        const Budget& budget = {});

// ---------------------------------------------------------------------------
// One-time lemma checks.

struct LemmaResult {
    bool pass = false;
    std::uint64_t cases = 0;
    std::string detail;
};

// Every subgroup of (Z/p^k)^x (k <= max_k) mapping onto (Z/q)^x, q = 8 for
// p = 2 and p^2 otherwise, is the whole group.
LemmaResult check_det_lemma(std::uint32_t p, unsigned max_k);
// Every det-surjective subgroup of GL_2(Z/8) that is not a 2-group has a
// proper subgroup with surjective det, and the Sylow witness is one.
LemmaResult check_non_two_group_lemma();
// Nilpotent subgroups of GL_2(Z/9) containing the mod-3 kernel have
// det = 1 mod 3; is_nilpotent agrees with the Sylow criterion on all of them.
LemmaResult check_nilpotent_det_lemma();

}  // namespace minimal2
