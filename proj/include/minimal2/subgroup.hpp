#pragma once

// Open subgroups of GL_2(Z_p) represented at a finite modulus p^k: the
// subgroup is the full preimage of a subgroup of GL_2(Z/p^k).

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "minimal2/modarith.hpp"

namespace minimal2 {

struct Budget {
    std::uint64_t max_elements = std::uint64_t{1} << 26;
    std::uint64_t max_orbit = 4096;
};

class OpenSubgroup {
public:
    // Trusted constructor: `elements` must be sorted, duplicate-free and
    // closed; `generators` must generate it.
    OpenSubgroup(std::uint32_t prime, std::uint32_t modulus, std::vector<ResidueMatrix> generators,
                 std::vector<Packed> elements);

    std::uint32_t prime() const { return prime_; }
    std::uint32_t modulus() const { return modulus_; }
    const std::vector<ResidueMatrix>& generators() const { return generators_; }
    std::span<const Packed> elements() const { return *elements_; }
    std::shared_ptr<const std::vector<Packed>> shared_elements() const { return elements_; }
    std::uint64_t size() const { return elements_->size(); }
    // [GL_2(Z/modulus) : H], which is also the index of the preimage in GL_2(Z_p).
    std::uint64_t index() const;
    bool contains(Packed x) const;
    bool contains(const ResidueMatrix& x) const;
    bool is_p_group() const;
    ModRing ring() const { return ModRing(modulus_); }

    friend bool operator==(const OpenSubgroup& x, const OpenSubgroup& y) {
        return x.modulus_ == y.modulus_ && *x.elements_ == *y.elements_;
    }

private:
    std::uint32_t prime_;
    std::uint32_t modulus_;
    std::vector<ResidueMatrix> generators_;
    std::shared_ptr<const std::vector<Packed>> elements_;
};

// Subgroup generated by `gens` at `modulus`. An empty list gives {I}.
OpenSubgroup closure(std::span<const ResidueMatrix> gens, std::uint32_t modulus,
                     const Budget& budget = {});
// Every element of GL_2(Z/modulus).
OpenSubgroup full_group(std::uint32_t modulus);
// The subgroup of `elements` (sorted, closed) with a greedily chosen
// generating set.
OpenSubgroup subgroup_from_elements(std::uint32_t prime, std::uint32_t modulus,
                                    std::vector<Packed> elements, const Budget& budget = {});

// Smallest p^j dividing the modulus with H equal to the preimage of its
// reduction mod p^j.
std::uint32_t level(const OpenSubgroup& h);
// Image of H mod m, for m dividing the modulus.
OpenSubgroup reduce_to(const OpenSubgroup& h, std::uint32_t m);
// Full preimage of H at a multiple `modulus` of its current modulus.
OpenSubgroup full_preimage(const OpenSubgroup& h, std::uint32_t modulus,
                           const Budget& budget = {});
// The subgroup ker(GL_2(Z/modulus) -> GL_2(Z/m)).
OpenSubgroup congruence_kernel(std::uint32_t m, std::uint32_t modulus);
OpenSubgroup conjugate(const OpenSubgroup& h, const ResidueMatrix& g);

// Sorted residues {det(h) mod m : h in H}.
std::vector<std::uint32_t> det_image(const OpenSubgroup& h, std::uint32_t m);
// det(H) mod 8 = (Z/8)^x, which certifies det(H) = Z_2^x.
bool det_surjective_2adic(const OpenSubgroup& h);

struct FrattiniQuotient {
    unsigned rank = 0;
    // Coset representatives forming an F_2-basis of H / Phi(H).
    std::vector<ResidueMatrix> basis;
    std::shared_ptr<const OpenSubgroup> frattini;
    // Bitmask coordinates aligned with the parent's sorted element list.
    std::shared_ptr<const std::vector<Packed>> parent_elements;
    std::vector<std::uint32_t> coordinates;

    std::uint32_t coordinates_of(Packed x) const;
    std::uint32_t coordinates_of(const ResidueMatrix& x) const { return coordinates_of(x.pack()); }
};

// Phi(H) = <squares, commutators> for a 2-group H, with the quotient map.
FrattiniQuotient frattini_quotient(const OpenSubgroup& h, const Budget& budget = {});
// One subgroup per hyperplane of H / Phi(H), 2^r - 1 of them, in order of the
// nonzero functional bitmask.
std::vector<OpenSubgroup> index2_subgroups(const OpenSubgroup& h, const Budget& budget = {});
std::vector<OpenSubgroup> index2_subgroups(const OpenSubgroup& h, const FrattiniQuotient& fq);
// Functional bitmask -> subgroup, for callers that need to know which is which.
OpenSubgroup hyperplane_subgroup(const OpenSubgroup& h, const FrattiniQuotient& fq,
                                 std::uint32_t functional);

// Normal closure in H of `seeds` (which must lie in H).
OpenSubgroup normal_closure(const OpenSubgroup& h, std::span<const Packed> seeds,
                            const Budget& budget = {});
// Lower central series reaches {I}.
bool is_nilpotent(const OpenSubgroup& h, const Budget& budget = {});
// Every Sylow subgroup is normal (counted through elements of prime-power order).
bool is_nilpotent_sylow(const OpenSubgroup& h);

struct CanonicalKey {
    std::uint32_t level = 1;
    std::vector<Packed> elements;  // lexicographically least conjugate, mod level

    std::string digest() const;
    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
    friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

// Least sorted element list over the GL_2(Z/level)-conjugacy orbit of H mod
// its level. Equal keys iff conjugate.
CanonicalKey canonical_key(const OpenSubgroup& h, const Budget& budget = {});
// Generators of GL_2(Z/modulus) used for orbit walks.
std::vector<ResidueMatrix> gl2_generators(std::uint32_t modulus);

nlohmann::json to_json(const OpenSubgroup& h);
OpenSubgroup subgroup_from_json(const nlohmann::json& j, const Budget& budget = {});

}  // namespace minimal2
