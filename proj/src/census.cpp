#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <random>

#include "minimal2/error.hpp"
#include "minimal2/minimality.hpp"
#include "det_classes.hpp"

namespace minimal2 {

namespace {

using detail::class_residues;
using detail::det_class;
using detail::kernel_det_span;

// Nodes are stored at modulus max(4, level).
std::uint32_t base_modulus(std::uint32_t lvl) { return std::max<std::uint32_t>(4, lvl); }

// Reduction mod m of an H containing the kernel mod m: the elements whose
// entries are all below m are exactly one lift of each residue class.
OpenSubgroup shrink(const OpenSubgroup& h, std::uint32_t m) {
    if (m == h.modulus()) return h;
    std::vector<Packed> elems;
    elems.reserve(h.size() >> (4 * std::countr_zero(h.modulus() / m)));
    for (Packed x : h.elements())
        if ((entry_a(x) | entry_b(x) | entry_c(x) | entry_d(x)) < m) elems.push_back(x);
    std::vector<ResidueMatrix> gens;
    for (const auto& g : h.generators()) gens.push_back(reduce(g, m));
    return {h.prime(), m, std::move(gens), std::move(elems)};
}

// Frattini quotient of the full preimage H in GL_2(Z/2B) of a 2-group
// Hbar in GL_2(Z/B), B >= 4, without listing H. H is an extension of Hbar
// by the abelian kernel V = {I + B Y} = M_2(F_2), so Phi(H) is known once we
// have Phi(Hbar), one lift in Phi(H) of each of its elements, and the
// subspace W = Phi(H) ∩ V. The lifts come from a breadth-first walk over
// Phi(Hbar); two lifts of the same element differ by an element of W, and
// those differences span W up to conjugation (Schreier).
//
// Coordinates of H / Phi(H): the first rank(Hbar) bits follow the basis of
// Hbar / Phi(Hbar), the remaining ones a complement of W in V.
class LiftedFrattini {
public:
    // fq is the Frattini quotient of hbar.
    LiftedFrattini(const OpenSubgroup& hbar, const FrattiniQuotient& fq)
        : b_(hbar.modulus()),
          m_(2 * hbar.modulus()),
          ring_(2 * hbar.modulus()),
          hbar_(hbar),
          fq_(fq) {
        if (b_ < 4) throw Error("LiftedFrattini: base modulus must be at least 4");
        phi_ = fq_.frattini->shared_elements();
        lifts_.assign(phi_->size(), 0);
        const std::size_t id = phi_index(ring_.identity());
        lifts_[id] = ring_.identity();
        order_.push_back(id);

        for (const auto& g : hbar.generators()) hgens_.push_back(g.pack());
        for (std::uint32_t y : {1u, 2u, 4u, 8u}) hgens_.push_back(vmat(y));
        for (Packed g : hgens_) hgens_inv_.push_back(ring_.inverse(g));

        for (std::size_t i = 0; i < hgens_.size(); ++i) {
            consider(ring_.mul(hgens_[i], hgens_[i]));
            for (std::size_t j = i + 1; j < hgens_.size(); ++j)
                consider(ring_.mul(ring_.mul(hgens_[i], hgens_[j]),
                                   ring_.mul(hgens_inv_[i], hgens_inv_[j])));
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t k = 0; k < s_.size(); ++k)
                for (std::size_t i = 0; i < hgens_.size(); ++i)
                    changed |= consider(ring_.conjugate(hgens_[i], s_[k], hgens_inv_[i]));
        }
        if (order_.size() != phi_->size())
            throw VerificationFailure("LiftedFrattini: lifts do not cover Phi(Hbar)");

        std::uint32_t span = w_;
        for (std::uint32_t y : {1u, 2u, 4u, 8u}) {
            if ((span >> y) & 1u) continue;
            complement_.push_back(y);
            span = extend_span(span, y);
        }
        for (std::uint32_t y = 0; y < 16; ++y)
            for (std::uint32_t c = 0; c < (1u << complement_.size()); ++c) {
                std::uint32_t v = 0;
                for (std::size_t k = 0; k < complement_.size(); ++k)
                    if ((c >> k) & 1u) v ^= complement_[k];
                if ((w_ >> (v ^ y)) & 1u) {
                    pi_[y] = c;
                    break;
                }
            }
        for (const auto& b : fq_.basis) {
            basis_.push_back(b.pack());
            classes_.push_back(det_class(ring_.det(b.pack()) % 8));
        }
        for (std::uint32_t y : complement_) {
            basis_.push_back(vmat(y));
            classes_.push_back(det_class(ring_.det(vmat(y)) % 8));
        }
    }

    unsigned rank() const { return static_cast<unsigned>(basis_.size()); }
    unsigned base_rank() const { return fq_.rank; }
    const std::vector<std::uint32_t>& det_classes() const { return classes_; }
    ResidueMatrix basis_element(unsigned i) const { return ResidueMatrix::unpack(basis_[i], m_); }

    // The kernel of f contains V: the subgroup is the preimage of a
    // hyperplane subgroup of Hbar.
    bool contains_kernel(std::uint32_t f) const { return (f >> fq_.rank) == 0; }
    OpenSubgroup child_below(std::uint32_t f) const { return hyperplane_subgroup(hbar_, fq_, f); }

    // ker f mod 2B, for f nonzero on V; its level is exactly 2B.
    OpenSubgroup child_above(std::uint32_t f) {
        if (hvals_.empty()) compute_hvals();
        const std::uint32_t low = f & ((1u << fq_.rank) - 1);
        const std::uint32_t high = f >> fq_.rank;
        std::vector<Packed> elems;
        elems.reserve(hbar_.size() * 8);
        const auto xs = hbar_.elements();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const unsigned parity =
                std::popcount(fq_.coordinates[i] & low) + std::popcount(hvals_[i] & high);
            for (std::uint32_t y = 0; y < 16; ++y)
                if (((parity + std::popcount(pi_[y] & high)) & 1u) == 0)
                    elems.push_back(ring_.mul(xs[i], vmat(y)));
        }
        std::sort(elems.begin(), elems.end());

        std::vector<ResidueMatrix> gens;
        for (Packed s : s_) gens.push_back(ResidueMatrix::unpack(s, m_));
        for (std::uint32_t y : {1u, 2u, 4u, 8u})
            if ((w_ >> y) & 1u) gens.push_back(ResidueMatrix::unpack(vmat(y), m_));
        const unsigned pivot = static_cast<unsigned>(std::countr_zero(f));
        for (unsigned i = 0; i < rank(); ++i) {
            if (i == pivot) continue;
            const Packed g = ((f >> i) & 1u) ? ring_.mul(basis_[pivot], basis_[i]) : basis_[i];
            gens.push_back(ResidueMatrix::unpack(g, m_));
        }
        return {2, m_, std::move(gens), std::move(elems)};
    }

private:
    Packed vmat(std::uint32_t y) const {
        return pack_entries(1 + b_ * (y & 1u), b_ * ((y >> 1) & 1u), b_ * ((y >> 2) & 1u),
                            1 + b_ * ((y >> 3) & 1u));
    }
    Packed reduce_base(Packed z) const {
        const std::uint32_t mask = b_ - 1;
        return pack_entries(entry_a(z) & mask, entry_b(z) & mask, entry_c(z) & mask,
                            entry_d(z) & mask);
    }
    // Y with z = base (I + B Y), for z and base with the same reduction.
    std::uint32_t ybits(Packed z, Packed base) const {
        const Packed u = ring_.mul(ring_.inverse(base), z);
        return (ring_.reduce(entry_a(u) + m_ - 1) / b_) | ((entry_b(u) / b_) << 1) |
               ((entry_c(u) / b_) << 2) | ((ring_.reduce(entry_d(u) + m_ - 1) / b_) << 3);
    }
    std::size_t phi_index(Packed z) const {
        const Packed zb = reduce_base(z);
        const auto it = std::lower_bound(phi_->begin(), phi_->end(), zb);
        if (it == phi_->end() || *it != zb)
            throw VerificationFailure("LiftedFrattini: element outside Phi(Hbar)");
        return static_cast<std::size_t>(it - phi_->begin());
    }
    static std::uint32_t extend_span(std::uint32_t span, std::uint32_t y) {
        std::uint32_t next = span;
        for (std::uint32_t x = 0; x < 16; ++x)
            if ((span >> x) & 1u) next |= 1u << (x ^ y);
        return next;
    }

    bool member(Packed z) const {
        const Packed zb = reduce_base(z);
        const auto it = std::lower_bound(phi_->begin(), phi_->end(), zb);
        if (it == phi_->end() || *it != zb) return false;
        const Packed t = lifts_[static_cast<std::size_t>(it - phi_->begin())];
        return t != 0 && ((w_ >> ybits(z, t)) & 1u);
    }

    // W grows to the H-invariant span of y and its current elements.
    void add_to_w(std::uint32_t y) {
        if ((w_ >> y) & 1u) return;
        w_ = extend_span(w_, y);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::uint32_t x = 1; x < 16; ++x) {
                if (!((w_ >> x) & 1u)) continue;
                for (std::size_t i = 0; i < hgens_.size(); ++i) {
                    const std::uint32_t c =
                        ybits(ring_.conjugate(hgens_[i], vmat(x), hgens_inv_[i]), ring_.identity());
                    if (!((w_ >> c) & 1u)) {
                        w_ = extend_span(w_, c);
                        changed = true;
                    }
                }
            }
        }
    }

    void visit(std::size_t j, Packed s) {
        const Packed y = ring_.mul(lifts_[j], s);
        const std::size_t k = phi_index(y);
        if (lifts_[k] == 0) {
            lifts_[k] = y;
            order_.push_back(k);
        } else {
            add_to_w(ybits(y, lifts_[k]));
        }
    }

    // Adds s to the generators of Phi(H) unless it is already there.
    bool consider(Packed s) {
        if (member(s)) return false;
        s_.push_back(s);
        const std::size_t old = order_.size();
        for (std::size_t i = 0; i < old; ++i) visit(order_[i], s);
        for (std::size_t i = old; i < order_.size(); ++i)
            for (std::size_t k = 0; k < s_.size(); ++k) visit(order_[i], s_[k]);
        return true;
    }

    // V-coordinates of the chosen lift of each element of Hbar.
    void compute_hvals() {
        const unsigned r = fq_.rank;
        if (r > 20) throw BudgetExceeded("LiftedFrattini: Frattini rank above 20");
        std::vector<Packed> beta_inv(std::size_t{1} << r);
        beta_inv[0] = ring_.identity();
        for (std::uint32_t c = 1; c < (1u << r); ++c) {
            const unsigned k = static_cast<unsigned>(std::countr_zero(c));
            // beta_c = beta_{c - e_k} * beta_k, so beta_c^-1 = beta_k^-1 beta_{c-e_k}^-1.
            beta_inv[c] = ring_.mul(ring_.inverse(basis_[k]), beta_inv[c & (c - 1)]);
        }
        const auto xs = hbar_.elements();
        hvals_.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const Packed w = ring_.mul(xs[i], beta_inv[fq_.coordinates[i]]);
            hvals_[i] = pi_[ybits(w, lifts_[phi_index(w)])];
        }
    }

    std::uint32_t b_, m_;
    ModRing ring_;
    OpenSubgroup hbar_;
    FrattiniQuotient fq_;
    std::shared_ptr<const std::vector<Packed>> phi_;
    std::vector<Packed> lifts_;  // 0 = not reached yet
    std::vector<std::size_t> order_;
    std::vector<Packed> hgens_, hgens_inv_;
    std::vector<Packed> s_;
    std::uint32_t w_ = 1;  // bit y set iff I + B Y is in Phi(H)
    std::vector<std::uint32_t> complement_;
    std::uint32_t pi_[16] = {};
    std::vector<Packed> basis_;
    std::vector<std::uint32_t> classes_;
    std::vector<std::uint32_t> hvals_;
};

struct Node {
    OpenSubgroup group;  // at base_modulus(level)
    std::uint32_t level;
    std::vector<ResidueMatrix> steps;  // coset representatives along the chain, mod 256
    std::shared_ptr<const FrattiniQuotient> fq;
    std::uint64_t fingerprint = 0;
};

std::uint64_t fnv(std::uint64_t h, std::uint64_t w) {
    for (int i = 0; i < 8; ++i) {
        h ^= (w >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Conjugation invariant of an element: trace, det, the largest 2^v with x
// scalar mod 2^v, and that scalar.
std::uint64_t element_class(const ModRing& ring, Packed x) {
    const std::uint32_t n = ring.modulus();
    const std::uint32_t g = entry_b(x) | entry_c(x) | ring.reduce(entry_a(x) + n - entry_d(x)) | n;
    const unsigned v = static_cast<unsigned>(std::countr_zero(g));
    const std::uint64_t scalar = entry_a(x) & ((1u << v) - 1);
    return (std::uint64_t{ring.trace(x)} << 32) | (ring.det(x) << 16) | (v << 8) | scalar;
}

std::uint64_t histogram_hash(std::vector<std::uint64_t>& keys) {
    std::sort(keys.begin(), keys.end());
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        hash = fnv(fnv(hash, keys[i]), j - i);
        i = j;
    }
    return hash;
}

// Orbit sizes of H on (Z/n)^2, acting on columns (transpose = false) or on
// rows. Conjugation by g moves orbits by g, so the multiset is invariant.
std::uint64_t orbit_hash(const OpenSubgroup& h, std::uint32_t n, bool transpose) {
    std::vector<std::uint32_t> label(std::size_t{n} * n, ~0u);
    std::vector<std::uint64_t> sizes;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t start = 0; start < n * n; ++start) {
        if (label[start] != ~0u) continue;
        label[start] = start;
        stack.assign(1, start);
        std::uint64_t size = 0;
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            ++size;
            const std::uint32_t x = v / n, y = v % n;
            for (const auto& g : h.generators()) {
                const std::uint32_t b = transpose ? g.c() : g.b();
                const std::uint32_t c = transpose ? g.b() : g.c();
                const std::uint32_t u = ((g.a() * x + b * y) % n) * n + (c * x + g.d() * y) % n;
                if (label[u] == ~0u) {
                    label[u] = start;
                    stack.push_back(u);
                }
            }
        }
        sizes.push_back(size);
    }
    return histogram_hash(sizes);
}

// A conjugation invariant of H: the multiset, over the cosets of the
// Frattini subgroup, of the histogram of element classes in the coset, and
// the orbit sizes on row and column vectors.
std::uint64_t fingerprint(const OpenSubgroup& h, const FrattiniQuotient& fq) {
    const ModRing ring = h.ring();
    const auto xs = h.elements();
    std::vector<std::vector<std::uint64_t>> cosets(std::size_t{1} << fq.rank);
    for (std::size_t i = 0; i < xs.size(); ++i)
        cosets[fq.coordinates[i]].push_back(element_class(ring, xs[i]));
    std::vector<std::uint64_t> coset_hashes;
    coset_hashes.reserve(cosets.size());
    for (auto& c : cosets) coset_hashes.push_back(histogram_hash(c));
    std::uint64_t hash = fnv(fnv(0xcbf29ce484222325ull, h.modulus()), fq.rank);
    hash = fnv(hash, orbit_hash(h, h.modulus(), false));
    hash = fnv(hash, orbit_hash(h, h.modulus(), true));
    return fnv(hash, histogram_hash(coset_hashes));
}

// Keeps one node per GL_2(Z_2)-conjugacy class. Nodes of equal level are
// compared at their common base modulus, which is at least the level.
class Deduper {
public:
    Deduper(const ResidueMatrix& omega, CensusStats& stats) : omega_(omega), stats_(stats) {}

    bool insert(Node& node, const Budget& budget) {
        node.fq = std::make_shared<const FrattiniQuotient>(frattini_quotient(node.group, budget));
        node.fingerprint = fingerprint(node.group, *node.fq);
        auto& bucket = buckets_[{node.level, node.fingerprint}];
        for (std::size_t i : bucket)
            if (conjugate(i, node)) return false;
        bucket.push_back(nodes_.size());
        nodes_.push_back(std::move(node));
        transversals_.emplace_back();
        return true;
    }
    std::vector<Node> take() {
        buckets_.clear();
        transversals_.clear();
        return std::move(nodes_);
    }

private:
    struct Transversal {
        std::vector<Packed> g, g_inv;
    };

    // Left coset representatives omega^a t_1^e_1 ... t_k^e_k of rep.
    Transversal transversal(const Node& rep) const {
        const std::uint32_t m = rep.group.modulus();
        const ModRing ring(m);
        const Packed w = reduce(omega_, m).pack();
        Transversal out;
        out.g = {ring.identity(), w, ring.mul(w, w)};
        for (const auto& t : rep.steps) {
            const Packed tp = reduce(t, m).pack();
            const std::size_t k = out.g.size();
            for (std::size_t i = 0; i < k; ++i) out.g.push_back(ring.mul(out.g[i], tp));
        }
        for (Packed x : out.g) out.g_inv.push_back(ring.inverse(x));
        return out;
    }

    // node = g rep g^-1 for some g in a left transversal of rep?
    bool conjugate(std::size_t rep_index, const Node& node) {
        const Node& rep = nodes_[rep_index];
        if (rep.group.size() != node.group.size() ||
            rep.group.modulus() != node.group.modulus())
            return false;
        ++stats_.conjugacy_tests;
        if (transversals_[rep_index].g.empty()) transversals_[rep_index] = transversal(rep);
        const auto& tr = transversals_[rep_index];
        const ModRing ring = rep.group.ring();
        for (std::size_t i = 0; i < tr.g.size(); ++i) {
            bool all = true;
            for (const auto& x : rep.group.generators())
                if (!node.group.contains(ring.conjugate(tr.g[i], x.pack(), tr.g_inv[i]))) {
                    all = false;
                    break;
                }
            if (all) return true;
        }
        return false;
    }

    ResidueMatrix omega_;
    CensusStats& stats_;
    std::map<std::pair<std::uint32_t, std::uint64_t>, std::vector<std::size_t>> buckets_;
    std::vector<Node> nodes_;
    std::vector<Transversal> transversals_;
};

CensusEntry make_entry(const Node& node, const LiftedFrattini& lf, const GenusData& g,
                       const Budget& budget) {
    CensusEntry e{.level = node.level,
                  .index = node.group.index(),
                  .genus = g,
                  .contains_minus_I = contains_minus_I(node.group),
                  .frattini_rank = lf.rank(),
                  .maximal_det_images = {},
                  .key = canonical_key(node.group, budget),
                  .generators = {},
                  .group = node.group};
    for (std::uint32_t f = 1; f < 4; ++f)
        e.maximal_det_images.push_back(class_residues(kernel_det_span(f, lf.det_classes())));
    e.generators = subgroup_from_elements(2, e.key.level, e.key.elements, budget).generators();
    return e;
}

}  // namespace

CensusResult census(const CensusConfig& cfg) {
    if (cfg.level_bound == 0 || cfg.level_bound > 128 || !std::has_single_bit(cfg.level_bound))
        throw Error("census: level bound must be a power of 2 at most 128");
    if (cfg.index_bound == 0) throw Error("census: index bound must be positive");
    auto say = [&](const std::string& s) {
        if (cfg.progress) cfg.progress(s);
    };

    CensusResult result;
    auto& stats = result.stats;
    std::mt19937_64 rng(cfg.seed);

    // Sylow pro-2 subgroup: the preimage of the upper triangular group mod 2.
    // It has index 3 and omega cycles its three cosets.
    ResidueMatrix conj = ResidueMatrix::identity(256);
    if (cfg.seed != 0) {
        std::uniform_int_distribution<std::uint32_t> dist(0, 255);
        do {
            conj = {256, dist(rng), dist(rng), dist(rng), dist(rng)};
        } while (mat_det(conj) % 2 == 0);
    }
    const ResidueMatrix conj_inv = mat_inverse(conj);
    auto moved = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        return mat_mul(mat_mul(conj, ResidueMatrix(256, a, b, c, d)), conj_inv);
    };
    const ResidueMatrix omega = moved(0, 1, 1, 1);
    const std::vector<ResidueMatrix> borel_gens{reduce(moved(1, 1, 0, 1), 2)};
    const OpenSubgroup sylow = full_preimage(closure(borel_gens, 2), 4, cfg.budget);

    std::vector<Node> nodes;
    if (cfg.level_bound >= 2 && cfg.index_bound >= 3) nodes.push_back({sylow, 2, {}, std::make_shared<const FrattiniQuotient>(frattini_quotient(sylow, cfg.budget)), 0});

    std::vector<CensusEntry> entries;
    for (unsigned depth = 0; !nodes.empty(); ++depth) {
        stats.classes_per_depth.push_back(nodes.size());
        say("depth " + std::to_string(depth) + ": " + std::to_string(nodes.size()) +
            " classes of index " + std::to_string(nodes.front().group.index()) + ", " +
            std::to_string(entries.size()) + " minimal so far");
        Deduper next(omega, stats);
        std::uint64_t produced = 0;
        for (auto& node : nodes) {
            LiftedFrattini lf(node.group, *node.fq);
            const auto& classes = lf.det_classes();
            if (lf.rank() == 2) {
                if (classes[0] == 0 || classes[1] == 0 || classes[0] == classes[1])
                    throw VerificationFailure("census: rank-2 node without surjective det");
                const GenusData g = genus(node.group, cfg.genus_formula);
                if (!cfg.genus_filter || g.genus == *cfg.genus_filter)
                    entries.push_back(make_entry(node, lf, g, cfg.budget));
                continue;
            }
            if (node.group.index() * 2 > cfg.index_bound) continue;

            std::vector<std::uint32_t> functionals;
            for (std::uint32_t f = 1; f < (std::uint32_t{1} << lf.rank()); ++f) {
                if (kernel_det_span(f, classes) == 0xfu)
                    functionals.push_back(f);
                else
                    ++stats.pruned_det;
            }
            if (cfg.seed != 0) std::shuffle(functionals.begin(), functionals.end(), rng);

            const std::uint32_t base = node.group.modulus();
            for (std::uint32_t f : functionals) {
                const bool below = lf.contains_kernel(f);
                std::optional<OpenSubgroup> child;
                std::uint32_t lvl = 2 * base;
                if (below) {
                    child = lf.child_below(f);
                    lvl = level(*child);
                }
                if (lvl > cfg.level_bound) {
                    ++stats.pruned_level;
                    continue;
                }
                child = below ? shrink(*child, base_modulus(lvl)) : lf.child_above(f);
                if (cfg.genus_filter && genus(*child, cfg.genus_formula).genus > *cfg.genus_filter) {
                    ++stats.pruned_genus;
                    continue;
                }
                Node c{std::move(*child), lvl, node.steps, nullptr, 0};
                c.steps.push_back(lift(lf.basis_element(static_cast<unsigned>(std::countr_zero(f))), 256));
                ++produced;
                next.insert(c, cfg.budget);
            }
        }
        stats.nodes_per_depth.push_back(produced);
        nodes = next.take();
    }

    std::sort(entries.begin(), entries.end(),
              [](const CensusEntry& x, const CensusEntry& y) { return x.key < y.key; });
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].key == entries[i - 1].key)
            throw VerificationFailure("census: two entries share a canonical key");
    result.entries = std::move(entries);
    return result;
}

}  // namespace minimal2
