#ifndef DENDRO_PRESHEAF_HPP
#define DENDRO_PRESHEAF_HPP

#include <memory>
#include <string>
#include <vector>

#include "dendro/site.hpp"

namespace dendro {

// A finite presheaf on a Site: per-tree finite element sets (indexed 0..card-1)
// and, for every morphism f: S -> T of the site, an index array X(f): X_T -> X_S.
// Functoriality is checked on construction.
class Presheaf {
public:
    Presheaf(const Site& site, std::vector<int> cards,
             std::vector<std::vector<int>> actions_by_slot, bool validate = true);

    static Presheaf empty(const Site& site);
    static Presheaf terminal(const Site& site);

    const Site& site() const { return *site_; }
    int n_trees() const { return site_->n_trees(); }
    int card(int t) const { return card_[static_cast<std::size_t>(t)]; }
    long long total_elements() const;

    // Action of hom(s,t)[m] on element x of X_t, landing in X_s.
    int act(int s, int t, int m, int x) const {
        return actions_[static_cast<std::size_t>(site_->flat_index(s, t, m))]
                       [static_cast<std::size_t>(x)];
    }
    const std::vector<int>& action(int s, int t, int m) const {
        return actions_[static_cast<std::size_t>(site_->flat_index(s, t, m))];
    }

    bool check_functorial(std::string* why = nullptr) const;

    bool operator==(const Presheaf& o) const {
        return card_ == o.card_ && actions_ == o.actions_;
    }

private:
    const Site* site_;
    std::vector<int> card_;
    std::vector<std::vector<int>> actions_;
};

using PresheafPtr = std::shared_ptr<const Presheaf>;

// A natural transformation between presheaves on the same site.
class PresheafMap {
public:
    PresheafMap() = default;  // empty placeholder, to be assigned
    PresheafMap(PresheafPtr src, PresheafPtr dst, std::vector<std::vector<int>> components,
                bool validate = true);

    const Presheaf& source() const { return *src_; }
    const Presheaf& target() const { return *dst_; }
    PresheafPtr source_ptr() const { return src_; }
    PresheafPtr target_ptr() const { return dst_; }

    int at(int t, int x) const { return comp_[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)]; }
    const std::vector<int>& component(int t) const { return comp_[static_cast<std::size_t>(t)]; }
    const std::vector<std::vector<int>>& components() const { return comp_; }

    bool is_injective() const;
    bool is_surjective() const;
    bool is_isomorphism() const { return is_injective() && is_surjective(); }

    bool operator==(const PresheafMap& o) const { return comp_ == o.comp_; }

private:
    PresheafPtr src_, dst_;
    std::vector<std::vector<int>> comp_;
};

PresheafMap compose(const PresheafMap& g, const PresheafMap& f);
PresheafMap identity_map(PresheafPtr x);

// A subpresheaf presented by a mask over an ambient presheaf, together with
// the induced object and its inclusion.
struct Subobject {
    PresheafPtr ambient;
    std::vector<std::vector<char>> mask;
    PresheafPtr object;
    std::vector<std::vector<int>> index_in_sub;  // ambient index -> sub index or -1
    // inclusion object -> ambient
    PresheafMap inclusion() const;

    bool contains(int t, int x) const { return mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)] != 0; }
};

// Checks that the mask is closed under all actions and builds the subpresheaf.
Subobject make_subobject(PresheafPtr ambient, std::vector<std::vector<char>> mask);
// Smallest subpresheaf containing the given elements.
Subobject generated_subobject(PresheafPtr ambient, const std::vector<std::pair<int, int>>& elements);

// The representable presheaf of a tree (the tree need not belong to the site,
// only to its flavor). Keeps the morphism lists that label the elements.
struct Representable {
    std::shared_ptr<const Tree> target;
    PresheafPtr presheaf;
    // elements[t] lists hom(site.tree(t), target) in the order used by presheaf.
    std::vector<std::vector<TreeMorphism>> elements;

    int element_index(int t, const std::vector<EdgeId>& edge_map) const;
};

Representable representable(const Site& site, const Tree& t);

// Boundary of a representable: the union of all proper faces.
Subobject boundary(const Representable& rep);
// Horn at an inner edge e: the union of the proper faces containing e.
// In the closed flavor, requires e to be very inner (not immediately below a
// stump) when `very_inner_only` is set.
Subobject horn(const Representable& rep, EdgeId e, bool very_inner_only = false);
// Spine: union of the one-vertex external faces (and the edges for eta).
Subobject spine(const Representable& rep);

// n-skeleton as a subobject: elements admitting a degeneracy to size <= n.
Subobject skeleton(PresheafPtr x, int n);
// The skeleton functor applied to a map (restriction of f to skeleta).
PresheafMap skeleton_map(const PresheafMap& f, int n);

// Finite (co)limits, computed degreewise with the induced actions.
struct ProductResult {
    PresheafPtr object;
    PresheafMap proj_left, proj_right;
    std::vector<std::vector<std::pair<int, int>>> pairs;  // element -> (left, right)
    int pair_index(int t, int left, int right) const;
};
ProductResult product(PresheafPtr a, PresheafPtr b);

struct CoproductResult {
    PresheafPtr object;
    PresheafMap inj_left, inj_right;
};
CoproductResult coproduct(PresheafPtr a, PresheafPtr b);

struct PullbackResult {
    PresheafPtr object;
    PresheafMap to_left, to_right;  // projections to the sources of f and g
};
// Pullback of f: A -> C <- B : g.
PullbackResult pullback(const PresheafMap& f, const PresheafMap& g);

// Equalizer of parallel maps f, g: A -> B, as a subobject of A.
Subobject equalizer(const PresheafMap& f, const PresheafMap& g);

struct PushoutResult {
    PresheafPtr object;
    PresheafMap from_left, from_right;  // B -> P and C -> P for B <- A -> C
};
// Pushout of f: A -> B and g: A -> C.
PushoutResult pushout(const PresheafMap& f, const PresheafMap& g);

struct ImageFactorization {
    PresheafMap epi;   // X ->> Im
    Subobject image;   // Im >-> Y
};
ImageFactorization image_factorization(const PresheafMap& f);

// Quotient by the congruence generated by the given element pairs.
struct QuotientResult {
    PresheafPtr object;
    PresheafMap projection;
};
QuotientResult quotient_by_pairs(PresheafPtr x,
                                 const std::vector<std::tuple<int, int, int>>& pairs);

// All natural transformations src -> dst, enumerated deterministically by
// backtracking over trees in increasing size with naturality propagation.
std::vector<PresheafMap> hom_maps(PresheafPtr src, PresheafPtr dst);
long long count_hom_maps(const Presheaf& src, const Presheaf& dst);

// Constrained search used by hom_maps and the lifting solver: finds natural
// maps src -> dst with per-element forced values (-1 = free) and an optional
// per-element list of allowed values (empty list = unrestricted).
struct NatSearchOptions {
    std::vector<std::vector<int>> forced;              // [-1 or value]
    std::vector<std::vector<std::vector<int>>> allowed;  // empty vector = all allowed
    bool first_only = false;
};
std::vector<std::vector<std::vector<int>>> natural_maps(const Presheaf& src, const Presheaf& dst,
                                                        const NatSearchOptions& opts);

// Yoneda: the natural map Omega[t] -> X determined by an element of X_t.
// `rep` must be a representable over a tree belonging to the site.
PresheafMap yoneda_map(const Representable& rep, PresheafPtr x, int element);

}  // namespace dendro

#endif
