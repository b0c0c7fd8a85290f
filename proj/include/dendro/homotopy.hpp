#ifndef DENDRO_HOMOTOPY_HPP
#define DENDRO_HOMOTOPY_HPP

#include "dendro/lean.hpp"
#include "dendro/presheaf.hpp"
#include "dendro/simplicial.hpp"

namespace dendro {

// The dendroidal set of monotone maps from edge posets into [n]: value at a
// tree T is the set of order-preserving maps from the edge poset of T to
// {0..n}. The same formula serves all three flavors (the open case is the
// restriction of the general one).
struct EdgePosetMaps {
    PresheafPtr presheaf;
    std::vector<std::vector<std::vector<int>>> elems;  // per tree, per element, edge values

    int find(int t, const std::vector<int>& vals) const;
};
EdgePosetMaps edge_poset_maps(int n, const Site& site);

// The subobject of non-surjective maps (the value of the functor on the
// simplex boundary).
Subobject edge_poset_maps_boundary(int n, const EdgePosetMaps& full);

// The tensor-defining functor from truncated simplicial sets to presheaves,
// computed on a general simplicial set by gluing its nondegenerate cells via
// pushouts along the boundary subobjects.
Presheaf tensor_kernel(const SimplicialSet& m, const Site& site);

// x tensor m, the product of x with the tensor kernel of m.
Presheaf tensor_simplicial(const Presheaf& x, const SimplicialSet& m);

// Level k of the simplicial hom from x to a lean object y: all natural maps
// (x tensor Delta[k]) -> y over the degree site of y.
std::vector<PresheafMap> shom_level(const Presheaf& x, const LeanObject& y, int k);

// Iterated gluing of boundary fillers: level n glues one representable cell
// per map from a size-n boundary into the previous level.
struct EConstructionState {
    const Site* site = nullptr;
    bool complete = false;
    int failed_level = -1;               // level at which the budget ran out
    std::vector<PresheafPtr> levels;     // levels[n] is the stage-n object
    std::vector<PresheafMap> steps;      // inclusion stage n -> stage n+1
    struct GlueRecord {
        int level;
        std::string tree_key;
        long long attachments;
    };
    std::vector<GlueRecord> glue;

    PresheafPtr top() const { return levels.back(); }
};

EConstructionState build_E(const Site& site, long long element_budget = 100000);

// Every boundary map into the top level of the state admits a filler.
bool has_boundary_fillers(const EConstructionState& state, int max_size);
// Stage stability: stage n -> stage n+1 is bijective at trees of size <= n.
bool has_stable_levels(const EConstructionState& state);

// The normalization projection x * E -> x.
PresheafMap normalize(PresheafPtr x, const EConstructionState& state);

}  // namespace dendro

#endif
