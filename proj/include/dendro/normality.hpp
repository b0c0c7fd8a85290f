#ifndef DENDRO_NORMALITY_HPP
#define DENDRO_NORMALITY_HPP

#include <optional>

#include "dendro/gset.hpp"
#include "dendro/lean.hpp"
#include "dendro/lifting.hpp"

namespace dendro {

// The automorphism group of a tree as a FiniteGroup, together with the list
// of automorphisms indexing its elements (identity first).
struct TreeAutGroup {
    FiniteGroup group;
    std::vector<TreeMorphism> elements;
};
TreeAutGroup tree_aut_group(const Tree& t);

// Freeness of the automorphism actions on the levels of a presheaf, for
// trees of size <= max_size of its site.
bool is_normal_upto(const Presheaf& x, int max_size);
bool is_normal_mono_upto(const PresheafMap& f, int max_size);
// The same condition restricted to size <= n (partial normality).
inline bool is_n_partially_normal(const PresheafMap& f, int n) {
    return is_normal_mono_upto(f, n);
}

// Lean variants, evaluated at every tree of the flavor with size <= max_size
// (also above the stored coskeletal degree).
bool is_normal_upto(const LeanObject& x, int max_size);
bool is_normal_mono_upto(const LeanObject& x, const LeanObject& y, const PresheafMap& f_data,
                         int max_size);

// The map from eval(x, t) to eval(y, t) induced by f_data: x.data -> y.data.
std::vector<int> lean_eval_map(const LeanObject& x, const LeanObject& y,
                               const PresheafMap& f_data, const Tree& t);

// The generator map detecting normality at a tree t: the right Kan extension
// along Aut(t)^op of (2^G u G -> * u *), truncated to the site. Elements at S
// are the Aut(t)-equivariant functions hom(t, S) -> Z.
PresheafMap psi_map(const Tree& t, const Site& site);

// f has the left lifting property against psi_map(t) for every t of size <=
// max_size.
bool llp_normality_check(const PresheafMap& f, int max_size);

// Rigidity witness for a non-surjective mono between lean objects in the
// General or Open flavor: a grafted corolla tree, an element of the target
// evaluation outside the image, and a nontrivial automorphism fixing it.
struct RigidityWitness {
    Tree tree;                        // the grafted tree
    int element;                      // index into evaluate(target, tree)
    std::vector<EdgeId> stabilizer;   // edge map of a nontrivial fixing automorphism
    Tree witness_tree;                // tree where surjectivity fails
    int arity;                        // the n used for the graft
    long long eval_card;              // |Y at grafted tree|
    long long colour_card;            // |Y at eta|
    long long witness_card;           // |Y at witness tree|
};
std::optional<RigidityWitness> fixed_complement_element(const LeanObject& x, const LeanObject& y,
                                                        const PresheafMap& f_data);

// A finite descending chain of lean objects sharing one coskeletal degree,
// with bonding maps of their stored data; level i+1 refines level i.
struct DSetTower {
    int degree = 0;
    std::vector<PresheafPtr> levels;
    std::vector<PresheafMap> bonds;  // bonds[i]: levels[i+1] -> levels[i]

    int length() const { return static_cast<int>(levels.size()); }
    void validate() const;
};

struct DSetTowerMap {
    DSetTower source, target;
    std::vector<PresheafMap> levels;

    void validate() const;
};

// Levelwise image replacement: each source level becomes the image of the
// level map, making the map levelwise injective.
DSetTowerMap tower_image_replacement(const DSetTowerMap& f);

struct IncreasinglyNormalResult {
    DSetTowerMap map;
    std::vector<int> theta;          // witness level used per level
    std::vector<int> normal_degree;  // verified partial-normality degree per level
};

// Chain analogue of the increasingly normal reindexing: level i of the output
// is i-partially normal, built as a pullback along the theta(i) witness level.
// Nullopt when some level has no witness inside the prefix.
std::optional<IncreasinglyNormalResult> increasingly_normal_reindex(const DSetTowerMap& f);

}  // namespace dendro

#endif
