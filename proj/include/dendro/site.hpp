#ifndef DENDRO_SITE_HPP
#define DENDRO_SITE_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dendro/morphism.hpp"
#include "dendro/tree.hpp"

namespace dendro {

// The full subcategory of trees of size <= max_size in one flavor, with all
// hom-sets precomputed. Presheaves are stored against a Site. Instances are
// memoized per (flavor, max_size); construction honours DENDRO_CACHE_DIR as
// an on-disk hom-set cache.
class Site {
public:
    Site(Flavor flavor, int max_size);

    static const Site& get(Flavor flavor, int max_size);

    Flavor flavor() const { return flavor_; }
    int max_size() const { return max_size_; }
    int n_trees() const { return static_cast<int>(trees_.size()); }
    const Tree& tree(int i) const { return *trees_[static_cast<std::size_t>(i)]; }
    std::shared_ptr<const Tree> tree_ptr(int i) const { return trees_[static_cast<std::size_t>(i)]; }

    // Index of a tree by canonical key, -1 when absent.
    int index_of(const std::string& key) const;
    int index_of(const Tree& t) const { return index_of(t.key()); }

    // Morphisms s -> t, lexicographically ordered by edge map.
    const std::vector<TreeMorphism>& hom(int s, int t) const {
        return hom_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
    }
    int n_hom(int s, int t) const { return static_cast<int>(hom(s, t).size()); }

    // Index of the morphism with the given edge map in hom(s,t), -1 if invalid.
    int find_morphism(int s, int t, const std::vector<EdgeId>& edge_map) const;

    int identity_index(int t) const { return id_index_[static_cast<std::size_t>(t)]; }

    // Index in hom(s,u) of hom(t,u)[g] composed with hom(s,t)[f].
    int compose_index(int s, int t, int u, int f, int g) const;

    struct SiteFace {
        ElementaryKind kind;
        int source;     // tree index of the face source
        int hom_index;  // index of the face morphism in hom(source, t)
    };
    struct SiteDegeneracy {
        int target;     // tree index of the degeneracy target
        int hom_index;  // index in hom(t, target)
    };

    const std::vector<SiteFace>& faces_of(int t) const {
        return faces_[static_cast<std::size_t>(t)];
    }
    const std::vector<SiteDegeneracy>& degeneracies_of(int t) const {
        return degen_[static_cast<std::size_t>(t)];
    }

    // Total number of (s,t,m) action slots; flat_index enumerates them.
    int n_action_slots() const { return n_slots_; }
    int flat_index(int s, int t, int m) const {
        return slot_base_[static_cast<std::size_t>(s * n_trees() + t)] + m;
    }

private:
    Flavor flavor_;
    int max_size_;
    std::vector<std::shared_ptr<const Tree>> trees_;
    std::map<std::string, int> index_;
    std::vector<std::vector<std::vector<TreeMorphism>>> hom_;
    std::vector<int> id_index_;
    std::vector<std::vector<SiteFace>> faces_;
    std::vector<std::vector<SiteDegeneracy>> degen_;
    std::vector<int> slot_base_;
    int n_slots_ = 0;

    bool load_cache(const std::string& path);
    void save_cache(const std::string& path) const;
};

}  // namespace dendro

#endif
