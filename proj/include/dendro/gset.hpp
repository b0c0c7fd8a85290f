#ifndef DENDRO_GSET_HPP
#define DENDRO_GSET_HPP

#include <optional>
#include <string>
#include <vector>

namespace dendro {

// A finite group presented by its multiplication table. Element 0 is the unit.
class FiniteGroup {
public:
    explicit FiniteGroup(std::vector<std::vector<int>> table);

    static FiniteGroup cyclic(int k);
    static FiniteGroup symmetric(int k);
    static FiniteGroup trivial() { return cyclic(1); }

    int order() const { return static_cast<int>(table_.size()); }
    int mul(int a, int b) const { return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
    int inverse(int a) const;
    int unit() const { return 0; }

    bool operator==(const FiniteGroup& o) const { return table_ == o.table_; }

private:
    std::vector<std::vector<int>> table_;
};

// A finite right G-set: carrier {0..n-1} with action table x, g -> x.g.
// Value semantics throughout; the group is stored by value.
class FiniteGSet {
public:
    FiniteGSet(FiniteGroup group, std::vector<std::vector<int>> action);

    static FiniteGSet regular(const FiniteGroup& g);               // G acting on itself
    static FiniteGSet trivial_points(const FiniteGroup& g, int n);  // n fixed points
    static FiniteGSet empty(const FiniteGroup& g) { return trivial_points(g, 0); }
    // functions G -> {0,1} with (f.g)(h) = f(gh)
    static FiniteGSet two_power(const FiniteGroup& g);
    FiniteGSet disjoint_union(const FiniteGSet& other) const;

    const FiniteGroup& group() const { return group_; }
    int size() const { return static_cast<int>(action_.size()); }
    int act(int x, int g) const { return action_[static_cast<std::size_t>(x)][static_cast<std::size_t>(g)]; }

    bool operator==(const FiniteGSet& o) const {
        return group_ == o.group_ && action_ == o.action_;
    }

private:
    FiniteGroup group_;
    std::vector<std::vector<int>> action_;
};

// An equivariant map of finite right G-sets.
struct GMap {
    FiniteGSet source;
    FiniteGSet target;
    std::vector<int> values;

    GMap(FiniteGSet s, FiniteGSet t, std::vector<int> v);
    int operator()(int x) const { return values[static_cast<std::size_t>(x)]; }
    bool is_injective() const;
};

// All equivariant maps source -> target, lexicographic.
std::vector<GMap> equivariant_maps(const FiniteGSet& source, const FiniteGSet& target);

// True iff xg = x implies g = e.
bool is_free(const FiniteGSet& x);
// True iff every element outside the image of f has trivial stabilizer.
bool free_on_complement(const GMap& f);
// Brute-force lifting of f against 2^G u G -> * u *.
bool has_llp_generator(const GMap& f);

// All finite right G-sets with carrier size <= max_size, one per equivariant
// isomorphism class (multisets of orbit types).
std::vector<FiniteGSet> all_gsets_upto(const FiniteGroup& g, int max_size);

enum class Trilean { False, True, Inconclusive };
const char* trilean_name(Trilean t);

// A finite descending chain X_0 <- X_1 <- ... <- X_m of finite G-sets with
// equivariant bonding maps; level i+1 refines level i. Models the prefix of a
// tower representing a profinite G-set.
struct GSetTower {
    std::vector<FiniteGSet> levels;
    std::vector<GMap> bonds;  // bonds[i]: levels[i+1] -> levels[i]

    int length() const { return static_cast<int>(levels.size()); }
    // composite bonding map: element x of level j pushed down to level i <= j
    int bond_down(int j, int i, int x) const;
    void validate() const;
};

// A strict map of towers: levelwise equivariant maps commuting with bonds.
struct GSetTowerMap {
    GSetTower source, target;
    std::vector<GMap> levels;  // levels[i]: source.levels[i] -> target.levels[i]

    void validate() const;
};

// Stabilization-based monomorphism test on the prefix:
//   True  - every level i has a witness j >= i where merged pairs collapse;
//   False - the map on prefix threads is not injective;
//   Inconclusive - otherwise.
Trilean tower_is_mono(const GSetTowerMap& f);

// Replaces each level of the source by the image of f, giving a levelwise
// injective strict map whose composite with the level inclusions is f.
GSetTowerMap reindex_to_injective(const GSetTowerMap& f);

struct FreeComplementReindex {
    GSetTowerMap map;        // levelwise injective with levelwise free complement
    std::vector<int> theta;  // witness level used for each level
};

// Reindexing of a levelwise injective strict map so that every level has a
// free complement, via pullbacks along witness levels. Nullopt when some level
// has no witness inside the prefix (inconclusive).
std::optional<FreeComplementReindex> reindex_free_complement(const GSetTowerMap& f);

}  // namespace dendro

#endif
