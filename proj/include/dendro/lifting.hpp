#ifndef DENDRO_LIFTING_HPP
#define DENDRO_LIFTING_HPP

#include <optional>

#include "dendro/presheaf.hpp"

namespace dendro {

// A commutative square: left map i: A -> B, right map p: X -> Y, top A -> X,
// bottom B -> Y. A solution is h: B -> X with h i = top and p h = bottom.
struct LiftingProblem {
    PresheafMap left;    // i
    PresheafMap right;   // p
    PresheafMap top;     // A -> X
    PresheafMap bottom;  // B -> Y

    LiftingProblem(PresheafMap i, PresheafMap p, PresheafMap t, PresheafMap b);
};

// First lift in deterministic order, or nullopt. Complete within the stored
// truncation: the search is exhaustive over natural maps B -> X.
std::optional<PresheafMap> solve_lift(const LiftingProblem& problem);

// Quantifies solve_lift over all commutative squares formed from i against p
// (tops and bottoms enumerated via hom_maps).
bool has_rlp(const PresheafMap& i, const PresheafMap& p);
bool has_rlp_family(const PresheafMap& p, const std::vector<PresheafMap>& family);
bool has_llp_family(const PresheafMap& i, const std::vector<PresheafMap>& family);

// Generator families over all trees of size <= max_size of the site flavor.
// In the closed flavor, horn generators use only very inner edges.
std::vector<PresheafMap> boundary_inclusions(const Site& site, int max_size);
std::vector<PresheafMap> horn_inclusions(const Site& site, int max_size);

// RLP against boundary inclusions resp. (very) inner horn inclusions of size
// <= max_size.
bool is_trivial_fib_upto(const PresheafMap& p, int max_size);
bool is_inner_fib_upto(const PresheafMap& p, int max_size);
// x is an infinity-operad up to the bound when x -> * has the RLP against
// inner horns of size <= max_size.
bool is_operad_upto(PresheafPtr x, int max_size);

// The corner map sk_n(A) u_{sk_{n-1}(A)} sk_{n-1}(B) -> sk_n(B) of a map
// i: A -> B. Lifting an n-coskeletal object (over an (n-1)-coskeletal base)
// against i is equivalent to lifting against this map.
PresheafMap coskeletal_reduction(const PresheafMap& i, int n);

}  // namespace dendro

#endif
