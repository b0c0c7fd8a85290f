#ifndef DENDRO_FLAVORS_HPP
#define DENDRO_FLAVORS_HPP

#include "dendro/presheaf.hpp"
#include "dendro/simplicial.hpp"

namespace dendro {

// Extension by the empty set from open trees to all trees.
Presheaf open_extend(const Presheaf& x_open, const Site& general_site);
// Restriction of a general presheaf to the open trees.
Presheaf open_restrict(const Presheaf& x_general, const Site& open_site);

// Extension of a closed presheaf to all trees by evaluating at closures:
// value at T is the value at the closure of T. The closed site must contain
// every closure of a tree of the general site (max_size >= 2N-1 suffices).
Presheaf closed_extend(const Presheaf& x_closed, const Site& general_site);

// Embedding of a truncated simplicial set as a presheaf supported on the
// linear trees (site flavor General or Open).
Presheaf simplicial_extend(const SimplicialSet& z, const Site& site);
// Restriction to linear trees: the underlying simplicial set, truncated at
// dim_bound (requires 2*dim_bound <= site.max_size()).
SimplicialSet simplicial_restrict(const Presheaf& x, int dim_bound);

// The monotone map corresponding to a morphism between linear trees, and back.
Monotone linear_morphism_to_monotone(const TreeMorphism& f);
TreeMorphism monotone_to_linear_morphism(const Monotone& a, Flavor flavor);

}  // namespace dendro

#endif
