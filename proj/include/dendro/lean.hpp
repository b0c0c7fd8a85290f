#ifndef DENDRO_LEAN_HPP
#define DENDRO_LEAN_HPP

#include <map>
#include <memory>
#include <mutex>

#include "dendro/presheaf.hpp"

namespace dendro {

// Restriction of a presheaf to a smaller truncation of the same flavor.
Presheaf restrict_presheaf(const Presheaf& x, const Site& smaller);

// A lean object: a coskeletal degree n together with a presheaf on the
// trees of size <= n, evaluable at any tree of its flavor. Evaluation at a
// tree t lists the compatible families over all maps S -> t with |S| <= n,
// equivalently the natural maps from the restricted representable of t to
// the stored data. Results are cached by canonical tree key.
class LeanObject {
public:
    LeanObject(int degree, Presheaf data);

    int degree() const { return degree_; }
    const Presheaf& data() const { return *data_; }
    PresheafPtr data_ptr() const { return data_; }
    const Site& site() const { return data_->site(); }
    Flavor flavor() const { return site().flavor(); }

    struct Eval {
        Representable rep;                           // representable of t over the degree site
        std::vector<std::vector<std::vector<int>>> families;  // each a natural map rep -> data
        int size() const { return static_cast<int>(families.size()); }
        int find(const std::vector<std::vector<int>>& family) const;
    };

    const Eval& evaluate(const Tree& t) const;

    // Functorial action on evaluations: for f: s -> t, maps evaluate(t) ->
    // evaluate(s) by precomposition. Returns the index array.
    std::vector<int> eval_action(const TreeMorphism& f) const;

    // The canonical comparison X_t -> evaluate(t) for a presheaf x extending
    // the stored data on a larger site: unit of the coskeleton adjunction.
    std::vector<int> unit_component(const Presheaf& x, int tree_index_in_x_site,
                                    const Tree& t) const;

private:
    struct EvalCache {
        std::mutex mu;
        std::map<std::string, std::shared_ptr<Eval>> entries;
    };

    int degree_;
    PresheafPtr data_;
    std::shared_ptr<EvalCache> cache_;  // shared by copies; keyed by tree key
};

// cosk_n of a presheaf on a site with max_size >= n: restrict and wrap.
LeanObject coskeleton(const Presheaf& x, int n);

// Materializes a lean object as a presheaf on the given larger site
// (evaluating above the stored truncation).
Presheaf materialize(const LeanObject& lean, const Site& site);

// The canonical map x -> materialize(cosk_n x) over the site of x.
PresheafMap coskeleton_unit(PresheafPtr x, int n);

// Cartesian exponential of a lean object by a degreewise finite presheaf:
// value at T is the set of natural maps e x Omega[T] -> data, again a lean
// object of the same coskeletal degree.
LeanObject cartesian_exponential(const Presheaf& e, const LeanObject& x);

// Least m <= bound such that the unit x -> cosk_m(x) is bijective at every
// tree of the site of x; nullopt when none.
std::optional<int> coskeletal_degree_search(const Presheaf& x, int bound);

}  // namespace dendro

#endif
