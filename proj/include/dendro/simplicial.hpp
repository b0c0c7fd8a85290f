#ifndef DENDRO_SIMPLICIAL_HPP
#define DENDRO_SIMPLICIAL_HPP

#include <vector>

#include "dendro/tree.hpp"

namespace dendro {

// A monotone map [src_dim] -> [dst_dim].
struct Monotone {
    int src_dim = 0;
    int dst_dim = 0;
    std::vector<int> values;

    bool is_surjective() const;
    bool operator==(const Monotone& o) const {
        return src_dim == o.src_dim && dst_dim == o.dst_dim && values == o.values;
    }
};

// All monotone maps [m] -> [k] in lexicographic order.
std::vector<Monotone> monotone_maps(int m, int k);
Monotone compose(const Monotone& g, const Monotone& f);  // g after f
Monotone monotone_identity(int n);
// Elementary face [m-1] -> [m] skipping i, elementary degeneracy [m] -> [m-1]
// repeating i.
Monotone coface(int m, int i);
Monotone codegeneracy(int m, int i);

// A finite simplicial set truncated at dimension bound K: per-dimension
// finite sets and the full contravariant action of monotone maps.
class SimplicialSet {
public:
    SimplicialSet(int dim_bound, std::vector<int> cards,
                  std::vector<std::vector<std::vector<int>>> actions, bool validate = true);

    int dim_bound() const { return K_; }
    int card(int m) const { return card_[static_cast<std::size_t>(m)]; }

    // Contravariant action: for f: [m] -> [k], maps X_k -> X_m.
    int act(const Monotone& f, int x) const;
    const std::vector<int>& action(int m, int k, int monotone_index) const {
        return act_[static_cast<std::size_t>(m * (K_ + 1) + k)][static_cast<std::size_t>(monotone_index)];
    }

    bool is_degenerate(int m, int x) const;
    // Unique presentation x = X(s)(y) with y nondegenerate: returns (dim, y, s).
    struct NormalForm {
        int dim;
        int element;
        Monotone surjection;  // [m] ->> [dim]
    };
    NormalForm normal_form(int m, int x) const;

    bool check_identities() const;

    bool operator==(const SimplicialSet& o) const {
        return K_ == o.K_ && card_ == o.card_ && act_ == o.act_;
    }

private:
    int K_;
    std::vector<int> card_;
    std::vector<std::vector<std::vector<int>>> act_;  // (m,k) -> per monotone -> array
};

// Standard simplex Delta[n] truncated at K: elements in dimension m are the
// monotone maps [m] -> [n], in enumeration order.
SimplicialSet standard_simplex(int n, int K);
// Boundary of Delta[n]: the non-surjective maps.
SimplicialSet simplex_boundary(int n, int K);
// Horn of Delta[n] at vertex i: the union of the faces containing vertex i,
// i.e. the maps whose image misses some vertex other than i.
SimplicialSet simplex_horn(int n, int i, int K);
// j-skeleton of a simplicial set (elements with nondegenerate dimension <= j).
SimplicialSet sset_skeleton(const SimplicialSet& x, int j);
// Index of a monotone map within monotone_maps(m, k), or -1.
int monotone_index(const Monotone& f);

}  // namespace dendro

#endif
