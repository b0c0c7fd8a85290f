#ifndef DENDRO_CLOSED_OPS_HPP
#define DENDRO_CLOSED_OPS_HPP

#include <optional>

#include "dendro/presheaf.hpp"

namespace dendro {

// A linear order on {0..n-1}, listed first-to-last.
using LinearOrder = std::vector<int>;

// All n! linear orders, in lexicographic enumeration order.
std::vector<LinearOrder> linear_orders(int n);

// A compatible family of linear orders on the proper subsets of {0..n-1},
// determined by its pairwise restrictions; stored as a tournament.
struct MatchingFamily {
    int arity;
    std::vector<char> before;  // flattened i*n+j, i < j comes first iff set

    bool beats(int i, int j) const { return before[static_cast<std::size_t>(i * arity + j)] != 0; }
    bool operator==(const MatchingFamily& o) const {
        return arity == o.arity && before == o.before;
    }
};

// All compatible families over the proper subsets of {0..n-1}: tournaments
// whose restriction to every proper subset is a linear order (acyclic).
std::vector<MatchingFamily> matching_object_ass(int n);
// The restriction of a full linear order to its family of pairwise orders.
MatchingFamily matching_map_ass(int n, const LinearOrder& order);

struct MatchingReport {
    int arity;
    long long operations;    // n!
    long long matching_card;  // |matching object|
    long long image_card;
    bool injective;
    bool bijective;
};
MatchingReport matching_report(int n);

// The closed nerve of the associative operad on the closed site: the value at
// a closed tree is the product over vertices of the linear orders on their
// inputs; morphisms act by composing the orders along the traversed region,
// deleting stump inputs.
Presheaf closed_nerve_ass(const Site& closed_site);

// Unique fillers for all very inner horns of size <= max_size.
bool nerve_has_unique_very_inner_fillers(const Presheaf& nerve, int max_size);

}  // namespace dendro

#endif
