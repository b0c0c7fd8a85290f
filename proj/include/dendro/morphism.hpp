#ifndef DENDRO_MORPHISM_HPP
#define DENDRO_MORPHISM_HPP

#include <memory>
#include <string>
#include <vector>

#include "dendro/tree.hpp"

namespace dendro {

// A morphism in the tree category: a total map on edges such that each
// source vertex is sent to a valid operation of the free operad on the
// target tree. Trees are free on their vertices, so the edge map together
// with existence of the per-vertex operations determines the morphism.
class TreeMorphism {
public:
    TreeMorphism(Tree src, Tree dst, std::vector<EdgeId> edge_map);
    TreeMorphism(std::shared_ptr<const Tree> src, std::shared_ptr<const Tree> dst,
                 std::vector<EdgeId> edge_map, bool validate = true);

    const Tree& source() const { return *src_; }
    const Tree& target() const { return *dst_; }
    std::shared_ptr<const Tree> source_ptr() const { return src_; }
    std::shared_ptr<const Tree> target_ptr() const { return dst_; }
    const std::vector<EdgeId>& edge_map() const { return map_; }
    EdgeId operator()(EdgeId e) const { return map_[static_cast<std::size_t>(e)]; }

    bool is_identity() const;
    bool is_bijective() const;

    bool operator==(const TreeMorphism& o) const;
    bool operator<(const TreeMorphism& o) const;  // (src key, dst key, edge map) order

    std::string describe() const;

private:
    std::shared_ptr<const Tree> src_;
    std::shared_ptr<const Tree> dst_;
    std::vector<EdgeId> map_;
};

// Validity of a single operation signature (inputs; output) in the free
// operad on `t`: inputs pairwise distinct and incomparable, each below the
// output, every leaf strictly below the output lies below some input, and a
// nullary operation additionally requires a vertex at the top of the output
// edge. The unit case (one input equal to the output) is the identity
// operation.
bool operation_exists(const Tree& t, const EdgePoset& poset, const std::vector<EdgeId>& inputs,
                      EdgeId output);

// Checks every vertex of src against operation_exists in dst.
bool valid_edge_map(const Tree& src, const Tree& dst, const std::vector<EdgeId>& edge_map);

// All morphisms src -> dst, in lexicographic edge-map order. Requires equal flavor.
std::vector<TreeMorphism> hom_set(const Tree& src, const Tree& dst);

// All invertible morphisms t -> t. Forms a group under compose.
std::vector<TreeMorphism> automorphisms(const Tree& t);

TreeMorphism identity_morphism(const Tree& t);

// g after f; requires target(f) == source(g).
TreeMorphism compose(const TreeMorphism& g, const TreeMorphism& f);

enum class ElementaryKind { InnerFace, TopFace, RootFace, Degeneracy };

const char* elementary_kind_name(ElementaryKind k);

struct ElementaryMap {
    ElementaryKind kind;
    // Faces point into t (source is the face tree); degeneracies point out of t.
    TreeMorphism map;
};

// All elementary faces S >-> t (inner edge contractions, top-vertex removals,
// root-vertex removals where applicable) and elementary degeneracies t ->> S
// (unary-vertex collapses). Sources of faces keep the flavor of t; faces
// whose source violates the flavor constraint are omitted (e.g. top faces of
// closed trees). Deterministic order.
std::vector<ElementaryMap> elementary_maps(const Tree& t);

// Morphisms t ->> s expressible as composites of elementary degeneracies and
// isomorphisms. Computed by saturation.
std::vector<TreeMorphism> degeneracy_set(const Tree& t, const Tree& s);

// Canonical closure together with the edge correspondence: second[e] is the
// edge of the closure corresponding to edge e of t (closure adds no edges).
std::pair<Tree, std::vector<EdgeId>> closure_with_edge_map(const Tree& t);

}  // namespace dendro

#endif
