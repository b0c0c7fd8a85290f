#ifndef DENDRO_TREE_HPP
#define DENDRO_TREE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dendro {

// Flavor of a tree category: general trees, open trees (no stumps),
// closed trees (no leaves).
enum class Flavor { General, Open, Closed };

const char* flavor_name(Flavor f);
std::optional<Flavor> flavor_from_name(const std::string& name);

using EdgeId = int;

// Thrown by parse_term on malformed input; carries the byte offset.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Node form used to build trees. A node describes one edge together with
// what sits at its top end: a leaf terminus, or a vertex with the listed
// input edges. A vertex with no inputs is a stump.
struct TreeNode {
    bool leaf = true;
    std::vector<TreeNode> inputs;

    static TreeNode make_leaf() { return TreeNode{true, {}}; }
    static TreeNode make_vertex(std::vector<TreeNode> in) { return TreeNode{false, std::move(in)}; }
};

// A finite rooted tree: the objects of the tree category and its open and
// closed variants. Edges are numbered 0..n_edges()-1 in preorder over the
// canonical presentation (inputs sorted by canonical key), so isomorphic
// trees have identical edge numbering. Edge 0 is the root.
class Tree {
public:
    Tree(const TreeNode& root, Flavor flavor);

    Flavor flavor() const { return flavor_; }
    int n_edges() const { return static_cast<int>(parent_.size()); }
    EdgeId root() const { return 0; }

    // True when edge e ends in a leaf terminus (no vertex at its top).
    bool is_leaf(EdgeId e) const { return leaf_[static_cast<std::size_t>(e)] != 0; }
    bool has_vertex(EdgeId e) const { return !is_leaf(e); }
    // Input edges of the vertex at the top of e. Empty for a stump.
    const std::vector<EdgeId>& inputs(EdgeId e) const { return kids_[static_cast<std::size_t>(e)]; }
    bool is_stump(EdgeId e) const { return has_vertex(e) && inputs(e).empty(); }
    // Parent edge (the output edge of the vertex e feeds into), -1 for the root.
    EdgeId parent(EdgeId e) const { return parent_[static_cast<std::size_t>(e)]; }

    // Inner edge: carries a vertex and is not the root.
    bool is_inner(EdgeId e) const { return e != 0 && has_vertex(e); }

    int n_vertices() const { return n_vertices_; }
    // |T| = number of non-root edges plus number of vertices.
    int size() const { return n_edges() - 1 + n_vertices_; }

    // Edge ids carrying a vertex, in increasing order.
    std::vector<EdgeId> vertex_edges() const;
    std::vector<EdgeId> leaf_edges() const;
    std::vector<EdgeId> inner_edges() const;

    // Canonical form string; equal iff the trees are isomorphic (given equal flavor).
    const std::string& key() const { return key_; }

    TreeNode to_node() const;

    bool operator==(const Tree& o) const { return flavor_ == o.flavor_ && key_ == o.key_; }
    bool operator!=(const Tree& o) const { return !(*this == o); }

private:
    Flavor flavor_;
    std::vector<EdgeId> parent_;
    std::vector<std::vector<EdgeId>> kids_;
    std::vector<char> leaf_;
    int n_vertices_ = 0;
    std::string key_;

    friend Tree graft(const Tree&, EdgeId, const Tree&);
    TreeNode to_node_at(EdgeId e) const;
    void check_flavor() const;
};

// TreeKey: canonical-form string plus flavor tag. Equal keys iff isomorphic
// in the same tree category.
struct TreeKey {
    std::string form;
    Flavor flavor;

    bool operator==(const TreeKey& o) const { return flavor == o.flavor && form == o.form; }
    bool operator<(const TreeKey& o) const {
        if (flavor != o.flavor) return static_cast<int>(flavor) < static_cast<int>(o.flavor);
        return form < o.form;
    }
};

inline TreeKey canonical_key(const Tree& t) { return TreeKey{t.key(), t.flavor()}; }

// The tree with a single (root) edge and no vertices.
Tree eta(Flavor flavor = Flavor::General);
// One vertex with n leaf inputs; corolla(0) is the stump.
Tree corolla(int n, Flavor flavor = Flavor::General);
// The linear tree with n unary vertices (image of [n] under the simplex embedding).
Tree linear_tree(int n, Flavor flavor = Flavor::General);

int tree_size(const Tree& t);

// Term grammar: T ::= "*" | "[" T* "]". The root edge is implicit;
// "*" is a leaf terminus and "[...]" a vertex with the listed inputs.
Tree parse_term(const std::string& text, Flavor flavor = Flavor::General);
std::string print_term(const Tree& t);

// All isomorphism classes of trees with size <= max_size in the given flavor,
// sorted by (size, canonical key).
std::vector<Tree> enumerate_trees(int max_size, Flavor flavor);

// Caps each leaf of t by a stump; the result is closed. Idempotent on closed trees.
Tree closure(const Tree& t);

// Identifies the root of `top` with the leaf edge `leaf` of `base`.
Tree graft(const Tree& base, EdgeId leaf, const Tree& top);

// Edge poset of a tree: e <= f iff the path from e to the root passes through f.
// The root is the unique maximum.
class EdgePoset {
public:
    explicit EdgePoset(const Tree& t);
    int n() const { return n_; }
    bool leq(EdgeId e, EdgeId f) const { return leq_[static_cast<std::size_t>(e * n_ + f)] != 0; }
    bool lt(EdgeId e, EdgeId f) const { return e != f && leq(e, f); }
    bool comparable(EdgeId e, EdgeId f) const { return leq(e, f) || leq(f, e); }

private:
    int n_;
    std::vector<char> leq_;
};

inline EdgePoset edge_poset(const Tree& t) { return EdgePoset(t); }

// Brute-force structural isomorphism test over edge bijections. Independent
// of canonical keys; used as an oracle in tests.
bool isomorphic_brute_force(const Tree& a, const Tree& b);

// DOT export for visualization.
std::string to_dot(const Tree& t, const std::string& name = "tree");

}  // namespace dendro

#endif
