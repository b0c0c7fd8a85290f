#include "dendro/tree.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dendro {

const char* flavor_name(Flavor f) {
    switch (f) {
        case Flavor::General: return "general";
        case Flavor::Open: return "open";
        case Flavor::Closed: return "closed";
    }
    return "?";
}

std::optional<Flavor> flavor_from_name(const std::string& name) {
    if (name == "general") return Flavor::General;
    if (name == "open") return Flavor::Open;
    if (name == "closed") return Flavor::Closed;
    return std::nullopt;
}

namespace {

// Canonical string of a node: "*" for a leaf, "[" + sorted input keys + "]"
// for a vertex. AHU canonicalization with distinct atoms for leaf termini
// and stumps ("[]").
std::string canon_string(const TreeNode& n) {
    if (n.leaf) return "*";
    std::vector<std::string> keys;
    keys.reserve(n.inputs.size());
    for (const auto& k : n.inputs) keys.push_back(canon_string(k));
    std::sort(keys.begin(), keys.end());
    std::string out = "[";
    for (const auto& k : keys) out += k;
    out += "]";
    return out;
}

TreeNode sort_node(const TreeNode& n) {
    if (n.leaf) return n;
    std::vector<std::pair<std::string, TreeNode>> kids;
    kids.reserve(n.inputs.size());
    for (const auto& k : n.inputs) {
        TreeNode s = sort_node(k);
        kids.emplace_back(canon_string(s), std::move(s));
    }
    std::stable_sort(kids.begin(), kids.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    TreeNode out;
    out.leaf = false;
    for (auto& [key, kid] : kids) out.inputs.push_back(std::move(kid));
    return out;
}

}  // namespace

Tree::Tree(const TreeNode& root, Flavor flavor) : flavor_(flavor) {
    TreeNode sorted = sort_node(root);
    key_ = canon_string(sorted);
    // Flatten in preorder.
    struct Frame {
        const TreeNode* node;
        EdgeId parent;
    };
    std::vector<Frame> stack{{&sorted, -1}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        EdgeId id = static_cast<EdgeId>(parent_.size());
        parent_.push_back(f.parent);
        leaf_.push_back(f.node->leaf ? 1 : 0);
        kids_.emplace_back();
        if (!f.node->leaf) ++n_vertices_;
        // Push children in reverse so preorder matches canonical input order.
        for (auto it = f.node->inputs.rbegin(); it != f.node->inputs.rend(); ++it)
            stack.push_back({&*it, id});
    }
    // Second pass: record input lists in preorder position order.
    // (The stack above only set parents; rebuild kid lists from parents,
    // preserving increasing id order, which matches canonical input order.)
    for (EdgeId e = 1; e < n_edges(); ++e) kids_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(e)])].push_back(e);
    check_flavor();
}

void Tree::check_flavor() const {
    if (flavor_ == Flavor::Open) {
        for (EdgeId e = 0; e < n_edges(); ++e)
            if (is_stump(e)) throw std::invalid_argument("open tree may not contain a stump");
    } else if (flavor_ == Flavor::Closed) {
        for (EdgeId e = 0; e < n_edges(); ++e)
            if (is_leaf(e)) throw std::invalid_argument("closed tree may not contain a leaf");
    }
}

std::vector<EdgeId> Tree::vertex_edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < n_edges(); ++e)
        if (has_vertex(e)) out.push_back(e);
    return out;
}

std::vector<EdgeId> Tree::leaf_edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < n_edges(); ++e)
        if (is_leaf(e)) out.push_back(e);
    return out;
}

std::vector<EdgeId> Tree::inner_edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 1; e < n_edges(); ++e)
        if (has_vertex(e)) out.push_back(e);
    return out;
}

TreeNode Tree::to_node_at(EdgeId e) const {
    TreeNode n;
    n.leaf = is_leaf(e);
    for (EdgeId k : inputs(e)) n.inputs.push_back(to_node_at(k));
    return n;
}

TreeNode Tree::to_node() const { return to_node_at(0); }

Tree eta(Flavor flavor) {
    if (flavor == Flavor::Closed) throw std::invalid_argument("eta is not a closed tree");
    return Tree(TreeNode::make_leaf(), flavor);
}

Tree corolla(int n, Flavor flavor) {
    if (n < 0) throw std::invalid_argument("corolla arity must be >= 0");
    std::vector<TreeNode> in(static_cast<std::size_t>(n), TreeNode::make_leaf());
    return Tree(TreeNode::make_vertex(std::move(in)), flavor);
}

Tree linear_tree(int n, Flavor flavor) {
    if (n < 0) throw std::invalid_argument("linear tree needs n >= 0");
    TreeNode node = TreeNode::make_leaf();
    for (int j = 0; j < n; ++j) node = TreeNode::make_vertex({node});
    return Tree(node, flavor);
}

int tree_size(const Tree& t) { return t.size(); }

namespace {

TreeNode parse_node(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) throw ParseError("unexpected end of input", pos);
    if (s[pos] == '*') {
        ++pos;
        return TreeNode::make_leaf();
    }
    if (s[pos] == '[') {
        std::size_t open = pos;
        ++pos;
        std::vector<TreeNode> inputs;
        while (true) {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos >= s.size()) throw ParseError("unclosed '['", open);
            if (s[pos] == ']') {
                ++pos;
                return TreeNode::make_vertex(std::move(inputs));
            }
            inputs.push_back(parse_node(s, pos));
        }
    }
    throw ParseError(std::string("unexpected character '") + s[pos] + "'", pos);
}

}  // namespace

Tree parse_term(const std::string& text, Flavor flavor) {
    std::size_t pos = 0;
    TreeNode node = parse_node(text, pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw ParseError("trailing input", pos);
    try {
        return Tree(node, flavor);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
}

std::string print_term(const Tree& t) { return t.key(); }

namespace {

// All canonical node shapes of exact size n in the given flavor.
// size = 1 + k + sum(sizes of inputs) for a vertex with k inputs, 0 for a leaf.
void gen_multisets(int budget, int min_rank, const std::vector<std::vector<TreeNode>>& by_size,
                   std::vector<TreeNode>& current, std::vector<std::vector<TreeNode>>& out) {
    // budget = remaining size available for further inputs (each input of size s costs s+1)
    out.push_back(current);
    // Append one more input with canonical rank >= min_rank to keep multisets sorted.
    int rank = 0;
    for (std::size_t s = 0; s < by_size.size(); ++s) {
        for (const auto& cand : by_size[s]) {
            int cost = static_cast<int>(s) + 1;
            if (rank >= min_rank && cost <= budget) {
                current.push_back(cand);
                gen_multisets(budget - cost, rank, by_size, current, out);
                current.pop_back();
            }
            ++rank;
        }
    }
}

}  // namespace

std::vector<Tree> enumerate_trees(int max_size, Flavor flavor) {
    if (max_size < 0) throw std::invalid_argument("max_size must be >= 0");
    // by_size[s] = canonical nodes of exact size s (subtree shapes, flavor-filtered)
    std::vector<std::vector<TreeNode>> by_size(static_cast<std::size_t>(max_size) + 1);
    for (int s = 0; s <= max_size; ++s) {
        std::vector<std::pair<std::string, TreeNode>> found;
        if (s == 0 && flavor != Flavor::Closed) found.emplace_back("*", TreeNode::make_leaf());
        if (s >= 1) {
            // A vertex with inputs drawn from strictly smaller sizes; total cost s-1.
            std::vector<TreeNode> current;
            std::vector<std::vector<TreeNode>> combos;
            gen_multisets(s - 1, 0, by_size, current, combos);
            for (auto& combo : combos) {
                int used = 0;
                for (const auto& n : combo) {
                    int sz = 0;
                    // recompute size of node: edges-1+vertices relative to subtree root
                    std::vector<const TreeNode*> st{&n};
                    int edges = 0, verts = 0;
                    while (!st.empty()) {
                        const TreeNode* p = st.back();
                        st.pop_back();
                        ++edges;
                        if (!p->leaf) ++verts;
                        for (const auto& q : p->inputs) st.push_back(&q);
                    }
                    sz = edges - 1 + verts;
                    used += sz + 1;
                }
                if (used != s - 1) continue;
                if (flavor == Flavor::Open && combo.empty()) continue;  // no stumps
                TreeNode v = TreeNode::make_vertex(combo);
                found.emplace_back(canon_string(sort_node(v)), std::move(v));
            }
        }
        std::sort(found.begin(), found.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        found.erase(std::unique(found.begin(), found.end(),
                                [](const auto& a, const auto& b) { return a.first == b.first; }),
                    found.end());
        for (auto& [k, n] : found) by_size[static_cast<std::size_t>(s)].push_back(std::move(n));
    }
    std::vector<Tree> out;
    for (int s = 0; s <= max_size; ++s)
        for (const auto& n : by_size[static_cast<std::size_t>(s)]) out.emplace_back(n, flavor);
    return out;
}

namespace {
TreeNode closure_node(const TreeNode& n) {
    if (n.leaf) return TreeNode::make_vertex({});
    std::vector<TreeNode> in;
    in.reserve(n.inputs.size());
    for (const auto& k : n.inputs) in.push_back(closure_node(k));
    return TreeNode::make_vertex(std::move(in));
}
}  // namespace

Tree closure(const Tree& t) {
    if (t.flavor() == Flavor::Closed) return t;
    return Tree(closure_node(t.to_node()), Flavor::Closed);
}

namespace {
TreeNode graft_node(const Tree& base, EdgeId at, EdgeId leaf, const Tree& top) {
    if (at == leaf) return top.to_node();
    TreeNode n;
    n.leaf = base.is_leaf(at);
    for (EdgeId k : base.inputs(at)) n.inputs.push_back(graft_node(base, k, leaf, top));
    return n;
}
}  // namespace

Tree graft(const Tree& base, EdgeId leaf, const Tree& top) {
    if (leaf < 0 || leaf >= base.n_edges() || !base.is_leaf(leaf))
        throw std::invalid_argument("graft: chosen edge is not a leaf");
    if (base.flavor() != top.flavor()) throw std::invalid_argument("graft: flavors differ");
    return Tree(graft_node(base, 0, leaf, top), base.flavor());
}

EdgePoset::EdgePoset(const Tree& t) : n_(t.n_edges()), leq_(static_cast<std::size_t>(n_ * n_), 0) {
    for (EdgeId e = 0; e < n_; ++e) {
        EdgeId a = e;
        while (a != -1) {
            leq_[static_cast<std::size_t>(e * n_ + a)] = 1;
            a = t.parent(a);
        }
    }
}

namespace {
bool iso_rec(const Tree& a, EdgeId ea, const Tree& b, EdgeId eb, std::vector<int>& used_b) {
    if (a.is_leaf(ea) != b.is_leaf(eb)) return false;
    const auto& ka = a.inputs(ea);
    const auto& kb = b.inputs(eb);
    if (ka.size() != kb.size()) return false;
    // Try all matchings of inputs.
    std::vector<int> perm(kb.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < ka.size() && ok; ++i)
            ok = iso_rec(a, ka[i], b, kb[static_cast<std::size_t>(perm[i])], used_b);
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}
}  // namespace

bool isomorphic_brute_force(const Tree& a, const Tree& b) {
    if (a.flavor() != b.flavor() || a.n_edges() != b.n_edges() || a.n_vertices() != b.n_vertices())
        return false;
    std::vector<int> used;
    return iso_rec(a, 0, b, 0, used);
}

std::string to_dot(const Tree& t, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=BT;\n";
    os << "  root [shape=point];\n";
    for (EdgeId e = 0; e < t.n_edges(); ++e) {
        const char* shape = t.is_leaf(e) ? "none" : (t.is_stump(e) ? "square" : "circle");
        os << "  e" << e << " [shape=" << shape << ", label=\"\"];\n";
        std::string from = (t.parent(e) == -1) ? "root" : ("e" + std::to_string(t.parent(e)));
        os << "  " << from << " -> e" << e << " [label=\"" << e << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace dendro
