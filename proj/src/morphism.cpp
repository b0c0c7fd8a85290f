#include "dendro/morphism.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace dendro {

TreeMorphism::TreeMorphism(Tree src, Tree dst, std::vector<EdgeId> edge_map)
    : TreeMorphism(std::make_shared<const Tree>(std::move(src)),
                   std::make_shared<const Tree>(std::move(dst)), std::move(edge_map)) {}

TreeMorphism::TreeMorphism(std::shared_ptr<const Tree> src, std::shared_ptr<const Tree> dst,
                           std::vector<EdgeId> edge_map, bool validate)
    : src_(std::move(src)), dst_(std::move(dst)), map_(std::move(edge_map)) {
    if (static_cast<int>(map_.size()) != src_->n_edges())
        throw std::invalid_argument("edge map has wrong length");
    for (EdgeId e : map_)
        if (e < 0 || e >= dst_->n_edges()) throw std::invalid_argument("edge map out of range");
    if (validate && !valid_edge_map(*src_, *dst_, map_))
        throw std::invalid_argument("edge map is not an operad map");
}

bool TreeMorphism::is_identity() const {
    if (src_->key() != dst_->key()) return false;
    for (EdgeId e = 0; e < src_->n_edges(); ++e)
        if (map_[static_cast<std::size_t>(e)] != e) return false;
    return true;
}

bool TreeMorphism::is_bijective() const {
    if (src_->n_edges() != dst_->n_edges()) return false;
    std::vector<char> seen(map_.size(), 0);
    for (EdgeId e : map_) {
        if (seen[static_cast<std::size_t>(e)]) return false;
        seen[static_cast<std::size_t>(e)] = 1;
    }
    return true;
}

bool TreeMorphism::operator==(const TreeMorphism& o) const {
    return src_->key() == o.src_->key() && dst_->key() == o.dst_->key() && map_ == o.map_;
}

bool TreeMorphism::operator<(const TreeMorphism& o) const {
    if (src_->key() != o.src_->key()) return src_->key() < o.src_->key();
    if (dst_->key() != o.dst_->key()) return dst_->key() < o.dst_->key();
    return map_ < o.map_;
}

std::string TreeMorphism::describe() const {
    std::ostringstream os;
    os << src_->key() << "->" << dst_->key() << ":[";
    for (std::size_t i = 0; i < map_.size(); ++i) os << (i ? "," : "") << map_[i];
    os << "]";
    return os.str();
}

bool operation_exists(const Tree& t, const EdgePoset& poset, const std::vector<EdgeId>& inputs,
                      EdgeId output) {
    const std::size_t k = inputs.size();
    if (k == 1 && inputs[0] == output) return true;  // identity operation
    for (EdgeId c : inputs)
        if (!poset.lt(c, output)) return false;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (poset.comparable(inputs[i], inputs[j])) return false;
    if (k == 0 && !t.has_vertex(output)) return false;  // no nullary operation at a leaf colour
    for (EdgeId l = 0; l < t.n_edges(); ++l) {
        if (!t.is_leaf(l) || !poset.lt(l, output)) continue;
        bool covered = false;
        for (EdgeId c : inputs)
            if (poset.leq(l, c)) {
                covered = true;
                break;
            }
        if (!covered) return false;  // leaves cannot be absorbed
    }
    return true;
}

bool valid_edge_map(const Tree& src, const Tree& dst, const std::vector<EdgeId>& edge_map) {
    EdgePoset poset(dst);
    for (EdgeId e = 0; e < src.n_edges(); ++e) {
        if (!src.has_vertex(e)) continue;
        std::vector<EdgeId> in;
        in.reserve(src.inputs(e).size());
        for (EdgeId i : src.inputs(e)) in.push_back(edge_map[static_cast<std::size_t>(i)]);
        if (!operation_exists(dst, poset, in, edge_map[static_cast<std::size_t>(e)])) return false;
    }
    return true;
}

namespace {

// Backtracking enumeration of valid edge maps in lexicographic order.
struct HomSearch {
    const Tree& src;
    const Tree& dst;
    const EdgePoset poset;
    std::vector<EdgeId> map;
    std::vector<TreeMorphism>* out;
    std::shared_ptr<const Tree> src_ptr, dst_ptr;

    HomSearch(const Tree& s, const Tree& d, std::vector<TreeMorphism>* o)
        : src(s), dst(d), poset(d), map(static_cast<std::size_t>(s.n_edges()), -1), out(o),
          src_ptr(std::make_shared<const Tree>(s)), dst_ptr(std::make_shared<const Tree>(d)) {}

    bool stump_ok(EdgeId target) const {
        if (!dst.has_vertex(target)) return false;
        for (EdgeId l = 0; l < dst.n_edges(); ++l)
            if (dst.is_leaf(l) && poset.lt(l, target)) return false;
        return true;
    }

    // Constraints that become checkable once edge e is assigned.
    bool consistent(EdgeId e) const {
        EdgeId v = map[static_cast<std::size_t>(e)];
        if (src.is_stump(e) && !stump_ok(v)) return false;
        EdgeId p = src.parent(e);
        if (p != -1) {
            EdgeId o = map[static_cast<std::size_t>(p)];
            const auto& sibs = src.inputs(p);
            if (sibs.size() == 1 && v == o) {
                // unit: single input mapped onto the output edge
            } else {
                if (!poset.lt(v, o)) return false;
                for (EdgeId s : sibs) {
                    if (s >= e) break;  // inputs listed in increasing id order
                    if (poset.comparable(map[static_cast<std::size_t>(s)], v)) return false;
                }
            }
            // Leaf coverage once the whole signature of the vertex at p is known.
            if (e == sibs.back()) {
                std::vector<EdgeId> in;
                in.reserve(sibs.size());
                for (EdgeId s : sibs) in.push_back(map[static_cast<std::size_t>(s)]);
                if (!operation_exists(dst, poset, in, o)) return false;
            }
        }
        return true;
    }

    void run(EdgeId e) {
        if (e == src.n_edges()) {
            out->emplace_back(src_ptr, dst_ptr, map, false);
            return;
        }
        for (EdgeId v = 0; v < dst.n_edges(); ++v) {
            map[static_cast<std::size_t>(e)] = v;
            if (consistent(e)) run(e + 1);
        }
        map[static_cast<std::size_t>(e)] = -1;
    }
};

}  // namespace

std::vector<TreeMorphism> hom_set(const Tree& src, const Tree& dst) {
    if (src.flavor() != dst.flavor())
        throw std::invalid_argument("hom_set requires trees of the same flavor");
    std::vector<TreeMorphism> out;
    HomSearch search(src, dst, &out);
    search.run(0);
    return out;
}

std::vector<TreeMorphism> automorphisms(const Tree& t) {
    std::vector<TreeMorphism> out;
    for (auto& m : hom_set(t, t))
        if (m.is_bijective()) out.push_back(m);
    return out;
}

TreeMorphism identity_morphism(const Tree& t) {
    std::vector<EdgeId> id(static_cast<std::size_t>(t.n_edges()));
    for (EdgeId e = 0; e < t.n_edges(); ++e) id[static_cast<std::size_t>(e)] = e;
    return TreeMorphism(t, t, std::move(id));
}

TreeMorphism compose(const TreeMorphism& g, const TreeMorphism& f) {
    if (f.target().key() != g.source().key() || f.target().flavor() != g.source().flavor())
        throw std::invalid_argument("compose: boundary trees do not match");
    std::vector<EdgeId> m(static_cast<std::size_t>(f.source().n_edges()));
    for (EdgeId e = 0; e < f.source().n_edges(); ++e) m[static_cast<std::size_t>(e)] = g(f(e));
    return TreeMorphism(f.source_ptr(), g.target_ptr(), std::move(m));
}

const char* elementary_kind_name(ElementaryKind k) {
    switch (k) {
        case ElementaryKind::InnerFace: return "inner_face";
        case ElementaryKind::TopFace: return "top_face";
        case ElementaryKind::RootFace: return "root_face";
        case ElementaryKind::Degeneracy: return "degeneracy";
    }
    return "?";
}

namespace {

struct TaggedNode {
    bool leaf = true;
    int tag = -1;  // originating edge id in the ambient tree
    std::vector<TaggedNode> kids;
    std::string key;
};

void canon_tagged(TaggedNode& n) {
    if (n.leaf) {
        n.key = "*";
        return;
    }
    for (auto& k : n.kids) canon_tagged(k);
    std::stable_sort(n.kids.begin(), n.kids.end(), [](const TaggedNode& a, const TaggedNode& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.tag < b.tag;
    });
    n.key = "[";
    for (const auto& k : n.kids) n.key += k.key;
    n.key += "]";
}

TreeNode strip_tags(const TaggedNode& n) {
    TreeNode out;
    out.leaf = n.leaf;
    for (const auto& k : n.kids) out.inputs.push_back(strip_tags(k));
    return out;
}

void collect_tags(const TaggedNode& n, std::vector<int>& tags) {
    tags.push_back(n.tag);
    for (const auto& k : n.kids) collect_tags(k, tags);
}

// Builds the canonical Tree of a tagged node; tags_out[new_edge_id] gives the
// tag recorded on the corresponding node.
Tree build_with_tags(TaggedNode node, Flavor flavor, std::vector<int>& tags_out) {
    canon_tagged(node);
    tags_out.clear();
    collect_tags(node, tags_out);
    return Tree(strip_tags(node), flavor);
}

// Tagged copy of the subtree of t at edge e, with an optional contracted
// inner edge (whose vertex is spliced into its parent).
TaggedNode tagged_subtree(const Tree& t, EdgeId e, EdgeId contracted) {
    TaggedNode n;
    n.tag = e;
    n.leaf = t.is_leaf(e);
    for (EdgeId k : t.inputs(e)) {
        if (k == contracted) {
            // splice the inputs of the contracted edge's vertex
            for (EdgeId kk : t.inputs(k)) n.kids.push_back(tagged_subtree(t, kk, contracted));
        } else {
            n.kids.push_back(tagged_subtree(t, k, contracted));
        }
    }
    return n;
}

// Tagged copy with the top vertex at `removed` replaced by a leaf terminus.
TaggedNode tagged_without_top(const Tree& t, EdgeId e, EdgeId removed) {
    TaggedNode n;
    n.tag = e;
    if (e == removed) {
        n.leaf = true;
        return n;
    }
    n.leaf = t.is_leaf(e);
    for (EdgeId k : t.inputs(e)) n.kids.push_back(tagged_without_top(t, k, removed));
    return n;
}

// Tagged copy collapsing the unary vertex at edge e: the input edge of that
// vertex is merged into e (the merged edge keeps tag e).
TaggedNode tagged_collapse(const Tree& t, EdgeId e, EdgeId collapsed) {
    if (e == collapsed) {
        EdgeId in = t.inputs(e)[0];
        TaggedNode n = tagged_collapse(t, in, collapsed);
        n.tag = e;
        return n;
    }
    TaggedNode n;
    n.tag = e;
    n.leaf = t.is_leaf(e);
    for (EdgeId k : t.inputs(e)) n.kids.push_back(tagged_collapse(t, k, collapsed));
    return n;
}

bool flavor_ok(const TreeNode& n, Flavor f) {
    if (f == Flavor::Open && !n.leaf && n.inputs.empty()) return false;
    if (f == Flavor::Closed && n.leaf) return false;
    for (const auto& k : n.inputs)
        if (!flavor_ok(k, f)) return false;
    return true;
}

}  // namespace

std::vector<ElementaryMap> elementary_maps(const Tree& t) {
    std::vector<ElementaryMap> out;
    auto t_ptr = std::make_shared<const Tree>(t);
    const Flavor f = t.flavor();

    auto add_face = [&](ElementaryKind kind, TaggedNode node) {
        if (!flavor_ok(strip_tags(node), f)) return;
        std::vector<int> tags;
        Tree src = build_with_tags(std::move(node), f, tags);
        std::vector<EdgeId> em(tags.begin(), tags.end());
        out.push_back({kind, TreeMorphism(std::make_shared<const Tree>(std::move(src)), t_ptr,
                                          std::move(em))});
    };

    // Inner faces: contract each inner edge.
    for (EdgeId x : t.inner_edges()) add_face(ElementaryKind::InnerFace, tagged_subtree(t, 0, x));

    // Top faces: remove a vertex all of whose inputs are leaves.
    for (EdgeId e = 0; e < t.n_edges(); ++e) {
        if (!t.has_vertex(e)) continue;
        bool top = true;
        for (EdgeId k : t.inputs(e))
            if (!t.is_leaf(k)) top = false;
        if (top) add_face(ElementaryKind::TopFace, tagged_without_top(t, 0, e));
    }

    // Root faces: keep the subtree over one input of the root vertex, allowed
    // when all other inputs are leaves.
    if (t.has_vertex(0)) {
        const auto& in = t.inputs(0);
        for (EdgeId survivor : in) {
            bool ok = true;
            for (EdgeId other : in)
                if (other != survivor && !t.is_leaf(other)) ok = false;
            if (ok) add_face(ElementaryKind::RootFace, tagged_subtree(t, survivor, -1));
        }
    }

    // Degeneracies: collapse each unary vertex.
    for (EdgeId e = 0; e < t.n_edges(); ++e) {
        if (!t.has_vertex(e) || t.inputs(e).size() != 1) continue;
        std::vector<int> tags;
        Tree dst = build_with_tags(tagged_collapse(t, 0, e), f, tags);
        // tags: new edge id -> old edge id (the collapsed pair keeps tag e)
        std::vector<EdgeId> new_of_old(static_cast<std::size_t>(t.n_edges()), -1);
        for (std::size_t ni = 0; ni < tags.size(); ++ni)
            new_of_old[static_cast<std::size_t>(tags[ni])] = static_cast<EdgeId>(ni);
        EdgeId in = t.inputs(e)[0];
        new_of_old[static_cast<std::size_t>(in)] = new_of_old[static_cast<std::size_t>(e)];
        std::vector<EdgeId> em(new_of_old.begin(), new_of_old.end());
        out.push_back({ElementaryKind::Degeneracy,
                       TreeMorphism(t_ptr, std::make_shared<const Tree>(std::move(dst)),
                                    std::move(em))});
    }
    return out;
}

std::pair<Tree, std::vector<EdgeId>> closure_with_edge_map(const Tree& t) {
    // tagged copy with every leaf capped by a stump
    struct Rec {
        const Tree& t;
        TaggedNode operator()(EdgeId e) const {
            TaggedNode n;
            n.tag = e;
            n.leaf = false;  // leaves become stump vertices (no kids)
            if (!t.is_leaf(e))
                for (EdgeId k : t.inputs(e)) n.kids.push_back((*this)(k));
            return n;
        }
    };
    std::vector<int> tags;
    Tree closed = build_with_tags(Rec{t}(0), Flavor::Closed, tags);
    std::vector<EdgeId> to_closed(static_cast<std::size_t>(t.n_edges()), -1);
    for (std::size_t ni = 0; ni < tags.size(); ++ni)
        to_closed[static_cast<std::size_t>(tags[ni])] = static_cast<EdgeId>(ni);
    return {std::move(closed), std::move(to_closed)};
}

std::vector<TreeMorphism> degeneracy_set(const Tree& t, const Tree& s) {
    if (t.flavor() != s.flavor())
        throw std::invalid_argument("degeneracy_set requires equal flavors");
    // Saturate composites of isomorphisms and elementary degeneracies from t.
    std::set<TreeMorphism> reached;
    std::vector<TreeMorphism> frontier;
    for (auto& a : automorphisms(t)) {
        if (reached.insert(a).second) frontier.push_back(a);
    }
    while (!frontier.empty()) {
        std::vector<TreeMorphism> next;
        for (const auto& m : frontier) {
            const Tree& cur = m.target();
            for (auto& em : elementary_maps(cur)) {
                if (em.kind != ElementaryKind::Degeneracy) continue;
                for (auto& a : automorphisms(em.map.target())) {
                    TreeMorphism comp = compose(a, compose(em.map, m));
                    if (reached.insert(comp).second) next.push_back(comp);
                }
            }
        }
        frontier = std::move(next);
    }
    std::vector<TreeMorphism> out;
    for (const auto& m : reached)
        if (m.target().key() == s.key()) out.push_back(m);
    return out;
}

}  // namespace dendro
