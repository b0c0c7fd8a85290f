#include "dendro/closed_ops.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "dendro/lifting.hpp"

namespace dendro {

std::vector<LinearOrder> linear_orders(int n) {
    if (n < 0) throw std::invalid_argument("linear_orders: n must be >= 0");
    std::vector<LinearOrder> out;
    LinearOrder p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::vector<MatchingFamily> matching_object_ass(int n) {
    if (n < 1) throw std::invalid_argument("matching_object_ass: n must be >= 1");
    if (n <= 2) {
        // proper subsets have at most one element; a single trivial family
        MatchingFamily triv{n, std::vector<char>(static_cast<std::size_t>(n * n), 0)};
        return {triv};
    }
    const int pairs = n * (n - 1) / 2;
    std::vector<std::pair<int, int>> pair_list;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pair_list.emplace_back(i, j);
    std::vector<MatchingFamily> out;
    for (long long bits = 0; bits < (1LL << pairs); ++bits) {
        MatchingFamily fam{n, std::vector<char>(static_cast<std::size_t>(n * n), 0)};
        for (int p = 0; p < pairs; ++p) {
            auto [i, j] = pair_list[static_cast<std::size_t>(p)];
            if ((bits >> p) & 1)
                fam.before[static_cast<std::size_t>(i * n + j)] = 1;
            else
                fam.before[static_cast<std::size_t>(j * n + i)] = 1;
        }
        // the family exists iff the tournament is acyclic on every proper
        // subset; cycles reduce to directed triangles, and a triangle lies in
        // a proper subset exactly when n >= 4
        bool ok = true;
        if (n >= 4) {
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n && ok; ++j)
                    for (int k = 0; k < n && ok; ++k) {
                        if (i == j || j == k || i == k) continue;
                        if (fam.beats(i, j) && fam.beats(j, k) && fam.beats(k, i)) ok = false;
                    }
        }
        if (ok) out.push_back(std::move(fam));
    }
    return out;
}

MatchingFamily matching_map_ass(int n, const LinearOrder& order) {
    if (static_cast<int>(order.size()) != n) throw std::invalid_argument("order arity mismatch");
    MatchingFamily fam{n, std::vector<char>(static_cast<std::size_t>(n * n), 0)};
    if (n <= 2) return fam;  // the matching object is a point
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && pos[static_cast<std::size_t>(i)] < pos[static_cast<std::size_t>(j)])
                fam.before[static_cast<std::size_t>(i * n + j)] = 1;
    return fam;
}

MatchingReport matching_report(int n) {
    auto orders = linear_orders(n);
    auto families = matching_object_ass(n);
    std::vector<MatchingFamily> image;
    bool injective = true;
    for (const auto& o : orders) {
        MatchingFamily f = matching_map_ass(n, o);
        bool seen = false;
        for (const auto& g : image)
            if (g == f) seen = true;
        if (seen)
            injective = false;
        else
            image.push_back(f);
    }
    // sanity: the image lands in the matching object
    for (const auto& f : image) {
        bool found = false;
        for (const auto& g : families)
            if (g == f) found = true;
        if (!found) throw std::logic_error("matching image escapes the matching object");
    }
    MatchingReport r;
    r.arity = n;
    r.operations = static_cast<long long>(orders.size());
    r.matching_card = static_cast<long long>(families.size());
    r.image_card = static_cast<long long>(image.size());
    r.injective = injective;
    r.bijective = injective && r.image_card == r.matching_card;
    return r;
}

namespace {

// element of the nerve at a tree: an order index per vertex edge, packed in
// mixed radix over the vertex edges in increasing id order
struct NerveShape {
    std::vector<EdgeId> vertex_edges;
    std::vector<int> arities;
    std::vector<long long> radix;  // suffix products for packing
    long long card = 1;

    explicit NerveShape(const Tree& t) {
        vertex_edges = t.vertex_edges();
        for (EdgeId v : vertex_edges) arities.push_back(static_cast<int>(t.inputs(v).size()));
        radix.assign(vertex_edges.size() + 1, 1);
        for (int i = static_cast<int>(vertex_edges.size()) - 1; i >= 0; --i) {
            long long fact = 1;
            for (int a = 2; a <= arities[static_cast<std::size_t>(i)]; ++a) fact *= a;
            radix[static_cast<std::size_t>(i)] = radix[static_cast<std::size_t>(i + 1)] * fact;
            card *= fact;
        }
    }
    std::vector<int> unpack(long long idx) const {
        std::vector<int> out(vertex_edges.size());
        for (std::size_t i = 0; i < vertex_edges.size(); ++i) {
            out[i] = static_cast<int>(idx / radix[i + 1]);
            idx %= radix[i + 1];
        }
        return out;
    }
    long long pack(const std::vector<int>& vals) const {
        long long idx = 0;
        for (std::size_t i = 0; i < vertex_edges.size(); ++i) idx += vals[i] * radix[i + 1];
        return idx;
    }
};

// order of the cut edges below `output` induced by the element's orders,
// reading the region of the target tree; stump branches vanish
void eval_region(const Tree& t, const std::vector<std::vector<int>>& orders_at_edge,
                 const std::vector<char>& is_cut, EdgeId d, std::vector<EdgeId>& out) {
    if (is_cut[static_cast<std::size_t>(d)]) {
        out.push_back(d);
        return;
    }
    if (t.is_leaf(d)) throw std::logic_error("nerve action: leaf inside a closed region");
    const auto& in = t.inputs(d);
    const auto& ord = orders_at_edge[static_cast<std::size_t>(d)];
    for (int pos = 0; pos < static_cast<int>(in.size()); ++pos)
        eval_region(t, orders_at_edge, is_cut, in[static_cast<std::size_t>(ord[static_cast<std::size_t>(pos)])], out);
}

}  // namespace

Presheaf closed_nerve_ass(const Site& closed_site) {
    if (closed_site.flavor() != Flavor::Closed)
        throw std::invalid_argument("closed_nerve_ass: closed site required");
    const int n = closed_site.n_trees();
    std::vector<NerveShape> shapes;
    shapes.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) shapes.emplace_back(closed_site.tree(t));
    std::vector<int> cards;
    for (const auto& s : shapes) cards.push_back(static_cast<int>(s.card));

    std::vector<std::vector<int>> actions(static_cast<std::size_t>(closed_site.n_action_slots()));
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            for (int m = 0; m < closed_site.n_hom(s, t); ++m) {
                const auto& f = closed_site.hom(s, t)[static_cast<std::size_t>(m)];
                const Tree& S = closed_site.tree(s);
                const Tree& T = closed_site.tree(t);
                auto& arr = actions[static_cast<std::size_t>(closed_site.flat_index(s, t, m))];
                arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(t)]));
                for (long long e = 0; e < shapes[static_cast<std::size_t>(t)].card; ++e) {
                    auto vals = shapes[static_cast<std::size_t>(t)].unpack(e);
                    // orders per vertex edge of T
                    std::vector<std::vector<int>> orders_at_edge(
                        static_cast<std::size_t>(T.n_edges()));
                    for (std::size_t vi = 0; vi < shapes[static_cast<std::size_t>(t)].vertex_edges.size(); ++vi) {
                        EdgeId v = shapes[static_cast<std::size_t>(t)].vertex_edges[vi];
                        orders_at_edge[static_cast<std::size_t>(v)] = linear_orders(
                            shapes[static_cast<std::size_t>(t)].arities[vi])[static_cast<std::size_t>(vals[vi])];
                    }
                    // induced order tuple for S
                    std::vector<int> svals;
                    for (std::size_t vi = 0; vi < shapes[static_cast<std::size_t>(s)].vertex_edges.size(); ++vi) {
                        EdgeId v = shapes[static_cast<std::size_t>(s)].vertex_edges[vi];
                        const auto& in = S.inputs(v);
                        const int k = static_cast<int>(in.size());
                        if (k == 1 && f(in[0]) == f(v)) {
                            svals.push_back(0);  // unit operation
                            continue;
                        }
                        std::vector<char> is_cut(static_cast<std::size_t>(T.n_edges()), 0);
                        for (EdgeId i : in) is_cut[static_cast<std::size_t>(f(i))] = 1;
                        std::vector<EdgeId> listed;
                        eval_region(T, orders_at_edge, is_cut, f(v), listed);
                        if (static_cast<int>(listed.size()) != k)
                            throw std::logic_error("nerve action: region frontier mismatch");
                        // order on the inputs of v via the edge correspondence
                        LinearOrder ord;
                        for (EdgeId cut : listed) {
                            int which = -1;
                            for (int i = 0; i < k; ++i)
                                if (f(in[static_cast<std::size_t>(i)]) == cut) which = i;
                            if (which < 0) throw std::logic_error("nerve action: cut not an input");
                            ord.push_back(which);
                        }
                        auto all = linear_orders(k);
                        int oi = -1;
                        for (std::size_t i = 0; i < all.size(); ++i)
                            if (all[i] == ord) oi = static_cast<int>(i);
                        if (oi < 0) throw std::logic_error("nerve action: order not found");
                        svals.push_back(oi);
                    }
                    arr[static_cast<std::size_t>(e)] =
                        static_cast<int>(shapes[static_cast<std::size_t>(s)].pack(svals));
                }
            }
    return Presheaf(closed_site, std::move(cards), std::move(actions), true);
}

bool nerve_has_unique_very_inner_fillers(const Presheaf& nerve, int max_size) {
    const Site& site = nerve.site();
    auto nerve_ptr = std::make_shared<Presheaf>(nerve);
    for (int t = 0; t < site.n_trees(); ++t) {
        const Tree& tr = site.tree(t);
        if (tr.size() > max_size) continue;
        Representable rep = representable(site, tr);
        for (EdgeId e : tr.inner_edges()) {
            if (tr.is_stump(e)) continue;  // not very inner
            Subobject h = horn(rep, e, true);
            auto horn_maps = hom_maps(h.object, nerve_ptr);
            // fillers: elements of nerve at t restricted to the horn
            for (const auto& hm : horn_maps) {
                int fillers = 0;
                for (int x = 0; x < nerve.card(t); ++x) {
                    PresheafMap yx = yoneda_map(rep, nerve_ptr, x);
                    if (compose(yx, h.inclusion()) == hm) ++fillers;
                }
                if (fillers != 1) return false;
            }
        }
    }
    return true;
}

}  // namespace dendro
