#include "dendro/flavors.hpp"

#include <stdexcept>

namespace dendro {

namespace {

bool is_linear(const Tree& t) {
    for (EdgeId e = 0; e < t.n_edges(); ++e)
        if (t.has_vertex(e) && t.inputs(e).size() != 1) return false;
    // exactly one leaf at the top
    return t.leaf_edges().size() == 1 || t.n_edges() == 1;
}

}  // namespace

Presheaf open_extend(const Presheaf& x_open, const Site& general_site) {
    const Site& os = x_open.site();
    if (os.flavor() != Flavor::Open || general_site.flavor() != Flavor::General)
        throw std::invalid_argument("open_extend: expects open data and a general site");
    if (general_site.max_size() != os.max_size())
        throw std::invalid_argument("open_extend: truncations differ");
    std::vector<int> open_of(static_cast<std::size_t>(general_site.n_trees()), -1);
    for (int t = 0; t < general_site.n_trees(); ++t)
        open_of[static_cast<std::size_t>(t)] = os.index_of(general_site.tree(t).key());
    std::vector<int> cards(static_cast<std::size_t>(general_site.n_trees()), 0);
    for (int t = 0; t < general_site.n_trees(); ++t)
        if (open_of[static_cast<std::size_t>(t)] >= 0)
            cards[static_cast<std::size_t>(t)] = x_open.card(open_of[static_cast<std::size_t>(t)]);
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(general_site.n_action_slots()));
    for (int s = 0; s < general_site.n_trees(); ++s)
        for (int t = 0; t < general_site.n_trees(); ++t)
            for (int m = 0; m < general_site.n_hom(s, t); ++m) {
                auto& arr = actions[static_cast<std::size_t>(general_site.flat_index(s, t, m))];
                if (cards[static_cast<std::size_t>(t)] == 0) continue;
                // a morphism into an open tree has an open source
                int so = open_of[static_cast<std::size_t>(s)];
                int to = open_of[static_cast<std::size_t>(t)];
                if (so < 0 || to < 0)
                    throw std::logic_error("open_extend: map into an open tree from a non-open one");
                int om = os.find_morphism(so, to,
                                          general_site.hom(s, t)[static_cast<std::size_t>(m)].edge_map());
                arr = x_open.action(so, to, om);
            }
    return Presheaf(general_site, std::move(cards), std::move(actions), false);
}

Presheaf open_restrict(const Presheaf& x_general, const Site& open_site) {
    const Site& gs = x_general.site();
    if (gs.flavor() != Flavor::General || open_site.flavor() != Flavor::Open)
        throw std::invalid_argument("open_restrict: expects general data and an open site");
    if (open_site.max_size() > gs.max_size())
        throw std::invalid_argument("open_restrict: open site too large");
    std::vector<int> cards(static_cast<std::size_t>(open_site.n_trees()));
    std::vector<int> gen_of(static_cast<std::size_t>(open_site.n_trees()));
    for (int t = 0; t < open_site.n_trees(); ++t) {
        int g = gs.index_of(open_site.tree(t).key());
        if (g < 0) throw std::logic_error("open_restrict: tree missing");
        gen_of[static_cast<std::size_t>(t)] = g;
        cards[static_cast<std::size_t>(t)] = x_general.card(g);
    }
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(open_site.n_action_slots()));
    for (int s = 0; s < open_site.n_trees(); ++s)
        for (int t = 0; t < open_site.n_trees(); ++t)
            for (int m = 0; m < open_site.n_hom(s, t); ++m) {
                int gm = gs.find_morphism(gen_of[static_cast<std::size_t>(s)],
                                          gen_of[static_cast<std::size_t>(t)],
                                          open_site.hom(s, t)[static_cast<std::size_t>(m)].edge_map());
                actions[static_cast<std::size_t>(open_site.flat_index(s, t, m))] =
                    x_general.action(gen_of[static_cast<std::size_t>(s)], gen_of[static_cast<std::size_t>(t)], gm);
            }
    return Presheaf(open_site, std::move(cards), std::move(actions), false);
}

Presheaf closed_extend(const Presheaf& x_closed, const Site& general_site) {
    const Site& cs = x_closed.site();
    if (cs.flavor() != Flavor::Closed || general_site.flavor() != Flavor::General)
        throw std::invalid_argument("closed_extend: expects closed data and a general site");
    // per general tree: closed index of its closure and the edge relabelling
    std::vector<int> cl_idx(static_cast<std::size_t>(general_site.n_trees()));
    std::vector<std::vector<EdgeId>> cl_map(static_cast<std::size_t>(general_site.n_trees()));
    for (int t = 0; t < general_site.n_trees(); ++t) {
        auto [cl, em] = closure_with_edge_map(general_site.tree(t));
        int ci = cs.index_of(cl.key());
        if (ci < 0)
            throw std::invalid_argument("closed_extend: closed site too small for a closure");
        cl_idx[static_cast<std::size_t>(t)] = ci;
        cl_map[static_cast<std::size_t>(t)] = std::move(em);
    }
    std::vector<int> cards(static_cast<std::size_t>(general_site.n_trees()));
    for (int t = 0; t < general_site.n_trees(); ++t)
        cards[static_cast<std::size_t>(t)] = x_closed.card(cl_idx[static_cast<std::size_t>(t)]);
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(general_site.n_action_slots()));
    for (int s = 0; s < general_site.n_trees(); ++s)
        for (int t = 0; t < general_site.n_trees(); ++t)
            for (int m = 0; m < general_site.n_hom(s, t); ++m) {
                const auto& f = general_site.hom(s, t)[static_cast<std::size_t>(m)];
                // the closure of f: relabel both sides
                const auto& sm = cl_map[static_cast<std::size_t>(s)];
                const auto& tm = cl_map[static_cast<std::size_t>(t)];
                std::vector<EdgeId> cl_f(
                    static_cast<std::size_t>(cs.tree(cl_idx[static_cast<std::size_t>(s)]).n_edges()));
                for (EdgeId e = 0; e < static_cast<EdgeId>(sm.size()); ++e)
                    cl_f[static_cast<std::size_t>(sm[static_cast<std::size_t>(e)])] =
                        tm[static_cast<std::size_t>(f(e))];
                int cm = cs.find_morphism(cl_idx[static_cast<std::size_t>(s)],
                                          cl_idx[static_cast<std::size_t>(t)], cl_f);
                if (cm < 0) throw std::logic_error("closed_extend: closure of morphism invalid");
                actions[static_cast<std::size_t>(general_site.flat_index(s, t, m))] =
                    x_closed.action(cl_idx[static_cast<std::size_t>(s)], cl_idx[static_cast<std::size_t>(t)], cm);
            }
    return Presheaf(general_site, std::move(cards), std::move(actions), true);
}

Monotone linear_morphism_to_monotone(const TreeMorphism& f) {
    if (!is_linear(f.source()) || !is_linear(f.target()))
        throw std::invalid_argument("not a morphism of linear trees");
    // in a canonical linear tree, edge ids increase with depth
    Monotone out{f.source().n_edges() - 1, f.target().n_edges() - 1, {}};
    for (EdgeId e = 0; e < f.source().n_edges(); ++e) out.values.push_back(f(e));
    return out;
}

TreeMorphism monotone_to_linear_morphism(const Monotone& a, Flavor flavor) {
    Tree src = linear_tree(a.src_dim, flavor);
    Tree dst = linear_tree(a.dst_dim, flavor);
    std::vector<EdgeId> em(a.values.begin(), a.values.end());
    return TreeMorphism(std::move(src), std::move(dst), std::move(em));
}

Presheaf simplicial_extend(const SimplicialSet& z, const Site& site) {
    if (site.flavor() == Flavor::Closed)
        throw std::invalid_argument("simplicial_extend: closed site not supported");
    if (z.dim_bound() < site.max_size() / 2)
        throw std::invalid_argument("simplicial_extend: simplicial truncation too small");
    std::vector<int> cards(static_cast<std::size_t>(site.n_trees()), 0);
    std::vector<int> lin_dim(static_cast<std::size_t>(site.n_trees()), -1);
    for (int t = 0; t < site.n_trees(); ++t) {
        const Tree& tr = site.tree(t);
        if (is_linear(tr)) {
            lin_dim[static_cast<std::size_t>(t)] = tr.n_edges() - 1;
            cards[static_cast<std::size_t>(t)] = z.card(tr.n_edges() - 1);
        }
    }
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m) {
                if (cards[static_cast<std::size_t>(t)] == 0) continue;
                auto& arr = actions[static_cast<std::size_t>(site.flat_index(s, t, m))];
                // any map into a linear tree has a linear source
                if (lin_dim[static_cast<std::size_t>(s)] < 0)
                    throw std::logic_error("simplicial_extend: non-linear source into linear tree");
                Monotone a =
                    linear_morphism_to_monotone(site.hom(s, t)[static_cast<std::size_t>(m)]);
                arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(t)]));
                for (int x = 0; x < cards[static_cast<std::size_t>(t)]; ++x)
                    arr[static_cast<std::size_t>(x)] = z.act(a, x);
            }
    return Presheaf(site, std::move(cards), std::move(actions), true);
}

SimplicialSet simplicial_restrict(const Presheaf& x, int dim_bound) {
    const Site& site = x.site();
    if (site.flavor() == Flavor::Closed)
        throw std::invalid_argument("simplicial_restrict: closed site not supported");
    if (2 * dim_bound > site.max_size())
        throw std::invalid_argument("simplicial_restrict: site too small for requested bound");
    std::vector<int> idx(static_cast<std::size_t>(dim_bound + 1));
    for (int m = 0; m <= dim_bound; ++m) {
        idx[static_cast<std::size_t>(m)] = site.index_of(linear_tree(m, site.flavor()).key());
        if (idx[static_cast<std::size_t>(m)] < 0)
            throw std::logic_error("simplicial_restrict: linear tree missing");
    }
    std::vector<int> cards(static_cast<std::size_t>(dim_bound + 1));
    for (int m = 0; m <= dim_bound; ++m)
        cards[static_cast<std::size_t>(m)] = x.card(idx[static_cast<std::size_t>(m)]);
    std::vector<std::vector<std::vector<int>>> actions(
        static_cast<std::size_t>((dim_bound + 1) * (dim_bound + 1)));
    for (int m = 0; m <= dim_bound; ++m)
        for (int k = 0; k <= dim_bound; ++k) {
            auto maps = monotone_maps(m, k);
            auto& table = actions[static_cast<std::size_t>(m * (dim_bound + 1) + k)];
            table.resize(maps.size());
            for (std::size_t fi = 0; fi < maps.size(); ++fi) {
                TreeMorphism f = monotone_to_linear_morphism(maps[fi], site.flavor());
                int hm = site.find_morphism(idx[static_cast<std::size_t>(m)],
                                            idx[static_cast<std::size_t>(k)], f.edge_map());
                if (hm < 0) throw std::logic_error("simplicial_restrict: morphism missing");
                table[fi] = x.action(idx[static_cast<std::size_t>(m)], idx[static_cast<std::size_t>(k)], hm);
            }
        }
    return SimplicialSet(dim_bound, std::move(cards), std::move(actions), true);
}

}  // namespace dendro
