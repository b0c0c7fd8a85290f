#include "dendro/homotopy.hpp"

#include <algorithm>
#include <stdexcept>

namespace dendro {

int EdgePosetMaps::find(int t, const std::vector<int>& vals) const {
    const auto& row = elems[static_cast<std::size_t>(t)];
    int lo = 0, hi = static_cast<int>(row.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (row[static_cast<std::size_t>(mid)] < vals)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < static_cast<int>(row.size()) && row[static_cast<std::size_t>(lo)] == vals) return lo;
    return -1;
}

EdgePosetMaps edge_poset_maps(int n, const Site& site) {
    EdgePosetMaps out;
    out.elems.resize(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) {
        const Tree& tr = site.tree(t);
        EdgePoset poset(tr);
        // lexicographic enumeration of monotone assignments
        std::vector<int> v(static_cast<std::size_t>(tr.n_edges()), 0);
        auto consistent = [&](int e) {
            for (int o = 0; o < e; ++o) {
                if (poset.leq(e, o) && v[static_cast<std::size_t>(e)] > v[static_cast<std::size_t>(o)]) return false;
                if (poset.leq(o, e) && v[static_cast<std::size_t>(o)] > v[static_cast<std::size_t>(e)]) return false;
            }
            return true;
        };
        auto rec = [&](auto&& self, int e) -> void {
            if (e == tr.n_edges()) {
                out.elems[static_cast<std::size_t>(t)].push_back(v);
                return;
            }
            for (int val = 0; val <= n; ++val) {
                v[static_cast<std::size_t>(e)] = val;
                if (consistent(e)) self(self, e + 1);
            }
        };
        rec(rec, 0);
    }
    std::vector<int> cards;
    for (auto& row : out.elems) cards.push_back(static_cast<int>(row.size()));
    std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
    for (int s = 0; s < site.n_trees(); ++s)
        for (int t = 0; t < site.n_trees(); ++t)
            for (int m = 0; m < site.n_hom(s, t); ++m) {
                const auto& f = site.hom(s, t)[static_cast<std::size_t>(m)];
                auto& arr = actions[static_cast<std::size_t>(site.flat_index(s, t, m))];
                arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(t)]));
                for (int x = 0; x < cards[static_cast<std::size_t>(t)]; ++x) {
                    const auto& vals = out.elems[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
                    std::vector<int> pulled(static_cast<std::size_t>(site.tree(s).n_edges()));
                    for (EdgeId e = 0; e < site.tree(s).n_edges(); ++e)
                        pulled[static_cast<std::size_t>(e)] = vals[static_cast<std::size_t>(f(e))];
                    int idx = out.find(s, pulled);
                    if (idx < 0) throw std::logic_error("edge poset maps: action escaped");
                    arr[static_cast<std::size_t>(x)] = idx;
                }
            }
    out.presheaf = std::make_shared<Presheaf>(site, std::move(cards), std::move(actions), false);
    return out;
}

Subobject edge_poset_maps_boundary(int n, const EdgePosetMaps& full) {
    const Site& site = full.presheaf->site();
    std::vector<std::vector<char>> mask(static_cast<std::size_t>(site.n_trees()));
    for (int t = 0; t < site.n_trees(); ++t) {
        mask[static_cast<std::size_t>(t)].resize(full.elems[static_cast<std::size_t>(t)].size());
        for (std::size_t x = 0; x < full.elems[static_cast<std::size_t>(t)].size(); ++x) {
            std::vector<char> hitv(static_cast<std::size_t>(n + 1), 0);
            for (int v : full.elems[static_cast<std::size_t>(t)][x]) hitv[static_cast<std::size_t>(v)] = 1;
            bool surj = std::all_of(hitv.begin(), hitv.end(), [](char c) { return c != 0; });
            mask[static_cast<std::size_t>(t)][x] = surj ? 0 : 1;
        }
    }
    return make_subobject(full.presheaf, std::move(mask));
}

namespace {

// provenance tables for glued cells: for a nondegenerate simplex of dimension
// d, the map from edge_poset_maps(d) into the current object
struct CellMaps {
    const SimplicialSet* m;
    std::vector<EdgePosetMaps> kernels;              // per dimension 0..K
    // tables[d][cell] : per tree, per kernel element -> current element (only
    // for nondegenerate cells)
    std::vector<std::vector<std::vector<std::vector<int>>>> tables;

    int lookup(const Site& site, int d, int cell, int tree, int elem_idx) const {
        if (!m->is_degenerate(d, cell)) {
            const auto& tab = tables[static_cast<std::size_t>(d)][static_cast<std::size_t>(cell)];
            if (tab.empty()) throw std::logic_error("cell map queried before gluing");
            return tab[static_cast<std::size_t>(tree)][static_cast<std::size_t>(elem_idx)];
        }
        auto nf = m->normal_form(d, cell);
        // precompose the surjection with the edge values
        const auto& vals =
            kernels[static_cast<std::size_t>(d)].elems[static_cast<std::size_t>(tree)]
                                                      [static_cast<std::size_t>(elem_idx)];
        std::vector<int> pushed(vals.size());
        for (std::size_t e = 0; e < vals.size(); ++e)
            pushed[e] = nf.surjection.values[static_cast<std::size_t>(vals[e])];
        int idx = kernels[static_cast<std::size_t>(nf.dim)].find(tree, pushed);
        if (idx < 0) throw std::logic_error("cell map: degenerate push failed");
        return lookup(site, nf.dim, nf.element, tree, idx);
    }
};

}  // namespace

Presheaf tensor_kernel(const SimplicialSet& m, const Site& site) {
    const int K = m.dim_bound();
    CellMaps cm;
    cm.m = &m;
    for (int d = 0; d <= K; ++d) cm.kernels.push_back(edge_poset_maps(d, site));
    cm.tables.resize(static_cast<std::size_t>(K + 1));
    for (int d = 0; d <= K; ++d)
        cm.tables[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(m.card(d)));

    // stage 0: one copy of the terminal kernel per nondegenerate 0-cell
    PresheafPtr current = std::make_shared<Presheaf>(Presheaf::empty(site));
    for (int c = 0; c < m.card(0); ++c) {
        auto cop = coproduct(current, cm.kernels[0].presheaf);
        // remap all previous tables through the left injection
        for (int d = 0; d <= K; ++d)
            for (auto& tab : cm.tables[static_cast<std::size_t>(d)]) {
                if (tab.empty()) continue;
                for (int t = 0; t < site.n_trees(); ++t)
                    for (auto& v : tab[static_cast<std::size_t>(t)]) v = cop.inj_left.at(t, v);
            }
        auto& tab = cm.tables[0][static_cast<std::size_t>(c)];
        tab.resize(static_cast<std::size_t>(site.n_trees()));
        for (int t = 0; t < site.n_trees(); ++t) {
            tab[static_cast<std::size_t>(t)].resize(
                cm.kernels[0].elems[static_cast<std::size_t>(t)].size());
            for (std::size_t x = 0; x < tab[static_cast<std::size_t>(t)].size(); ++x)
                tab[static_cast<std::size_t>(t)][x] = cop.inj_right.at(t, static_cast<int>(x));
        }
        current = cop.object;
    }

    // higher cells: glue along the boundary subobject
    for (int d = 1; d <= K; ++d) {
        for (int c = 0; c < m.card(d); ++c) {
            if (m.is_degenerate(d, c)) continue;
            Subobject bd = edge_poset_maps_boundary(d, cm.kernels[static_cast<std::size_t>(d)]);
            // attaching map boundary -> current via the faces of c
            std::vector<std::vector<int>> attach(static_cast<std::size_t>(site.n_trees()));
            for (int t = 0; t < site.n_trees(); ++t) {
                for (std::size_t x = 0; x < cm.kernels[static_cast<std::size_t>(d)]
                                                .elems[static_cast<std::size_t>(t)].size();
                     ++x) {
                    if (!bd.contains(t, static_cast<int>(x))) continue;
                    const auto& vals = cm.kernels[static_cast<std::size_t>(d)]
                                           .elems[static_cast<std::size_t>(t)][x];
                    // factor through the image inclusion
                    std::vector<int> image;
                    for (int v : vals)
                        if (std::find(image.begin(), image.end(), v) == image.end())
                            image.push_back(v);
                    std::sort(image.begin(), image.end());
                    Monotone incl{static_cast<int>(image.size()) - 1, d, image};
                    std::vector<int> compressed(vals.size());
                    for (std::size_t e = 0; e < vals.size(); ++e)
                        compressed[e] = static_cast<int>(
                            std::find(image.begin(), image.end(), vals[e]) - image.begin());
                    int face_cell = m.act(incl, c);
                    int ei = cm.kernels[static_cast<std::size_t>(image.size() - 1)].find(
                        t, compressed);
                    if (ei < 0) throw std::logic_error("tensor kernel: face factor failed");
                    attach[static_cast<std::size_t>(t)].push_back(cm.lookup(
                        site, static_cast<int>(image.size()) - 1, face_cell, t, ei));
                }
            }
            PresheafMap attach_map(bd.object, current, std::move(attach), true);
            auto po = pushout(attach_map, bd.inclusion());
            // po.from_left : current -> new, po.from_right : kernel -> new
            for (int dd = 0; dd <= K; ++dd)
                for (auto& tab : cm.tables[static_cast<std::size_t>(dd)]) {
                    if (tab.empty()) continue;
                    for (int t = 0; t < site.n_trees(); ++t)
                        for (auto& v : tab[static_cast<std::size_t>(t)]) v = po.from_left.at(t, v);
                }
            auto& tab = cm.tables[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)];
            tab.resize(static_cast<std::size_t>(site.n_trees()));
            for (int t = 0; t < site.n_trees(); ++t) {
                tab[static_cast<std::size_t>(t)].resize(
                    cm.kernels[static_cast<std::size_t>(d)].elems[static_cast<std::size_t>(t)].size());
                for (std::size_t x = 0; x < tab[static_cast<std::size_t>(t)].size(); ++x)
                    tab[static_cast<std::size_t>(t)][x] = po.from_right.at(t, static_cast<int>(x));
            }
            current = po.object;
        }
    }
    return *current;
}

Presheaf tensor_simplicial(const Presheaf& x, const SimplicialSet& m) {
    Presheaf kernel = tensor_kernel(m, x.site());
    auto xp = std::make_shared<Presheaf>(x);
    auto kp = std::make_shared<Presheaf>(std::move(kernel));
    return *product(xp, kp).object;
}

std::vector<PresheafMap> shom_level(const Presheaf& x, const LeanObject& y, int k) {
    const Site& deg = y.site();
    Presheaf xr = x.site().max_size() == deg.max_size() ? x : restrict_presheaf(x, deg);
    EdgePosetMaps kernel = edge_poset_maps(k, deg);
    auto xp = std::make_shared<Presheaf>(std::move(xr));
    auto tensor = product(xp, kernel.presheaf).object;
    return hom_maps(tensor, y.data_ptr());
}

EConstructionState build_E(const Site& site, long long element_budget) {
    EConstructionState st;
    st.site = &site;
    st.levels.push_back(std::make_shared<Presheaf>(Presheaf::empty(site)));
    // levels[k] holds the stage-(k-1) object; stage n is built from trees of size n
    for (int n = 0; n <= site.max_size(); ++n) {
        PresheafPtr prev = st.levels.back();
        PresheafPtr cur = prev;
        PresheafMap incl = identity_map(prev);  // prev -> cur
        for (int t = 0; t < site.n_trees(); ++t) {
            if (site.tree(t).size() != n) continue;
            Representable rep = representable(site, site.tree(t));
            Subobject bd = boundary(rep);
            auto attach_maps = hom_maps(bd.object, prev);
            st.glue.push_back({n, site.tree(t).key(), static_cast<long long>(attach_maps.size())});
            for (const auto& am : attach_maps) {
                auto po = pushout(compose(incl, am), bd.inclusion());
                cur = po.object;
                incl = compose(po.from_left, incl);
                for (int u = 0; u < site.n_trees(); ++u)
                    if (cur->card(u) > element_budget) {
                        st.complete = false;
                        st.failed_level = n;
                        st.levels.erase(st.levels.begin());  // drop the initial empty stage
                        return st;
                    }
            }
        }
        st.steps.push_back(incl);
        st.levels.push_back(cur);
    }
    st.complete = true;
    // drop the initial empty stage so that levels[n] is stage n
    st.levels.erase(st.levels.begin());
    return st;
}

bool has_boundary_fillers(const EConstructionState& state, int max_size) {
    const Site& site = *state.site;
    PresheafPtr e = state.top();
    for (int t = 0; t < site.n_trees(); ++t) {
        if (site.tree(t).size() > max_size) continue;
        Representable rep = representable(site, site.tree(t));
        Subobject bd = boundary(rep);
        auto maps = hom_maps(bd.object, e);
        for (const auto& bm : maps) {
            bool filled = false;
            for (int x = 0; x < e->card(t) && !filled; ++x) {
                PresheafMap yx = yoneda_map(rep, e, x);
                if (compose(yx, bd.inclusion()) == bm) filled = true;
            }
            if (!filled) return false;
        }
    }
    return true;
}

bool has_stable_levels(const EConstructionState& state) {
    const Site& site = *state.site;
    for (std::size_t n = 0; n + 1 < state.levels.size(); ++n) {
        const PresheafMap& step = state.steps[n + 1];  // stage n -> stage n+1
        for (int t = 0; t < site.n_trees(); ++t) {
            if (site.tree(t).size() > static_cast<int>(n)) continue;
            if (state.levels[n]->card(t) != state.levels[n + 1]->card(t)) return false;
            std::vector<char> seen(static_cast<std::size_t>(state.levels[n + 1]->card(t)), 0);
            for (int x = 0; x < state.levels[n]->card(t); ++x) {
                int y = step.at(t, x);
                if (seen[static_cast<std::size_t>(y)]) return false;
                seen[static_cast<std::size_t>(y)] = 1;
            }
        }
    }
    return true;
}

PresheafMap normalize(PresheafPtr x, const EConstructionState& state) {
    return product(x, state.top()).proj_left;
}

}  // namespace dendro
