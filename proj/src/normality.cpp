#include "dendro/normality.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dendro {

TreeAutGroup tree_aut_group(const Tree& t) {
    auto auts = automorphisms(t);
    // identity first, rest in enumeration order
    std::stable_sort(auts.begin(), auts.end(), [](const TreeMorphism& a, const TreeMorphism& b) {
        return a.is_identity() > b.is_identity();
    });
    const int n = static_cast<int>(auts.size());
    auto index_of = [&](const TreeMorphism& m) {
        for (int i = 0; i < n; ++i)
            if (auts[static_cast<std::size_t>(i)].edge_map() == m.edge_map()) return i;
        return -1;
    };
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n),
                                        std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int c = index_of(compose(auts[static_cast<std::size_t>(a)], auts[static_cast<std::size_t>(b)]));
            if (c < 0) throw std::logic_error("automorphisms not closed under composition");
            table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = c;
        }
    return TreeAutGroup{FiniteGroup(std::move(table)), std::move(auts)};
}

bool is_normal_upto(const Presheaf& x, int max_size) {
    const Site& site = x.site();
    for (int t = 0; t < site.n_trees(); ++t) {
        if (site.tree(t).size() > max_size) continue;
        for (const auto& a : automorphisms(site.tree(t))) {
            if (a.is_identity()) continue;
            int m = site.find_morphism(t, t, a.edge_map());
            for (int e = 0; e < x.card(t); ++e)
                if (x.act(t, t, m, e) == e) return false;
        }
    }
    return true;
}

bool is_normal_mono_upto(const PresheafMap& f, int max_size) {
    const Site& site = f.source().site();
    for (int t = 0; t < site.n_trees(); ++t) {
        if (site.tree(t).size() > max_size) continue;
        std::vector<char> hit(static_cast<std::size_t>(f.target().card(t)), 0);
        for (int e = 0; e < f.source().card(t); ++e) {
            if (hit[static_cast<std::size_t>(f.at(t, e))]) return false;  // not injective
            hit[static_cast<std::size_t>(f.at(t, e))] = 1;
        }
        for (const auto& a : automorphisms(site.tree(t))) {
            if (a.is_identity()) continue;
            int m = site.find_morphism(t, t, a.edge_map());
            for (int e = 0; e < f.target().card(t); ++e)
                if (!hit[static_cast<std::size_t>(e)] && f.target().act(t, t, m, e) == e)
                    return false;
        }
    }
    return true;
}

bool is_normal_upto(const LeanObject& x, int max_size) {
    for (const auto& t : enumerate_trees(max_size, x.flavor())) {
        const auto& ev = x.evaluate(t);
        for (const auto& a : automorphisms(t)) {
            if (a.is_identity()) continue;
            auto action = x.eval_action(a);
            for (int e = 0; e < ev.size(); ++e)
                if (action[static_cast<std::size_t>(e)] == e) return false;
        }
    }
    return true;
}

std::vector<int> lean_eval_map(const LeanObject& x, const LeanObject& y,
                               const PresheafMap& f_data, const Tree& t) {
    const auto& ex = x.evaluate(t);
    const auto& ey = y.evaluate(t);
    const Site& deg = x.site();
    std::vector<int> out(static_cast<std::size_t>(ex.size()));
    for (int e = 0; e < ex.size(); ++e) {
        std::vector<std::vector<int>> pushed(static_cast<std::size_t>(deg.n_trees()));
        for (int u = 0; u < deg.n_trees(); ++u) {
            const auto& row = ex.families[static_cast<std::size_t>(e)][static_cast<std::size_t>(u)];
            auto& prow = pushed[static_cast<std::size_t>(u)];
            prow.reserve(row.size());
            for (int v : row) prow.push_back(f_data.at(u, v));
        }
        int idx = ey.find(pushed);
        if (idx < 0) throw std::logic_error("lean_eval_map: pushed family not compatible");
        out[static_cast<std::size_t>(e)] = idx;
    }
    return out;
}

bool is_normal_mono_upto(const LeanObject& x, const LeanObject& y, const PresheafMap& f_data,
                         int max_size) {
    for (const auto& t : enumerate_trees(max_size, y.flavor())) {
        auto fm = lean_eval_map(x, y, f_data, t);
        const auto& ey = y.evaluate(t);
        std::vector<char> hit(static_cast<std::size_t>(ey.size()), 0);
        for (int v : fm) {
            if (hit[static_cast<std::size_t>(v)]) return false;
            hit[static_cast<std::size_t>(v)] = 1;
        }
        for (const auto& a : automorphisms(t)) {
            if (a.is_identity()) continue;
            auto action = y.eval_action(a);
            for (int e = 0; e < ey.size(); ++e)
                if (!hit[static_cast<std::size_t>(e)] && action[static_cast<std::size_t>(e)] == e)
                    return false;
        }
    }
    return true;
}

namespace {

// Equivariant functions hom(t, S) -> Z for the right Aut(t)-action by
// precomposition on hom and the given action on Z.
struct EquivariantFunctions {
    std::vector<std::vector<int>> table;  // each entry: per morphism index, a Z element

    int find(const std::vector<int>& v) const {
        for (std::size_t i = 0; i < table.size(); ++i)
            if (table[i] == v) return static_cast<int>(i);
        return -1;
    }
};

EquivariantFunctions equivariant_functions(const std::vector<TreeMorphism>& homs,
                                           const std::vector<std::vector<int>>& precomp,
                                           const FiniteGSet& z) {
    // precomp[a][h] = index of homs[h] composed with aut a
    EquivariantFunctions out;
    const int nh = static_cast<int>(homs.size());
    const int ng = z.group().order();
    std::vector<int> v(static_cast<std::size_t>(nh), -1);
    auto rec = [&](auto&& self, int h) -> void {
        if (h == nh) {
            out.table.push_back(v);
            return;
        }
        if (v[static_cast<std::size_t>(h)] != -1) {
            self(self, h + 1);
            return;
        }
        for (int zv = 0; zv < z.size(); ++zv) {
            std::vector<std::pair<int, int>> assigned;
            bool ok = true;
            for (int a = 0; a < ng && ok; ++a) {
                int ha = precomp[static_cast<std::size_t>(a)][static_cast<std::size_t>(h)];
                int want = z.act(zv, a);
                int& slot = v[static_cast<std::size_t>(ha)];
                if (slot == -1) {
                    slot = want;
                    assigned.emplace_back(ha, want);
                } else if (slot != want) {
                    ok = false;
                }
            }
            if (ok) self(self, h + 1);
            for (auto& [hh, vv] : assigned) v[static_cast<std::size_t>(hh)] = -1;
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

PresheafMap psi_map(const Tree& t, const Site& site) {
    if (t.flavor() != site.flavor()) throw std::invalid_argument("psi_map: flavor mismatch");
    TreeAutGroup aut = tree_aut_group(t);
    const FiniteGroup& g = aut.group;
    FiniteGSet z = FiniteGSet::two_power(g).disjoint_union(FiniteGSet::regular(g));
    FiniteGSet w = FiniteGSet::trivial_points(g, 2);
    const int split = FiniteGSet::two_power(g).size();
    auto q = [&](int zv) { return zv < split ? 0 : 1; };

    // per site tree: hom(t, S), its Aut(t)-precomposition action, and the
    // equivariant function sets for Z and W
    const int n = site.n_trees();
    std::vector<std::vector<TreeMorphism>> homs(static_cast<std::size_t>(n));
    std::vector<std::vector<std::vector<int>>> precomp(static_cast<std::size_t>(n));
    std::vector<EquivariantFunctions> dom(static_cast<std::size_t>(n)), cod(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        homs[static_cast<std::size_t>(s)] = hom_set(t, site.tree(s));
        const auto& hs = homs[static_cast<std::size_t>(s)];
        auto idx = [&](const std::vector<EdgeId>& em) {
            for (std::size_t i = 0; i < hs.size(); ++i)
                if (hs[i].edge_map() == em) return static_cast<int>(i);
            return -1;
        };
        precomp[static_cast<std::size_t>(s)].resize(static_cast<std::size_t>(g.order()));
        for (int a = 0; a < g.order(); ++a) {
            auto& row = precomp[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
            row.resize(hs.size());
            for (std::size_t h = 0; h < hs.size(); ++h) {
                TreeMorphism comp = compose(hs[h], aut.elements[static_cast<std::size_t>(a)]);
                int i = idx(comp.edge_map());
                if (i < 0) throw std::logic_error("psi_map: precomposition escaped");
                row[h] = i;
            }
        }
        dom[static_cast<std::size_t>(s)] = equivariant_functions(hs, precomp[static_cast<std::size_t>(s)], z);
        cod[static_cast<std::size_t>(s)] = equivariant_functions(hs, precomp[static_cast<std::size_t>(s)], w);
    }

    // presheaf actions: for f: S' -> S, phi |-> phi(f o -)
    auto build = [&](const std::vector<EquivariantFunctions>& tables) {
        std::vector<int> cards;
        for (int s = 0; s < n; ++s)
            cards.push_back(static_cast<int>(tables[static_cast<std::size_t>(s)].table.size()));
        std::vector<std::vector<int>> actions(static_cast<std::size_t>(site.n_action_slots()));
        for (int sp = 0; sp < n; ++sp)
            for (int s = 0; s < n; ++s)
                for (int m = 0; m < site.n_hom(sp, s); ++m) {
                    const auto& f = site.hom(sp, s)[static_cast<std::size_t>(m)];
                    // translate: hom(t, S') -> hom(t, S) by postcomposition with f
                    const auto& hsp = homs[static_cast<std::size_t>(sp)];
                    const auto& hs = homs[static_cast<std::size_t>(s)];
                    std::vector<int> post(hsp.size());
                    for (std::size_t h = 0; h < hsp.size(); ++h) {
                        TreeMorphism comp = compose(f, hsp[h]);
                        int i = -1;
                        for (std::size_t k = 0; k < hs.size(); ++k)
                            if (hs[k].edge_map() == comp.edge_map()) i = static_cast<int>(k);
                        if (i < 0) throw std::logic_error("psi_map: postcomposition escaped");
                        post[h] = i;
                    }
                    auto& arr = actions[static_cast<std::size_t>(site.flat_index(sp, s, m))];
                    arr.resize(static_cast<std::size_t>(cards[static_cast<std::size_t>(s)]));
                    for (int e = 0; e < cards[static_cast<std::size_t>(s)]; ++e) {
                        std::vector<int> pulled(hsp.size());
                        for (std::size_t h = 0; h < hsp.size(); ++h)
                            pulled[h] = tables[static_cast<std::size_t>(s)]
                                            .table[static_cast<std::size_t>(e)]
                                                  [static_cast<std::size_t>(post[h])];
                        int i = tables[static_cast<std::size_t>(sp)].find(pulled);
                        if (i < 0) throw std::logic_error("psi_map: action escaped");
                        arr[static_cast<std::size_t>(e)] = i;
                    }
                }
        return Presheaf(site, std::move(cards), std::move(actions), true);
    };

    auto dom_ps = std::make_shared<Presheaf>(build(dom));
    auto cod_ps = std::make_shared<Presheaf>(build(cod));
    // the component of Psi: postcompose with q
    std::vector<std::vector<int>> comp(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        const auto& dt = dom[static_cast<std::size_t>(s)];
        auto& row = comp[static_cast<std::size_t>(s)];
        row.resize(dt.table.size());
        for (std::size_t e = 0; e < dt.table.size(); ++e) {
            std::vector<int> qphi(dt.table[e].size());
            for (std::size_t h = 0; h < dt.table[e].size(); ++h) qphi[h] = q(dt.table[e][h]);
            int i = cod[static_cast<std::size_t>(s)].find(qphi);
            if (i < 0) throw std::logic_error("psi_map: projection escaped");
            row[e] = i;
        }
    }
    return PresheafMap(dom_ps, cod_ps, std::move(comp), true);
}

bool llp_normality_check(const PresheafMap& f, int max_size) {
    const Site& site = f.source().site();
    for (int t = 0; t < site.n_trees(); ++t) {
        if (site.tree(t).size() > max_size) continue;
        PresheafMap psi = psi_map(site.tree(t), site);
        if (!has_rlp(f, psi)) return false;
    }
    return true;
}

std::optional<RigidityWitness> fixed_complement_element(const LeanObject& x, const LeanObject& y,
                                                        const PresheafMap& f_data) {
    if (y.flavor() == Flavor::Closed)
        throw std::invalid_argument("fixed_complement_element: closed flavor excluded");
    const Site& deg = y.site();

    // find a tree where the data map is not surjective, within the truncation
    std::optional<int> witness;
    for (int t = 0; t < deg.n_trees() && !witness; ++t) {
        std::vector<char> hit(static_cast<std::size_t>(f_data.target().card(t)), 0);
        for (int e = 0; e < f_data.source().card(t); ++e)
            hit[static_cast<std::size_t>(f_data.at(t, e))] = 1;
        if (std::find(hit.begin(), hit.end(), 0) != hit.end()) witness = t;
    }
    if (!witness) return std::nullopt;
    const Tree& wt = deg.tree(*witness);

    int n = std::max({2, y.degree(), wt.size()});
    Tree base = corolla(n + 1, y.flavor());
    Tree grafted = graft(base, base.leaf_edges().back(), wt);

    const auto& ev = y.evaluate(grafted);
    auto fm = lean_eval_map(x, y, f_data, grafted);
    std::vector<char> hit(static_cast<std::size_t>(ev.size()), 0);
    for (int v : fm) hit[static_cast<std::size_t>(v)] = 1;

    // nontrivial automorphism actions on the evaluation
    std::vector<std::pair<TreeMorphism, std::vector<int>>> actions;
    for (const auto& a : automorphisms(grafted)) {
        if (a.is_identity()) continue;
        actions.emplace_back(a, y.eval_action(a));
    }
    for (int e = 0; e < ev.size(); ++e) {
        if (hit[static_cast<std::size_t>(e)]) continue;
        for (const auto& [a, act] : actions) {
            if (act[static_cast<std::size_t>(e)] == e) {
                RigidityWitness out{grafted,
                                    e,
                                    a.edge_map(),
                                    wt,
                                    n,
                                    static_cast<long long>(ev.size()),
                                    static_cast<long long>(y.evaluate(eta(y.flavor())).size()),
                                    static_cast<long long>(y.evaluate(wt).size())};
                return out;
            }
        }
    }
    return std::nullopt;
}

void DSetTower::validate() const {
    if (levels.empty()) throw std::invalid_argument("tower must have a level");
    if (bonds.size() + 1 != levels.size()) throw std::invalid_argument("tower bond count");
    for (std::size_t i = 0; i < bonds.size(); ++i)
        if (!(bonds[i].source() == *levels[i + 1]) || !(bonds[i].target() == *levels[i]))
            throw std::invalid_argument("tower bond endpoints");
}

void DSetTowerMap::validate() const {
    source.validate();
    target.validate();
    if (source.length() != target.length() ||
        static_cast<int>(levels.size()) != source.length())
        throw std::invalid_argument("tower map shape");
    for (int i = 0; i + 1 < source.length(); ++i) {
        PresheafMap a = compose(levels[static_cast<std::size_t>(i)],
                                source.bonds[static_cast<std::size_t>(i)]);
        PresheafMap b = compose(target.bonds[static_cast<std::size_t>(i)],
                                levels[static_cast<std::size_t>(i + 1)]);
        if (!(a == b)) throw std::invalid_argument("tower map squares do not commute");
    }
}

DSetTowerMap tower_image_replacement(const DSetTowerMap& f) {
    f.validate();
    DSetTowerMap out;
    out.target = f.target;
    out.source.degree = f.source.degree;
    std::vector<Subobject> images;
    for (int i = 0; i < f.source.length(); ++i) {
        auto fact = image_factorization(f.levels[static_cast<std::size_t>(i)]);
        images.push_back(fact.image);
        out.source.levels.push_back(fact.image.object);
        out.levels.push_back(fact.image.inclusion());
    }
    const Site& site = f.target.levels.front()->site();
    for (int i = 0; i + 1 < f.source.length(); ++i) {
        // induced bond on images
        std::vector<std::vector<int>> comp(static_cast<std::size_t>(site.n_trees()));
        for (int t = 0; t < site.n_trees(); ++t)
            for (int e = 0; e < f.target.levels[static_cast<std::size_t>(i + 1)]->card(t); ++e) {
                if (!images[static_cast<std::size_t>(i + 1)].contains(t, e)) continue;
                int v = f.target.bonds[static_cast<std::size_t>(i)].at(t, e);
                int vi = images[static_cast<std::size_t>(i)]
                             .index_in_sub[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)];
                if (vi < 0) throw std::logic_error("image replacement: bond escapes images");
                comp[static_cast<std::size_t>(t)].push_back(vi);
            }
        out.source.bonds.emplace_back(images[static_cast<std::size_t>(i + 1)].object,
                                      images[static_cast<std::size_t>(i)].object,
                                      std::move(comp), false);
    }
    out.validate();
    return out;
}

std::optional<IncreasinglyNormalResult> increasingly_normal_reindex(const DSetTowerMap& f) {
    f.validate();
    const int n = f.source.length();
    const int m = n - 1;
    const int degree = f.source.degree;
    for (int i = 0; i < n; ++i)
        if (!f.levels[static_cast<std::size_t>(i)].is_injective())
            throw std::invalid_argument("increasingly_normal_reindex expects levelwise monos");

    const Site& site = f.target.levels.front()->site();
    const Flavor flavor = site.flavor();

    // lean views of the tower levels
    std::vector<LeanObject> sources, targets;
    for (int i = 0; i < n; ++i) {
        sources.emplace_back(degree, *f.source.levels[static_cast<std::size_t>(i)]);
        targets.emplace_back(degree, *f.target.levels[static_cast<std::size_t>(i)]);
    }

    auto bond_down_map = [&](int j, int i) {
        // composite bond levels[j] -> levels[i] on the target tower
        PresheafMap acc = identity_map(f.target.levels[static_cast<std::size_t>(j)]);
        for (int k = j; k > i; --k) acc = compose(f.target.bonds[static_cast<std::size_t>(k - 1)], acc);
        return acc;
    };

    // witness condition for (level i, candidate j): for every tree T of size
    // <= i, fixed points of the evaluation of Y_j at T land in the image of
    // X_i -> Y_i after bonding down
    auto witnesses = [&](int i, int j) {
        PresheafMap down = bond_down_map(j, i);
        for (const auto& t : enumerate_trees(i, flavor)) {
            auto f_eval = lean_eval_map(sources[static_cast<std::size_t>(i)],
                                        targets[static_cast<std::size_t>(i)],
                                        f.levels[static_cast<std::size_t>(i)], t);
            std::vector<char> in_image(
                static_cast<std::size_t>(targets[static_cast<std::size_t>(i)].evaluate(t).size()),
                0);
            for (int v : f_eval) in_image[static_cast<std::size_t>(v)] = 1;
            auto down_eval = lean_eval_map(targets[static_cast<std::size_t>(j)],
                                           targets[static_cast<std::size_t>(i)], down, t);
            const auto& evj = targets[static_cast<std::size_t>(j)].evaluate(t);
            for (const auto& a : automorphisms(t)) {
                if (a.is_identity()) continue;
                auto act = targets[static_cast<std::size_t>(j)].eval_action(a);
                for (int e = 0; e < evj.size(); ++e)
                    if (act[static_cast<std::size_t>(e)] == e &&
                        !in_image[static_cast<std::size_t>(down_eval[static_cast<std::size_t>(e)])])
                        return false;
            }
        }
        return true;
    };

    std::vector<int> theta(static_cast<std::size_t>(n), -1);
    int lower = 0;
    for (int i = 0; i < n; ++i) {
        lower = std::max(lower, i);
        int found = -1;
        for (int j = lower; j <= m && found < 0; ++j)
            if (witnesses(i, j)) found = j;
        if (found < 0) return std::nullopt;
        theta[static_cast<std::size_t>(i)] = found;
        lower = found;
    }

    // build the reindexed map: X'_i = preimage in Y_theta(i) of im(f_i)
    IncreasinglyNormalResult out;
    out.theta = theta;
    out.map.source.degree = degree;
    out.map.target.degree = degree;
    std::vector<Subobject> subs;
    for (int i = 0; i < n; ++i) {
        int ti = theta[static_cast<std::size_t>(i)];
        PresheafMap down = bond_down_map(ti, i);
        std::vector<std::vector<char>> mask(static_cast<std::size_t>(site.n_trees()));
        for (int t = 0; t < site.n_trees(); ++t) {
            std::vector<char> in_image(
                static_cast<std::size_t>(f.target.levels[static_cast<std::size_t>(i)]->card(t)), 0);
            for (int e = 0; e < f.source.levels[static_cast<std::size_t>(i)]->card(t); ++e)
                in_image[static_cast<std::size_t>(f.levels[static_cast<std::size_t>(i)].at(t, e))] = 1;
            mask[static_cast<std::size_t>(t)].resize(
                static_cast<std::size_t>(f.target.levels[static_cast<std::size_t>(ti)]->card(t)));
            for (int e = 0; e < f.target.levels[static_cast<std::size_t>(ti)]->card(t); ++e)
                mask[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] =
                    in_image[static_cast<std::size_t>(down.at(t, e))];
        }
        Subobject sub = make_subobject(f.target.levels[static_cast<std::size_t>(ti)], std::move(mask));
        subs.push_back(sub);
        out.map.source.levels.push_back(sub.object);
        out.map.target.levels.push_back(f.target.levels[static_cast<std::size_t>(ti)]);
        out.map.levels.push_back(sub.inclusion());
    }
    for (int i = 0; i + 1 < n; ++i) {
        int ti = theta[static_cast<std::size_t>(i)], ti1 = theta[static_cast<std::size_t>(i + 1)];
        PresheafMap down = bond_down_map(ti1, ti);
        out.map.target.bonds.push_back(down);
        std::vector<std::vector<int>> comp(static_cast<std::size_t>(site.n_trees()));
        for (int t = 0; t < site.n_trees(); ++t)
            for (int e = 0; e < f.target.levels[static_cast<std::size_t>(ti1)]->card(t); ++e) {
                if (!subs[static_cast<std::size_t>(i + 1)].contains(t, e)) continue;
                int v = down.at(t, e);
                int vi = subs[static_cast<std::size_t>(i)]
                             .index_in_sub[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)];
                if (vi < 0) throw std::logic_error("reindex: pullback bond escapes");
                comp[static_cast<std::size_t>(t)].push_back(vi);
            }
        out.map.source.bonds.emplace_back(subs[static_cast<std::size_t>(i + 1)].object,
                                          subs[static_cast<std::size_t>(i)].object,
                                          std::move(comp), false);
    }
    out.map.validate();
    // verified partial-normality degrees
    for (int i = 0; i < n; ++i) {
        LeanObject xs(degree, *out.map.source.levels[static_cast<std::size_t>(i)]);
        LeanObject ys(degree, *out.map.target.levels[static_cast<std::size_t>(i)]);
        int d = -1;
        for (int k = 0; k <= m; ++k) {
            if (is_normal_mono_upto(xs, ys, out.map.levels[static_cast<std::size_t>(i)], k))
                d = k;
            else
                break;
        }
        out.normal_degree.push_back(d);
    }
    return out;
}

}  // namespace dendro
